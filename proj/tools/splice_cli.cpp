#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "splice/certificate.hpp"
#include "splice/endcurve.hpp"
#include "splice/error.hpp"
#include "splice/io.hpp"
#include "splice/recover.hpp"
#include "splice/smoothness.hpp"

using namespace splice;

namespace {

enum Exit { kOk = 0, kViolation = 1, kParse = 2, kInfeasible = 3 };

struct Outcome {
  Exit exit = kOk;
  Json payload;
};

const char* status_name(Exit e) {
  switch (e) {
    case kOk: return "ok";
    case kViolation: return "violation";
    case kInfeasible: return "infeasible";
    case kParse: return "error";
  }
  return "error";
}

Exit exit_for(ErrorCode code, const std::string& message) {
  switch (code) {
    case ErrorCode::Parse:
    case ErrorCode::UnknownVertex:
    case ErrorCode::ShapeMismatch:
      return kParse;
    case ErrorCode::GenerationExhausted:
      return kInfeasible;
    case ErrorCode::ConditionViolation:
      return message.find("semigroup") != std::string::npos ? kInfeasible : kViolation;
    default:
      return kViolation;
  }
}

struct Options {
  std::string input;
  std::string w;
  std::string queries;
  std::string root;
  std::optional<std::uint64_t> seed;
  int leaves = 5;
  int nodes = 2;
  bool coprime = false;
  int samples = 0;
};

SpliceDiagram load_diagram(const Json& doc) {
  if (doc.is_object() && doc.contains("diagram")) return diagram_from_json(doc.at("diagram"));
  return diagram_from_json(doc);
}

SpliceSystem system_for(const SpliceDiagram& d, const std::optional<std::uint64_t>& seed) {
  if (!seed) return build_default_system(d);
  std::vector<CoefficientMatrix> coeffs;
  for (int j = 0; j < d.num_nodes(); ++j) coeffs.push_back(random_coefficients(d, d.node_id(j), *seed + j));
  return build_system(d, coeffs);
}

// A system document is used as given; a diagram document gets the minimal
// system (Vandermonde, or random with --seed).
SpliceSystem load_system(const Options& o) {
  const Json doc = read_json_file(o.input);
  if (doc.is_object() && doc.contains("equations")) return system_from_json(doc);
  const SpliceDiagram d = diagram_from_json(doc);
  d.require_valid();
  return system_for(d, o.seed);
}

Outcome cmd_check(const Options& o) {
  const SpliceDiagram d = load_diagram(read_json_file(o.input));
  Json payload;
  Json violations = Json::array();
  for (const auto& v : validate(d)) violations.push_back({{"kind", to_string(v.kind)}, {"detail", v.detail}});
  if (!violations.empty()) return {kViolation, {{"violations", std::move(violations)}}};
  const ConditionReport r = check_conditions(d);
  return {r.all() ? kOk : kViolation, to_json(r)};
}

Outcome cmd_system(const Options& o) {
  const SpliceDiagram d = load_diagram(read_json_file(o.input));
  d.require_valid();
  return {kOk, to_json(system_for(d, o.seed))};
}

Outcome cmd_fan(const Options& o) {
  const SpliceDiagram d = load_diagram(read_json_file(o.input));
  const SpliceFan f = splice_fan(d);
  Json payload = to_json(f);
  payload["balanced"] = check_balancing(f);
  return {kOk, std::move(payload)};
}

std::vector<WeightVector> read_queries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot read '" + path + "'");
  std::vector<WeightVector> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(parse_weight_list(line));
  }
  return out;
}

Json weight_json(const WeightVector& w) {
  Json out = Json::array();
  for (const auto& x : w) out.push_back(rational_json(x));
  return out;
}

Outcome cmd_member(const Options& o) {
  if (o.w.empty() == o.queries.empty()) throw Error(ErrorCode::Parse, "member needs exactly one of --w and --queries");
  const SpliceSystem s = load_system(o);
  const SpliceFan fan = splice_fan(s.diagram());
  if (!o.w.empty()) {
    const WeightVector w = parse_weight_list(o.w);
    Json payload = to_json(membership(s, fan, w), s.diagram());
    payload["w"] = weight_json(w);
    return {kOk, std::move(payload)};
  }

  const auto queries = read_queries(o.queries);
  std::vector<Json> results(queries.size());
  std::vector<std::optional<Error>> errors(queries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < queries.size(); i = next++) {
      try {
        results[i] = to_json(membership(s, fan, queries[i]), s.diagram());
        results[i]["w"] = weight_json(queries[i]);
      } catch (const Error& e) {
        errors[i] = e;
      }
    }
  };
  const unsigned count = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) throw *e;
  }
  Json arr = Json::array();
  for (auto& r : results) arr.push_back(std::move(r));
  return {kOk, {{"results", std::move(arr)}}};
}

Outcome cmd_initial(const Options& o) {
  if (o.w.empty()) throw Error(ErrorCode::Parse, "initial needs --w");
  const SpliceSystem s = load_system(o);
  const WeightVector w = parse_weight_list(o.w);
  Json payload = to_json(initial_ideal_generators(s, w));
  payload["w"] = weight_json(w);
  if (o.samples > 0) payload["smoothness"] = to_json(smoothness_smoke(s, w, o.samples, o.seed.value_or(1)));
  return {kOk, std::move(payload)};
}

Outcome cmd_endcurve(const Options& o) {
  if (o.root.empty()) throw Error(ErrorCode::Parse, "endcurve needs --root");
  const SpliceSystem s = load_system(o);
  const RootedDiagram r = root(s.diagram(), o.root);
  const EndCurveSystem ecs = end_curve_system(s, r);
  const BinomialSystem b = binomial_reduce(ecs);
  const MonomialCurve c = parameterize(ecs, r);
  Json payload = endcurve_json(r, b, c);
  payload["verified"] = verify_parameterization(c, ecs);
  return {kOk, std::move(payload)};
}

Outcome cmd_recover(const Options& o) {
  const SpliceFan f = fan_from_json(read_json_file(o.input));
  return {kOk, to_json(recover(f))};
}

Outcome cmd_roundtrip(const Options& o) {
  const SpliceDiagram d = load_diagram(read_json_file(o.input));
  const bool ok = roundtrip(d);
  return {ok ? kOk : kViolation, {{"roundtrip", ok}}};
}

Outcome cmd_random(const Options& o) {
  return {kOk, to_json(random_diagram(o.leaves, o.nodes, o.seed.value_or(0), o.coprime))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Splice diagrams, splice type systems and their tropicalizations"};
  app.require_subcommand(1);
  Options o;

  auto add_input = [&](CLI::App* sub, const std::string& what) { sub->add_option("input", o.input, what)->required(); };
  auto* check = app.add_subcommand("check", "Check the diagram conditions");
  add_input(check, "diagram document");
  auto* system = app.add_subcommand("system", "Build the minimal splice type system");
  add_input(system, "diagram document");
  system->add_option("--seed", o.seed, "draw random Hamm coefficients");
  auto* fan = app.add_subcommand("fan", "Splice fan with multiplicities");
  add_input(fan, "diagram document");
  auto* member = app.add_subcommand("member", "Decide membership in the local tropicalization");
  add_input(member, "diagram or system document");
  member->add_option("--w", o.w, "comma-separated rational weight vector");
  member->add_option("--queries", o.queries, "file with one weight vector per line");
  member->add_option("--seed", o.seed, "random coefficients for a diagram input");
  auto* initial = app.add_subcommand("initial", "Initial forms at a weight vector");
  add_input(initial, "diagram or system document");
  initial->add_option("--w", o.w, "comma-separated rational weight vector");
  initial->add_option("--samples", o.samples, "torus points for the Jacobian rank check");
  initial->add_option("--seed", o.seed, "random coefficients / sampling seed");
  auto* endcurve = app.add_subcommand("endcurve", "End-curve at a root leaf");
  add_input(endcurve, "diagram or system document");
  endcurve->add_option("--root", o.root, "root leaf label");
  endcurve->add_option("--seed", o.seed, "random coefficients for a diagram input");
  auto* recover_cmd = app.add_subcommand("recover", "Recover the coprime diagram of a fan");
  add_input(recover_cmd, "fan document");
  auto* rt = app.add_subcommand("roundtrip", "recover(fan(d)) == d");
  add_input(rt, "diagram document");
  auto* random = app.add_subcommand("random", "Random diagram passing both conditions");
  random->add_option("--leaves", o.leaves, "number of leaves")->required();
  random->add_option("--nodes", o.nodes, "number of nodes")->required();
  random->add_option("--seed", o.seed, "seed");
  random->add_flag("--coprime", o.coprime, "require pairwise coprime weights");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParse;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  Outcome out;
  try {
    if (name == "check") out = cmd_check(o);
    else if (name == "system") out = cmd_system(o);
    else if (name == "fan") out = cmd_fan(o);
    else if (name == "member") out = cmd_member(o);
    else if (name == "initial") out = cmd_initial(o);
    else if (name == "endcurve") out = cmd_endcurve(o);
    else if (name == "recover") out = cmd_recover(o);
    else if (name == "roundtrip") out = cmd_roundtrip(o);
    else out = cmd_random(o);
  } catch (const Error& e) {
    out.exit = exit_for(e.code(), e.what());
    out.payload = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
  }

  Json report;
  report["command"] = name;
  report["status"] = status_name(out.exit);
  report["payload"] = std::move(out.payload);
  std::cout << report.dump(2) << "\n";
  return out.exit;
}
