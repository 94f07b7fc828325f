#include "splice/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "splice/error.hpp"

namespace splice {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::Parse, what); }

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing key '") + key + "'");
  return *it;
}

void only_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) fail(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail("unknown key '" + key + "' in " + where);
  }
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where + " must be a string");
  return j.get<std::string>();
}

const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where + " must be an array");
  return j;
}

std::int64_t small_integer(const Json& j) {
  const BigInt x = json_integer(j);
  if (!fits_int64(x)) fail("integer out of range: " + to_string(x));
  return to_int64(x);
}

const BigInt kJsonLimit("9007199254740992");

std::string decimal(double x) {
  if (x == 0 || std::abs(x) < 1e-300) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  std::string s(buf);
  return s == "-0" ? "0" : s;
}

}  // namespace

Json integer_json(const BigInt& x) {
  if (abs(x) < kJsonLimit) return Json(x.get_si());
  return Json(to_string(x));
}

BigInt json_integer(const Json& j) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? BigInt(std::to_string(j.get<std::uint64_t>()))
                                                           : BigInt(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) return parse_bigint(j.get<std::string>());
  fail("expected an integer");
}

Json rational_json(const Rational& q) { return Json(to_string(q)); }

Rational json_rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(json_integer(j));
  fail("expected a rational string");
}

Json parse_json(const std::string& input) {
  try {
    return Json::parse(input);
  } catch (const Json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

WeightVector parse_weight_list(const std::string& input) {
  WeightVector out;
  std::stringstream ss(input);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) fail("empty entry in weight list");
    out.push_back(parse_rational(item.substr(b, e - b + 1)));
  }
  if (out.empty() || input.back() == ',') fail("empty entry in weight list");
  return out;
}

Json to_json(const SpliceDiagram& d) {
  Json edges = Json::array();
  for (const auto& e : d.edges()) {
    Json edge;
    edge["a"] = d.label(e.a);
    edge["b"] = d.label(e.b);
    if (d.is_node(e.a)) edge["wa"] = e.wa;
    if (d.is_node(e.b)) edge["wb"] = e.wb;
    edges.push_back(std::move(edge));
  }
  Json out;
  out["leaves"] = d.leaf_labels();
  out["nodes"] = d.node_labels();
  out["edges"] = std::move(edges);
  return out;
}

SpliceDiagram diagram_from_json(const Json& j) {
  only_keys(j, {"leaves", "nodes", "edges"}, "diagram");
  std::vector<std::string> leaves, nodes;
  for (const auto& x : array(field(j, "leaves"), "leaves")) leaves.push_back(text(x, "leaf label"));
  for (const auto& x : array(field(j, "nodes"), "nodes")) nodes.push_back(text(x, "node label"));
  std::set<std::string> labels;
  for (const auto& l : leaves) {
    if (!labels.insert(l).second) fail("duplicate label '" + l + "'");
  }
  for (const auto& l : nodes) {
    if (!labels.insert(l).second) fail("duplicate label '" + l + "'");
  }
  std::vector<EdgeSpec> edges;
  for (const auto& e : array(field(j, "edges"), "edges")) {
    only_keys(e, {"a", "b", "wa", "wb"}, "edge");
    EdgeSpec spec{text(field(e, "a"), "edge end"), text(field(e, "b"), "edge end"), {}, {}};
    if (e.contains("wa")) spec.wa = small_integer(e["wa"]);
    if (e.contains("wb")) spec.wb = small_integer(e["wb"]);
    if (!labels.count(spec.a) || !labels.count(spec.b)) fail("edge refers to an unknown vertex");
    edges.push_back(std::move(spec));
  }
  return SpliceDiagram(std::move(leaves), std::move(nodes), edges);
}

Json terms_json(const Polynomial& p) {
  Json out = Json::array();
  for (const auto& t : p.terms()) {
    Json term;
    term["c"] = to_string(t.coeff);
    term["m"] = t.exponent;
    out.push_back(std::move(term));
  }
  return out;
}

Polynomial polynomial_from_json(const Json& j, int num_vars) {
  std::vector<Term> terms;
  for (const auto& t : array(j, "terms")) {
    only_keys(t, {"c", "m"}, "term");
    ExponentVector m;
    for (const auto& x : array(field(t, "m"), "exponent")) m.push_back(small_integer(x));
    if (static_cast<int>(m.size()) != num_vars) fail("exponent vector has the wrong length");
    for (auto x : m) {
      if (x < 0) fail("negative exponent");
    }
    terms.push_back({json_rational(field(t, "c")), std::move(m)});
  }
  return Polynomial(num_vars, std::move(terms));
}

Json to_json(const SpliceSystem& s) {
  const SpliceDiagram& d = s.diagram();
  Json eqs = Json::array();
  for (const auto& eq : s.equations()) {
    Json e;
    e["node"] = d.label(eq.node);
    e["index"] = eq.index;
    e["terms"] = terms_json(eq.minimal);
    e["tail"] = terms_json(eq.tail);
    eqs.push_back(std::move(e));
  }
  Json out;
  out["diagram"] = to_json(d);
  out["equations"] = std::move(eqs);
  return out;
}

SpliceSystem system_from_json(const Json& j) {
  only_keys(j, {"diagram", "equations"}, "system");
  const SpliceDiagram d = diagram_from_json(field(j, "diagram"));
  d.require_valid();
  const int n = d.num_leaves();

  std::vector<CoefficientMatrix> coeffs;
  for (int k = 0; k < d.num_nodes(); ++k) {
    const VertexId v = d.node_id(k);
    coeffs.push_back({v, QMatrix(d.valency(v), std::vector<Rational>(d.valency(v) - 2, 0))});
  }
  std::map<std::pair<VertexId, int>, ExponentVector> chosen;  // (node, adjacency position) -> exponent
  std::set<std::pair<VertexId, int>> seen;
  TailMap tails;

  for (const auto& e : array(field(j, "equations"), "equations")) {
    only_keys(e, {"node", "index", "terms", "tail"}, "equation");
    const auto found = d.find(text(field(e, "node"), "node"));
    if (!found || !d.is_node(*found)) fail("equation refers to an unknown node");
    const VertexId v = *found;
    const std::int64_t index = small_integer(field(e, "index"));
    if (index < 1 || index > d.valency(v) - 2) fail("equation index out of range at '" + d.label(v) + "'");
    if (!seen.insert({v, static_cast<int>(index)}).second) fail("duplicate equation at '" + d.label(v) + "'");

    const Polynomial minimal = polynomial_from_json(field(e, "terms"), n);
    const auto adjacency = d.incident(v);
    for (const auto& t : minimal.terms()) {
      int position = -1;
      for (std::size_t p = 0; p < adjacency.size(); ++p) {
        const AdmissibleCoweight a{v, adjacency[p].edge, t.exponent};
        if (is_admissible_coweight(d, a)) position = static_cast<int>(p);
      }
      if (position < 0) fail("term is not an admissible monomial at '" + d.label(v) + "'");
      auto [it, inserted] = chosen.emplace(std::make_pair(v, position), t.exponent);
      if (!inserted && it->second != t.exponent) fail("equations at '" + d.label(v) + "' use different co-weights");
      const int k = v - n;
      if (coeffs[k].rows[position][index - 1] != 0) fail("two terms for one edge at '" + d.label(v) + "'");
      coeffs[k].rows[position][index - 1] = t.coeff;
    }
    if (e.contains("tail")) {
      Polynomial tail = polynomial_from_json(e["tail"], n);
      if (!tail.is_zero()) tails[{v, static_cast<int>(index)}] = std::move(tail);
    }
  }
  for (int k = 0; k < d.num_nodes(); ++k) {
    const VertexId v = d.node_id(k);
    for (int i = 1; i <= d.valency(v) - 2; ++i) {
      if (!seen.count({v, i})) fail("missing equation " + std::to_string(i) + " at '" + d.label(v) + "'");
    }
  }
  std::vector<AdmissibleCoweight> overrides;
  for (const auto& [key, exponent] : chosen) {
    overrides.push_back({key.first, d.incident(key.first)[key.second].edge, exponent});
  }
  return build_system(d, coeffs, tails, overrides);
}

Json to_json(const SpliceFan& f) {
  Json rays = Json::array();
  for (const auto& r : f.rays) {
    Json vec = Json::array();
    for (const auto& x : r.vector) vec.push_back(integer_json(x));
    rays.push_back({{"label", r.label}, {"vector", std::move(vec)}});
  }
  Json cones = Json::array();
  for (const auto& c : f.cones) cones.push_back({{"rays", {c.a, c.b}}, {"multiplicity", integer_json(c.multiplicity)}});
  Json out;
  out["n"] = f.n;
  out["rays"] = std::move(rays);
  out["cones"] = std::move(cones);
  return out;
}

SpliceFan fan_from_json(const Json& j) {
  only_keys(j, {"n", "rays", "cones"}, "fan");
  SpliceFan f;
  const std::int64_t n = small_integer(field(j, "n"));
  if (n < 1 || n > 1000000) fail("fan dimension out of range");
  f.n = static_cast<int>(n);
  for (const auto& r : array(field(j, "rays"), "rays")) {
    only_keys(r, {"label", "vector"}, "ray");
    Ray ray{text(field(r, "label"), "ray label"), {}};
    for (const auto& x : array(field(r, "vector"), "ray vector")) ray.vector.push_back(json_integer(x));
    if (static_cast<int>(ray.vector.size()) != f.n) fail("ray '" + ray.label + "' has the wrong length");
    f.rays.push_back(std::move(ray));
  }
  for (const auto& c : array(field(j, "cones"), "cones")) {
    only_keys(c, {"rays", "multiplicity"}, "cone");
    const Json& ends = array(field(c, "rays"), "cone rays");
    if (ends.size() != 2) fail("a cone has exactly two rays");
    f.cones.push_back({text(ends[0], "ray label"), text(ends[1], "ray label"), json_integer(field(c, "multiplicity"))});
  }
  return f;
}

Json to_json(const ConditionReport& r) {
  return {{"edge_determinant", r.edge_determinant}, {"semigroup", r.semigroup}, {"coprime", r.coprime}};
}

Json to_json(const CellLocation& c) {
  Json out;
  out["kind"] = to_string(c.kind);
  if (c.kind == CellKind::OnRay) out["ray"] = c.ray;
  if (c.kind == CellKind::InCone) out["cone"] = {c.cone.first, c.cone.second};
  Json coeffs = Json::array();
  for (const auto& q : c.coeffs) coeffs.push_back(rational_json(q));
  out["coeffs"] = std::move(coeffs);
  return out;
}

Json to_json(const Certificate& c, const SpliceDiagram& d) {
  const Edge& e = d.edges().at(c.edge);
  Json values = Json::array();
  for (const auto& v : c.values) values.push_back(v ? rational_json(*v) : Json(nullptr));
  Json comb = Json::array();
  for (const auto& q : c.combination) comb.push_back(rational_json(q));
  Json out;
  out["node"] = d.label(c.node);
  out["edge"] = {d.label(e.a), d.label(e.b)};
  out["monomial"] = c.monomial;
  out["values"] = std::move(values);
  out["combination"] = std::move(comb);
  out["combined"] = terms_json(c.combined);
  return out;
}

Json to_json(const Membership& m, const SpliceDiagram& d) {
  if (const auto* in = std::get_if<In>(&m)) return {{"result", "In"}, {"cell", to_json(in->cell)}};
  return {{"result", "Out"}, {"certificate", to_json(std::get<Out>(m).certificate, d)}};
}

Json to_json(const InitialIdeal& ideal) {
  Json gens = Json::array();
  for (const auto& g : ideal.generators) gens.push_back(terms_json(g));
  return {{"generators", std::move(gens)}, {"monomial_free", ideal.monomial_free}};
}

Json to_json(const SmoothnessReport& r) {
  return {{"samples", r.samples},
          {"expected_rank", r.expected_rank},
          {"min_ratio", decimal(r.min_ratio)},
          {"max_residual", decimal(r.max_residual)},
          {"full_rank", r.full_rank}};
}

Json endcurve_json(const RootedDiagram& r, const BinomialSystem& b, const MonomialCurve& c) {
  const SpliceDiagram& d = *r.diagram;
  Json out;
  out["root"] = d.label(r.root);
  Json links = Json::array();
  for (const auto& x : r.links) links.push_back(integer_json(x));
  out["linking"] = std::move(links);
  Json exps = Json::array();
  for (const auto& x : c.exponents) exps.push_back(integer_json(x));
  out["exponents"] = std::move(exps);
  out["g"] = integer_json(c.g);
  Json bins = Json::array();
  for (const auto& x : b.binomials) {
    Json entry;
    entry["node"] = d.label(x.node);
    entry["terms"] = terms_json(to_polynomial(x, b.num_vars));
    if (auto deg = binomial_degree(r, x)) entry["degree"] = integer_json(*deg);
    bins.push_back(std::move(entry));
  }
  out["binomials"] = std::move(bins);
  Json comps = Json::array();
  for (std::size_t i = 0; i < c.components.size(); ++i) {
    Json coeffs = Json::array();
    const bool exact = i < c.exact.size() && c.exact[i];
    for (std::size_t k = 0; k < c.components[i].size(); ++k) {
      if (exact) {
        coeffs.push_back({to_string((*c.exact[i])[k]), "0"});
      } else {
        coeffs.push_back({decimal(c.components[i][k].real()), decimal(c.components[i][k].imag())});
      }
    }
    comps.push_back({{"coeffs", std::move(coeffs)}, {"exact", exact}});
  }
  out["components"] = std::move(comps);
  return out;
}

}  // namespace splice
