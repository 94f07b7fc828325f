#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../common/fixtures.hpp"
#include "splice/io.hpp"

using namespace splice;
using namespace splice::testing;
namespace fs = std::filesystem;

namespace {

const std::string kCli = SPLICE_CLI;
const std::string kData = SPLICE_DATA_DIR;

struct Run {
  int code = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

Run run(const std::string& args) {
  Run r;
  FILE* pipe = popen((kCli + " " + args + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct ScratchDir {
  fs::path path = fs::temp_directory_path() / ("splice_cli_test_" + std::to_string(::getpid()));
  ScratchDir() { fs::create_directories(path); }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string write_file(const std::string& name, const std::string& content) {
  static const ScratchDir dir;
  const fs::path p = dir.path / name;
  std::ofstream(p) << content;
  return p.string();
}

const std::string d1_path = kData + "/d1.json";
const std::string d1_system_path = kData + "/d1_system.json";

}  // namespace

TEST_CASE("check") {
  const auto ok = run("check " + d1_path);
  CHECK(ok.code == 0);
  CHECK(ok.json()["command"] == "check");
  CHECK(ok.json()["status"] == "ok");
  CHECK(ok.json()["payload"] == Json::parse(R"({"edge_determinant":true,"semigroup":true,"coprime":true})"));

  CHECK(run("check " + write_file("bad.json", "{\"leaves\": [")).code == 2);
  CHECK(run("check /nonexistent.json").code == 2);

  const std::string det = R"({"leaves":["a","b","c","e"],"nodes":["x","y"],"edges":[
    {"a":"x","b":"a","wa":2},{"a":"x","b":"b","wa":3},{"a":"x","b":"y","wa":1,"wb":1},
    {"a":"y","b":"c","wa":2},{"a":"y","b":"e","wa":3}]})";
  const auto bad = run("check " + write_file("det.json", det));
  CHECK(bad.code == 1);
  CHECK(bad.json()["status"] == "violation");
  CHECK(bad.json()["payload"]["edge_determinant"] == false);
  CHECK(run("fan " + write_file("det.json", det)).code == 1);

  const std::string path = R"({"leaves":["a","b"],"nodes":["m"],"edges":[{"a":"a","b":"m","wb":1},{"a":"m","b":"b","wa":1}]})";
  const auto structural = run("check " + write_file("path.json", path));
  CHECK(structural.code == 1);
  CHECK(structural.json()["payload"]["violations"][0]["kind"] == "NoValencyTwo");

  const std::string unknown = R"({"leaves":["a"],"nodes":["m"],"edges":[{"a":"a","b":"zz","wb":1}]})";
  CHECK(run("check " + write_file("unknown.json", unknown)).code == 2);
}

TEST_CASE("semigroup failures and impossible shapes are infeasible") {
  const std::string semi = R"({"leaves":["p","q","a","b"],"nodes":["v","x"],"edges":[
    {"a":"v","b":"p","wa":5},{"a":"v","b":"q","wa":7},{"a":"v","b":"x","wa":1,"wb":211},
    {"a":"x","b":"a","wa":3},{"a":"x","b":"b","wa":2}]})";
  const std::string file = write_file("semi.json", semi);
  CHECK(run("check " + file).code == 1);
  const auto fan = run("fan " + file);
  CHECK(fan.code == 3);
  CHECK(fan.json()["status"] == "infeasible");
  CHECK(run("system " + file).code == 3);

  const auto r = run("random --leaves 3 --nodes 2 --seed 1");
  CHECK(r.code == 3);
  CHECK(r.json()["payload"]["error"] == "GenerationExhausted");
}

TEST_CASE("argument errors") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("check " + d1_path + " --bogus").code == 2);
  CHECK(run("random --leaves 5").code == 2);
  CHECK(run("member " + d1_path).code == 2);
  CHECK(run("member " + d1_path + " --w 1,1").code == 2);
  CHECK(run("member " + d1_path + " --w 1,a,1,1,1").code == 2);
  CHECK(run("endcurve " + d1_path).code == 2);
  CHECK(run("endcurve " + d1_path + " --root nowhere").code == 2);
}

TEST_CASE("system and fan") {
  const auto sys = run("system " + d1_path);
  CHECK(sys.code == 0);
  CHECK(sys.json()["payload"]["equations"].size() == 3);
  const auto fan = run("fan " + d1_path);
  CHECK(fan.code == 0);
  auto payload = fan.json()["payload"];
  CHECK(payload["balanced"] == true);
  payload.erase("balanced");
  CHECK(fan_from_json(payload) == splice_fan(d1()));
}

TEST_CASE("member") {
  const auto out = run("member " + d1_system_path + " --w 1,1,1,1,1");
  CHECK(out.code == 0);
  const Json p = out.json()["payload"];
  CHECK(p["result"] == "Out");
  CHECK(p["certificate"]["node"] == "v");
  CHECK(p["certificate"]["monomial"] == Json::array({0, 0, 0, 0, 2}));

  const auto in = run("member " + d1_path + " --w 147,98,60,84,210");
  CHECK(in.code == 0);
  CHECK(in.json()["payload"]["result"] == "In");
  CHECK(in.json()["payload"]["cell"]["ray"] == "u");

  std::string queries;
  std::vector<std::string> lines;
  for (int i = 1; i <= 40; ++i) {
    const std::string line = std::to_string(i) + ",1/" + std::to_string(i) + ",2,3," + std::to_string(i % 7 + 1);
    lines.push_back(line);
    queries += line + "\n";
  }
  queries += "147,98,60,84,210\n\n";
  lines.push_back("147,98,60,84,210");
  const std::string file = write_file("queries.txt", queries);
  const auto batch = run("member " + d1_system_path + " --queries " + file);
  CHECK(batch.code == 0);
  const Json results = batch.json()["payload"]["results"];
  REQUIRE(results.size() == lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto w = parse_weight_list(lines[i]);
    Json expected = Json::array();
    for (const auto& x : w) expected.push_back(rational_json(x));
    CHECK(results[i]["w"] == expected);
  }
  CHECK(results.back()["result"] == "In");
  CHECK(run("member " + d1_system_path + " --queries " + file).out == batch.out);
}

TEST_CASE("initial") {
  const auto r = run("initial " + d1_system_path + " --w 147,98,60,84,210 --samples 10 --seed 4");
  CHECK(r.code == 0);
  const Json p = r.json()["payload"];
  CHECK(p["monomial_free"] == true);
  CHECK(p["generators"].size() == 3);
  CHECK(p["smoothness"]["samples"] == 10);
  CHECK(p["smoothness"]["full_rank"] == true);
  CHECK(run("initial " + d1_system_path + " --w 1,1,1,1,1").json()["payload"]["monomial_free"] == false);
}

TEST_CASE("endcurve") {
  const auto r = run("endcurve " + d1_system_path + " --root l1");
  CHECK(r.code == 0);
  const Json p = r.json()["payload"];
  CHECK(p["exponents"] == Json::array({49, 30, 42, 105}));
  CHECK(p["g"] == 1);
  CHECK(p["verified"] == true);
  CHECK(p["components"][0]["coeffs"] == Json::parse(R"([["-1","0"],["3","0"],["-2","0"],["1","0"]])"));

  const auto plain = run("endcurve " + d1_path + " --root l1");
  CHECK(plain.code == 0);
  CHECK(plain.json()["payload"]["exponents"] == Json::array({49, 30, 42, 105}));
}

TEST_CASE("recover and roundtrip") {
  const std::string fan_file = write_file("fan.json", to_json(splice_fan(d1())).dump());
  const auto r = run("recover " + fan_file);
  CHECK(r.code == 0);
  CHECK(isomorphic(diagram_from_json(r.json()["payload"]), d1()));

  auto f = splice_fan(d1());
  f.cones[0].multiplicity = 4;
  const auto refused = run("recover " + write_file("fan4.json", to_json(f).dump()));
  CHECK(refused.code == 1);
  CHECK(refused.json()["payload"]["error"] == "NonCoprimeFan");

  const auto rt = run("roundtrip " + d1_path);
  CHECK(rt.code == 0);
  CHECK(rt.json()["payload"]["roundtrip"] == true);
}

TEST_CASE("determinism") {
  const auto a = run("random --leaves 6 --nodes 2 --seed 5 --coprime");
  const auto b = run("random --leaves 6 --nodes 2 --seed 5 --coprime");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto d = diagram_from_json(a.json()["payload"]);
  CHECK(check_conditions(d).all());
  CHECK(to_json(d) == to_json(random_diagram(6, 2, 5, true)));

  const std::string file = write_file("random.json", a.json()["payload"].dump());
  CHECK(run("system " + file + " --seed 3").out == run("system " + file + " --seed 3").out);
  CHECK(run("system " + file + " --seed 3").out != run("system " + file + " --seed 4").out);
  CHECK(run("fan " + file).out == run("fan " + file).out);
  CHECK(run("endcurve " + file + " --root l1").out == run("endcurve " + file + " --root l1").out);
}
