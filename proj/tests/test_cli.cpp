#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "autoconv/cli.hpp"
#include "autoconv/io.hpp"
#include "doctest.h"

using namespace autoconv;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "autoconv_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string put(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  io::write_text_file(p, text);
  return p.string();
}

}  // namespace

TEST_CASE("selftest passes") {
  const auto r = run({"selftest"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("usage and input errors") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"nonsense"}).code == cli::kUsage);
  CHECK(run({"numrange"}).code == cli::kUsage);
  const auto bad = put("bad.json", "{\"n\": 3, \"re\": [[3, 0");
  CHECK(run({"numrange", "--matrix", bad}).code == cli::kBadInput);
  const auto short_rows = put("short.json", R"({"n": 2, "re": [[1, 0]]})");
  CHECK(run({"numrange", "--matrix", short_rows}).code == cli::kBadInput);
  CHECK(run({"numrange", "--matrix", (scratch() / "missing.json").string()}).code == cli::kBadInput);
  const auto m = put("m.json", R"({"n": 3, "re": [[3, 0, 0], [0, 2, 0], [0, 0, 1]]})");
  CHECK(run({"certify", "--matrix", m, "--k", "2", "--samples", "10"}).code == cli::kUsage);
  CHECK(run({"numrange", "--matrix", m, "--k", "5"}).code == cli::kBadInput);
  CHECK(run({"numrange", "--matrix", m, "--mode", "c"}).code == cli::kUsage);
  CHECK(run({"majorize", "--c", "1,3", "--b", "2,2"}).code == cli::kBadInput);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("certify a k-range") {
  const auto m = put("m.json", R"({"n": 3, "re": [[3, 0, 0], [0, 2, 0], [0, 0, 1]]})");
  const auto report = (scratch() / "report.json").string();
  const auto r = run({"certify", "--matrix", m, "--mode", "k", "--k", "2", "--samples", "100000", "--seed", "42",
                      "--report", report, "--quiet"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  const auto j = io::read_json_file(report);
  CHECK(j["n_outside"] == 0);
  CHECK(j["attainment"] == true);
  const auto manifest = io::read_json_file(report + ".manifest.json");
  CHECK(manifest["command"] == "certify");
  CHECK(manifest["seeds"][0] == 42);
  CHECK(manifest["parameters"]["--k"] == "2");
  CHECK(manifest["input_digests"][m] == io::sha256_file(m));
}

TEST_CASE("numrange writes the boundary deterministically") {
  const auto m = put("nil.json", R"({"n": 2, "re": [[0, 1], [0, 0]], "im": [[0, 0], [0, 0]]})");
  const auto a = (scratch() / "a.csv").string(), b = (scratch() / "b.csv").string();
  REQUIRE(run({"numrange", "--matrix", m, "--k", "1", "--angles", "16", "--out", a}).code == 0);
  REQUIRE(run({"numrange", "--matrix", m, "--k", "1", "--angles", "16", "--out", b}).code == 0);
  const auto text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.rfind("theta,h,x,y,flat\n0,0.49999999999999", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 17);
  CHECK(fs::exists(a + ".manifest.json"));

  const auto weighted = run({"numrange", "--matrix", m, "--mode", "c", "--c", "1,0", "--angles", "16"});
  CHECK(weighted.code == 0);
  CHECK(weighted.out == slurp(a));
}

TEST_CASE("majorize") {
  const auto steps = (scratch() / "steps.json").string();
  const auto yes = run({"majorize", "--c", "3,1", "--b", "2,2", "--emit-steps", steps});
  CHECK(yes.code == 0);
  const auto j = io::Json::parse(yes.out);
  CHECK(j["majorized"] == true);
  CHECK(j["steps"][0]["lambda"] == 0.5);
  CHECK(io::read_json_file(steps).size() == 1);
  CHECK(run({"majorize", "--c", "2,2", "--b", "3,1"}).code == cli::kCertificationFailed);
}

TEST_CASE("faces commands") {
  const auto cube = put("cube.json", R"({"d": 3, "vertices": [["0","0","0"],["1","0","0"],["0","1","0"],["0","0","1"],
    ["1","1","0"],["1","0","1"],["0","1","1"],["1","1","1"]]})");
  const auto h = put("h.json", R"({"A": [["1","1","1"]], "b": ["3/2"]})");
  const auto minimal = run({"faces", "minimal", "--polytope", cube, "--point", "1,1/2,0"});
  CHECK(minimal.code == 0);
  CHECK(io::Json::parse(minimal.out)["dim"] == 1);
  const auto slice = io::Json::parse(run({"faces", "intersect", "--polytope", cube, "--subspace", h}).out);
  CHECK(slice["vertices"].size() == 6);
  CHECK(io::Json::parse(run({"faces", "lattice", "--polytope", cube}).out)["count"] == 27);
  const auto check = run({"faces", "check", "--polytope", cube, "--subspace", h});
  CHECK(check.code == 0);
  CHECK(io::Json::parse(check.out)["summary"]["failures"] == 0);
  const auto far = put("far.json", R"({"A": [["1","0","0"]], "b": ["5"]})");
  CHECK(run({"faces", "check", "--polytope", cube, "--subspace", far}).code == cli::kBadInput);

  const auto a = put("a.json", R"({"n": 4, "re": [[1,0,0,0],[0,0.5,0,0],[0,0,0.5,0],[0,0,0,0]]})");
  for (auto args : {std::vector<std::string>{"faces", "qk"}, std::vector<std::string>{"qk"}}) {
    args.insert(args.end(), {"--matrix", a, "--k", "2"});
    const auto r = run(args);
    CHECK(r.code == 0);
    const auto j = io::Json::parse(r.out);
    CHECK(j["extreme"] == false);
    CHECK(j["face_dim"] == 3);
    CHECK(j["rank_r"] == 2);
  }
}

TEST_CASE("lyapunov commands") {
  const auto mu = put("mu.json", R"({"masses": [1, 1, 1], "target": [[1, 1, 1]], "constraints": [[1, 1, 1]], "z": [1.5]})");
  const auto range = run({"lyapunov", "range", "--measure", mu});
  CHECK(range.code == 0);
  CHECK(std::count(range.out.begin(), range.out.end(), '\n') == 8);
  const auto constrained = run({"lyapunov", "constrained", "--measure", mu, "--eta", "0.5"});
  CHECK(std::count(constrained.out.begin(), constrained.out.end(), '\n') == 6);
  const auto vertices = run({"lyapunov", "vertices", "--measure", mu});
  CHECK(vertices.code == 0);
  CHECK(std::count(vertices.out.begin(), vertices.out.end(), '\n') == 6);
  CHECK(run({"lyapunov", "refine-study", "--measure", mu, "--rounds", "2"}).code == cli::kUsage);
  const auto study = run({"lyapunov", "refine-study", "--measure", mu, "--rounds", "2", "--seed", "5", "--quiet"});
  CHECK(study.code == 0);
  CHECK(study.out.find("2,12,4096,0.125") != std::string::npos);
  const auto bad = put("badmu.json", R"({"masses": [1, -1], "target": [[1, 1]]})");
  CHECK(run({"lyapunov", "range", "--measure", bad}).code == cli::kBadInput);
}

TEST_CASE("io round trips") {
  const ComplexMatrix m = random_complex(3, 4);
  CHECK(io::matrix_from_json(io::Json::parse(io::matrix_to_json(m).dump())) == m);

  const auto k = faces::random_polytope(3, 9, 2);
  const auto back = io::polytope_from_json(io::polytope_to_json(k));
  CHECK(back.vertices() == k.vertices());
  const auto h = faces::random_subspace_through(k, 2, 2);
  const auto hb = io::subspace_from_json(io::subspace_to_json(h), 3);
  CHECK(hb.equations == h.equations);
  CHECK(hb.rhs == h.rhs);

  const auto mu = lyap::random_measure(5, 2, 1, 3);
  const auto mb = io::measure_from_json(io::Json::parse(io::measure_to_json(mu).dump()));
  CHECK(mb.masses == mu.masses);
  CHECK(mb.target == mu.target);
  CHECK(mb.constraints == mu.constraints);
  CHECK(mb.z == mu.z);

  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(io::format_double(1.0 / 3)) == 1.0 / 3);
  CHECK(io::doubles_from_text("3, 1.5,-2") == std::vector<double>{3, 1.5, -2});
  CHECK_THROWS_AS(io::doubles_from_text("3,x"), io::FormatError);
  CHECK(io::point_from_text("1/2,-3") == faces::Point{exact::Rational(1, 2), exact::Rational(-3)});
  CHECK_THROWS_AS(io::point_from_text("1/0"), io::FormatError);
}
