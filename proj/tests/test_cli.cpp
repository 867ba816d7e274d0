#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "corput/report_json.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using corput::Json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "corput");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = corput::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("corput-cli-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string read(const std::string& name) const {
    std::ifstream in(path / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("catalog listing") {
  const auto r = run({"catalog"});
  CHECK(r.code == 0);
  for (const char* name : {"monomial_1d", "fresnel", "radial_power", "complex_damped", "parametric_family"})
    CHECK(r.out.find(name) != std::string::npos);

  const auto j = run({"catalog", "--json"});
  CHECK(j.code == 0);
  const auto parsed = Json::parse(j.out);
  REQUIRE(parsed.is_array());
  CHECK(parsed.size() >= 5);
  CHECK(parsed[0].contains("params"));
}

TEST_CASE("usage errors") {
  const auto r = run({"frobnicate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("catalog") != std::string::npos);
  CHECK(run({}).code == 2);
}

TEST_CASE("config errors and io errors") {
  TempDir t;
  CHECK(run({"analyze", "--config", (t.path / "missing.ini").string()}).code == 3);
  const auto bad = run({"analyze", "--config", t.file("a.ini", "[instance\nname = fresnel\n")});
  CHECK(bad.code == 2);
  CHECK(bad.err.find(":1") != std::string::npos);
  const auto field = run({"analyze", "--config", t.file("b.ini", "[lambda]\npoints_per_decade = lots\n")});
  CHECK(field.code == 2);
  CHECK(field.err.find("lambda.points_per_decade") != std::string::npos);
  CHECK(run({"analyze", "--config", t.file("c.ini", "[run]\nsphere_res = 3\n")}).code == 2);
  CHECK(run({"analyze", "--config", t.file("d.ini", "[instance]\nname = nope\n")}).code == 2);
  CHECK(run({"analyze", "--config", t.file("e.ini", "[tolerances]\nquadrature = -1\n")}).code == 2);

  // a regular file where the output directory should go
  const auto blocker = t.file("blocker", "x");
  const auto cfg = t.file("f.ini", "[instance]\nname = fresnel\n[lambda]\nmin = 1\nmax = 10\npoints_per_decade = 2\n");
  CHECK(run({"sweep", "--config", cfg, "--out", blocker + "/sub"}).code == 3);
}

TEST_CASE("analyze exit codes") {
  TempDir t;
  const auto ok = run({"analyze", "--json", "--config", t.file("a.ini", "[instance]\nname = fresnel\nN = 2\n")});
  CHECK(ok.code == 0);
  const auto j = Json::parse(ok.out);
  CHECK(j["report"]["all_passed"] == true);
  CHECK(j["config"]["instance"]["name"] == "fresnel");

  const auto bad = run({"analyze", "--config", t.file("b.ini", "[instance]\nname = product_degenerate\n")});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("F2  FAIL") != std::string::npos);
}

TEST_CASE("sweep artifacts") {
  TempDir t;
  const auto cfg = t.file("m.ini",
                          "[instance]\nname = monomial_1d\nk = 4\n"
                          "[lambda]\nmin = 1\nmax = 1e4\npoints_per_decade = 4\n");
  const auto r = run({"sweep", "--config", cfg, "--out", t.path.string()});
  CHECK(r.code == 0);
  const auto csv = t.read("sweep.csv");
  CHECK(csv.rfind("lambda,nu_index,abs_I,err,bound_product\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 17);
  const auto fit = Json::parse(t.read("fit.json"));
  CHECK(std::abs(fit["fit"]["exponent"].get<double>() - 0.25) <= 0.05);
  CHECK(fs::exists(t.path / "plot_nu0.dat"));
  CHECK(fs::exists(t.path / "sweep.json"));

  const auto f2 = t.file("f.ini", "[instance]\nname = fresnel\nN = 2\n[lambda]\nmin = 0\nmax = 100\npoints_per_decade = 3\n");
  const auto rf = run({"sweep", "--config", f2, "--out", (t.path / "f").string()});
  CHECK(rf.code == 0);
  std::ifstream in(t.path / "f" / "certificate.json");
  const auto cert = Json::parse(in);
  CHECK(cert["rate"] == 1.0);
}

TEST_CASE("identical configs give byte-identical CSV") {
  TempDir t;
  const auto cfg = t.file("p.ini",
                          "[instance]\nname = parametric_family\n[lambda]\nmin = 0\nmax = 100\npoints_per_decade = 3\n");
  const auto a = run({"sweep", "--config", cfg});
  const auto b = run({"sweep", "--config", cfg});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  const auto s = t.file("s.ini",
                        "[instance]\nname = fresnel\nN = 2\ndelta = 2\n[run]\nseed = 17\n"
                        "[sublevel]\nmethod = monte_carlo\nsamples = 20000\nt = 1, 0.3, 0.1, 0.03, 0.01\n");
  const auto x = run({"sublevel", "--config", s});
  const auto y = run({"sublevel", "--config", s});
  CHECK(x.code == 0);
  CHECK(x.out == y.out);
  CHECK(x.out.rfind("t,measure,std_error\n", 0) == 0);
  const auto js = run({"sublevel", "--json", "--config", s});
  CHECK(Json::parse(js.out)["seed"] == 17);
}

TEST_CASE("certify refuses instances outside the theorem") {
  TempDir t;
  const auto r = run({"certify", "--json", "--config", t.file("b.ini", "[instance]\nname = product_degenerate\n")});
  CHECK(r.code == 1);
  CHECK(Json::parse(r.out)["refused"] == true);
  CHECK(r.err.find("F2") != std::string::npos);
}

TEST_CASE("certify accepts the stationary phase case") {
  TempDir t;
  const auto r = run({"certify", "--config",
                      t.file("c.ini", "[instance]\nname = fresnel\n[lambda]\nmin = 0\nmax = 1e3\npoints_per_decade = 6\n")});
  CHECK(r.code == 0);
  CHECK(r.out.find("certified") != std::string::npos);
}

TEST_CASE("ibp-verify") {
  TempDir t;
  const auto cfg = t.file("f.ini", "[instance]\nname = fresnel\n[lambda]\nvalues = 100, 1000, 10000\n");
  const auto r = run({"ibp-verify", "--json", "--config", cfg});
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["max_relative_discrepancy"].get<double>() <= 1e-3);
  CHECK(j["index_constraint_holds"] == true);
  CHECK(j["l"] == 1);

  const auto l2 = t.file("g.ini", "[instance]\nname = fresnel\n[lambda]\nvalues = 1000\n[run]\nibp_order = 2\n");
  CHECK(run({"ibp-verify", "--config", l2}).code == 0);

  CHECK(run({"ibp-verify", "--config", t.file("b.ini", "[instance]\nname = product_degenerate\n")}).code == 1);
}

TEST_CASE("integrate emits one record per lambda") {
  TempDir t;
  const auto cfg = t.file("i.ini", "[instance]\nname = fresnel\n[lambda]\nvalues = 0, 100\n");
  const auto r = run({"integrate", "--json", "--config", cfg, "--out", t.path.string()});
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  REQUIRE(j["results"].size() == 2);
  for (const char* key : {"lambda", "nu", "method", "value", "error", "panels"}) CHECK(j["results"][1].contains(key));
  CHECK(j["results"][1]["lambda"] == 100.0);
  CHECK(fs::exists(t.path / "integrate.json"));
}

}  // TEST_SUITE
