#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "crossdiff/cli.hpp"

using namespace crossdiff;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  return {code, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("crossdiff_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

const std::string kConfigs = CROSSDIFF_CONFIG_DIR;

}  // namespace

TEST_CASE("equilibria") {
  const fs::path dir = scratch("eq");
  SUBCASE("untreated coexistence point") {
    const Run r = run({"equilibria", "--scenario", "untreated", "--c", "0.25", "--p2", "0.5", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "CCE  (0.592878"));
    CHECK(contains(r.out, "stable"));
    CHECK(fs::exists(dir / "manifest.txt"));
    CHECK(contains(slurp(dir / "equilibria.csv"), "CCE,0.592878"));
  }
  SUBCASE("origin is unstable") {
    const Run r = run({"equilibria", "--scenario", "untreated", "--s1", "0", "--s3", "0", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(contains(slurp(dir / "equilibria.csv"), "CFE,0,0,0,"));
    CHECK(contains(r.out, "CFE  (0, 0, 0)"));
    const auto line = r.out.substr(0, r.out.find('\n'));
    CHECK(contains(line, "unstable"));
  }
  SUBCASE("unknown flag") {
    const Run r = run({"equilibria", "--frobnicate", "1", "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(dir));
  }
  SUBCASE("invalid parameter value") {
    const Run r = run({"equilibria", "--p2", "-1", "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(dir));
  }
  SUBCASE("unknown scenario") { CHECK(run({"equilibria", "--scenario", "x", "--out", dir.string()}).code == 2); }
  fs::remove_all(dir);
}

TEST_CASE("dispersion") {
  const fs::path dir = scratch("disp");
  SUBCASE("single wavenumber") {
    const Run r = run({"dispersion", "--k-max", "0", "--out", dir.string()});
    CHECK(r.code == 0);
    const std::string csv = slurp(dir / "dispersion.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.starts_with("k,growth,frequency\n0,-"));
  }
  SUBCASE("positive cross-diffusion") {
    const Run r = run({"dispersion", "--d32", "0.01", "--out", dir.string()});
    CHECK(r.code == 0);
    const auto pos = r.out.find("growth_max=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 11)) > 0.0);
  }
  SUBCASE("threshold report") {
    const Run r = run({"dispersion", "--find-critical", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "critical_d32="));
    CHECK(contains(r.out, "reference_d32=-1.0668"));
  }
  SUBCASE("treated threshold has no bracket") {
    const Run r = run({"dispersion", "--scenario", "treated", "--find-critical", "--out", dir.string()});
    CHECK(r.code == 1);
    CHECK(contains(r.out, "reference_d32=-1.45136"));
  }
  SUBCASE("no coexistence point") {
    CHECK(run({"dispersion", "--scenario", "treated", "--p2", "8", "--out", dir.string()}).code == 1);
  }
  fs::remove_all(dir);
}

TEST_CASE("hopf") {
  const fs::path dir = scratch("hopf");
  const Run a = run({"hopf", "--p2-lo", "0.3", "--p2-hi", "0.58", "--out", dir.string()});
  CHECK(a.code == 0);
  const auto pos = a.out.find("p2_critical=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::abs(std::stod(a.out.substr(pos + 12)) - 0.520) <= 0.005);
  const Run b = run({"hopf", "--p2-lo", "0.1", "--p2-hi", "0.2", "--out", dir.string()});
  CHECK(b.code == 1);
  CHECK(contains(b.out, "no crossing"));
  fs::remove_all(dir);
}

TEST_CASE("region") {
  const fs::path dir = scratch("region");
  const Run a = run({"region", "--out", dir.string()});
  CHECK(a.code == 0);
  const std::string csv = slurp(dir / "region.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2501);
  CHECK(contains(csv, ",1\n"));
  const Run point = run({"region", "--p2-min", "0.5", "--p2-max", "0.5", "--p2-n", "1", "--c-min", "0.25", "--c-max",
                         "0.25", "--c-n", "1", "--out", dir.string()});
  CHECK(point.code == 0);
  CHECK(slurp(dir / "region.csv") == "p2,c,exists\n0.5,0.25,1\n");
  CHECK(run({"region", "--p2-n", "0", "--out", dir.string()}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("simulate") {
  const fs::path dir = scratch("sim");
  SUBCASE("stability guard refusal") {
    const Run r = run({"simulate", "--dt", "0.01", "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "0.002"));
    CHECK_FALSE(fs::exists(dir / "manifest.txt"));
  }
  SUBCASE("outputs and byte-identical re-run") {
    const Run r = run({"simulate", "--dims", "1", "--dx", "0.02", "--t-end", "2", "--snapshot-every", "0.5", "--out",
                       dir.string()});
    REQUIRE(r.code == 0);
    for (const char* f : {"manifest.txt", "resolved.cfg", "snapshots.csv", "pattern_report.txt", "pattern_report.csv",
                          "snap_0000.bin", "snap_0004_v.csv", "snap_0004_w.png"})
      CHECK(fs::exists(dir / f));
    CHECK_FALSE(fs::exists(dir / "probe.csv"));
    const std::string manifest = slurp(dir / "manifest.txt");
    CHECK(contains(manifest, "determinism=seedless"));
    CHECK(contains(manifest, "subcommand=simulate"));

    // replay the recorded command line into a second directory
    const auto start = manifest.find("args=") + 5;
    std::istringstream line(manifest.substr(start, manifest.find('\n', start) - start));
    std::vector<std::string> args;
    for (std::string tok; line >> tok;) args.push_back(tok);
    const fs::path again = scratch("sim_again");
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i] == "--out") args[i + 1] = again.string();
    REQUIRE(run(args).code == 0);
    for (const char* f : {"snap_0004_v.csv", "snap_0002_u.csv", "snapshots.csv", "pattern_report.csv"})
      CHECK(slurp(dir / f) == slurp(again / f));
    CHECK(slurp(dir / "snap_0004.bin") == slurp(again / "snap_0004.bin"));
    fs::remove_all(again);
  }
  SUBCASE("negativity abort is a numerical failure") {
    const Run r = run({"simulate", "--config", kConfigs + "/hopf_1d.cfg", "--negativity", "abort", "--out", dir.string()});
    CHECK(r.code == 3);
    CHECK(fs::exists(dir / "manifest.txt"));
  }
  SUBCASE("shipped 1D Hopf config oscillates") {
    const Run r = run({"simulate", "--config", kConfigs + "/hopf_1d.cfg", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "oscillating=true"));
    CHECK(fs::exists(dir / "probe.csv"));
  }
  SUBCASE("homogeneous start") {
    const Run r = run({"simulate", "--ic", "equilibrium", "--dx", "0.05", "--t-end", "1", "--fields", "none", "--out",
                       dir.string()});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "pattern_class=homogeneous"));
    CHECK_FALSE(fs::exists(dir / "snap_0000.bin"));
  }
  fs::remove_all(dir);
}

TEST_CASE("ode") {
  const fs::path dir = scratch("ode");
  const Run r = run({"ode", "--p2", "0.55", "--t-end", "400", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "period="));
  CHECK(slurp(dir / "trajectory.csv").starts_with("t,u,v,w\n0,0.1,0.3,1\n"));
  fs::remove_all(dir);
}

TEST_CASE("usage") {
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
