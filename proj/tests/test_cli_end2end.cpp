#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string bin() {
  const char* b = std::getenv("QSL_BIN");
  REQUIRE_MESSAGE(b != nullptr, "QSL_BIN must point at the qsl executable");
  return b;
}

std::string work_dir() {
  static std::string dir = [] {
    std::string d = "qsl_e2e_" + std::to_string(getpid());
    REQUIRE(std::system(("mkdir -p " + d).c_str()) == 0);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = bin() + " " + args + " > " + work_dir() + "/stdout.txt 2> " +
                          work_dir() + "/stderr.txt";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE_MESSAGE(f.good(), ("missing file: " + path).c_str());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

}  // namespace

TEST_CASE("preset-list names every scenario and exits cleanly") {
  CHECK(run("preset-list") == 0);
  const std::string out = slurp(work_dir() + "/stdout.txt");
  for (const char* name : {"fig1a", "fig3c", "fig5b", "fig6c", "det-lab", "det-rwa"})
    CHECK(out.find(name) != std::string::npos);
}

TEST_CASE("help is success, bad flags and bad presets are config errors") {
  CHECK(run("--help") == 0);
  CHECK(run("sim --help") == 0);
  CHECK(run("sim --no-such-flag") == 2);
  CHECK(run("sim --preset fig9q --out x.csv") == 2);
  CHECK(run("sim --preset fig1a --config also.json --out x.csv") == 2);  // mutually exclusive
  CHECK(run("sim --preset fig1a") == 2);                                 // no output path
  CHECK(run("") == 2);                                                   // subcommand required
  CHECK(run("compare --preset fig3b") == 2);                             // --pair required
}

TEST_CASE("a deterministic rotating-frame run writes the textbook flop") {
  const std::string out = work_dir() + "/detrwa.csv";
  CHECK(run("sim --preset det-rwa --out " + out) == 0);
  const auto lines = split_lines(slurp(out));
  REQUIRE(lines.size() == 60002);
  CHECK(lines[0] == "t,mean_pb,std_pb");
  const auto first = parse_row(lines[1]);
  CHECK(first[0] == 0.0);
  CHECK(first[1] == 1.0);
  CHECK(first[2] == 0.0);
  const auto last = parse_row(lines.back());
  CHECK(last[0] == doctest::Approx(60.0));
  const double expected = std::pow(std::cos(0.5 * 0.2 * 60.0), 2);
  CHECK(last[1] == doctest::Approx(expected).epsilon(1e-6));

  const std::string man = slurp(out + ".manifest.json");
  CHECK(man.find("det-rwa") != std::string::npos);
  CHECK(man.find("\"command\": \"sim\"") != std::string::npos);
}

TEST_CASE("reruns with the same seed are byte-identical") {
  const std::string a = work_dir() + "/rerun_a.csv", b = work_dir() + "/rerun_b.csv";
  const std::string flags = " --n 24 --t-final 2 --seed 777";
  CHECK(run("sim --preset fig1a --out " + a + flags) == 0);
  CHECK(run("sim --preset fig1a --out " + b + flags) == 0);
  CHECK(slurp(a) == slurp(b));
  // a different seed must change the bytes
  const std::string c = work_dir() + "/rerun_c.csv";
  CHECK(run("sim --preset fig1a --out " + c + " --n 24 --t-final 2 --seed 778") == 0);
  CHECK(slurp(a) != slurp(c));
}

TEST_CASE("thread count does not leak into the output bytes") {
  // identical relative output paths in separate directories, so even the
  // manifests must match byte for byte
  const std::string da = work_dir() + "/t1", db = work_dir() + "/t3";
  REQUIRE(std::system(("mkdir -p " + da + " " + db).c_str()) == 0);
  const std::string flags = " --n 32 --t-final 2 --out out.csv --hist-out out.hist";
  const auto run_in = [&](const std::string& dir, int threads) {
    const std::string cmd = "cd " + dir + " && " + bin() + " sim --preset fig3a" + flags +
                            " --threads " + std::to_string(threads) + " > stdout.txt 2> stderr.txt";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  CHECK(run_in(da, 1) == 0);
  CHECK(run_in(db, 3) == 0);
  CHECK(slurp(da + "/out.csv") == slurp(db + "/out.csv"));
  CHECK(slurp(da + "/out.hist") == slurp(db + "/out.hist"));
  CHECK(slurp(da + "/out.csv.manifest.json") == slurp(db + "/out.csv.manifest.json"));
}

TEST_CASE("histogram and paths files have the declared shapes") {
  const std::string out = work_dir() + "/shape.csv";
  CHECK(run("sim --preset fig1a --out " + out + " --hist-out " + out + ".hist --paths-out " +
            out + ".paths --n 10 --t-final 1 --bins 10") == 0);
  const auto hist = split_lines(slurp(out + ".hist"));
  REQUIRE(hist.size() == 11);
  CHECK(hist[0] == "bin_lo,bin_hi,count");
  long total = 0;
  for (size_t i = 1; i < hist.size(); ++i) total += std::lround(parse_row(hist[i])[2]);
  CHECK(total == 10);
  const auto paths = split_lines(slurp(out + ".paths"));
  REQUIRE(paths.size() == 1002);
  CHECK(paths[0].rfind("t,pb_0,", 0) == 0);
  CHECK(parse_row(paths[1]).size() == 11);
}

TEST_CASE("master subcommand writes the density-matrix series") {
  const std::string out = work_dir() + "/master.csv";
  CHECK(run("master --preset fig3b --mode static --out " + out) == 0);
  const auto lines = split_lines(slurp(out));
  REQUIRE(lines.size() == 60002);
  CHECK(lines[0] == "t,rho_bb,re_rho_ba,im_rho_ba,purity");
  const auto last = parse_row(lines.back());
  CHECK(last[1] > 0.4);
  CHECK(last[1] < 0.7);
  CHECK(last[4] <= 1.0 + 1e-9);
  // ou scenarios have no master equation
  CHECK(run("master --preset fig5a --out " + work_dir() + "/bad.csv") == 2);
  // the time-local dissipator is tied to the rwa frame
  CHECK(run("master --preset fig3a --mode time-local --out " + work_dir() + "/bad.csv") == 2);
  CHECK(run("master --preset fig3b --mode sideways --out " + work_dir() + "/bad.csv") == 2);
}

TEST_CASE("analytic subcommand matches the master equation to reporting precision") {
  const std::string am = work_dir() + "/ana_master.csv", aa = work_dir() + "/ana_closed.csv";
  CHECK(run("master --preset fig3b --mode static --out " + am + " --t-final 10") == 0);
  CHECK(run("analytic --preset fig3b --out " + aa + " --t-final 10") == 0);
  const auto lm = split_lines(slurp(am)), la = split_lines(slurp(aa));
  REQUIRE(lm.size() == la.size());
  double maxdiff = 0.0;
  for (size_t i = 1; i < lm.size(); i += 97) {
    const auto rm = parse_row(lm[i]), ra = parse_row(la[i]);
    for (size_t c = 1; c < 5; ++c) maxdiff = std::max(maxdiff, std::abs(rm[c] - ra[c]));
  }
  CHECK(maxdiff < 1e-6);
  // the closed form refuses frames or noise it does not describe
  CHECK(run("analytic --preset fig3a --out " + work_dir() + "/bad.csv") == 2);
  CHECK(run("analytic --preset fig1b --out " + work_dir() + "/bad.csv") == 2);
}

TEST_CASE("compare verdicts and exit codes") {
  const std::string rep = work_dir() + "/report.json";
  CHECK(run("compare --pair master-vs-analytic --preset fig3b --out " + rep) == 0);
  const std::string report = slurp(rep);
  CHECK(report.find("\"agree\": true") != std::string::npos);
  CHECK(report.find("\"se_multiplier\": 3.0") != std::string::npos);
  CHECK(report.find("\"master_vs_analytic_tol\"") != std::string::npos);
  // the naive frame has no master counterpart to compare against
  CHECK(run("compare --pair sde-vs-master --preset fig3c") == 2);
  CHECK(run("compare --pair no-such-pair --preset fig3b") == 2);
  // deterministic presets cannot feed the stochastic comparisons
  CHECK(run("compare --pair rwa-vs-naive --preset det-rwa") == 2);
}

TEST_CASE("config file runs end to end") {
  const std::string cfg = work_dir() + "/scenario.json";
  {
    std::ofstream f(cfg);
    f << R"({"frame": "rwa", "noise": {"kind": "white", "axes": ["z"], "w0": 0.1},
             "seed": 4, "t_final": 2, "n_realizations": 8})";
  }
  const std::string out = work_dir() + "/from_config.csv";
  CHECK(run("sim --config " + cfg + " --out " + out) == 0);
  CHECK(split_lines(slurp(out)).size() == 2002);
  {
    std::ofstream f(cfg);
    f << R"({"frame": "rwa", "nois": {}})";
  }
  CHECK(run("sim --config " + cfg + " --out " + out) == 2);
  CHECK(run("sim --config does_not_exist.json --out " + out) == 6);
}
