// End-to-end tests of the command-line tool: exit codes, error lines, run
// directory contents, determinism of reruns and the analysis subcommands.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("storval_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(++counter));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path base = fs::temp_directory_path() /
                  ("storval_cli_io_" + std::to_string(::getpid()) + "_" +
                   std::to_string(++counter));
  fs::path out = base;
  out += ".out";
  fs::path err = base;
  err += ".err";
  std::string cmd = std::string(STORVAL_BIN) + " " + args + " >" +
                    out.string() + " 2>" + err.string();
  int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  fs::remove(out);
  fs::remove(err);
  return r;
}

const std::string kFixtures = FIXTURES_DIR;

void copy_bundle(const fs::path& from, const fs::path& to) {
  fs::create_directories(to);
  for (const auto& e : fs::directory_iterator(from)) {
    fs::copy_file(e.path(), to / e.path().filename());
  }
}

// Replaces the whole contents of `file` line by line: any line starting with
// `prefix` becomes `replacement`.
void patch_line(const fs::path& file, const std::string& prefix,
                const std::string& replacement) {
  std::ifstream in(file);
  std::string line, text;
  bool hit = false;
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) {
      line = replacement;
      hit = true;
    }
    text += line + "\n";
  }
  in.close();
  REQUIRE(hit);
  std::ofstream(file) << text;
}

// timestamp,v1,v2,... -> per-row values of one column
std::vector<double> csv_column(const fs::path& file,
                               const std::string& column) {
  std::ifstream in(file);
  std::string line;
  REQUIRE(std::getline(in, line));
  std::vector<std::string> header;
  std::stringstream h(line);
  std::string cell;
  while (std::getline(h, cell, ',')) header.push_back(cell);
  int want = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) want = static_cast<int>(i);
  }
  REQUIRE(want >= 0);
  std::vector<double> values;
  while (std::getline(in, line)) {
    std::stringstream row(line);
    for (int c = 0; std::getline(row, cell, ','); ++c) {
      if (c == want) values.push_back(std::stod(cell));
    }
  }
  return values;
}

}  // namespace

TEST_CASE("validate accepts the bundled fixtures") {
  CliResult r = run_cli("validate " + kFixtures + "/five-bus");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("ok: 5 buses", 0) == 0);

  r = run_cli("validate " + kFixtures + "/two-gen");
  CHECK(r.exit_code == 0);
}

TEST_CASE("validate reports violations and exits 2") {
  TempDir tmp;
  copy_bundle(kFixtures + "/two-gen", tmp.path / "bundle");
  patch_line(tmp.path / "bundle" / "generators.csv", "cheap,",
             "cheap,nowhere,clean,8,true,0,20,800,0.02,25,0.07,20");
  CliResult r = run_cli("validate " + (tmp.path / "bundle").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("ValidationFailed") != std::string::npos);
  CHECK(r.out.find("cheap") != std::string::npos);
  CHECK(r.out.find("nowhere") != std::string::npos);
}

TEST_CASE("missing inputs exit 4 with a MissingFile line") {
  CliResult r = run_cli("validate /nonexistent/bundle");
  CHECK(r.exit_code == 4);
  CHECK(r.err.rfind("MissingFile:", 0) == 0);

  TempDir tmp;
  r = run_cli("solve " + kFixtures + "/two-gen /nonexistent.cfg -o " +
              (tmp.path / "run").string());
  CHECK(r.exit_code == 4);
  CHECK(r.err.rfind("MissingFile:", 0) == 0);
}

TEST_CASE("solve writes a complete run directory") {
  TempDir tmp;
  fs::path run = tmp.path / "run";
  CliResult r = run_cli("solve " + kFixtures + "/two-gen " + kFixtures +
                        "/two-gen/nocap.cfg -o " + run.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("optimal: objective", 0) == 0);
  for (const char* f :
       {"capacities.csv", "dispatch.csv", "flows.csv", "prices.csv",
        "storage.csv", "kkt.txt", "manifest.json", "summary.json"}) {
    CHECK(fs::exists(run / f));
  }
  CHECK(slurp(run / "kkt.txt").find("pass true") != std::string::npos);

  // the dear unit sets the price; the cheap unit runs flat out
  for (double p : csv_column(run / "prices.csv", "b0")) {
    CHECK(p == doctest::Approx(50.0).epsilon(1e-9));
  }
  for (double g : csv_column(run / "dispatch.csv", "cheap")) {
    CHECK(g == doctest::Approx(8.0));
  }
  for (double g : csv_column(run / "dispatch.csv", "dear")) {
    CHECK(g == doctest::Approx(2.0));
  }
}

TEST_CASE("a zero emission cap shuts down the fossil unit") {
  TempDir tmp;
  fs::path run = tmp.path / "run";
  CliResult r = run_cli("solve " + kFixtures + "/two-gen " + kFixtures +
                        "/two-gen/zerocap.cfg -o " + run.string());
  CHECK(r.exit_code == 0);
  for (double g : csv_column(run / "dispatch.csv", "dear")) {
    CHECK(g == doctest::Approx(0.0).epsilon(1e-9));
  }
  for (double g : csv_column(run / "dispatch.csv", "cheap")) {
    CHECK(g == doctest::Approx(10.0));
  }
}

TEST_CASE("infeasible problems exit 3") {
  TempDir tmp;
  copy_bundle(kFixtures + "/two-gen", tmp.path / "bundle");
  patch_line(tmp.path / "bundle" / "generators.csv", "cheap,",
             "cheap,b0,clean,8,true,0,9,800,0.02,25,0.07,20");
  CliResult r = run_cli("solve " + (tmp.path / "bundle").string() + " " +
                        (tmp.path / "bundle" / "zerocap.cfg").string() +
                        " -o " + (tmp.path / "run").string());
  CHECK(r.exit_code == 3);
  CHECK(r.err.rfind("Infeasible:", 0) == 0);
}

TEST_CASE("scenario parse failures exit 2") {
  TempDir tmp;
  std::ofstream(tmp.path / "bad.cfg") << "bogus = 1\n";
  CliResult r = run_cli("solve " + kFixtures + "/two-gen " +
                        (tmp.path / "bad.cfg").string() + " -o " +
                        (tmp.path / "run").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.rfind("MalformedKey:", 0) == 0);
}

TEST_CASE("command line misuse exits 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("solve").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("--version").out == std::string("0.1.0\n"));
}

TEST_CASE("analysis subcommands reuse the stored run deterministically") {
  TempDir tmp;
  fs::path run = tmp.path / "run";
  REQUIRE(run_cli("solve " + kFixtures + "/two-gen " + kFixtures +
                  "/two-gen/nocap.cfg -o " + run.string())
              .exit_code == 0);

  CliResult kpi1 = run_cli("kpi " + run.string());
  CliResult kpi2 = run_cli("kpi " + run.string());
  CHECK(kpi1.exit_code == 0);
  CHECK(kpi1.out == kpi2.out);
  CHECK(kpi1.out.find("metric,value\n") == 0);
  CHECK(kpi1.out.find("annual_demand_mwh,40") != std::string::npos);

  CliResult mpi = run_cli("mpi " + run.string());
  CHECK(mpi.exit_code == 0);
  CHECK(mpi.out.find("component,kind,location,expanded,full_load_hours\n") ==
        0);
  CHECK(mpi.out.find("TOTAL,discharger,,0,") != std::string::npos);

  CliResult lcos = run_cli("lcos " + run.string());
  CHECK(lcos.exit_code == 0);  // no storage techs: header only
  CHECK(lcos.out.find("tech,lcos_eur_per_kwh") == 0);

  CliResult missing = run_cli("lcos " + run.string() + " ghost");
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.rfind("UnknownComponent:", 0) == 0);

  // -o writes the same bytes the terminal would have seen
  CliResult to_file =
      run_cli("kpi " + run.string() + " -o " + (tmp.path / "kpi.csv").string());
  CHECK(to_file.exit_code == 0);
  CHECK(slurp(tmp.path / "kpi.csv") == kpi1.out);

  CliResult wsb = run_cli("wsb " + run.string() + " " + run.string());
  CHECK(wsb.exit_code == 0);
  CHECK(wsb.out.find("net_benefit_eur_per_yr,0\n") != std::string::npos);
  CHECK(wsb.out.find("gross_benefit_eur_per_yr,0\n") != std::string::npos);
}

TEST_CASE("solve reruns are byte-identical outside the manifest") {
  TempDir tmp;
  fs::path a = tmp.path / "a";
  fs::path b = tmp.path / "b";
  std::string solve = "solve " + kFixtures + "/two-gen " + kFixtures +
                      "/two-gen/nocap.cfg -o ";
  REQUIRE(run_cli(solve + a.string()).exit_code == 0);
  REQUIRE(run_cli(solve + b.string()).exit_code == 0);
  for (const char* f : {"capacities.csv", "dispatch.csv", "flows.csv",
                        "prices.csv", "storage.csv", "summary.json",
                        "kkt.txt"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("stored runs refuse to load after the bundle changes") {
  TempDir tmp;
  copy_bundle(kFixtures + "/two-gen", tmp.path / "bundle");
  fs::path run = tmp.path / "run";
  REQUIRE(run_cli("solve " + (tmp.path / "bundle").string() + " " +
                  (tmp.path / "bundle" / "nocap.cfg").string() + " -o " +
                  run.string())
              .exit_code == 0);
  {
    std::ofstream app(tmp.path / "bundle" / "loads.csv", std::ios::app);
    app << "\n";
  }
  CliResult r = run_cli("kpi " + run.string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.rfind("CorruptRun:", 0) == 0);
}

TEST_CASE("resampled solves record the step and analyses follow it") {
  TempDir tmp;
  fs::path run = tmp.path / "run";
  CliResult r = run_cli("solve " + kFixtures + "/two-gen " + kFixtures +
                        "/two-gen/nocap.cfg --resample 2 -o " + run.string());
  CHECK(r.exit_code == 0);
  CHECK(slurp(run / "manifest.json").find("\"resample\": 2") !=
        std::string::npos);
  CHECK(csv_column(run / "prices.csv", "b0").size() == 2);
  CliResult kpi = run_cli("kpi " + run.string());
  CHECK(kpi.exit_code == 0);
  CHECK(kpi.out.find("annual_demand_mwh,40") != std::string::npos);
}

TEST_CASE("export-lp emits an MPS program") {
  CliResult r = run_cli("export-lp " + kFixtures + "/two-gen " + kFixtures +
                        "/two-gen/nocap.cfg");
  CHECK(r.exit_code == 0);
  for (const char* section : {"ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"}) {
    CHECK(r.out.find(section) != std::string::npos);
  }
  CHECK(r.out.find("cheap") != std::string::npos);
}

TEST_CASE("compare joins runs into one table with verdicts") {
  TempDir tmp;
  fs::path lull = tmp.path / "lull";
  REQUIRE(run_cli("solve " + kFixtures + "/wind-lull " + kFixtures +
                  "/wind-lull/lull.cfg -o " + lull.string())
              .exit_code == 0);
  CliResult r = run_cli("compare " + lull.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("scenario,kind,component,location,expanded\n") == 0);
  CHECK(r.out.find("lull,discharger,h2x,b0,") != std::string::npos);
  CHECK(r.out.find("kind,component,mpi:lull,valuable,threshold_pass,outranks") !=
        std::string::npos);
  // the hydrogen unit is valuable and clears the threshold; the battery not
  CHECK(r.out.find("discharger,h2x") != std::string::npos);
  CHECK(r.out.find("discharger,battx,0,false,false") != std::string::npos);

  CliResult lcos = run_cli("lcos " + lull.string());
  CHECK(lcos.exit_code == 0);
  CHECK(lcos.out.find("h2x,") != std::string::npos);
  // battx never discharges, so the all-tech listing drops it
  CHECK(lcos.out.find("battx") == std::string::npos);
}
