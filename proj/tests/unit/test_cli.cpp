#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "json.hpp"
#include "routed/bounds.hpp"

using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = routed::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("routed_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
  ~ScopedEnv() { ::unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST(Cli, CertifyIdeal) {
  const Result r = run({"certify", "--S", "2.8284271247461903", "--W", "0.3", "--T", "0.3", "--n", "4"});
  EXPECT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["certified"], true);
  EXPECT_EQ(j["bound_name"], "nonlinear");
  EXPECT_NE(r.err.find("LRQ certified"), std::string::npos);
}

TEST(Cli, CertifyBelowThreshold) {
  const Result r = run({"certify", "--S", "2.8284271247461903", "--W", "0.2", "--T", "0.2", "--n", "4"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(Json::parse(r.out)["certified"], false);
}

TEST(Cli, CertifyContinuum) {
  EXPECT_EQ(run({"certify", "--S", "2", "--W", "1", "--T", "1", "--n", "inf"}).code, 0);
  EXPECT_EQ(run({"certify", "--S", "2", "--W", "0.9003163161571061", "--T", "1", "--n", "inf"}).code, 1);
}

TEST(Cli, CertifyInputErrors) {
  EXPECT_EQ(run({"certify", "--S", "3.0", "--W", "0.1", "--T", "0.5", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"certify", "--S", "2.5", "--W", "0.9", "--T", "0.5", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"certify", "--S", "2.5", "--W", "0.1", "--T", "1.5", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"certify", "--S", "2.5", "--W", "0.1", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"certify", "--S", "2.5", "--W", "0.1", "--T", "0.5", "--n", "three"}).code, 2);
  EXPECT_EQ(run({"certify", "--S", "abc", "--W", "0.1", "--T", "0.5"}).code, 2);
  EXPECT_EQ(run({"certify"}).code, 2);
  EXPECT_EQ(run({"certify", "--stats", "/nonexistent/stats.json"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(Cli, HelpExitsZero) {
  const Result r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("certify"), std::string::npos);
}

TEST(Cli, ToleranceFromEnvironment) {
  // Saturating point: margin is exactly zero up to rounding.
  const std::vector<std::string> args{"certify", "--S", "2", "--W", "0.9003163161571061", "--T", "1", "--n", "inf"};
  {
    ScopedEnv env("ROUTED_BELL_TOL", "-1e-6");
    EXPECT_EQ(run(args).code, 2);
  }
  {
    ScopedEnv env("ROUTED_BELL_TOL", "junk");
    EXPECT_EQ(run(args).code, 2);
  }
  const std::vector<std::string> near{"certify", "--S", "2", "--W", "0.90032", "--T", "1", "--n", "inf"};
  EXPECT_EQ(run(near).code, 0);
  {
    ScopedEnv env("ROUTED_BELL_TOL", "1e-3");
    EXPECT_EQ(run(near).code, 1);
  }
}

TEST(Cli, CertifyStatsFileAndOut) {
  TempDir dir;
  write(dir.file("s.json"), R"({"S": 2.8284271247461903, "Wn": 0.3, "Tn": 0.3, "n": 4})");
  const Result r = run({"certify", "--stats", dir.file("s.json"), "--out", dir.file("v.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(Json::parse(slurp(dir.file("v.json")))["certified"], true);
  EXPECT_EQ(run({"certify", "--stats", dir.file("s.json"), "--S", "2.5"}).code, 2);
  write(dir.file("bad.json"), "{\"S\": 2.5");
  EXPECT_EQ(run({"certify", "--stats", dir.file("bad.json")}).code, 2);
}

TEST(Cli, UnwritableOutput) {
  EXPECT_EQ(run({"emit", "vertices", "--n", "3", "--out", "/nonexistent_dir/x.csv"}).code, 2);
}

TEST(Cli, SimulateCertifyRoundTrip) {
  TempDir dir;
  for (const bool table : {false, true}) {
    std::vector<std::string> args{"simulate", "--n", "4", "--eta", "0.5", "--out", dir.file("sim.json")};
    if (table) args.push_back("--table");
    ASSERT_EQ(run(args).code, 0);
    const Result r = run({"certify", "--stats", dir.file("sim.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    const Json v = Json::parse(r.out);
    EXPECT_NEAR(v["S_used"].get<double>(), 2.0 * routed::kSqrt2, 1e-12);
  }
  ASSERT_EQ(run({"simulate", "--n", "4", "--eta", "0.2", "--out", dir.file("low.json")}).code, 0);
  EXPECT_EQ(run({"certify", "--stats", dir.file("low.json")}).code, 1);
}

TEST(Cli, ScanEtaIdeal) {
  const Result r = run({"scan-eta", "--n", "2,3,4,8,16,32", "--eps", "0", "--delta", "0", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j.size(), 6u);
  for (const auto& row : j) {
    EXPECT_NEAR(row["eta_crit_exact"].get<double>(), 1.0 / row["n"].get<int>(), 1e-9);
  }
}

TEST(Cli, ScanEtaCsvAndNoise) {
  const Result r = run({"scan-eta", "--n", "4", "--eps", "0", "--delta", "0.01"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "n,eta_crit_exact,eta_crit_small");
  EXPECT_NE(r.out.find("0.294647389390"), std::string::npos);
  const Result z = run({"scan-eta", "--n", "4", "--zeta", "1e-8", "--format", "json"});
  ASSERT_EQ(z.code, 0);
  EXPECT_NEAR(Json::parse(z.out)[0]["eta_crit_exact"].get<double>(), 0.2513573260746718, 1e-10);
  const Result closed = run({"scan-eta", "--n", "4", "--zeta", "1e-3", "--closed-form", "--format", "json"});
  const Json binned = Json::parse(run({"scan-eta", "--n", "4", "--zeta", "1e-3", "--format", "json"}).out);
  EXPECT_GT(Json::parse(closed.out)[0]["eta_crit_exact"].get<double>(), binned[0]["eta_crit_exact"].get<double>());
}

TEST(Cli, ScanEtaErrors) {
  EXPECT_EQ(run({"scan-eta", "--eps", "0.1", "--zeta", "1e-3"}).code, 2);
  EXPECT_EQ(run({"scan-eta", "--zeta", "1e-3", "--nu", "0.9"}).code, 2);
  EXPECT_EQ(run({"scan-eta", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"scan-eta", "--n", "0"}).code, 2);
  EXPECT_EQ(run({"scan-eta", "--eta-d", "1.5"}).code, 2);
}

TEST(Cli, EmitVertices) {
  const Result r = run({"emit", "vertices", "--n", "4", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["vertices"][4]["W_upper"].get<double>(), 0.6532814824381883, 1e-12);
  EXPECT_EQ(run({"emit", "vertices"}).code, 2);
  EXPECT_EQ(run({"emit", "polygons", "--n", "3"}).code, 2);
}

TEST(Cli, EmitEnvelopeMapNesting) {
  const Result r = run({"emit", "envelope-map", "--grid", "80", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  const auto& c = j["counts"];
  EXPECT_LE(c["simple_suff"].get<long>(), c["linear_suff"].get<long>());
  EXPECT_LE(c["linear_suff"].get<long>(), c["envelope_iff"].get<long>());
  EXPECT_LE(c["envelope_iff"].get<long>(), c["hessian_ok"].get<long>());
  EXPECT_EQ(j["cells"].size(), 6400u);
}

TEST(Cli, EmitOtherTables) {
  const Result lb = run({"emit", "linear-bounds", "--S", "2.5", "--n", "3", "--points", "6"});
  ASSERT_EQ(lb.code, 0);
  EXPECT_EQ(std::count(lb.out.begin(), lb.out.end(), '\n'), 7);
  const Result cb = run({"emit", "continuous-bound", "--points", "3", "--format", "json"});
  ASSERT_EQ(cb.code, 0);
  EXPECT_NEAR(Json::parse(cb.out)[2]["W"].get<double>(), 2.0 / routed::kPi, 1e-15);
}

TEST(Cli, LhvDeterministicReport) {
  const std::vector<std::string> args{"lhv", "planar", "--samples", "50000", "--settings", "3", "--seed", "5"};
  const Result a = run(args);
  const Result b = run(args);
  auto with_threads = args;
  with_threads.insert(with_threads.end(), {"--threads", "2"});
  const Result c = run(with_threads);
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_EQ(Json::parse(a.out)["model"], "planar");
}

TEST(Cli, LhvErrorsAndTooFewSamples) {
  EXPECT_EQ(run({"lhv", "bohm"}).code, 2);
  EXPECT_EQ(run({"lhv", "gisin-gisin", "--samples", "0"}).code, 2);
  EXPECT_EQ(run({"lhv", "gisin-gisin", "--keep", "0"}).code, 2);
  const Result few = run({"lhv", "gisin-gisin", "--samples", "10", "--settings", "2"});
  EXPECT_EQ(few.code, 1);
  EXPECT_EQ(Json::parse(few.out)["insufficient_samples"], true);
  EXPECT_NE(few.err.find("too few samples"), std::string::npos);
}
