#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

using relaybounds_cli::run_cli;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Minimal RFC 4180 reader: quoted fields may contain commas and doubled quotes.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      row.push_back(field);
      field.clear();
    } else if (ch == '\n') {
      row.push_back(field);
      field.clear();
      rows.push_back(row);
      row.clear();
    } else {
      field += ch;
    }
  }
  return rows;
}

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  pclose(p);
  return out;
}

}  // namespace

TEST(Cli, DiamondUnitGains) {
  const auto r = cli({"diamond", "--relays", "1", "--r1", "1", "--r2", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("value_bits=0.5\n"), std::string::npos) << r.out;
}

TEST(Cli, DiamondJsonSchema) {
  const auto r = cli({"diamond", "--relays", "2", "--r1", "3", "--r2", "1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  for (const char* key : {"value_bits", "variant", "minimizer_pairs", "rho", "solver_meta"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j["value_bits"].is_number());
  ASSERT_TRUE(j["minimizer_pairs"].is_array());
  for (const auto& p : j["minimizer_pairs"]) {
    ASSERT_EQ(p.size(), 2u);
    EXPECT_TRUE(p[0].is_number_integer());
  }
  for (const char* key : {"rho1", "rho2", "rho12"}) EXPECT_TRUE(j["rho"][key].is_number());
  for (const char* key : {"grid_step", "refine_tol", "evaluations"}) EXPECT_TRUE(j["solver_meta"].contains(key));
}

TEST(Cli, NatsKey) {
  const auto r = cli({"diamond", "--relays", "1", "--r1", "1", "--r2", "1", "--format", "json", "--log-base", "e"});
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_FALSE(j.contains("value_bits"));
  EXPECT_NEAR(j["value_nats"].get<double>(), 0.5 * std::log(2.0), 1e-6);
}

TEST(Cli, UsageErrorsNameTheFlag) {
  struct Case {
    std::vector<std::string> args;
    std::string flag;
  };
  const std::vector<Case> cases = {
      {{"diamond", "--relays", "1", "--r1", "0", "--r2", "1"}, "--r1"},
      {{"diamond", "--relays", "0", "--r1", "1", "--r2", "1"}, "--relays"},
      {{"diamond", "--relays", "1", "--r1", "1"}, "--r2"},
      {{"diamond", "--relays", "1", "--r1", "1", "--r2", "1", "--grid", "0"}, "--grid"},
      {{"diamond", "--relays", "1", "--r1", "1", "--r2", "1", "--refine", "0.1"}, "--refine"},
      {{"diamond", "--relays", "1", "--r1", "1", "--r2", "1", "--log-base", "10"}, "--log-base"},
      {{"diamond", "--relays", "1", "--r1", "x", "--r2", "1"}, "--r1"},
      {{"layered", "--relays", "1", "--r1", "1", "--r2", "1", "--r3", "-1"}, "--r3"},
      {{"layered", "--relays", "1", "--r1", "1", "--r2", "1", "--r3", "1", "--variant", "v9"}, "--variant"},
      {{"layered", "--relays", "1", "--r1", "1", "--r2", "1", "--r3", "1", "--rho12-mode", "both"}, "--rho12-mode"},
      {{"sweep", "--param", "r3", "--from", "1", "--to", "0.5", "--steps", "3", "--relays", "1", "--r1", "1", "--r2",
        "1"},
       "--from"},
      {{"sweep", "--param", "r3", "--from", "0.1", "--to", "1", "--steps", "1", "--relays", "1", "--r1", "1", "--r2",
        "1"},
       "--steps"},
      {{"sweep", "--param", "r3", "--from", "0.1", "--to", "1", "--steps", "3", "--r1", "1", "--r2", "1"}, "--relays"},
      {{"verify", "--suite", "oracle", "--samples", "0"}, "--samples"},
      {{"verify", "--suite", "nope"}, "--suite"},
  };
  for (const auto& c : cases) {
    const auto r = cli(c.args);
    EXPECT_EQ(r.code, 2) << c.flag;
    EXPECT_NE(r.err.find(c.flag), std::string::npos) << r.err;
  }
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
}

TEST(Cli, HelpExitsZero) {
  const auto r = cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("diamond"), std::string::npos);
}

TEST(Cli, LayeredDefaultAnchor) {
  const auto r = cli({"layered", "--relays", "1", "--r1", "1", "--r2", "1", "--r3", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("value_bits=0.5\n"), std::string::npos) << r.out;
}

TEST(Cli, LayeredMinEqualsSmallestPrintedComponent) {
  const auto r = cli({"layered", "--relays", "2", "--r1", "2", "--r2", "1", "--r3", "3", "--variant", "min",
                      "--grid", "0.01", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json res = json::parse(r.out)["results"][0];
  double lo = HUGE_VAL;
  for (const auto& c : res["components"]) lo = std::min(lo, c["value_bits"].get<double>());
  EXPECT_EQ(res["value_bits"].get<double>(), lo);
}

TEST(Cli, LayeredJointAgreesWithZero) {
  auto value = [](const std::string& mode) {
    const auto r = cli({"layered", "--relays", "2", "--r1", "1", "--r2", "1", "--r3", "1", "--variant", "v1",
                        "--rho12-mode", mode, "--grid", "0.01", "--format", "json"});
    EXPECT_EQ(r.code, 0) << r.err;
    return json::parse(r.out)["results"][0]["value_bits"].get<double>();
  };
  EXPECT_NEAR(value("joint"), value("zero"), 1e-6);
}

TEST(Cli, LayeredOrderingAndNotApplicableMarker) {
  const auto r = cli({"layered", "--relays", "2", "--r1", "1", "--r2", "1", "--r3", "1", "--variant", "min",
                      "--variant", "theorem2", "--grid", "0.01", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j["results"].size(), 2u);
  ASSERT_EQ(j["ordering"].size(), 1u);
  EXPECT_EQ(j["ordering"][0]["relation"], "<=");
  bool marker = false;
  for (const auto& p : j["results"][1]["pairs"]) {
    if (p["pair"][1] == 2) {
      EXPECT_EQ(p["v2"], "n/a");
      marker = true;
    }
  }
  EXPECT_TRUE(marker);

  const auto t = cli({"layered", "--relays", "2", "--r1", "1", "--r2", "1", "--r3", "1", "--variant", "v1,theorem2",
                      "--grid", "0.01"});
  ASSERT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("ordering=lemma2_v1 <= theorem2"), std::string::npos) << t.out;
  EXPECT_NE(t.out.find("n/a"), std::string::npos);

  const auto v2 = cli({"layered", "--relays", "2", "--r1", "1", "--r2", "1", "--r3", "1", "--variant", "v2",
                       "--grid", "0.01"});
  EXPECT_NE(v2.out.find("v2_not_applicable_pairs=1,2;2,2"), std::string::npos) << v2.out;
}

TEST(Cli, SweepLogScaleMonotone) {
  const auto r = cli({"sweep", "--param", "r3", "--from", "0.1", "--to", "10", "--steps", "5", "--scale", "log",
                      "--relays", "1", "--r1", "1", "--r2", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0][0], "r3");
  double prev = -1;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), rows[0].size());
    const double v = std::stod(rows[i][1]);
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_EQ(rows[1][0], "0.1");
  EXPECT_EQ(rows[5][0], "10");
}

TEST(Cli, SweepRelayCountAndQuotedPairs) {
  const auto r = cli({"sweep", "--param", "N", "--from", "1", "--to", "3", "--r1", "1", "--r2", "1", "--r3", "1",
                      "--variant", "nd,v1", "--grid", "0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  const auto& header = rows[0];
  const std::vector<std::string> expected{"N", "nd_bits", "lemma2_v1_bits", "minimizer_pairs", "rho1", "rho2", "rho12"};
  EXPECT_EQ(header, expected);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].size(), header.size());
    // the pair list survives the round trip as one field of n,m items
    std::stringstream ss(rows[i][3]);
    std::string item;
    while (std::getline(ss, item, ';')) EXPECT_NE(item.find(','), std::string::npos);
  }
  EXPECT_EQ(rows[3][0], "3");
}

TEST(Cli, ConfigFileFillsMissingFlagsOnly) {
  const auto path = std::filesystem::temp_directory_path() / "relaybounds_cli_test.cfg";
  {
    std::ofstream f(path);
    f << "# comment\nrelays = 1\nr1=1\nr2 = 1\nformat=json\nlog_base=e\n";
  }
  const auto a = cli({"diamond", "--config", path.string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_TRUE(json::parse(a.out).contains("value_nats"));
  const auto b = cli({"diamond", "--config", path.string(), "--log-base", "2"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_TRUE(json::parse(b.out).contains("value_bits"));
  EXPECT_EQ(cli({"diamond", "--config", "/nonexistent/file"}).code, 2);
  std::filesystem::remove(path);
}

TEST(Cli, VerifyExitCodes) {
  const auto ok = cli({"verify", "--suite", "oracle", "--samples", "100", "--nmax", "3"});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("overall=pass"), std::string::npos);
  const auto bad = cli({"verify", "--suite", "oracle", "--samples", "100", "--nmax", "4", "--mutation",
                        "psi_sign_flip"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("[failures]"), std::string::npos);
  EXPECT_NE(bad.out.find("N="), std::string::npos);
}

TEST(Cli, VerifyJsonReport) {
  const auto r = cli({"verify", "--suite", "eigen", "--samples", "50", "--nmax", "3", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  ASSERT_EQ(j["suites"].size(), 1u);
  EXPECT_EQ(j["suites"][0]["suite"], "eigen");
  EXPECT_FALSE(j["suites"][0].contains("wall_time_s"));
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const std::vector<std::string> args{"layered", "--relays", "2", "--r1", "3", "--r2", "0.5", "--r3", "2", "--variant",
                                      "min,theorem2", "--rho12-mode", "joint", "--grid", "0.02", "--format", "json"};
  EXPECT_EQ(cli(args).out, cli(args).out);
  const std::vector<std::string> v{"verify", "--suite", "maxima", "--samples", "50", "--seed", "7", "--nmax", "3"};
  EXPECT_EQ(cli(v).out, cli(v).out);
}

TEST(Cli, BinaryOutputIsDeterministic) {
  const std::string cmd = std::string(RELAYBOUNDS_CLI_PATH) +
                          " verify --suite oracle --samples 200 --seed 9 --nmax 4 --format json 2>&1";
  const std::string a = capture(cmd);
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, capture(cmd));
}
