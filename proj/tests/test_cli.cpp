#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

struct Out {
  int code;
  std::string out, err;
};

Out call(std::vector<std::string> args) {
  std::ostringstream o, e;
  int c = sgg::cli::run(args, o, e);
  return {c, o.str(), e.str()};
}

std::string temp_path(const char* stem) { return testing::TempDir() + stem; }

}  // namespace

TEST(Cli, CountOnly) {
  auto r = call({"words", "pauli_t", "--tcount", "2", "--count-only"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "48\n");
  EXPECT_EQ(call({"words", "--gateset", "pauli_t", "--tcount", "0", "--count-only"}).out, "4\n");
}

TEST(Cli, DiagonalAtZeroIsIdentity) {
  auto r = call({"synth", "diag", "pauli_t", "--theta", "0", "--eps", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["tcount"], 0);
  EXPECT_EQ(j["word"], nlohmann::json::array({"c0"}));
}

TEST(Cli, DiagonalMeetsEps) {
  auto r = call({"synth", "diag", "clifford_t", "--theta", "0.3", "--eps", "0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(nlohmann::json::parse(r.out)["distance"].get<double>(), 0.01);
}

TEST(Cli, DigraphHeader) {
  auto r = call({"digraph", "pauli_t", "--modulus", "11"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "PSL 3 660\n");
}

TEST(Cli, DigraphSpectrumFile) {
  std::string path = temp_path("spec.csv");
  auto r = call({"digraph", "pauli_t", "--modulus", "5", "--spectrum", path});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header, summary;
  std::getline(lines, header);
  std::getline(lines, summary);
  EXPECT_EQ(header, "PGL 3 120");
  auto j = nlohmann::json::parse(summary);
  EXPECT_TRUE(j["ramanujan"].get<bool>());
  EXPECT_TRUE(j["minus_k"].get<bool>());
  std::ifstream in(path);
  int n = 0;
  for (std::string l; std::getline(in, l);) ++n;
  EXPECT_EQ(n, 120);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(call({}).code, sgg::cli::kUsage);
  EXPECT_EQ(call({"bogus"}).code, sgg::cli::kUsage);
  EXPECT_EQ(call({"words", "pauli_t"}).code, sgg::cli::kUsage);
  EXPECT_EQ(call({"words", "no_such_set", "--tcount", "1"}).code, sgg::cli::kUsage);
  EXPECT_EQ(call({"synth", "exact", "pauli_t", "--quaternion", "garbage"}).code, sgg::cli::kUsage);
  EXPECT_EQ(call({"synth", "general", "pauli_t", "--matrix", "1 0 0", "--eps", "0.1"}).code, sgg::cli::kUsage);
  EXPECT_EQ(call({"catalog", "--format", "csv"}).code, sgg::cli::kUsage);
  EXPECT_EQ(call({"--help"}).code, sgg::cli::kOk);
  // not a member of the Lipschitz order
  EXPECT_EQ(call({"synth", "exact", "pauli_t", "--quaternion", "1,1,1,1/2@Z"}).code, sgg::cli::kDomain);
  EXPECT_EQ(call({"synth", "diag", "pauli_t", "--theta", "1", "--eps", "1e-9", "--max-tcount", "3"}).code,
            sgg::cli::kDomain);
  EXPECT_EQ(call({"digraph", "v_gates", "--modulus", "7"}).code, sgg::cli::kDomain);
  EXPECT_EQ(call({"validate", "nonexample_3"}).code, sgg::cli::kDomain);
  EXPECT_EQ(call({"validate", "pauli_t"}).code, sgg::cli::kOk);
  EXPECT_EQ(call({"selftest", "--only", "99"}).code, sgg::cli::kOk);
}

TEST(Cli, WordsRoundTripThroughExact) {
  std::string path = temp_path("words.json");
  ASSERT_EQ(call({"words", "clifford_t", "--tcount", "1", "--out", path}).code, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto r = call({"synth", "exact", "clifford_t", "--word-file", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, ss.str());
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["count"].get<std::size_t>(), j["words"].size());
}

TEST(Cli, ExactFromQuaternion) {
  auto r = call({"synth", "exact", "pauli_t", "--quaternion", "1,1,1,0/1@Z"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["tcount"], 1);
}

TEST(Cli, SeedDeterminism) {
  std::vector<std::string> a{"--seed", "9", "cover", "pauli_t", "--tcount", "3", "--samples", "500"};
  auto r1 = call(a), r2 = call(a);
  ASSERT_EQ(r1.code, 0) << r1.err;
  EXPECT_EQ(r1.out, r2.out);
  auto r3 = call({"--seed", "10", "cover", "pauli_t", "--tcount", "3", "--samples", "500"});
  EXPECT_NE(r1.out, r3.out);
  // options after the subcommand reach the top level too
  EXPECT_EQ(call({"cover", "pauli_t", "--tcount", "3", "--samples", "500", "--seed", "9"}).out, r1.out);
}

TEST(Cli, CatalogRoundTrips) {
  auto r = call({"catalog"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["gatesets"].size(), 11u);
  auto one = nlohmann::json::parse(call({"catalog", "icosa60"}).out);
  ASSERT_EQ(one["gatesets"].size(), 1u);
  EXPECT_EQ(one["gatesets"][0]["name"], "icosa60");
}

TEST(Cli, CsvFormat) {
  auto r = call({"--format", "csv", "words", "pauli_t", "--tcount", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 16);
  EXPECT_EQ(r.out.rfind("pauli_t,1,", 0), 0u);
}
