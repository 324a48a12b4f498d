// Copyright 2026 The OAC Privacy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the built command-line tool as a subprocess.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace oac_privacy {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;

struct Result {
  int exit_code = -1;
  std::string out;
};

Result Invoke(const std::string& args) {
  const std::string cmd =
      std::string(OAC_PRIVACY_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> ReadCsv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(ReadFile(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("oac_cli_" + std::string(::testing::UnitTest::GetInstance()
                                         ->current_test_info()
                                         ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& contents) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << contents;
    return p.string();
  }

  std::string Path(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
};

constexpr char kSweepConfig[] = R"({
  "schema_version": 1,
  "accountant": {"noise_multiplier": 1.0, "delta": 1e-5, "t_max": 1000}
})";

std::string SimConfig(double k, int rounds = 40) {
  return R"({
  "schema_version": 1,
  "system": {
    "n_devices": 10, "participation_prob": 0.5, "batch_prob": 0.2,
    "clip_norm": 1.0, "device_noise_std": 0.1, "channel_noise_var": 0.001,
    "learning_rate": 0.1, "rounds": )" +
         std::to_string(rounds) + R"(, "csi_factor": )" + std::to_string(k) +
         R"(, "seed": 5
  },
  "task": {"kind": "linear_regression", "dimension": 4,
           "samples_per_device": 20},
  "accounting": {"mode": "realized", "delta": 1e-5}
})";
}

TEST_F(CliTest, RdpEvalUnsampled) {
  Result r = Invoke("rdp eval --rate 1 --noise 1 --alpha 2");
  ASSERT_EQ(r.exit_code, 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["epsilon"].get<double>(), 1.0);
  EXPECT_FALSE(j["conditions"]["noise_ok"].get<bool>());
  EXPECT_TRUE(j["bound"].is_null());
}

TEST_F(CliTest, RdpEvalWithValidBound) {
  Result r = Invoke("rdp eval --rate 0.01 --noise 4 --alpha 2");
  ASSERT_EQ(r.exit_code, 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  for (const char* key :
       {"rate_ok", "noise_ok", "alpha_bound_ok", "alpha_ratio_bound_ok"}) {
    EXPECT_TRUE(j["conditions"][key].get<bool>()) << key;
  }
  EXPECT_DOUBLE_EQ(j["bound"].get<double>(), 2.5e-5);
  EXPECT_LE(j["epsilon"].get<double>(), 2.5e-5);
}

TEST_F(CliTest, RdpEvalZeroRateHasNoConditions) {
  Result r = Invoke("rdp eval --rate 0 --noise 1 --alpha 5");
  ASSERT_EQ(r.exit_code, 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["epsilon"].get<double>(), 0.0);
  EXPECT_TRUE(j["conditions"].is_null());
}

TEST_F(CliTest, RdpEvalDomainErrors) {
  EXPECT_EQ(Invoke("rdp eval --rate 1 --noise 1 --alpha 1").exit_code, 2);
  EXPECT_EQ(Invoke("rdp eval --rate 1 --noise 1 --alpha 2.5").exit_code, 2);
  EXPECT_EQ(Invoke("rdp eval --rate 1.5 --noise 1 --alpha 2").exit_code, 2);
  EXPECT_EQ(Invoke("rdp eval --rate 0.5 --noise 0 --alpha 2").exit_code, 2);
  EXPECT_EQ(Invoke("rdp eval --rate 1 --noise 1").exit_code, 1);
  EXPECT_EQ(Invoke("").exit_code, 1);
}

TEST_F(CliTest, SweepRowCounts) {
  const std::string config = Write("sweep.json", kSweepConfig);
  const std::string out = Path("sweep.csv");
  ASSERT_EQ(Invoke("account sweep --config " + config +
                   " --rates 1,0.5,0.1,0.05,0.01 --out " + out)
                .exit_code,
            0);
  auto rows = ReadCsv(out);
  ASSERT_EQ(rows.size(), 1u + 5 * 1000 + 1000);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"sampling_rate", "t",
                                                "alpha_star", "epsilon",
                                                "delta", "noise_multiplier",
                                                "method"}));
  int act = 0;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][6] == "act") {
      ++act;
      EXPECT_EQ(rows[i][0], "1");
    }
  }
  EXPECT_EQ(act, 1000);
  nlohmann::json meta = nlohmann::json::parse(ReadFile(out + ".meta.json"));
  EXPECT_DOUBLE_EQ(meta["act_delta_split"]["delta_slack"].get<double>(),
                   5e-6);
}

TEST_F(CliTest, SweepZeroRateIsConstantFloor) {
  const std::string config = Write("sweep.json", kSweepConfig);
  const std::string out = Path("zero.csv");
  ASSERT_EQ(
      Invoke("account sweep --config " + config + " --rates 0 --out " + out)
          .exit_code,
      0);
  auto rows = ReadCsv(out);
  ASSERT_EQ(rows.size(), 1001u);
  std::set<std::string> eps;
  for (size_t i = 1; i < rows.size(); ++i) eps.insert(rows[i][3]);
  ASSERT_EQ(eps.size(), 1u);
  EXPECT_DOUBLE_EQ(std::stod(*eps.begin()), std::log(1e5) / 63);
}

TEST_F(CliTest, SweepMalformedConfigWritesNothing) {
  const std::string out = Path("bad.csv");
  const std::string bad = Write("bad.json", R"({"schema_version": 1,
      "accountant": {"noise_multiplier": 1, "delta": 1e-5, "t_max": 10,
      "bogus": true}})");
  EXPECT_EQ(Invoke("account sweep --config " + bad + " --out " + out).exit_code,
            1);
  EXPECT_FALSE(fs::exists(out));
  const std::string garbage = Write("garbage.json", "{not json");
  EXPECT_EQ(
      Invoke("account sweep --config " + garbage + " --out " + out).exit_code,
      1);
  EXPECT_EQ(Invoke("account sweep --config " + Path("missing.json") +
                   " --out " + out)
                .exit_code,
            1);
  const std::string config = Write("sweep.json", kSweepConfig);
  EXPECT_EQ(Invoke("account sweep --config " + config + " --rates 2 --out " +
                   out)
                .exit_code,
            1);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_FALSE(fs::exists(out + ".meta.json"));
}

TEST_F(CliTest, SweepIsByteIdentical) {
  const std::string config = Write("sweep.json", kSweepConfig);
  ASSERT_EQ(Invoke("account sweep --config " + config + " --out " +
                   Path("a.csv"))
                .exit_code,
            0);
  ASSERT_EQ(Invoke("account sweep --config " + config + " --out " +
                   Path("b.csv"))
                .exit_code,
            0);
  EXPECT_EQ(ReadFile(Path("a.csv")), ReadFile(Path("b.csv")));
}

TEST_F(CliTest, SimulateDeterministicWithSidecar) {
  const std::string config = Write("sim.json", SimConfig(1.0));
  ASSERT_EQ(Invoke("simulate --config " + config + " --out " + Path("a.csv"))
                .exit_code,
            0);
  ASSERT_EQ(Invoke("simulate --config " + config + " --out " + Path("b.csv"))
                .exit_code,
            0);
  EXPECT_EQ(ReadFile(Path("a.csv")), ReadFile(Path("b.csv")));
  EXPECT_EQ(ReadFile(Path("a.csv.meta.json")),
            ReadFile(Path("b.csv.meta.json")));
  auto rows = ReadCsv(Path("a.csv"));
  ASSERT_EQ(rows.size(), 41u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"round", "loss", "epsilon",
                                                "delta", "a_t", "b_t",
                                                "seed"}));
  EXPECT_EQ(rows[1][6], "5");
  nlohmann::json meta =
      nlohmann::json::parse(ReadFile(Path("a.csv.meta.json")));
  EXPECT_EQ(meta["accounting_mode"], "realized");
  EXPECT_EQ(meta["config"]["system"]["rounds"], 40);
}

TEST_F(CliTest, SimulateEpsilonIgnoresCsiFactor) {
  std::vector<std::vector<std::string>> reference;
  for (double k : {1.0, 0.5, 0.1}) {
    const std::string config = Write("sim.json", SimConfig(k));
    const std::string out = Path("k.csv");
    ASSERT_EQ(Invoke("simulate --config " + config + " --out " + out).exit_code,
              0);
    std::vector<std::vector<std::string>> eps;
    for (const auto& row : ReadCsv(out)) eps.push_back({row[2]});
    if (reference.empty()) {
      reference = eps;
    } else {
      EXPECT_EQ(eps, reference) << "k=" << k;
    }
  }
}

TEST_F(CliTest, SimulateRejectsZeroRounds) {
  const std::string config = Write("sim.json", SimConfig(1.0, 0));
  EXPECT_EQ(Invoke("simulate --config " + config + " --out " + Path("z.csv"))
                .exit_code,
            1);
  EXPECT_FALSE(fs::exists(Path("z.csv")));
  const std::string sweep_only = Write("sweep.json", kSweepConfig);
  EXPECT_EQ(
      Invoke("simulate --config " + sweep_only + " --out " + Path("z.csv"))
          .exit_code,
      1);
}

TEST_F(CliTest, OutputPathFromConfig) {
  const std::string out = Path("from_config.csv");
  const std::string config = Write(
      "sweep.json", R"({"schema_version": 1, "output_path": ")" + out +
                        R"(", "accountant": {"noise_multiplier": 1.0,
                        "delta": 1e-5, "t_max": 3}})");
  ASSERT_EQ(Invoke("account sweep --config " + config + " --rates 0.5")
                .exit_code,
            0);
  EXPECT_EQ(ReadCsv(out).size(), 4u);
  const std::string no_out = Write("no_out.json", kSweepConfig);
  EXPECT_EQ(Invoke("account sweep --config " + no_out).exit_code, 1);
}

}  // namespace
}  // namespace oac_privacy
