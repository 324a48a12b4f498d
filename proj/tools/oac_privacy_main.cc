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

// Command-line front end.
//
//   oac_privacy account sweep --config <path> [--rates r1,r2,...] --out <csv>
//   oac_privacy simulate --config <path> --out <csv>
//   oac_privacy rdp eval --rate <s> --noise <m> --alpha <a>
//
// Exit status: 0 on success, 1 for usage or configuration errors, 2 when a
// computation rejects its inputs.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "oac_privacy/accountant.h"
#include "oac_privacy/csv_output.h"
#include "oac_privacy/run_config.h"
#include "oac_privacy/simulator.h"
#include "oac_privacy/subsampled_gaussian.h"

namespace oac_privacy {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDomain = 2;

int Report(const absl::Status& status, int code) {
  std::cerr << "error: " << status.message() << "\n";
  return code;
}

std::string SidecarPath(const std::string& out) { return out + ".meta.json"; }

// Writes the CSV and its metadata sidecar, or neither.
absl::Status WriteOutputs(const std::string& out, const std::string& csv,
                          const nlohmann::ordered_json& meta) {
  if (absl::Status s = WriteFileAtomically(out, csv); !s.ok()) return s;
  if (absl::Status s = WriteFileAtomically(SidecarPath(out), meta.dump(2) + "\n");
      !s.ok()) {
    std::error_code ignored;
    std::filesystem::remove(out, ignored);
    return s;
  }
  return absl::OkStatus();
}

std::optional<std::string> ResolveOutput(const std::string& flag,
                                         const RunConfigFile& config) {
  if (!flag.empty()) return flag;
  if (config.output_path) return *config.output_path;
  return std::nullopt;
}

int AccountSweep(const std::string& config_path,
                 const std::vector<double>& rate_flags,
                 const std::string& out_flag) {
  absl::StatusOr<RunConfigFile> config = LoadRunConfig(config_path);
  if (!config.ok()) return Report(config.status(), kExitConfig);
  if (!config->accountant) {
    return Report(absl::InvalidArgumentError(
                      "config has no accountant block"),
                  kExitConfig);
  }
  std::optional<std::string> out = ResolveOutput(out_flag, *config);
  if (!out) {
    return Report(absl::InvalidArgumentError("no output path given"),
                  kExitConfig);
  }
  std::vector<double> rates = rate_flags;
  if (rates.empty()) {
    rates.assign(std::begin(kDefaultSweepRates), std::end(kDefaultSweepRates));
  }
  for (double r : rates) {
    if (!(r >= 0 && r <= 1)) {
      return Report(absl::InvalidArgumentError(absl::StrFormat(
                        "sampling rate %g is outside [0, 1]", r)),
                    kExitConfig);
    }
  }
  const std::set<double> unique_rates(rates.begin(), rates.end());

  std::vector<PrivacyCurve> curves;
  for (double rate : unique_rates) {
    AccountantConfig ac = *config->accountant;
    ac.sampling_rate = rate;
    absl::StatusOr<PrivacyCurve> rdp = Sweep(ac);
    if (!rdp.ok()) return Report(rdp.status(), kExitDomain);
    curves.push_back(*std::move(rdp));
    if (rate == 1) {
      absl::StatusOr<PrivacyCurve> act = AdvancedCompositionSweep(ac);
      if (!act.ok()) return Report(act.status(), kExitDomain);
      curves.push_back(*std::move(act));
    }
  }

  nlohmann::ordered_json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["command"] = "account sweep";
  meta["accountant"] = AccountantConfigToJson(*config->accountant);
  meta["accountant"].erase("sampling_rate");
  meta["sampling_rates"] = std::vector<double>(unique_rates.begin(),
                                               unique_rates.end());
  const double delta = config->accountant->delta;
  const double slack = config->accountant->act_slack_fraction;
  meta["act_delta_split"] = {
      {"delta_slack", delta * slack},
      {"delta_per_step", "(delta - delta_slack) / t"},
  };
  if (absl::Status s = WriteOutputs(*out, SweepCsv(curves), meta); !s.ok()) {
    return Report(s, kExitConfig);
  }
  return kExitOk;
}

int Simulate(const std::string& config_path, const std::string& out_flag) {
  absl::StatusOr<RunConfigFile> config = LoadRunConfig(config_path);
  if (!config.ok()) return Report(config.status(), kExitConfig);
  if (!config->system || !config->task || !config->accounting) {
    return Report(absl::InvalidArgumentError(
                      "simulate needs system, task and accounting blocks"),
                  kExitConfig);
  }
  std::optional<std::string> out = ResolveOutput(out_flag, *config);
  if (!out) {
    return Report(absl::InvalidArgumentError("no output path given"),
                  kExitConfig);
  }
  absl::StatusOr<Trajectory> trajectory =
      RunSimulation(*config->system, *config->task, *config->accounting);
  if (!trajectory.ok()) return Report(trajectory.status(), kExitDomain);

  nlohmann::ordered_json meta;
  meta["command"] = "simulate";
  meta["config"] = RunConfigToJson(*config);
  meta["accounting_mode"] =
      std::string(AccountingModeName(config->accounting->mode));
  meta["sampling_rate"] = config->system->SamplingRate();
  meta["initial_loss"] = trajectory->initial_loss;
  meta["final_loss"] = trajectory->rows.back().loss;
  if (absl::Status s = WriteOutputs(
          *out, TrajectoryCsv(*trajectory, config->system->seed), meta);
      !s.ok()) {
    return Report(s, kExitConfig);
  }
  return kExitOk;
}

int RdpEval(double rate, double noise, double alpha_value) {
  if (alpha_value != std::floor(alpha_value) || alpha_value < 2 ||
      alpha_value > std::numeric_limits<int>::max()) {
    return Report(absl::InvalidArgumentError(absl::StrFormat(
                      "alpha must be an integer >= 2, got %g", alpha_value)),
                  kExitDomain);
  }
  const int alpha = static_cast<int>(alpha_value);
  const SampledGmSpec spec{rate, noise};
  absl::StatusOr<double> eps = SampledGaussianRdpNumeric(spec, alpha);
  if (!eps.ok()) return Report(eps.status(), kExitDomain);

  nlohmann::ordered_json j;
  j["sampling_rate"] = rate;
  j["noise_multiplier"] = noise;
  j["alpha"] = alpha;
  j["epsilon"] = *eps;
  j["conditions"] = nullptr;
  j["bound"] = nullptr;
  if (rate > 0) {
    absl::StatusOr<BoundConditions> c =
        SampledGaussianBoundConditions(spec, alpha);
    if (!c.ok()) return Report(c.status(), kExitDomain);
    j["conditions"] = {{"rate_ok", c->rate_ok},
                       {"noise_ok", c->noise_ok},
                       {"alpha_bound_ok", c->alpha_bound_ok},
                       {"alpha_ratio_bound_ok", c->alpha_ratio_bound_ok}};
    if (c->AllHold()) {
      absl::StatusOr<double> bound = SampledGaussianRdpBound(spec, alpha);
      if (!bound.ok()) return Report(bound.status(), kExitDomain);
      j["bound"] = *bound;
    }
  }
  std::cout << j.dump() << "\n";
  return kExitOk;
}

}  // namespace
}  // namespace oac_privacy

int main(int argc, char** argv) {
  using namespace oac_privacy;
  CLI::App app{"Privacy accounting and over-the-air federated learning "
               "simulation"};
  app.require_subcommand(1);

  CLI::App* account = app.add_subcommand("account", "Privacy accounting");
  account->require_subcommand(1);
  CLI::App* sweep = account->add_subcommand(
      "sweep", "Composite epsilon over iterations for several sampling rates");
  std::string sweep_config, sweep_out;
  std::vector<double> rates;
  sweep->add_option("--config", sweep_config, "Run config (JSON)")
      ->required();
  sweep->add_option("--rates", rates, "Comma-separated sampling rates")
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "Output CSV path");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run the federated learning simulation");
  std::string sim_config, sim_out;
  simulate->add_option("--config", sim_config, "Run config (JSON)")
      ->required();
  simulate->add_option("--out", sim_out, "Output CSV path");

  CLI::App* rdp = app.add_subcommand("rdp", "Renyi DP evaluation");
  rdp->require_subcommand(1);
  CLI::App* eval = rdp->add_subcommand(
      "eval", "RDP of the subsampled Gaussian mechanism at one order");
  double rate = 0, noise = 0, alpha = 0;
  eval->add_option("--rate", rate, "Sampling rate")->required();
  eval->add_option("--noise", noise, "Noise multiplier")->required();
  eval->add_option("--alpha", alpha, "Integer Renyi order >= 2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*sweep) return AccountSweep(sweep_config, rates, sweep_out);
  if (*simulate) return Simulate(sim_config, sim_out);
  if (*eval) return RdpEval(rate, noise, alpha);
  return kExitConfig;
}
