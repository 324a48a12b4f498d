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

// Simulation of differentially private federated learning over a wireless
// multiple access channel with over-the-air aggregation.
//
// Each round:
//   1. every device joins independently with probability p, and every
//      participant puts each local sample in its batch with probability q;
//   2. participant i transmits
//        x_i = h_i * (sum_{j in B_i} clip(grad_j) / b_t + n_i / sqrt(a_t)),
//      with n_i ~ N(0, sigma^2 I) and precoder h_i = 1 / (k c_i), where c_i
//      is the true channel gain and k in (0, 1] is the factor by which the
//      server's pilots distort the gain the device estimates;
//   3. the server receives y = sum_i c_i x_i + z, z ~ N(0, N0 I), and steps
//      w <- w - eta y.
//
// Scaling the gradients by the total batch size b_t keeps the received
// power independent of which devices, and how many, transmitted. Splitting
// the noise as sigma / sqrt(a_t) keeps the aggregate noise variance at
// sigma^2 for every a_t >= 1.
//
// a_t and b_t are shared among devices but not observed by the server.

#ifndef OAC_PRIVACY_SIMULATOR_H_
#define OAC_PRIVACY_SIMULATOR_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "oac_privacy/accountant.h"
#include "oac_privacy/privacy_core.h"
#include "oac_privacy/rng.h"

namespace oac_privacy {

enum class ChannelGainModel { kConstant, kLogNormal };

struct SystemConfig {
  int n_devices = 20;
  double participation_prob = 0.5;  // p
  double batch_prob = 0.2;          // q
  double clip_norm = 1;             // L
  double device_noise_std = 1;      // sigma
  double channel_noise_var = 0;     // N0
  double learning_rate = 0.1;       // eta
  int rounds = 100;                 // T
  double csi_factor = 1;            // k
  uint64_t seed = 0;
  ChannelGainModel gain_model = ChannelGainModel::kConstant;
  // Standard deviation of ln(c) under kLogNormal; ln(c) has mean 0.
  double gain_log_std = 0.5;

  // Probability that a given data point enters a round: p * q.
  double SamplingRate() const { return participation_prob * batch_prob; }
};

absl::Status ValidateSystemConfig(const SystemConfig& config);

struct Sample {
  std::vector<double> features;
  double label = 0;
};

struct DeviceState {
  int device_id = 0;
  std::vector<Sample> dataset;
  double channel_gain = 1;  // true gain c_{i,t} of the current round
};

struct RoundDraw {
  int round = 0;
  std::vector<int> participants;            // sorted device ids
  std::map<int, std::vector<int>> batches;  // participant -> sample indices
  int a = 0;                                // |participants|
  int b_total = 0;                          // total batch size

  int BatchSize(int device_id) const;
};

struct ModelState {
  std::vector<double> weights;
  int round = 0;
};

// What one participant puts on the air, with the pre-precoding components
// kept for inspection.
struct TransmitSignal {
  int device_id = 0;
  std::vector<double> value;          // precoder * (gradient + noise parts)
  std::vector<double> gradient_part;  // sum of clipped gradients / b_t
  std::vector<double> noise_part;     // n_i / sqrt(a_t)
  double precoder = 1;                // 1 / (k c)
};

// The server observes only `value`. The remaining fields exist for tests.
struct ReceivedSignal {
  std::vector<double> value;
  std::vector<double> signal_part;         // f[t]
  std::vector<double> device_noise_part;   // n[t]
  std::vector<double> channel_noise_part;  // z[t]
};

using PerSampleGradient =
    std::function<std::vector<double>(std::span<const double>, const Sample&)>;

absl::StatusOr<RoundDraw> DrawRound(const SystemConfig& config,
                                    std::span<const DeviceState> devices,
                                    int round, const RngStreams& streams);

// True gain of `device_id` in `round`.
double DrawChannelGain(const SystemConfig& config, int round, int device_id,
                       const RngStreams& streams);

// Rescales `grad` to norm `clip_norm` when its norm exceeds it. Requires
// clip_norm > 0.
std::vector<double> ClipGradient(std::span<const double> grad,
                                 double clip_norm);

// Per-coordinate standard deviation of one device's injected noise when
// `participants` devices transmit.
double PerDeviceNoiseStd(double device_noise_std, int participants);

absl::StatusOr<TransmitSignal> DeviceSignal(const RoundDraw& round,
                                            const DeviceState& device,
                                            const ModelState& model,
                                            const SystemConfig& config,
                                            const PerSampleGradient& gradient,
                                            const RngStreams& streams);

// Superposes the transmissions weighted by their true gains and adds channel
// noise drawn for `round`. Signals are summed in device id order.
absl::StatusOr<ReceivedSignal> Aggregate(std::span<const TransmitSignal> signals,
                                         std::span<const double> channel_gains,
                                         int dimension, int round,
                                         const SystemConfig& config,
                                         const RngStreams& streams);

absl::StatusOr<ModelState> PsUpdate(const ModelState& model,
                                    const ReceivedSignal& received,
                                    double eta);

// L2 sensitivity of the averaged clipped gradient: 2 L / b_t.
absl::StatusOr<double> Sensitivity(double clip_norm, int b_total);

// Synthetic linear regression with squared loss 1/2 (w.x - y)^2 on Gaussian
// features, y = w*.x + noise.
struct LinearRegressionTask {
  int dimension = 10;
  int samples_per_device = 50;
  double feature_std = 1;
  double label_noise_std = 0.1;
};

absl::Status ValidateLinearRegressionTask(const LinearRegressionTask& task);

struct SyntheticProblem {
  std::vector<DeviceState> devices;
  std::vector<double> true_weights;
};

SyntheticProblem GenerateProblem(const SystemConfig& config,
                                 const LinearRegressionTask& task,
                                 const RngStreams& streams);

std::vector<double> LinearRegressionGradient(std::span<const double> weights,
                                             const Sample& sample);

// (1/N) sum_i mean_{d in D_i} 1/2 (w.x_d - y_d)^2.
double GlobalLoss(std::span<const DeviceState> devices,
                  std::span<const double> weights);

// kNominal accounts every round with the fixed configured noise multiplier.
// kRealized uses sigma * b_t / (2L) of each round and composes the
// resulting heterogeneous curves; rounds with b_t = 0 cost nothing.
enum class AccountingMode { kNominal, kRealized };

std::string_view AccountingModeName(AccountingMode mode);

struct AccountingOptions {
  AccountingMode mode = AccountingMode::kNominal;
  double noise_multiplier = 1;  // kNominal only
  double delta = 1e-5;
  int alpha_min = kDefaultAlphaMin;
  int alpha_max = kDefaultAlphaMax;
};

absl::Status ValidateAccountingOptions(const AccountingOptions& options);

struct TrajectoryRow {
  int round = 0;
  double loss = 0;
  DpBudget budget;
  int alpha_star = 0;
  int a = 0;
  int b = 0;

  friend bool operator==(const TrajectoryRow&, const TrajectoryRow&) = default;
};

struct Trajectory {
  double initial_loss = 0;
  std::vector<TrajectoryRow> rows;
  std::vector<double> final_weights;
};

absl::StatusOr<Trajectory> RunSimulation(const SystemConfig& config,
                                         const LinearRegressionTask& task,
                                         const AccountingOptions& accounting);

}  // namespace oac_privacy

#endif  // OAC_PRIVACY_SIMULATOR_H_
