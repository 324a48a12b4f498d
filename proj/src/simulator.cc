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

#include "oac_privacy/simulator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

#include "absl/strings/str_format.h"

namespace oac_privacy {
namespace {

double Norm(std::span<const double> v) {
  double sq = 0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

absl::Status CheckProbability(const char* name, double value) {
  if (!(value > 0 && value <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s must lie in (0, 1], got %g", name, value));
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidateSystemConfig(const SystemConfig& config) {
  if (config.n_devices < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("n_devices must be >= 1, got %d", config.n_devices));
  }
  if (absl::Status s =
          CheckProbability("participation_prob", config.participation_prob);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckProbability("batch_prob", config.batch_prob);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckProbability("csi_factor", config.csi_factor);
      !s.ok()) {
    return s;
  }
  if (!(config.clip_norm > 0) || !std::isfinite(config.clip_norm)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "clip_norm must be finite and > 0, got %g", config.clip_norm));
  }
  if (!(config.device_noise_std >= 0) ||
      !std::isfinite(config.device_noise_std)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("device_noise_std must be finite and >= 0, got %g",
                        config.device_noise_std));
  }
  if (!(config.channel_noise_var >= 0) ||
      !std::isfinite(config.channel_noise_var)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("channel_noise_var must be finite and >= 0, got %g",
                        config.channel_noise_var));
  }
  if (!(config.learning_rate > 0) || !std::isfinite(config.learning_rate)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "learning_rate must be finite and > 0, got %g", config.learning_rate));
  }
  if (config.rounds < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("rounds must be >= 1, got %d", config.rounds));
  }
  if (config.gain_model == ChannelGainModel::kLogNormal &&
      !(config.gain_log_std >= 0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "gain_log_std must be >= 0, got %g", config.gain_log_std));
  }
  return absl::OkStatus();
}

int RoundDraw::BatchSize(int device_id) const {
  auto it = batches.find(device_id);
  return it == batches.end() ? 0 : static_cast<int>(it->second.size());
}

absl::StatusOr<RoundDraw> DrawRound(const SystemConfig& config,
                                    std::span<const DeviceState> devices,
                                    int round, const RngStreams& streams) {
  if (absl::Status s = ValidateSystemConfig(config); !s.ok()) return s;
  RoundDraw draw;
  draw.round = round;
  for (const DeviceState& device : devices) {
    std::mt19937_64 join_rng =
        streams.Stream(StreamPurpose::kParticipation, round, device.device_id);
    if (!std::bernoulli_distribution(config.participation_prob)(join_rng)) {
      continue;
    }
    std::mt19937_64 batch_rng =
        streams.Stream(StreamPurpose::kBatching, round, device.device_id);
    std::bernoulli_distribution take(config.batch_prob);
    std::vector<int> batch;
    for (int j = 0; j < static_cast<int>(device.dataset.size()); ++j) {
      if (take(batch_rng)) batch.push_back(j);
    }
    draw.b_total += static_cast<int>(batch.size());
    draw.participants.push_back(device.device_id);
    if (!draw.batches.emplace(device.device_id, std::move(batch)).second) {
      return absl::InvalidArgumentError(
          absl::StrFormat("duplicate device id %d", device.device_id));
    }
  }
  std::sort(draw.participants.begin(), draw.participants.end());
  draw.a = static_cast<int>(draw.participants.size());
  return draw;
}

double DrawChannelGain(const SystemConfig& config, int round, int device_id,
                       const RngStreams& streams) {
  switch (config.gain_model) {
    case ChannelGainModel::kConstant:
      return 1.0;
    case ChannelGainModel::kLogNormal: {
      std::mt19937_64 rng =
          streams.Stream(StreamPurpose::kChannelGain, round, device_id);
      return std::lognormal_distribution<double>(0.0,
                                                 config.gain_log_std)(rng);
    }
  }
  return 1.0;
}

std::vector<double> ClipGradient(std::span<const double> grad,
                                 double clip_norm) {
  std::vector<double> out(grad.begin(), grad.end());
  const double norm = Norm(grad);
  if (norm > clip_norm) {
    const double scale = clip_norm / norm;
    for (double& x : out) x *= scale;
  }
  return out;
}

double PerDeviceNoiseStd(double device_noise_std, int participants) {
  return device_noise_std / std::sqrt(static_cast<double>(participants));
}

absl::StatusOr<TransmitSignal> DeviceSignal(const RoundDraw& round,
                                            const DeviceState& device,
                                            const ModelState& model,
                                            const SystemConfig& config,
                                            const PerSampleGradient& gradient,
                                            const RngStreams& streams) {
  auto batch_it = round.batches.find(device.device_id);
  if (batch_it == round.batches.end() ||
      !std::binary_search(round.participants.begin(),
                          round.participants.end(), device.device_id)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "device %d does not participate in round %d", device.device_id,
        round.round));
  }
  if (round.a < 1) {
    return absl::FailedPreconditionError("round has no participants");
  }
  const std::vector<int>& batch = batch_it->second;
  if (round.b_total == 0 && !batch.empty()) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "device %d has %d batch samples but the round total is 0",
        device.device_id, static_cast<int>(batch.size())));
  }
  if (!(device.channel_gain > 0)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "device %d has non-positive channel gain %g", device.device_id,
        device.channel_gain));
  }

  const size_t dim = model.weights.size();
  TransmitSignal signal;
  signal.device_id = device.device_id;
  signal.gradient_part.assign(dim, 0.0);
  for (int j : batch) {
    if (j < 0 || j >= static_cast<int>(device.dataset.size())) {
      return absl::OutOfRangeError(absl::StrFormat(
          "sample %d out of range for device %d", j, device.device_id));
    }
    std::vector<double> g =
        ClipGradient(gradient(model.weights, device.dataset[j]),
                     config.clip_norm);
    if (g.size() != dim) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "gradient has dimension %d, model has %d",
          static_cast<int>(g.size()), static_cast<int>(dim)));
    }
    for (size_t c = 0; c < dim; ++c) signal.gradient_part[c] += g[c];
  }
  if (round.b_total > 0) {
    for (double& x : signal.gradient_part) x /= round.b_total;
  }

  std::mt19937_64 rng =
      streams.Stream(StreamPurpose::kDeviceNoise, round.round, device.device_id);
  std::normal_distribution<double> noise(
      0.0, PerDeviceNoiseStd(config.device_noise_std, round.a));
  signal.noise_part.resize(dim);
  for (double& x : signal.noise_part) {
    x = config.device_noise_std > 0 ? noise(rng) : 0.0;
  }

  signal.precoder = 1.0 / (config.csi_factor * device.channel_gain);
  signal.value.resize(dim);
  for (size_t c = 0; c < dim; ++c) {
    signal.value[c] =
        signal.precoder * (signal.gradient_part[c] + signal.noise_part[c]);
  }
  return signal;
}

absl::StatusOr<ReceivedSignal> Aggregate(std::span<const TransmitSignal> signals,
                                         std::span<const double> channel_gains,
                                         int dimension, int round,
                                         const SystemConfig& config,
                                         const RngStreams& streams) {
  if (signals.size() != channel_gains.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d signals but %d channel gains", static_cast<int>(signals.size()),
        static_cast<int>(channel_gains.size())));
  }
  if (dimension < 0) {
    return absl::InvalidArgumentError("negative dimension");
  }
  const size_t dim = dimension;
  ReceivedSignal out;
  out.value.assign(dim, 0.0);
  out.signal_part.assign(dim, 0.0);
  out.device_noise_part.assign(dim, 0.0);
  out.channel_noise_part.assign(dim, 0.0);

  std::vector<size_t> order(signals.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t l, size_t r) {
    return signals[l].device_id < signals[r].device_id;
  });
  for (size_t i : order) {
    const TransmitSignal& s = signals[i];
    if (s.value.size() != dim || s.gradient_part.size() != dim ||
        s.noise_part.size() != dim) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "signal from device %d has the wrong dimension", s.device_id));
    }
    const double gain = channel_gains[i];
    for (size_t c = 0; c < dim; ++c) {
      out.value[c] += gain * s.value[c];
      out.signal_part[c] += s.gradient_part[c];
      out.device_noise_part[c] += s.noise_part[c];
    }
  }

  if (config.channel_noise_var > 0) {
    std::mt19937_64 rng =
        streams.Stream(StreamPurpose::kChannelNoise, round, kNoDevice);
    std::normal_distribution<double> noise(
        0.0, std::sqrt(config.channel_noise_var));
    for (size_t c = 0; c < dim; ++c) {
      out.channel_noise_part[c] = noise(rng);
      out.value[c] += out.channel_noise_part[c];
    }
  }
  return out;
}

absl::StatusOr<ModelState> PsUpdate(const ModelState& model,
                                    const ReceivedSignal& received,
                                    double eta) {
  if (received.value.size() != model.weights.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "received signal has dimension %d, model has %d",
        static_cast<int>(received.value.size()),
        static_cast<int>(model.weights.size())));
  }
  ModelState next{model.weights, model.round + 1};
  for (size_t c = 0; c < next.weights.size(); ++c) {
    next.weights[c] -= eta * received.value[c];
  }
  return next;
}

absl::StatusOr<double> Sensitivity(double clip_norm, int b_total) {
  if (b_total < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("total batch size must be >= 1, got %d", b_total));
  }
  if (!(clip_norm > 0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("clip_norm must be > 0, got %g", clip_norm));
  }
  return 2 * clip_norm / b_total;
}

absl::Status ValidateLinearRegressionTask(const LinearRegressionTask& task) {
  if (task.dimension < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("dimension must be >= 1, got %d", task.dimension));
  }
  if (task.samples_per_device < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("samples_per_device must be >= 1, got %d",
                        task.samples_per_device));
  }
  if (!(task.feature_std > 0) || !(task.label_noise_std >= 0)) {
    return absl::InvalidArgumentError(
        "feature_std must be > 0 and label_noise_std >= 0");
  }
  return absl::OkStatus();
}

SyntheticProblem GenerateProblem(const SystemConfig& config,
                                 const LinearRegressionTask& task,
                                 const RngStreams& streams) {
  SyntheticProblem problem;
  std::normal_distribution<double> standard(0.0, 1.0);

  std::mt19937_64 truth_rng = streams.Stream(StreamPurpose::kData, 0, kNoDevice);
  problem.true_weights.resize(task.dimension);
  for (double& w : problem.true_weights) w = standard(truth_rng);

  problem.devices.reserve(config.n_devices);
  for (int i = 0; i < config.n_devices; ++i) {
    std::mt19937_64 rng = streams.Stream(StreamPurpose::kData, 0, i);
    DeviceState device;
    device.device_id = i;
    device.dataset.resize(task.samples_per_device);
    for (Sample& sample : device.dataset) {
      sample.features.resize(task.dimension);
      for (double& x : sample.features) x = task.feature_std * standard(rng);
      sample.label = Dot(sample.features, problem.true_weights) +
                     task.label_noise_std * standard(rng);
    }
    problem.devices.push_back(std::move(device));
  }
  return problem;
}

std::vector<double> LinearRegressionGradient(std::span<const double> weights,
                                             const Sample& sample) {
  const double residual = Dot(weights, sample.features) - sample.label;
  std::vector<double> grad(sample.features);
  for (double& g : grad) g *= residual;
  return grad;
}

double GlobalLoss(std::span<const DeviceState> devices,
                  std::span<const double> weights) {
  if (devices.empty()) return 0;
  double total = 0;
  for (const DeviceState& device : devices) {
    double local = 0;
    for (const Sample& sample : device.dataset) {
      const double r = Dot(weights, sample.features) - sample.label;
      local += 0.5 * r * r;
    }
    if (!device.dataset.empty()) total += local / device.dataset.size();
  }
  return total / devices.size();
}

std::string_view AccountingModeName(AccountingMode mode) {
  switch (mode) {
    case AccountingMode::kNominal:
      return "nominal";
    case AccountingMode::kRealized:
      return "realized";
  }
  return "unknown";
}

absl::Status ValidateAccountingOptions(const AccountingOptions& options) {
  if (options.mode == AccountingMode::kNominal &&
      (!(options.noise_multiplier > 0) ||
       !std::isfinite(options.noise_multiplier))) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "nominal accounting needs a finite noise multiplier > 0, got %g",
        options.noise_multiplier));
  }
  if (!(options.delta > 0 && options.delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", options.delta));
  }
  if (options.alpha_min < 2 || options.alpha_max < options.alpha_min) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "invalid order grid [%d, %d]; need 2 <= min <= max",
        options.alpha_min, options.alpha_max));
  }
  return absl::OkStatus();
}

namespace {

// Per-round privacy cost bookkeeping for Run.
class RoundAccountant {
 public:
  static absl::StatusOr<RoundAccountant> Create(
      const SystemConfig& config, const AccountingOptions& options) {
    RoundAccountant acc(config, options);
    if (options.mode == AccountingMode::kNominal) {
      AccountantConfig sweep_config;
      sweep_config.sampling_rate = config.SamplingRate();
      sweep_config.noise_multiplier = options.noise_multiplier;
      sweep_config.delta = options.delta;
      sweep_config.alpha_min = options.alpha_min;
      sweep_config.alpha_max = options.alpha_max;
      sweep_config.t_max = config.rounds;
      absl::StatusOr<PrivacyCurve> sweep = Sweep(sweep_config);
      if (!sweep.ok()) return sweep.status();
      acc.nominal_ = std::move(sweep->rows);
    } else {
      absl::StatusOr<RdpCurve> zero =
          RdpCurve::Zero(options.alpha_min, options.alpha_max);
      if (!zero.ok()) return zero.status();
      acc.composed_.push_back(*std::move(zero));
    }
    return acc;
  }

  // Cost after round `round` (1-based) whose total batch size was b_total.
  absl::StatusOr<PrivacyRow> Advance(int round, int b_total) {
    if (options_.mode == AccountingMode::kNominal) {
      return nominal_[round - 1];
    }
    if (b_total > 0) {
      absl::StatusOr<RdpCurve> step = StepCurve(b_total);
      if (!step.ok()) return step.status();
      composed_.push_back(*std::move(step));
      absl::StatusOr<RdpCurve> sum = ComposeRdp(composed_);
      if (!sum.ok()) return sum.status();
      composed_ = {*std::move(sum)};
    }
    absl::StatusOr<ConvertedEpsilon> best =
        BestConversion(composed_.front(), options_.delta);
    if (!best.ok()) return best.status();
    return PrivacyRow{round, best->epsilon, best->alpha_star, options_.delta};
  }

 private:
  RoundAccountant(const SystemConfig& config, const AccountingOptions& options)
      : config_(config), options_(options) {}

  absl::StatusOr<RdpCurve> StepCurve(int b_total) {
    auto it = step_cache_.find(b_total);
    if (it != step_cache_.end()) return it->second;
    absl::StatusOr<double> sensitivity = Sensitivity(config_.clip_norm, b_total);
    if (!sensitivity.ok()) return sensitivity.status();
    const SampledGmSpec spec{config_.SamplingRate(),
                             config_.device_noise_std / *sensitivity};
    absl::StatusOr<RdpCurve> curve =
        PerStepCurve(spec, options_.alpha_min, options_.alpha_max);
    if (!curve.ok()) return curve.status();
    step_cache_.emplace(b_total, *curve);
    return curve;
  }

  SystemConfig config_;
  AccountingOptions options_;
  std::vector<PrivacyRow> nominal_;
  std::vector<RdpCurve> composed_;
  std::map<int, RdpCurve> step_cache_;
};

}  // namespace

absl::StatusOr<Trajectory> RunSimulation(const SystemConfig& config,
                                         const LinearRegressionTask& task,
                                         const AccountingOptions& accounting) {
  if (absl::Status s = ValidateSystemConfig(config); !s.ok()) return s;
  if (absl::Status s = ValidateLinearRegressionTask(task); !s.ok()) return s;
  if (absl::Status s = ValidateAccountingOptions(accounting); !s.ok()) {
    return s;
  }
  absl::StatusOr<RoundAccountant> accountant =
      RoundAccountant::Create(config, accounting);
  if (!accountant.ok()) return accountant.status();

  const RngStreams streams(config.seed);
  SyntheticProblem problem = GenerateProblem(config, task, streams);
  std::vector<DeviceState>& devices = problem.devices;

  ModelState model{std::vector<double>(task.dimension, 0.0), 0};
  Trajectory trajectory;
  trajectory.initial_loss = GlobalLoss(devices, model.weights);
  trajectory.rows.reserve(config.rounds);

  for (int t = 1; t <= config.rounds; ++t) {
    for (DeviceState& device : devices) {
      device.channel_gain =
          DrawChannelGain(config, t, device.device_id, streams);
    }
    absl::StatusOr<RoundDraw> draw = DrawRound(config, devices, t, streams);
    if (!draw.ok()) return draw.status();

    std::vector<TransmitSignal> signals;
    std::vector<double> gains;
    signals.reserve(draw->a);
    gains.reserve(draw->a);
    for (int id : draw->participants) {
      const DeviceState& device = devices[id];
      absl::StatusOr<TransmitSignal> signal = DeviceSignal(
          *draw, device, model, config, LinearRegressionGradient, streams);
      if (!signal.ok()) return signal.status();
      signals.push_back(*std::move(signal));
      gains.push_back(device.channel_gain);
    }
    absl::StatusOr<ReceivedSignal> received =
        Aggregate(signals, gains, task.dimension, t, config, streams);
    if (!received.ok()) return received.status();
    absl::StatusOr<ModelState> next =
        PsUpdate(model, *received, config.learning_rate);
    if (!next.ok()) return next.status();
    model = *std::move(next);

    absl::StatusOr<PrivacyRow> cost = accountant->Advance(t, draw->b_total);
    if (!cost.ok()) return cost.status();
    trajectory.rows.push_back({t, GlobalLoss(devices, model.weights),
                               DpBudget{cost->epsilon, cost->delta},
                               cost->alpha_star, draw->a, draw->b_total});
  }
  trajectory.final_weights = model.weights;
  return trajectory;
}

}  // namespace oac_privacy
