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

// Named random substreams derived from a single root seed.
//
// Every random quantity in a simulation is drawn from an engine keyed by
// (purpose, round, device), so results do not depend on the order in which
// devices or rounds are evaluated.

#ifndef OAC_PRIVACY_RNG_H_
#define OAC_PRIVACY_RNG_H_

#include <cstdint>
#include <random>

namespace oac_privacy {

enum class StreamPurpose : uint64_t {
  kParticipation = 1,
  kBatching = 2,
  kDeviceNoise = 3,
  kChannelNoise = 4,
  kChannelGain = 5,
  kData = 6,
};

// Device index used for streams that are not tied to one device.
inline constexpr int64_t kNoDevice = -1;

class RngStreams {
 public:
  explicit RngStreams(uint64_t root_seed) : root_seed_(root_seed) {}

  uint64_t root_seed() const { return root_seed_; }

  uint64_t StreamSeed(StreamPurpose purpose, int64_t round,
                      int64_t device) const;

  std::mt19937_64 Stream(StreamPurpose purpose, int64_t round,
                         int64_t device) const {
    return std::mt19937_64(StreamSeed(purpose, round, device));
  }

 private:
  uint64_t root_seed_;
};

}  // namespace oac_privacy

#endif  // OAC_PRIVACY_RNG_H_
