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

#include "oac_privacy/rng.h"

namespace oac_privacy {
namespace {

// SplitMix64 finalizer.
uint64_t Mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t RngStreams::StreamSeed(StreamPurpose purpose, int64_t round,
                                int64_t device) const {
  uint64_t h = Mix(root_seed_);
  h = Mix(h ^ static_cast<uint64_t>(purpose));
  h = Mix(h ^ static_cast<uint64_t>(round));
  h = Mix(h ^ static_cast<uint64_t>(device));
  return h;
}

}  // namespace oac_privacy
