// Copyright 2026 The olp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "olp/rng.h"

namespace olp {

uint64_t Mix64(uint64_t x) {
  // SplitMix64 finalizer.
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

uint64_t Rng::NextU64() {
  const uint64_t n = counter_++;
  return Mix64(Mix64(key_ + 0x9e3779b97f4a7c15ULL * (n + 1)) ^ key_);
}

double Rng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

Rng Rng::Split(uint64_t stream) const {
  return Rng(Mix64(key_ ^ Mix64(stream + 0x632be59bd9b4e019ULL)));
}

uint64_t EpisodeSeed(std::string_view experiment_id, uint64_t base_seed,
                     int64_t horizon, int64_t trial) {
  uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : experiment_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h = Mix64(h ^ Mix64(base_seed));
  h = Mix64(h ^ Mix64(static_cast<uint64_t>(horizon) + 0x51ed2701ULL));
  h = Mix64(h ^ Mix64(static_cast<uint64_t>(trial) + 0x2545f4914f6cdd1dULL));
  return h;
}

}  // namespace olp
