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

#ifndef OLP_RNG_H_
#define OLP_RNG_H_

#include <cstdint>
#include <string_view>

namespace olp {

// Counter-based 64-bit generator. The output at position n is a pure function
// of (key, n), so streams can be split and replayed without shared state.
class Rng {
 public:
  explicit Rng(uint64_t key) : key_(key) {}

  uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Independent child stream; does not advance this stream.
  Rng Split(uint64_t stream) const;

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

uint64_t Mix64(uint64_t x);

// Per-episode seed: a hash of (experiment id, base seed, horizon, trial).
uint64_t EpisodeSeed(std::string_view experiment_id, uint64_t base_seed,
                     int64_t horizon, int64_t trial);

}  // namespace olp

#endif  // OLP_RNG_H_
