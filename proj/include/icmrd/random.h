// Copyright 2026 The icmrd Authors. All Rights Reserved.
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

#ifndef ICMRD_RANDOM_H_
#define ICMRD_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace icmrd {

// Seeded generator with platform-independent draws. The standard
// distributions are implementation-defined, so the mappings from raw
// engine output are done here to keep generated cases identical everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [0, n), n >= 1, by rejection.
  size_t UniformIndex(size_t n) {
    const uint64_t bound = static_cast<uint64_t>(n);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return static_cast<size_t>(draw % bound);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace icmrd

#endif  // ICMRD_RANDOM_H_
