// Copyright 2026 The zonesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ZONESIM_RNG_H
#define ZONESIM_RNG_H

#include <cstdint>

namespace zonesim {

/// SplitMix64 finalizer. Bijective 64-bit mixing function.
constexpr uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives the seed of shot `index` from a batch seed. Shots never share streams.
constexpr uint64_t derive_seed(uint64_t base_seed, uint64_t index) {
    return mix64(mix64(base_seed) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

/// Counter-based random stream.
///
/// Draw `i` of a stream keyed by `key` is a pure function of (key, i), so a
/// shot's randomness never depends on which worker executes it or on how many
/// draws other shots consumed. Uniform doubles are built from the top 53 bits,
/// which keeps sampled records identical across platforms (unlike the
/// implementation-defined std:: distributions).
class CounterRng {
   public:
    using result_type = uint64_t;

    explicit CounterRng(uint64_t key, uint64_t stream = 0) : key_(mix64(key ^ mix64(stream + 1))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~uint64_t{0}; }

    result_type operator()() { return mix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return p > 0.0 && uniform() < p; }

    /// Uniform integer in [0, n). `n` must be positive.
    uint64_t below(uint64_t n) {
        // Lemire's multiply-shift; the bias is < n / 2^64 and irrelevant here.
        return static_cast<uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

    uint64_t draws() const { return counter_; }

   private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

}  // namespace zonesim

#endif  // ZONESIM_RNG_H
