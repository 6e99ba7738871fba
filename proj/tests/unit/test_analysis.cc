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


#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "zonesim/analysis.h"

namespace zonesim {
namespace {

// Closed-form Wilson bounds at z = 1.959964.
Interval wilson_oracle(double k, double n) {
    const double z = 1.959963984540054;
    const double p = k / n;
    const double denom = 1 + z * z / n;
    const double c = p + z * z / (2 * n);
    const double h = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
    return {(c - h) / denom, (c + h) / denom};
}

TEST(Wilson, ZeroOfHundred) {
    const Interval ci = wilson_interval(0, 100);
    EXPECT_EQ(ci.low, 0.0);
    EXPECT_NEAR(ci.high, 0.036994, 2e-6);
}

TEST(Wilson, MatchesClosedForm) {
    const Interval ci = wilson_interval(25, 17820);
    const Interval ref = wilson_oracle(25, 17820);
    EXPECT_NEAR(ci.low, ref.low, 1e-12);
    EXPECT_NEAR(ci.high, ref.high, 1e-12);
}

TEST(Wilson, SymmetricAtHalf) {
    const Interval ci = wilson_interval(50, 100);
    EXPECT_NEAR(0.5 - ci.low, ci.high - 0.5, 1e-12);
}

TEST(Wilson, ContainsPointAndStaysInUnitInterval) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const uint64_t n = 1 + rng() % 5000;
        const uint64_t k = rng() % (n + 1);
        const Interval ci = wilson_interval(k, n);
        const double p = static_cast<double>(k) / static_cast<double>(n);
        ASSERT_LE(ci.low, p);
        ASSERT_GE(ci.high, p);
        ASSERT_GE(ci.low, 0.0);
        ASSERT_LE(ci.high, 1.0);
    }
}

TEST(Wilson, RejectsBadInput) {
    EXPECT_THROW(wilson_interval(0, 0), std::invalid_argument);
    EXPECT_THROW(wilson_interval(5, 4), std::invalid_argument);
    EXPECT_THROW(wilson_interval(1, 4, 1.0), std::invalid_argument);
}

CountTable table(uint64_t xs, uint64_t xf, uint64_t ys, uint64_t yf, uint64_t zs, uint64_t zf) {
    CountTable t;
    t.rows["XX"] = {xs, xf};
    t.rows["YY"] = {ys, yf};
    t.rows["ZZ"] = {zs, zf};
    return t;
}

TEST(BellFidelity, PublishedCounts) {
    EXPECT_NEAR(bell_fidelity(table(2443, 7, 2127, 61, 4828, 79)).fidelity, 0.977, 0.001);
    EXPECT_NEAR(bell_fidelity(table(1440, 3, 1366, 3, 1452, 4)).fidelity, 0.996, 0.001);
}

TEST(BellFidelity, NoFailuresIsPerfect) {
    const FidelityEstimate f = bell_fidelity(table(10, 0, 10, 0, 10, 0));
    EXPECT_DOUBLE_EQ(f.fidelity, 1.0);
    EXPECT_DOUBLE_EQ(f.sigma, 0.0);
    EXPECT_DOUBLE_EQ(f.correlators.at("XX"), 1.0);
    EXPECT_DOUBLE_EQ(f.correlators.at("YY"), -1.0);
    EXPECT_DOUBLE_EQ(f.correlators.at("ZZ"), 1.0);
}

TEST(BellFidelity, MissingBasisThrows) {
    CountTable t = table(1, 0, 1, 0, 1, 0);
    t.rows.erase("YY");
    EXPECT_THROW(bell_fidelity(t), std::invalid_argument);
    EXPECT_THROW(bell_fidelity(table(1, 0, 0, 0, 1, 0)), std::invalid_argument);
}

TEST(BellFidelity, PsiMinusFlipsEverySign) {
    const CountTable t = table(90, 10, 80, 20, 70, 30);
    const FidelityEstimate phi = bell_fidelity(t, BellTarget::kPhiPlus);
    const FidelityEstimate psi = bell_fidelity(t, BellTarget::kPsiMinus);
    EXPECT_DOUBLE_EQ(phi.fidelity, psi.fidelity);
    EXPECT_DOUBLE_EQ(psi.correlators.at("XX"), -0.8);
    EXPECT_DOUBLE_EQ(psi.correlators.at("YY"), -0.6);
    EXPECT_DOUBLE_EQ(phi.correlators.at("YY"), -0.6);
    EXPECT_DOUBLE_EQ(phi.correlators.at("ZZ"), 0.4);
    EXPECT_NEAR(phi.fidelity, (1 + 0.8 + 0.6 + 0.4) / 4, 1e-15);
}

TEST(Fit, ExactDecay) {
    std::vector<double> x, y;
    for (int i = 0; i <= 60; i += 5) {
        x.push_back(i);
        y.push_back(0.8 * std::pow(0.99, i));
    }
    const FitResult f = fit_exponential_decay(x, y);
    EXPECT_NEAR(f.params[0], 0.8, 1e-9);
    EXPECT_NEAR(f.params[1], 0.01, 1e-9);
}

// Binomial survival curves at a known per-step loss; the fitted rate should
// land within two standard errors most of the time.
TEST(Fit, RecoversSyntheticSurvival) {
    const double eps = 0.0106;
    int within2 = 0;
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        std::mt19937_64 rng(seed);
        std::vector<double> x, y, s;
        for (int n = 0; n <= 100; n += 10) {
            const double p = std::pow(1 - eps, n);
            std::binomial_distribution<int> b(600, p);
            const double q = b(rng) / 600.0;
            x.push_back(n);
            y.push_back(q);
            s.push_back(std::sqrt(std::max(q * (1 - q), 1.0 / 600) / 600));
        }
        const FitResult f = fit_exponential_decay(x, y, s);
        const double z = std::abs(f.params[1] - eps) / f.stderrs[1];
        EXPECT_LT(z, 3.5) << "seed " << seed;
        if (z < 2) ++within2;
    }
    EXPECT_GE(within2, 3);
}

TEST(Fit, RecoversSyntheticRandomizedBenchmark) {
    const double eps = 0.004;
    std::mt19937_64 rng(11);
    std::vector<double> x, y, s;
    for (int n : {2, 10, 20, 40, 60, 80, 100, 140}) {
        const double p = 0.25 + 0.75 * std::pow(1 - eps, n);
        std::binomial_distribution<int> b(4000, p);
        const double q = b(rng) / 4000.0;
        x.push_back(n);
        y.push_back(q - 0.25);
        s.push_back(std::sqrt(q * (1 - q) / 4000));
    }
    const FitResult f = fit_exponential_decay(x, y, s);
    EXPECT_NEAR(f.params[1], eps, 4 * f.stderrs[1]);
    EXPECT_NEAR(f.params[0], 0.75, 0.05);
}

TEST(Fit, NeedsThreePoints) {
    EXPECT_THROW(fit_exponential_decay({0, 1}, {1, 0.9}), std::invalid_argument);
    EXPECT_THROW(fit_exponential_decay({0, 1, 2}, {1, 0.9}), std::invalid_argument);
    EXPECT_THROW(fit_exponential_decay({1, 1, 1}, {1, 0.9, 0.8}), std::invalid_argument);
}

TEST(Fit, Deterministic) {
    const std::vector<double> x{0, 10, 20, 30, 40};
    const std::vector<double> y{0.98, 0.88, 0.80, 0.71, 0.66};
    const FitResult a = fit_exponential_decay(x, y);
    const FitResult b = fit_exponential_decay(x, y);
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.stderrs, b.stderrs);
}

TEST(Fit, Line) {
    const FitResult f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
    EXPECT_NEAR(f.params[0], 1.0, 1e-12);
    EXPECT_NEAR(f.params[1], 2.0, 1e-12);
    EXPECT_THROW(fit_line({1}, {1}), std::invalid_argument);
}

std::vector<int> cycles_of(int per_cycle, int cycles) {
    std::vector<int> c;
    for (int k = 0; k < cycles; ++k)
        for (int i = 0; i < per_cycle; ++i) c.push_back(k);
    return c;
}

TEST(DetectionFrequency, QuietShotsGiveZero) {
    const auto cyc = cycles_of(3, 6);
    const std::vector<std::vector<uint8_t>> shots(50, std::vector<uint8_t>(cyc.size(), 0));
    const FrequencySeries f = detection_frequency(shots, cyc, 100);
    ASSERT_EQ(f.cycles.size(), 6u);
    for (double m : f.mean) EXPECT_EQ(m, 0.0);
    for (double s : f.stddev) EXPECT_EQ(s, 0.0);
}

TEST(DetectionFrequency, SpikeShowsInItsCycle) {
    const auto cyc = cycles_of(3, 8);
    std::vector<std::vector<uint8_t>> shots(40, std::vector<uint8_t>(cyc.size(), 0));
    for (auto& s : shots) s[5 * 3 + 1] = 1;
    const FrequencySeries f = detection_frequency(shots, cyc, 50);
    for (std::size_t k = 0; k < f.cycles.size(); ++k)
        EXPECT_NEAR(f.mean[k], f.cycles[k] == 5 ? 1.0 / 3 : 0.0, 1e-12);
}

TEST(DetectionFrequency, ShotOrderIrrelevant) {
    const auto cyc = cycles_of(4, 5);
    std::mt19937_64 rng(3);
    std::vector<std::vector<uint8_t>> shots(400, std::vector<uint8_t>(cyc.size()));
    for (auto& s : shots)
        for (auto& b : s) b = (rng() % 10) == 0;
    auto shuffled = shots;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const FrequencySeries a = detection_frequency(shots, cyc, 2000, 1);
    const FrequencySeries b = detection_frequency(shuffled, cyc, 2000, 1);
    for (std::size_t k = 0; k < a.mean.size(); ++k) {
        EXPECT_NEAR(a.mean[k], b.mean[k], 1e-12);
        EXPECT_NEAR(a.stddev[k], b.stddev[k], 0.15 * a.stddev[k]);
    }
}

TEST(DetectionFrequency, RejectsEmpty) {
    EXPECT_THROW(detection_frequency({}, {0}), std::invalid_argument);
    EXPECT_THROW(detection_frequency({{0, 1}}, {0}), std::invalid_argument);
}

TEST(RetryHistogram, AllFirstTry) {
    const RetryHistogram h = retry_histogram(std::vector<int>(30, 1));
    ASSERT_EQ(h.counts.size(), 1u);
    EXPECT_EQ(h.counts[0], 30u);
    EXPECT_DOUBLE_EQ(h.mean_retries, 0.0);
    EXPECT_THROW(retry_histogram({0}), std::invalid_argument);
}

TEST(RetryHistogram, GeometricRetries) {
    const double q = 1.0 / 1.44;
    std::mt19937_64 rng(5);
    std::geometric_distribution<int> g(q);
    std::vector<int> attempts(20000);
    for (int& a : attempts) a = 1 + g(rng);
    const RetryHistogram h = retry_histogram(attempts);
    const double expect = (1 - q) / q;
    const double sigma = std::sqrt((1 - q) / (q * q) / attempts.size());
    EXPECT_NEAR(h.mean_retries, expect, 3 * sigma);
    EXPECT_LE(h.attempts_ci.low, h.mean_attempts);
    EXPECT_GE(h.attempts_ci.high, h.mean_attempts);
    uint64_t total = 0;
    for (uint64_t c : h.counts) total += c;
    EXPECT_EQ(total, attempts.size());
}

}  // namespace
}  // namespace zonesim
