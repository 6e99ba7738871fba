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

#ifndef ZONESIM_ANALYSIS_H
#define ZONESIM_ANALYSIS_H

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace zonesim {

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(uint64_t successes, uint64_t trials, double confidence = 0.95);

struct RateEstimate {
    uint64_t events = 0;
    uint64_t trials = 0;
    double rate = 0.0;
    Interval ci;
    nlohmann::json to_json() const;
};

RateEstimate estimate_rate(uint64_t events, uint64_t trials, double confidence = 0.95);

struct BasisCounts {
    uint64_t successes = 0;
    uint64_t failures = 0;
    uint64_t trials() const { return successes + failures; }
};

/// Rows keyed by condition, e.g. "XX" or "d3".
struct CountTable {
    std::map<std::string, BasisCounts> rows;
};

enum class BellTarget : uint8_t { kPhiPlus, kPsiMinus };

struct FidelityEstimate {
    double fidelity = 0.0;
    double sigma = 0.0;
    /// Raw parity expectation <B> per basis.
    std::map<std::string, double> correlators;
};

/// F = (1 + s_XX <XX> + s_YY <YY> + s_ZZ <ZZ>) / 4, where s_B is the target
/// state's eigenvalue and a failure is a parity opposite to s_B.
FidelityEstimate bell_fidelity(const CountTable& counts, BellTarget target = BellTarget::kPhiPlus);

struct FitResult {
    std::vector<double> params;
    std::vector<double> stderrs;
    Eigen::MatrixXd covariance;
    double residual_norm = 0.0;
    int iterations = 0;
};

/// Least squares fit of y = A (1 - eps)^x. params = {A, eps}. With `sigma`
/// the fit is weighted and the covariance absolute; without it the
/// covariance is scaled by the residual variance.
FitResult fit_exponential_decay(const std::vector<double>& x, const std::vector<double>& y,
                                const std::vector<double>& sigma = {});

/// Weighted straight line y = a + b x. params = {a, b}.
FitResult fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& sigma = {});

struct FrequencySeries {
    std::vector<int> cycles;
    std::vector<double> mean;
    /// Bootstrap standard deviation of the mean over shots.
    std::vector<double> stddev;
};

/// `parity[s][i]` is detector i of shot s and `cycle_of[i]` its cycle.
FrequencySeries detection_frequency(const std::vector<std::vector<uint8_t>>& parity, const std::vector<int>& cycle_of,
                                    int resamples = 1000, uint64_t seed = 0);

struct RetryHistogram {
    /// counts[r] = shots that needed r retries.
    std::vector<uint64_t> counts;
    double mean_retries = 0.0;
    double mean_attempts = 1.0;
    /// 95% normal interval on the mean number of attempts.
    Interval attempts_ci;
    nlohmann::json to_json() const;
};

RetryHistogram retry_histogram(const std::vector<int>& attempts);

}  // namespace zonesim

#endif  // ZONESIM_ANALYSIS_H
