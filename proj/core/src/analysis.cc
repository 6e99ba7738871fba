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

#include "zonesim/analysis.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <unsupported/Eigen/NonLinearOptimization>

#include "zonesim/rng.h"

namespace zonesim {

Interval wilson_interval(uint64_t successes, uint64_t trials, double confidence) {
    if (trials == 0) throw std::invalid_argument("wilson_interval needs at least one trial");
    if (successes > trials) throw std::invalid_argument("successes exceed trials");
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must be in (0, 1)");
    const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double center = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    Interval out{std::max(0.0, center - half), std::min(1.0, center + half)};
    // Guard rounding at the edges so the point estimate stays inside.
    if (successes == 0) out.low = 0.0;
    if (successes == trials) out.high = 1.0;
    return out;
}

nlohmann::json RateEstimate::to_json() const {
    return {{"events", events}, {"trials", trials}, {"rate", rate}, {"ci_low", ci.low}, {"ci_high", ci.high}};
}

RateEstimate estimate_rate(uint64_t events, uint64_t trials, double confidence) {
    RateEstimate r;
    r.events = events;
    r.trials = trials;
    r.rate = static_cast<double>(events) / static_cast<double>(trials);
    r.ci = wilson_interval(events, trials, confidence);
    return r;
}

FidelityEstimate bell_fidelity(const CountTable& counts, BellTarget target) {
    FidelityEstimate out;
    double sum = 1.0;
    double var = 0.0;
    for (const char* basis : {"XX", "YY", "ZZ"}) {
        auto it = counts.rows.find(basis);
        if (it == counts.rows.end()) throw std::invalid_argument(std::string("missing basis ") + basis);
        const double n = static_cast<double>(it->second.trials());
        if (n == 0) throw std::invalid_argument(std::string("no trials in basis ") + basis);
        const double f = static_cast<double>(it->second.failures) / n;
        int eigen = 1;
        if (target == BellTarget::kPsiMinus) {
            eigen = -1;
        } else if (std::string(basis) == "YY") {
            eigen = -1;
        }
        const double aligned = 1.0 - 2.0 * f;
        out.correlators[basis] = eigen * aligned;
        sum += aligned;
        var += 4.0 * f * (1.0 - f) / n;
    }
    out.fidelity = sum / 4.0;
    out.sigma = std::sqrt(var) / 4.0;
    return out;
}

namespace {

struct DecayFunctor {
    using Scalar = double;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;

    const std::vector<double>& x;
    const std::vector<double>& y;
    std::vector<double> w;

    int inputs() const { return 2; }
    int values() const { return static_cast<int>(x.size()); }

    static double decay(double eps, double xi) { return std::exp(xi * std::log1p(-eps)); }

    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
        if (!(p[1] < 1.0)) {
            r.setConstant(1e10);
            return 0;
        }
        for (int i = 0; i < values(); ++i) r[i] = (p[0] * decay(p[1], x[i]) - y[i]) * w[i];
        return 0;
    }
    int df(const Eigen::VectorXd& p, Eigen::MatrixXd& j) const {
        for (int i = 0; i < values(); ++i) {
            const double d = decay(p[1], x[i]);
            j(i, 0) = d * w[i];
            j(i, 1) = -p[0] * x[i] * d / (1.0 - p[1]) * w[i];
        }
        return 0;
    }
};

std::vector<double> weights_from(const std::vector<double>& sigma, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (sigma.empty()) return w;
    if (sigma.size() != n) throw std::invalid_argument("sigma size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(sigma[i] > 0.0)) throw std::invalid_argument("sigma must be positive");
        w[i] = 1.0 / sigma[i];
    }
    return w;
}

void finish_fit(FitResult& out, const Eigen::MatrixXd& jac, double rss, std::size_t n, bool absolute) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
    if (!lu.isInvertible()) throw std::runtime_error("degenerate fit: singular normal matrix");
    out.covariance = lu.inverse();
    const auto k = static_cast<std::size_t>(jac.cols());
    if (!absolute) {
        const double dof = static_cast<double>(n - k);
        out.covariance *= dof > 0 ? rss / dof : 0.0;
    }
    out.residual_norm = std::sqrt(rss);
    out.stderrs.clear();
    for (Eigen::Index i = 0; i < out.covariance.rows(); ++i) out.stderrs.push_back(std::sqrt(out.covariance(i, i)));
}

}  // namespace

FitResult fit_exponential_decay(const std::vector<double>& x, const std::vector<double>& y,
                                const std::vector<double>& sigma) {
    if (x.size() != y.size()) throw std::invalid_argument("x and y sizes differ");
    if (x.size() < 3) throw std::invalid_argument("exponential fit needs at least 3 points");
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
        throw std::invalid_argument("degenerate fit: all x equal");
    }
    DecayFunctor f{x, y, weights_from(sigma, x.size())};
    // Log-linear start on the positive points.
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] > 0) {
            lx.push_back(x[i]);
            ly.push_back(std::log(y[i]));
        }
    }
    Eigen::VectorXd p(2);
    p << 1.0, 0.01;
    if (lx.size() >= 2) {
        const FitResult lin = fit_line(lx, ly);
        p[0] = std::exp(lin.params[0]);
        p[1] = std::clamp(1.0 - std::exp(lin.params[1]), -0.5, 0.5);
    }
    Eigen::LevenbergMarquardt<DecayFunctor> lm(f);
    lm.parameters.ftol = 1e-15;
    lm.parameters.xtol = 1e-15;
    lm.parameters.maxfev = 2000;
    lm.minimize(p);
    FitResult out;
    out.params = {p[0], p[1]};
    out.iterations = static_cast<int>(lm.iter);
    Eigen::VectorXd r(static_cast<Eigen::Index>(x.size()));
    f(p, r);
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(x.size()), 2);
    f.df(p, jac);
    finish_fit(out, jac, r.squaredNorm(), x.size(), !sigma.empty());
    return out;
}

FitResult fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& sigma) {
    if (x.size() != y.size()) throw std::invalid_argument("x and y sizes differ");
    if (x.size() < 2) throw std::invalid_argument("line fit needs at least 2 points");
    const auto w = weights_from(sigma, x.size());
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd a(n, 2);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, 0) = w[i];
        a(i, 1) = x[i] * w[i];
        b[i] = y[i] * w[i];
    }
    const Eigen::VectorXd p = a.colPivHouseholderQr().solve(b);
    FitResult out;
    out.params = {p[0], p[1]};
    finish_fit(out, a, (a * p - b).squaredNorm(), x.size(), !sigma.empty());
    return out;
}

FrequencySeries detection_frequency(const std::vector<std::vector<uint8_t>>& parity, const std::vector<int>& cycle_of,
                                    int resamples, uint64_t seed) {
    if (parity.empty()) throw std::invalid_argument("detection_frequency needs at least one shot");
    if (cycle_of.empty()) throw std::invalid_argument("no detectors");
    const int max_cycle = *std::max_element(cycle_of.begin(), cycle_of.end());
    const auto nc = static_cast<std::size_t>(max_cycle + 1);
    std::vector<double> per_cycle_count(nc, 0.0);
    for (int c : cycle_of) per_cycle_count[static_cast<std::size_t>(c)] += 1.0;
    // Per-shot per-cycle event counts.
    std::vector<std::vector<double>> events(parity.size(), std::vector<double>(nc, 0.0));
    for (std::size_t s = 0; s < parity.size(); ++s) {
        if (parity[s].size() != cycle_of.size()) throw std::invalid_argument("shot has wrong detector count");
        for (std::size_t i = 0; i < cycle_of.size(); ++i) events[s][static_cast<std::size_t>(cycle_of[i])] += parity[s][i];
    }
    const double n = static_cast<double>(parity.size());
    FrequencySeries out;
    std::vector<double> total(nc, 0.0);
    for (const auto& e : events) {
        for (std::size_t c = 0; c < nc; ++c) total[c] += e[c];
    }
    std::vector<double> sum(nc, 0.0), sum2(nc, 0.0);
    CounterRng rng(seed, 0);
    for (int r = 0; r < resamples; ++r) {
        std::vector<double> acc(nc, 0.0);
        for (std::size_t s = 0; s < parity.size(); ++s) {
            const auto& e = events[rng.below(parity.size())];
            for (std::size_t c = 0; c < nc; ++c) acc[c] += e[c];
        }
        for (std::size_t c = 0; c < nc; ++c) {
            const double m = acc[c] / (n * std::max(1.0, per_cycle_count[c]));
            sum[c] += m;
            sum2[c] += m * m;
        }
    }
    for (std::size_t c = 0; c < nc; ++c) {
        if (per_cycle_count[c] == 0) continue;
        out.cycles.push_back(static_cast<int>(c));
        out.mean.push_back(total[c] / (n * per_cycle_count[c]));
        double sd = 0.0;
        if (resamples > 1) {
            const double m = sum[c] / resamples;
            sd = std::sqrt(std::max(0.0, (sum2[c] / resamples - m * m) * resamples / (resamples - 1)));
        }
        out.stddev.push_back(sd);
    }
    return out;
}

nlohmann::json RetryHistogram::to_json() const {
    return {{"counts", counts},
            {"mean_retries", mean_retries},
            {"mean_attempts", mean_attempts},
            {"attempts_ci", {attempts_ci.low, attempts_ci.high}}};
}

RetryHistogram retry_histogram(const std::vector<int>& attempts) {
    RetryHistogram h;
    if (attempts.empty()) return h;
    double s = 0.0, s2 = 0.0;
    for (int a : attempts) {
        if (a < 1) throw std::invalid_argument("attempt counts start at 1");
        const auto r = static_cast<std::size_t>(a - 1);
        if (h.counts.size() <= r) h.counts.resize(r + 1, 0);
        ++h.counts[r];
        s += a;
        s2 += static_cast<double>(a) * a;
    }
    const double n = static_cast<double>(attempts.size());
    h.mean_attempts = s / n;
    h.mean_retries = h.mean_attempts - 1.0;
    const double var = n > 1 ? (s2 - s * s / n) / (n - 1) : 0.0;
    const double half = 1.96 * std::sqrt(var / n);
    h.attempts_ci = {h.mean_attempts - half, h.mean_attempts + half};
    return h;
}

}  // namespace zonesim
