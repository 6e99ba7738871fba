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

#include "zonesim/lindblad.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>
#include <unsupported/Eigen/MatrixFunctions>

namespace zonesim {

namespace {

constexpr std::size_t kMaxLevels = 20;
constexpr double kTraceTol = 1e-9;
constexpr double kPositivityTol = 1e-8;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using cplx = std::complex<double>;
using State = std::vector<cplx>;

void require(bool ok, const std::string& what) {
    if (!ok) throw EvolutionError(what);
}

bool finite(double x) { return std::isfinite(x); }

// Frame offset of each level: the upper end of a drive rotates with the
// drive relative to its lower end.
std::vector<double> frame_offsets(const LevelSystem& s) {
    const std::size_t n = s.dim();
    std::vector<int> parent(n, -1);
    std::vector<double> step(n, 0.0);
    for (const Drive& d : s.drives) {
        require(parent[d.upper] < 0, "level '" + s.levels[d.upper].name + "' is the upper end of two drives");
        parent[d.upper] = static_cast<int>(d.lower);
        step[d.upper] = -d.detuning;
    }
    std::vector<double> f(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        std::size_t cur = i, hops = 0;
        while (parent[cur] >= 0) {
            acc += step[cur];
            cur = static_cast<std::size_t>(parent[cur]);
            require(++hops <= n, "drive graph contains a cycle");
        }
        f[i] = acc;
    }
    return f;
}

double trace_drift(const Eigen::MatrixXcd& rho) { return std::abs(rho.trace() - cplx(1.0, 0.0)); }

double min_eig(const Eigen::MatrixXcd& rho) {
    Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void check_density(const Eigen::MatrixXcd& rho, std::size_t dim) {
    require(rho.rows() == static_cast<Eigen::Index>(dim) && rho.cols() == static_cast<Eigen::Index>(dim),
            "initial state has the wrong dimension");
    require(rho.allFinite(), "initial state is not finite");
    require((rho - rho.adjoint()).norm() < 1e-12, "initial state is not Hermitian");
    require(trace_drift(rho) < 1e-12, "initial state does not have unit trace");
    require(min_eig(rho) > -1e-12, "initial state is not positive semidefinite");
}

class Recorder {
   public:
    Recorder(const LevelSystem& s, const StepControl& c, EvolutionResult& r) : sys_(s), ctl_(c), res_(r) {}

    void record(double t, const Eigen::MatrixXcd& rho) {
        res_.times.push_back(t);
        std::vector<double> pop(rho.rows());
        for (Eigen::Index i = 0; i < rho.rows(); ++i) pop[i] = rho(i, i).real();
        res_.populations.push_back(std::move(pop));
        if (ctl_.store_states) res_.states.push_back(rho);
        res_.max_trace_drift = std::max(res_.max_trace_drift, trace_drift(rho));
        res_.min_eigenvalue = std::min(res_.min_eigenvalue, min_eig(rho));
    }

    void finish(const Eigen::MatrixXcd& rho) {
        res_.rho = rho;
        res_.leakage = 0.0;
        for (std::size_t i = 0; i < sys_.dim(); ++i)
            if (sys_.levels[i].sink) res_.leakage += rho(i, i).real();
        if (ctl_.enforce_invariants) {
            if (res_.max_trace_drift > kTraceTol) {
                std::ostringstream os;
                os << "trace drift " << res_.max_trace_drift << " exceeds " << kTraceTol;
                throw EvolutionError(os.str());
            }
            if (res_.min_eigenvalue < -kPositivityTol) {
                std::ostringstream os;
                os << "density matrix eigenvalue " << res_.min_eigenvalue << " below " << -kPositivityTol;
                throw EvolutionError(os.str());
            }
        }
    }

   private:
    const LevelSystem& sys_;
    const StepControl& ctl_;
    EvolutionResult& res_;
};

Eigen::MatrixXcd unvec(const cplx* data, std::size_t n) {
    return Eigen::Map<const Eigen::MatrixXcd>(data, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

void evolve_rk(const Eigen::MatrixXcd& L, const Eigen::MatrixXcd& rho0, double duration, const StepControl& ctl,
               std::size_t n, Recorder& rec) {
    namespace odeint = boost::numeric::odeint;
    using Stepper = odeint::runge_kutta_dopri5<State>;
    auto rhs = [&L](const State& x, State& dx, double) {
        Eigen::Map<const Eigen::VectorXcd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
        Eigen::Map<Eigen::VectorXcd> dv(dx.data(), static_cast<Eigen::Index>(dx.size()));
        dv.noalias() = L * xv;
    };
    State x(rho0.data(), rho0.data() + rho0.size());
    auto stepper = odeint::make_dense_output(ctl.abs_tol, ctl.rel_tol, Stepper());
    const double norm = L.cwiseAbs().colwise().sum().maxCoeff();
    double dt0 = norm > 0 ? 0.01 / norm : duration;
    dt0 = std::min(dt0, duration);
    stepper.initialize(x, 0.0, dt0);
    const double min_dt = duration * ctl.min_step_fraction;

    State out(x.size());
    std::size_t next = 1, steps = 0;
    auto out_time = [&](std::size_t k) { return duration * static_cast<double>(k) / static_cast<double>(ctl.outputs); };
    while (next <= ctl.outputs) {
        const double t_goal = out_time(next);
        while (stepper.current_time() < t_goal) {
            auto [t0, t1] = stepper.do_step(rhs);
            if (t1 - t0 < min_dt && t1 < t_goal) throw EvolutionError("step-size underflow");
            if (++steps > ctl.max_steps) throw EvolutionError("step budget exhausted");
        }
        while (next <= ctl.outputs && out_time(next) <= stepper.current_time()) {
            const double t = out_time(next);
            if (next == ctl.outputs) {
                // Dense output reaches the final time only up to rounding.
                stepper.calc_state(std::min(t, stepper.current_time()), out);
            } else {
                stepper.calc_state(t, out);
            }
            for (const cplx& v : out)
                if (!finite(v.real()) || !finite(v.imag())) throw EvolutionError("integration diverged");
            rec.record(t, unvec(out.data(), n));
            ++next;
        }
    }
    rec.finish(unvec(out.data(), n));
}

void evolve_exp(const Eigen::MatrixXcd& L, const Eigen::MatrixXcd& rho0, double duration, const StepControl& ctl,
                std::size_t n, Recorder& rec) {
    // Scaling and squaring loses about 1e-8 of trace in double precision for
    // GHz couplings over ms durations.
    using lcplx = std::complex<long double>;
    using LMat = Eigen::Matrix<lcplx, Eigen::Dynamic, Eigen::Dynamic>;
    using LVec = Eigen::Matrix<lcplx, Eigen::Dynamic, 1>;
    const long double dt = static_cast<long double>(duration) / static_cast<long double>(ctl.outputs);
    const LMat step = (L.cast<lcplx>() * dt).exp();
    require(step.allFinite(), "propagator is not finite");
    LVec v = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), rho0.size()).cast<lcplx>();
    for (std::size_t k = 1; k <= ctl.outputs; ++k) {
        v = step * v;
        const Eigen::VectorXcd vd = v.cast<cplx>();
        Eigen::MatrixXcd rho = unvec(vd.data(), n);
        rec.record(static_cast<double>(dt) * static_cast<double>(k), rho);
        if (k == ctl.outputs) rec.finish(rho);
    }
}

}  // namespace

void LevelSystem::check() const {
    const std::size_t n = dim();
    require(n > 0, "level system is empty");
    require(n <= kMaxLevels, "level system exceeds 20 levels");
    for (const Level& l : levels) require(finite(l.energy), "level energy is not finite");
    for (const Drive& d : drives) {
        require(d.lower < n && d.upper < n, "drive references an unknown level");
        require(d.lower != d.upper, "drive couples a level to itself");
        require(finite(d.rabi) && finite(d.detuning) && finite(d.weight), "drive parameter is not finite");
    }
    for (const Decay& d : decays) {
        require(d.lower < n && d.upper < n, "decay references an unknown level");
        require(d.lower != d.upper, "decay from a level to itself");
        require(finite(d.rate) && d.rate >= 0.0, "decay rate must be finite and non-negative");
    }
    frame_offsets(*this);
}

Eigen::MatrixXcd LevelSystem::hamiltonian() const {
    check();
    const std::size_t n = dim();
    const std::vector<double> f = frame_offsets(*this);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) h(i, i) = levels[i].energy + f[i];
    for (const Drive& d : drives) {
        const double c = 0.5 * d.weight * d.rabi;
        h(d.upper, d.lower) += c;
        h(d.lower, d.upper) += c;
    }
    return h;
}

Eigen::MatrixXcd LevelSystem::liouvillian() const {
    const Eigen::MatrixXcd h = hamiltonian();
    const Eigen::Index n = h.rows();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    auto kron = [n](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
        Eigen::MatrixXcd k(n * n, n * n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) k.block(i * n, j * n, n, n) = a(i, j) * b;
        return k;
    };
    // vec(A X B) = (B^T kron A) vec(X)
    const cplx I(0.0, 1.0);
    Eigen::MatrixXcd L = -I * (kron(id, h) - kron(h.transpose(), id));
    Eigen::MatrixXcd cdc = Eigen::MatrixXcd::Zero(n, n);
    for (const Decay& d : decays) {
        if (d.rate == 0.0) continue;
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
        c(d.lower, d.upper) = std::sqrt(d.rate);
        L += kron(c.conjugate(), c);
        cdc += c.adjoint() * c;
    }
    L -= 0.5 * (kron(id, cdc) + kron(cdc.transpose(), id));
    return L;
}

nlohmann::json LevelSystem::to_json() const {
    nlohmann::json j;
    j["levels"] = nlohmann::json::array();
    for (const Level& l : levels) j["levels"].push_back({{"name", l.name}, {"energy", l.energy}, {"sink", l.sink}});
    j["drives"] = nlohmann::json::array();
    for (const Drive& d : drives)
        j["drives"].push_back({{"lower", d.lower},
                               {"upper", d.upper},
                               {"rabi", d.rabi},
                               {"detuning", d.detuning},
                               {"weight", d.weight}});
    j["decays"] = nlohmann::json::array();
    for (const Decay& d : decays) j["decays"].push_back({{"upper", d.upper}, {"lower", d.lower}, {"rate", d.rate}});
    return j;
}

LevelSystem LevelSystem::from_json(const nlohmann::json& j) {
    LevelSystem s;
    for (const auto& l : j.at("levels"))
        s.levels.push_back({l.at("name").get<std::string>(), l.value("energy", 0.0), l.value("sink", false)});
    for (const auto& d : j.value("drives", nlohmann::json::array()))
        s.drives.push_back({d.at("lower").get<std::size_t>(), d.at("upper").get<std::size_t>(),
                            d.at("rabi").get<double>(), d.value("detuning", 0.0), d.value("weight", 1.0)});
    for (const auto& d : j.value("decays", nlohmann::json::array()))
        s.decays.push_back({d.at("upper").get<std::size_t>(), d.at("lower").get<std::size_t>(),
                            d.at("rate").get<double>()});
    s.check();
    return s;
}

Eigen::MatrixXcd pure_state(std::size_t dim, std::size_t level) {
    if (level >= dim) throw EvolutionError("level index out of range");
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    rho(level, level) = 1.0;
    return rho;
}

EvolutionResult evolve(const LevelSystem& system, const Eigen::MatrixXcd& rho0, double duration,
                       const StepControl& control) {
    system.check();
    require(finite(duration) && duration >= 0.0, "duration must be finite and non-negative");
    require(control.outputs > 0, "at least one output time is required");
    require(control.rel_tol > 0.0 && control.abs_tol > 0.0, "tolerances must be positive");
    const std::size_t n = system.dim();
    check_density(rho0, n);

    EvolutionResult res;
    res.min_eigenvalue = min_eig(rho0);
    res.max_trace_drift = trace_drift(rho0);
    Recorder rec(system, control, res);
    rec.record(0.0, rho0);
    if (duration == 0.0) {
        rec.finish(rho0);
        return res;
    }
    const Eigen::MatrixXcd L = system.liouvillian();
    const double stiffness = L.cwiseAbs().colwise().sum().maxCoeff() * duration;
    Integrator method = control.method;
    if (method == Integrator::kAuto)
        method = stiffness > control.stiffness_limit ? Integrator::kExponential : Integrator::kRungeKutta;
    if (method == Integrator::kExponential)
        evolve_exp(L, rho0, duration, control, n, rec);
    else
        evolve_rk(L, rho0, duration, control, n, rec);
    return res;
}

double measured_level_shift(const LevelSystem& system, std::size_t level, std::size_t reference, double duration,
                            std::size_t outputs) {
    const std::size_t n = system.dim();
    require(level < n && reference < n && level != reference, "invalid level pair");
    for (const Drive& d : system.drives)
        require(d.lower != reference && d.upper != reference, "reference level must be uncoupled");
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(n, n);
    rho0(level, level) = rho0(reference, reference) = rho0(level, reference) = rho0(reference, level) = 0.5;
    StepControl ctl;
    ctl.outputs = outputs;
    ctl.store_states = true;
    ctl.method = Integrator::kRungeKutta;
    const EvolutionResult r = evolve(system, rho0, duration, ctl);

    // rho(level, ref) ~ exp(-i (E_level - E_ref) t): unwrap and fit the slope.
    const std::size_t m = r.states.size();
    Eigen::MatrixXd a(m, 2);
    Eigen::VectorXd phase(m);
    double prev = 0.0, offset = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        double ph = std::arg(r.states[k](level, reference));
        if (k > 0) {
            while (ph + offset - prev > std::numbers::pi) offset -= kTwoPi;
            while (ph + offset - prev < -std::numbers::pi) offset += kTwoPi;
        }
        prev = ph + offset;
        phase(k) = prev;
        a(k, 0) = r.times[k];
        a(k, 1) = 1.0;
    }
    const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(phase);
    return -coef(0) + system.hamiltonian()(reference, reference).real();
}

std::string LeakageMap::to_csv(double frequency_unit) const {
    std::ostringstream os;
    os << "delta_register,delta_imaging,loss\n" << std::setprecision(12);
    for (std::size_t i = 0; i < imaging_detunings.size(); ++i)
        for (std::size_t j = 0; j < register_detunings.size(); ++j)
            os << register_detunings[j] / frequency_unit << ',' << imaging_detunings[i] / frequency_unit << ','
               << loss[i][j] << '\n';
    return os.str();
}

LeakageMap leakage_map(const SystemBuilder& builder, const std::vector<double>& register_detunings,
                       const std::vector<double>& imaging_detunings, double duration, std::size_t initial_level,
                       unsigned threads) {
    for (double d : register_detunings) require(finite(d), "register detuning grid is not finite");
    for (double d : imaging_detunings) require(finite(d), "imaging detuning grid is not finite");
    LeakageMap map{register_detunings, imaging_detunings,
                   std::vector<std::vector<double>>(imaging_detunings.size(),
                                                    std::vector<double>(register_detunings.size(), 0.0))};
    const std::size_t nr = register_detunings.size();
    const std::size_t total = nr * imaging_detunings.size();
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto work = [&] {
        StepControl ctl;
        ctl.outputs = 1;
        for (std::size_t k = next++; k < total; k = next++) {
            try {
                const std::size_t i = k / nr, j = k % nr;
                const LevelSystem s = builder(register_detunings[j], imaging_detunings[i]);
                ctl.outputs = s.decays.empty() ? 1 : 64;
                map.loss[i][j] = evolve(s, pure_state(s.dim(), initial_level), duration, ctl).leakage;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        }
    };
    threads = std::max(1u, threads);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return map;
}

double leakage_estimate(double extinction, double omega, double delta, double gamma, double t) {
    if (delta == 0.0) throw std::invalid_argument("leakage_estimate: zero detuning");
    const double r = omega / delta;
    return extinction * r * r * gamma * t;
}

RegisterImagingModel RegisterImagingModel::from_json(const nlohmann::json& j) {
    auto mhz = [&](const char* key) { return kTwoPi * j.at(key).get<double>(); };
    RegisterImagingModel m;
    m.imaging_rabi = mhz("imaging_rabi_mhz");
    m.gamma_3p1 = mhz("gamma_3p1_mhz");
    m.register_rabi = mhz("register_rabi_mhz");
    m.register_detuning = mhz("register_detuning_mhz");
    m.gamma_3s1 = mhz("gamma_3s1_mhz");
    m.branch_to_3p1 = j.at("branch_to_3p1").get<double>();
    m.image_duration = j.at("image_duration_us").get<double>();
    for (const auto& lvl : j.at("s1_levels")) {
        m.s1_offsets.push_back(kTwoPi * lvl.at("offset_mhz").get<double>());
        m.s1_weights.push_back(lvl.at("weight").get<double>());
    }
    if (m.s1_offsets.empty()) throw std::invalid_argument("register imaging model needs at least one 3S1 level");
    if (m.branch_to_3p1 < 0.0 || m.branch_to_3p1 > 1.0)
        throw std::invalid_argument("branch_to_3p1 must lie in [0, 1]");
    return m;
}

nlohmann::json RegisterImagingModel::to_json() const {
    nlohmann::json j;
    j["imaging_rabi_mhz"] = imaging_rabi / kTwoPi;
    j["gamma_3p1_mhz"] = gamma_3p1 / kTwoPi;
    j["register_rabi_mhz"] = register_rabi / kTwoPi;
    j["register_detuning_mhz"] = register_detuning / kTwoPi;
    j["gamma_3s1_mhz"] = gamma_3s1 / kTwoPi;
    j["branch_to_3p1"] = branch_to_3p1;
    j["image_duration_us"] = image_duration;
    j["s1_levels"] = nlohmann::json::array();
    for (std::size_t k = 0; k < s1_offsets.size(); ++k)
        j["s1_levels"].push_back({{"offset_mhz", s1_offsets[k] / kTwoPi}, {"weight", s1_weights[k]}});
    return j;
}

LevelSystem RegisterImagingModel::build(double register_offset, double imaging_detuning) const {
    LevelSystem s;
    s.levels.push_back({"1S0", 0.0, false});
    s.levels.push_back({"3P1", 0.0, false});
    const std::size_t first_s = 2;
    for (std::size_t k = 0; k < s1_offsets.size(); ++k)
        s.levels.push_back({"8s3S1_" + std::to_string(k), s1_offsets[k], false});
    const std::size_t sink = s.levels.size();
    s.levels.push_back({"3P0_3P2", 0.0, true});

    s.drives.push_back({0, 1, imaging_rabi, imaging_detuning, 1.0});
    for (std::size_t k = 0; k < s1_offsets.size(); ++k)
        s.drives.push_back({1, first_s + k, register_rabi, register_detuning + register_offset, s1_weights[k]});
    s.decays.push_back({1, 0, gamma_3p1});
    for (std::size_t k = 0; k < s1_offsets.size(); ++k) {
        s.decays.push_back({first_s + k, 1, gamma_3s1 * branch_to_3p1});
        s.decays.push_back({first_s + k, sink, gamma_3s1 * (1.0 - branch_to_3p1)});
    }
    s.check();
    return s;
}

double RegisterImagingModel::perturbative_stark_shift() const {
    double shift = 0.0;
    for (std::size_t k = 0; k < s1_offsets.size(); ++k) {
        const double c = 0.5 * s1_weights[k] * register_rabi;
        shift += c * c / (register_detuning - s1_offsets[k]);
    }
    return shift;
}

}  // namespace zonesim
