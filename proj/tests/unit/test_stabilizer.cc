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


#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <map>

#include "zonesim/pauli_frame.h"
#include "zonesim/rng.h"
#include "zonesim/statevector.h"
#include "zonesim/tableau.h"

namespace zonesim {
namespace {

using cd = std::complex<double>;

TEST(Tableau, SxMapsZToMinusY) {
    Tableau t(1);
    EXPECT_EQ(t.expectation(PauliString::parse("Z")), 1);
    t.sx(0);
    EXPECT_EQ(t.expectation(PauliString::parse("Y")), -1);
    EXPECT_EQ(t.expectation(PauliString::parse("Z")), 0);
}

TEST(Tableau, CzOnPlusPlus) {
    Tableau t(2);
    t.h(0);
    t.h(1);
    t.cz(0, 1);
    EXPECT_EQ(t.expectation(PauliString::parse("XZ")), 1);
    EXPECT_EQ(t.expectation(PauliString::parse("ZX")), 1);
    EXPECT_EQ(t.expectation(PauliString::parse("XX")), 0);
}

TEST(Tableau, BellPairCorrelators) {
    Tableau t(2);
    t.h(0);
    t.cx(0, 1);
    EXPECT_EQ(t.expectation(PauliString::parse("XX")), 1);
    EXPECT_EQ(t.expectation(PauliString::parse("ZZ")), 1);
    EXPECT_EQ(t.expectation(PauliString::parse("YY")), -1);
    EXPECT_EQ(t.expectation(PauliString::parse("-YY")), 1);
}

TEST(Tableau, MeasurementDeterminism) {
    Tableau t(2);
    CounterRng rng(3);
    t.x(1);
    auto m0 = t.measure_z(0, rng);
    auto m1 = t.measure_z(1, rng);
    EXPECT_TRUE(m0.deterministic && m1.deterministic);
    EXPECT_FALSE(m0.value);
    EXPECT_TRUE(m1.value);
    t.h(0);
    auto r = t.measure_z_forced(0, true);
    EXPECT_FALSE(r.deterministic);
    EXPECT_TRUE(r.value);
    EXPECT_EQ(t.expectation(PauliString::parse("ZI")), -1);
    t.reset(0, rng);
    EXPECT_EQ(t.expectation(PauliString::parse("ZI")), 1);
}

TEST(Tableau, SymplecticAfterRandomCliffords) {
    // 70 qubits crosses a word boundary in the bit-packed rows.
    const std::size_t n = 70;
    Tableau t(n);
    CounterRng rng(42);
    for (int i = 0; i < 3000; ++i) {
        const std::size_t a = rng.below(n);
        std::size_t b = rng.below(n - 1);
        if (b >= a) ++b;
        switch (rng.below(7)) {
            case 0: t.h(a); break;
            case 1: t.s(a); break;
            case 2: t.sx(a); break;
            case 3: t.cz(a, b); break;
            case 4: t.cx(a, b); break;
            case 5: t.measure_z(a, rng); break;
            default: t.rz_quarter(a, static_cast<int>(rng.below(4))); break;
        }
        if (i % 100 == 0) ASSERT_TRUE(t.symplectic_ok()) << "after op " << i;
    }
    EXPECT_TRUE(t.symplectic_ok());
}

TEST(PauliString, ParseAndPrint) {
    const auto p = PauliString::parse("-XYZI");
    EXPECT_TRUE(p.negative);
    EXPECT_EQ(p.size(), 4U);
    EXPECT_EQ(p.at(1), 'Y');
    EXPECT_EQ(PauliString::parse(p.to_string()), p);
    EXPECT_THROW(PauliString::parse("XQ"), std::invalid_argument);
}

TEST(StateVector, BellAmplitudes) {
    StateVector sv(2);
    sv.h(0);
    sv.cx(0, 1);
    const auto& a = sv.amplitudes();
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(a[0] - cd(r, 0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(a[1]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(a[2]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(a[3] - cd(r, 0)), 0.0, 1e-12);
    EXPECT_THROW(StateVector(7), std::invalid_argument);
}

// <psi| P |psi> on a dense state, independent of the tableau code.
double pauli_expectation(const std::vector<cd>& amp, const PauliString& p) {
    std::size_t xmask = 0;
    for (std::size_t q = 0; q < p.size(); ++q) {
        if (p.x[q]) xmask |= std::size_t{1} << q;
    }
    cd acc = 0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        cd phase = 1;
        for (std::size_t q = 0; q < p.size(); ++q) {
            const bool bit = (i >> q) & 1U;
            if (p.z[q] && bit) phase = -phase;
            if (p.x[q] && p.z[q]) phase *= cd(0, 1);  // Y = i X Z
        }
        // P|i> = phase |i ^ xmask>
        acc += std::conj(amp[i ^ xmask]) * phase * amp[i];
    }
    return (p.negative ? -1.0 : 1.0) * acc.real();
}

struct Gate {
    int kind;
    std::size_t a, b;
};

std::vector<Gate> random_gates(CounterRng& rng, std::size_t n, int count) {
    std::vector<Gate> out;
    for (int i = 0; i < count; ++i) {
        const std::size_t a = rng.below(n);
        std::size_t b = rng.below(n - 1);
        if (b >= a) ++b;
        out.push_back({static_cast<int>(rng.below(5)), a, b});
    }
    return out;
}

template <class S>
void apply(S& s, const Gate& g) {
    switch (g.kind) {
        case 0: s.h(g.a); break;
        case 1: s.sx(g.a); break;
        case 2: s.rz_quarter(g.a, 1); break;
        case 3: s.cz(g.a, g.b); break;
        default: s.cx(g.a, g.b); break;
    }
}

TEST(StateVector, StabilizersAgreeWithTableau) {
    CounterRng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.below(5);
        Tableau t(n);
        StateVector sv(n);
        for (const Gate& g : random_gates(rng, n, 30)) {
            apply(t, g);
            apply(sv, g);
        }
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(pauli_expectation(sv.amplitudes(), t.stabilizer(i)), 1.0, 1e-10);
        }
    }
}

// Tableau samples against the exact Born probabilities of the dense state.
TEST(StateVector, SamplingMatchesTableauDistribution) {
    CounterRng rng(11);
    const std::size_t n = 4;
    const int shots = 10000;
    for (int trial = 0; trial < 5; ++trial) {
        const auto gates = random_gates(rng, n, 25);
        Tableau prepared(n);
        StateVector sv(n);
        for (const Gate& g : gates) {
            apply(prepared, g);
            apply(sv, g);
        }
        std::map<unsigned, int> counts;
        for (int s = 0; s < shots; ++s) {
            Tableau t = prepared;
            CounterRng r(derive_seed(1, s));
            unsigned k = 0;
            for (std::size_t q = 0; q < n; ++q) k |= static_cast<unsigned>(t.measure_z(q, r).value) << q;
            ++counts[k];
        }
        double chi2 = 0;
        int support = 0;
        for (unsigned k = 0; k < (1U << n); ++k) {
            const double p = std::norm(sv.amplitudes()[k]);
            if (p < 1e-12) {
                EXPECT_EQ(counts[k], 0) << "impossible outcome " << k << " in circuit " << trial;
                continue;
            }
            ++support;
            const double e = p * shots;
            chi2 += (counts[k] - e) * (counts[k] - e) / e;
        }
        if (support > 1) {
            const double pval =
                boost::math::cdf(boost::math::complement(boost::math::chi_squared(support - 1), chi2));
            EXPECT_GT(pval, 1e-4) << "circuit " << trial;
        }
    }
}

TEST(StateVector, SameSeedGivesSameOutcomesAsTableau) {
    CounterRng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(4);
        const auto gates = random_gates(rng, n, 20);
        Tableau t(n);
        StateVector sv(n);
        for (const Gate& g : gates) {
            apply(t, g);
            apply(sv, g);
        }
        CounterRng r1(trial), r2(trial);
        for (std::size_t q = 0; q < n; ++q) ASSERT_EQ(t.measure_z(q, r1).value, sv.measure_z(q, r2));
    }
}

TEST(PauliFrame, ConjugationRules) {
    PauliFrame f(2);
    f.inject(0, 'X');
    f.h(0);
    EXPECT_FALSE(f.x(0));
    EXPECT_TRUE(f.z(0));
    f.h(0);
    f.cz(0, 1);
    EXPECT_TRUE(f.x(0));
    EXPECT_TRUE(f.z(1));
    EXPECT_FALSE(f.x(1));
    f.clear(0);
    f.clear(1);
    EXPECT_TRUE(f.empty());
    f.inject(1, 'Z');
    f.sx(1);  // Z -> Y up to sign
    EXPECT_TRUE(f.x(1) && f.z(1));
    f.inject(1, 'Y');
    EXPECT_TRUE(f.empty());
}

TEST(PauliFrame, MatchesTableauConjugation) {
    // A Pauli error E before gate G equals G E G^dag after it; check the
    // frame against the tableau by acting on an eigenstate.
    CounterRng rng(9);
    const char letters[3] = {'X', 'Y', 'Z'};
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3;
        const auto gates = random_gates(rng, n, 10);
        const std::size_t q = rng.below(n);
        const char p = letters[rng.below(3)];
        // Reference: U |0> versus U E |0>, compared through the stabilizers of U|0>.
        Tableau clean(n), faulty(n);
        faulty.apply_pauli(q, p);
        PauliFrame frame(n);
        frame.inject(q, p);
        for (const Gate& g : gates) {
            apply(clean, g);
            apply(faulty, g);
            switch (g.kind) {
                case 0: frame.h(g.a); break;
                case 1: frame.sx(g.a); break;
                case 2: frame.s(g.a); break;
                case 3: frame.cz(g.a, g.b); break;
                default:
                    frame.h(g.b);
                    frame.cz(g.a, g.b);
                    frame.h(g.b);
                    break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            PauliString s = clean.stabilizer(i);
            // The frame flips the sign of s iff it anticommutes with it.
            int anti = 0;
            for (std::size_t k = 0; k < n; ++k) anti ^= (frame.x(k) & s.z[k]) ^ (frame.z(k) & s.x[k]);
            EXPECT_EQ(faulty.expectation(s), anti ? -1 : 1);
        }
    }
}

}  // namespace
}  // namespace zonesim
