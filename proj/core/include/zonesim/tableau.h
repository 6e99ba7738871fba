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

#ifndef ZONESIM_TABLEAU_H
#define ZONESIM_TABLEAU_H

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zonesim/rng.h"

namespace zonesim {

/// Dense n-qubit Pauli operator with a sign (phase restricted to +-1).
struct PauliString {
    std::vector<uint8_t> x;
    std::vector<uint8_t> z;
    bool negative = false;

    PauliString() = default;
    explicit PauliString(std::size_t n) : x(n, 0), z(n, 0) {}

    /// Parses e.g. "+XZI", "-YY" or "ZZ". Qubit 0 is the leftmost character.
    static PauliString parse(std::string_view text);
    std::string to_string() const;
    std::size_t size() const { return x.size(); }
    char at(std::size_t q) const;
    void set(std::size_t q, char p);

    friend bool operator==(const PauliString&, const PauliString&) = default;
};

/// Measurement outcome of a Z-basis projection.
struct ZMeasurement {
    bool value = false;
    bool deterministic = false;
};

/// Aaronson-Gottesman stabilizer tableau with bit-packed rows.
///
/// Rows [0, n) are destabilizers and rows [n, 2n) stabilizers. The initial
/// state is |0...0>.
class Tableau {
   public:
    explicit Tableau(std::size_t n);

    std::size_t num_qubits() const { return n_; }

    void h(std::size_t q);
    void s(std::size_t q);
    void s_dag(std::size_t q);
    void sx(std::size_t q);
    void sx_dag(std::size_t q);
    void x(std::size_t q);
    void y(std::size_t q);
    void z(std::size_t q);
    void cz(std::size_t a, std::size_t b);
    void cx(std::size_t control, std::size_t target);
    /// RZ(k pi/2), equal to S^k up to global phase.
    void rz_quarter(std::size_t q, int k);
    void apply_pauli(std::size_t q, char p);

    /// Z-basis measurement; a random outcome draws one value from `rng`.
    ZMeasurement measure_z(std::size_t q, CounterRng& rng);
    /// Same, with the outcome of a random measurement fixed to `forced`.
    ZMeasurement measure_z_forced(std::size_t q, bool forced);
    /// Returns +1 or -1 if `p` has a definite value, 0 otherwise. Does not disturb the state.
    int expectation(const PauliString& p) const;
    /// Measures and flips to |0>.
    void reset(std::size_t q, CounterRng& rng);

    PauliString stabilizer(std::size_t i) const { return row(n_ + i); }
    PauliString destabilizer(std::size_t i) const { return row(i); }

    /// True iff the rows satisfy the canonical symplectic commutation relations.
    bool symplectic_ok() const;

   private:
    std::size_t n_;
    std::size_t words_;
    std::vector<uint64_t> x_;  // (2n+1) rows x words_, last row is scratch
    std::vector<uint64_t> z_;
    std::vector<uint8_t> r_;

    uint64_t* xr(std::size_t row) { return x_.data() + row * words_; }
    uint64_t* zr(std::size_t row) { return z_.data() + row * words_; }
    const uint64_t* xr(std::size_t row) const { return x_.data() + row * words_; }
    const uint64_t* zr(std::size_t row) const { return z_.data() + row * words_; }
    bool xbit(std::size_t row, std::size_t q) const { return (xr(row)[q >> 6] >> (q & 63)) & 1U; }
    bool zbit(std::size_t row, std::size_t q) const { return (zr(row)[q >> 6] >> (q & 63)) & 1U; }

    void check(std::size_t q) const;
    /// row h <- row h * row i, tracking the sign.
    void rowmult(std::size_t h, std::size_t i);
    void rowcopy(std::size_t dst, std::size_t src);
    bool anticommute(std::size_t a, std::size_t b) const;
    PauliString row(std::size_t i) const;
    ZMeasurement measure_impl(std::size_t q, bool random_value);
};

}  // namespace zonesim

#endif  // ZONESIM_TABLEAU_H
