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

#include "zonesim/tableau.h"

#include <bit>
#include <stdexcept>

namespace zonesim {

PauliString PauliString::parse(std::string_view text) {
    bool negative = false;
    if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
        negative = text[0] == '-';
        text.remove_prefix(1);
    }
    PauliString p(text.size());
    p.negative = negative;
    for (std::size_t q = 0; q < text.size(); ++q) {
        p.set(q, text[q]);
    }
    return p;
}

std::string PauliString::to_string() const {
    std::string out(1, negative ? '-' : '+');
    for (std::size_t q = 0; q < size(); ++q) {
        out += at(q);
    }
    return out;
}

char PauliString::at(std::size_t q) const {
    static constexpr char kNames[4] = {'I', 'X', 'Z', 'Y'};
    return kNames[x[q] | (z[q] << 1)];
}

void PauliString::set(std::size_t q, char p) {
    switch (p) {
        case 'I':
        case '_':
            x[q] = 0;
            z[q] = 0;
            break;
        case 'X':
            x[q] = 1;
            z[q] = 0;
            break;
        case 'Y':
            x[q] = 1;
            z[q] = 1;
            break;
        case 'Z':
            x[q] = 0;
            z[q] = 1;
            break;
        default:
            throw std::invalid_argument(std::string("bad Pauli character '") + p + "'");
    }
}

Tableau::Tableau(std::size_t n)
    : n_(n), words_((n + 63) / 64), x_((2 * n + 1) * words_, 0), z_((2 * n + 1) * words_, 0), r_(2 * n + 1, 0) {
    for (std::size_t i = 0; i < n; ++i) {
        xr(i)[i >> 6] |= uint64_t{1} << (i & 63);
        zr(n + i)[i >> 6] |= uint64_t{1} << (i & 63);
    }
}

void Tableau::check(std::size_t q) const {
    if (q >= n_) {
        throw std::out_of_range("qubit " + std::to_string(q) + " out of range");
    }
}

void Tableau::h(std::size_t q) {
    check(q);
    const std::size_t w = q >> 6;
    const uint64_t m = uint64_t{1} << (q & 63);
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        uint64_t& xw = xr(i)[w];
        uint64_t& zw = zr(i)[w];
        const bool xb = xw & m;
        const bool zb = zw & m;
        r_[i] ^= static_cast<uint8_t>(xb & zb);
        if (xb != zb) {
            xw ^= m;
            zw ^= m;
        }
    }
}

void Tableau::s(std::size_t q) {
    check(q);
    const std::size_t w = q >> 6;
    const uint64_t m = uint64_t{1} << (q & 63);
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        const bool xb = xr(i)[w] & m;
        const bool zb = zr(i)[w] & m;
        r_[i] ^= static_cast<uint8_t>(xb & zb);
        if (xb) {
            zr(i)[w] ^= m;
        }
    }
}

void Tableau::s_dag(std::size_t q) {
    // S^3
    s(q);
    s(q);
    s(q);
}

void Tableau::sx(std::size_t q) {
    // X -> X, Z -> -Y, Y -> Z
    check(q);
    const std::size_t w = q >> 6;
    const uint64_t m = uint64_t{1} << (q & 63);
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        const bool xb = xr(i)[w] & m;
        const bool zb = zr(i)[w] & m;
        r_[i] ^= static_cast<uint8_t>(zb & !xb);
        if (zb) {
            xr(i)[w] ^= m;
        }
    }
}

void Tableau::sx_dag(std::size_t q) {
    sx(q);
    sx(q);
    sx(q);
}

void Tableau::x(std::size_t q) {
    check(q);
    const std::size_t w = q >> 6;
    const uint64_t m = uint64_t{1} << (q & 63);
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        r_[i] ^= static_cast<uint8_t>((zr(i)[w] & m) != 0);
    }
}

void Tableau::z(std::size_t q) {
    check(q);
    const std::size_t w = q >> 6;
    const uint64_t m = uint64_t{1} << (q & 63);
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        r_[i] ^= static_cast<uint8_t>((xr(i)[w] & m) != 0);
    }
}

void Tableau::y(std::size_t q) {
    check(q);
    const std::size_t w = q >> 6;
    const uint64_t m = uint64_t{1} << (q & 63);
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        r_[i] ^= static_cast<uint8_t>(((xr(i)[w] ^ zr(i)[w]) & m) != 0);
    }
}

void Tableau::cz(std::size_t a, std::size_t b) {
    check(a);
    check(b);
    if (a == b) {
        throw std::invalid_argument("CZ on a single qubit");
    }
    const std::size_t wa = a >> 6, wb = b >> 6;
    const uint64_t ma = uint64_t{1} << (a & 63), mb = uint64_t{1} << (b & 63);
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        const bool xa = xr(i)[wa] & ma;
        const bool xb = xr(i)[wb] & mb;
        const bool za = zr(i)[wa] & ma;
        const bool zb = zr(i)[wb] & mb;
        r_[i] ^= static_cast<uint8_t>(xa & xb & (za ^ zb));
        if (xb) zr(i)[wa] ^= ma;
        if (xa) zr(i)[wb] ^= mb;
    }
}

void Tableau::cx(std::size_t control, std::size_t target) {
    check(control);
    check(target);
    if (control == target) {
        throw std::invalid_argument("CX on a single qubit");
    }
    const std::size_t wc = control >> 6, wt = target >> 6;
    const uint64_t mc = uint64_t{1} << (control & 63), mt = uint64_t{1} << (target & 63);
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        const bool xc = xr(i)[wc] & mc;
        const bool xt = xr(i)[wt] & mt;
        const bool zc = zr(i)[wc] & mc;
        const bool zt = zr(i)[wt] & mt;
        r_[i] ^= static_cast<uint8_t>(xc & zt & !(xt ^ zc));
        if (xc) xr(i)[wt] ^= mt;
        if (zt) zr(i)[wc] ^= mc;
    }
}

void Tableau::rz_quarter(std::size_t q, int k) {
    k = ((k % 4) + 4) % 4;
    if (k == 2) {
        z(q);
        return;
    }
    if (k == 3) {
        s_dag(q);
        return;
    }
    if (k == 1) {
        s(q);
        return;
    }
    check(q);
}

void Tableau::apply_pauli(std::size_t q, char p) {
    switch (p) {
        case 'I':
            check(q);
            return;
        case 'X':
            x(q);
            return;
        case 'Y':
            y(q);
            return;
        case 'Z':
            z(q);
            return;
        default:
            throw std::invalid_argument(std::string("bad Pauli '") + p + "'");
    }
}

void Tableau::rowcopy(std::size_t dst, std::size_t src) {
    for (std::size_t w = 0; w < words_; ++w) {
        xr(dst)[w] = xr(src)[w];
        zr(dst)[w] = zr(src)[w];
    }
    r_[dst] = r_[src];
}

void Tableau::rowmult(std::size_t h, std::size_t i) {
    // Exponent of i accumulated by multiplying P_i into P_h, qubit by qubit.
    int phase = 2 * r_[h] + 2 * r_[i];
    for (std::size_t w = 0; w < words_; ++w) {
        const uint64_t x1 = xr(i)[w], z1 = zr(i)[w];
        const uint64_t x2 = xr(h)[w], z2 = zr(h)[w];
        const uint64_t plus = (x1 & z1 & z2 & ~x2) | (x1 & ~z1 & z2 & x2) | (~x1 & z1 & x2 & ~z2);
        const uint64_t minus = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & z2 & ~x2) | (~x1 & z1 & x2 & z2);
        phase += std::popcount(plus) - std::popcount(minus);
        xr(h)[w] = x1 ^ x2;
        zr(h)[w] = z1 ^ z2;
    }
    phase = ((phase % 4) + 4) % 4;
    r_[h] = static_cast<uint8_t>(phase == 2);
}

bool Tableau::anticommute(std::size_t a, std::size_t b) const {
    int parity = 0;
    for (std::size_t w = 0; w < words_; ++w) {
        parity ^= std::popcount((xr(a)[w] & zr(b)[w]) ^ (zr(a)[w] & xr(b)[w])) & 1;
    }
    return parity != 0;
}

PauliString Tableau::row(std::size_t i) const {
    PauliString p(n_);
    for (std::size_t q = 0; q < n_; ++q) {
        p.x[q] = xbit(i, q);
        p.z[q] = zbit(i, q);
    }
    p.negative = r_[i] != 0;
    return p;
}

ZMeasurement Tableau::measure_impl(std::size_t q, bool random_value) {
    check(q);
    std::size_t p = 2 * n_;
    for (std::size_t i = n_; i < 2 * n_; ++i) {
        if (xbit(i, q)) {
            p = i;
            break;
        }
    }
    if (p < 2 * n_) {
        for (std::size_t i = 0; i < 2 * n_; ++i) {
            if (i != p && xbit(i, q)) {
                rowmult(i, p);
            }
        }
        rowcopy(p - n_, p);
        for (std::size_t w = 0; w < words_; ++w) {
            xr(p)[w] = 0;
            zr(p)[w] = 0;
        }
        zr(p)[q >> 6] |= uint64_t{1} << (q & 63);
        r_[p] = random_value ? 1 : 0;
        return {random_value, false};
    }
    const std::size_t scratch = 2 * n_;
    for (std::size_t w = 0; w < words_; ++w) {
        xr(scratch)[w] = 0;
        zr(scratch)[w] = 0;
    }
    r_[scratch] = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (xbit(i, q)) {
            rowmult(scratch, i + n_);
        }
    }
    return {r_[scratch] != 0, true};
}

ZMeasurement Tableau::measure_z(std::size_t q, CounterRng& rng) {
    check(q);
    for (std::size_t i = n_; i < 2 * n_; ++i) {
        if (xbit(i, q)) {
            return measure_impl(q, (rng() >> 63) != 0);
        }
    }
    return measure_impl(q, false);
}

ZMeasurement Tableau::measure_z_forced(std::size_t q, bool forced) { return measure_impl(q, forced); }

void Tableau::reset(std::size_t q, CounterRng& rng) {
    if (measure_z(q, rng).value) {
        x(q);
    }
}

int Tableau::expectation(const PauliString& p) const {
    if (p.size() != n_) {
        throw std::invalid_argument("Pauli length does not match tableau size");
    }
    auto sym = [&](std::size_t row) {
        int parity = 0;
        for (std::size_t q = 0; q < n_; ++q) {
            parity ^= (xbit(row, q) & p.z[q]) ^ (zbit(row, q) & p.x[q]);
        }
        return parity != 0;
    };
    for (std::size_t i = n_; i < 2 * n_; ++i) {
        if (sym(i)) {
            return 0;
        }
    }
    // p = +-(product of stabilizers whose destabilizer anticommutes with p).
    Tableau tmp = *this;
    const std::size_t scratch = 2 * n_;
    for (std::size_t w = 0; w < words_; ++w) {
        tmp.xr(scratch)[w] = 0;
        tmp.zr(scratch)[w] = 0;
    }
    tmp.r_[scratch] = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (sym(i)) {
            tmp.rowmult(scratch, i + n_);
        }
    }
    return (tmp.r_[scratch] != 0) == p.negative ? 1 : -1;
}

bool Tableau::symplectic_ok() const {
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        for (std::size_t j = i + 1; j < 2 * n_; ++j) {
            const bool expected = j == i + n_;
            if (anticommute(i, j) != expected) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace zonesim
