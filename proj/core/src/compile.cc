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

#include "zonesim/compile.h"

#include <stdexcept>
#include <string>

namespace zonesim {

namespace {

void require(const Circuit& circuit, uint32_t q) {
    if (!circuit.has_qubit(q)) {
        throw std::invalid_argument("unknown qubit " + std::to_string(q));
    }
}

}  // namespace

std::vector<NativeOp> compile_h(uint32_t q) { return {make_rz(q, 1), make_sx(q), make_rz(q, 1)}; }

std::vector<NativeOp> compile_h(const Circuit& circuit, uint32_t q) {
    require(circuit, q);
    return compile_h(q);
}

std::vector<NativeOp> compile_cnot(uint32_t control, uint32_t target) {
    if (control == target) {
        throw std::invalid_argument("CNOT control and target are both qubit " + std::to_string(control));
    }
    std::vector<NativeOp> ops = compile_h(target);
    ops.push_back(make_cz(control, target));
    append(ops, compile_h(target));
    return ops;
}

std::vector<NativeOp> compile_cnot(const Circuit& circuit, uint32_t control, uint32_t target) {
    require(circuit, control);
    require(circuit, target);
    return compile_cnot(control, target);
}

std::vector<NativeOp> compile_swap(uint32_t a, uint32_t b) {
    std::vector<NativeOp> ops = compile_cnot(a, b);
    append(ops, compile_cnot(b, a));
    append(ops, compile_cnot(a, b));
    return ops;
}

void append(std::vector<NativeOp>& out, const std::vector<NativeOp>& ops) {
    out.insert(out.end(), ops.begin(), ops.end());
}

}  // namespace zonesim
