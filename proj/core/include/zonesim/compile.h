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

#ifndef ZONESIM_COMPILE_H
#define ZONESIM_COMPILE_H

#include <vector>

#include "zonesim/circuit.h"

namespace zonesim {

/// H = RZ(pi/2) SX RZ(pi/2) up to global phase.
std::vector<NativeOp> compile_h(const Circuit& circuit, uint32_t q);
std::vector<NativeOp> compile_h(uint32_t q);

/// H(t) CZ(c,t) H(t). Throws std::invalid_argument when control == target.
std::vector<NativeOp> compile_cnot(const Circuit& circuit, uint32_t control, uint32_t target);
std::vector<NativeOp> compile_cnot(uint32_t control, uint32_t target);

/// Three alternating CNOTs.
std::vector<NativeOp> compile_swap(uint32_t a, uint32_t b);

/// Appends `ops` to `out`.
void append(std::vector<NativeOp>& out, const std::vector<NativeOp>& ops);

}  // namespace zonesim

#endif  // ZONESIM_COMPILE_H
