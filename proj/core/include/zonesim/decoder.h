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

#ifndef ZONESIM_DECODER_H
#define ZONESIM_DECODER_H

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "zonesim/analysis.h"
#include "zonesim/circuit.h"
#include "zonesim/engine.h"
#include "zonesim/noise_model.h"
#include "zonesim/qec_circuits.h"

namespace zonesim {

struct DetectorRecord {
    int check = 0;
    int cycle = 0;
    uint8_t parity = 0;
    bool loss_touched = false;
    bool randomized = false;
};

struct ExtractedShot {
    std::vector<DetectorRecord> detectors;
    /// Raw observable value with lost bits randomized.
    int observable = 0;
    std::vector<MeasRef> lost;
};

/// Builds detectors from a walking-code shot. LOST bits are replaced by
/// random bits from the shot's decoder stream.
ExtractedShot extract_detectors(const ShotRecord& shot, const RepCodeLayout& layout);

enum class FaultLabel : uint8_t { kSpacelike = 1, kTimelike = 2, kLossCorrelated = 4 };
std::string_view fault_label_name(FaultLabel label);

struct ElementaryFault {
    std::size_t op_index = 0;  // placed before this op
    std::vector<uint32_t> qubits;
    std::string paulis;        // one letter per qubit; 'M' flips the record of op_index
    double p = 0.0;
    FaultLabel label = FaultLabel::kSpacelike;
    /// For loss-correlated faults: the CZ partner whose loss triggers it.
    int64_t lost_partner = -1;
    std::vector<std::size_t> detectors;
    bool flips_observable = false;
    int edge = -1;  // -1: flips no detector
};

struct GraphEdge {
    std::size_t u = 0;
    std::size_t v = 0;  // == boundary() for boundary edges
    double p = 0.0;
    bool flips_observable = false;
    uint8_t labels = 0;  // FaultLabel bits
};

/// Edge weight ln((1 - p) / p), zero for p >= 0.5.
double edge_weight(double p);

/// Weights are quantized to integers in units of 1 / kWeightScale before matching.
inline constexpr double kWeightScale = 1 << 20;
int64_t quantize_weight(double w);

struct LossOverlay {
    /// Edge index -> replacement probability.
    std::map<std::size_t, double> p_override;
    bool empty() const { return p_override.empty(); }
};

class MatchingGraph {
   public:
    std::size_t num_detectors() const { return num_detectors_; }
    std::size_t boundary() const { return num_detectors_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    const std::vector<ElementaryFault>& faults() const { return faults_; }
    const RepCodeLayout& layout() const { return layout_; }
    /// Probability that a fault flips the observable without any detector.
    double undetectable_logical_p() const { return undetectable_p_; }

    double edge_p(std::size_t e, const LossOverlay& overlay) const;
    int64_t edge_cost(std::size_t e, const LossOverlay& overlay) const;

    /// Text dump: one DETECTOR line per node and one EDGE line per edge.
    std::string to_text() const;

   private:
    friend MatchingGraph build_matching_graph(const Circuit&, const NoiseModel&);
    friend LossOverlay apply_loss_edits(const MatchingGraph&, const ExtractedShot&);
    RepCodeLayout layout_;
    std::size_t num_detectors_ = 0;
    std::vector<GraphEdge> edges_;
    std::vector<ElementaryFault> faults_;
    double undetectable_p_ = 0.0;
    std::map<MeasRef, std::size_t> mcm_op_;                  // measurement -> op index
    std::map<uint32_t, std::vector<std::size_t>> reset_ops_;  // qubit -> RESET0 op indices
};

/// Enumerates every elementary fault of the noise model on a walking-code
/// circuit and merges faults with identical detector signatures.
MatchingGraph build_matching_graph(const Circuit& circuit, const NoiseModel& noise);

/// Per-shot weight edits for atom loss.
LossOverlay apply_loss_edits(const MatchingGraph& graph, const ExtractedShot& shot);

struct DecodeResult {
    bool flip = false;
    int64_t weight = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // second may be boundary()
};

DecodeResult decode(const MatchingGraph& graph, const LossOverlay& overlay, const std::vector<std::size_t>& syndrome);

struct ShotDecode {
    bool failure = false;
    bool loss_touched = false;
    std::size_t syndrome_weight = 0;
};

/// Extracts, edits and decodes one shot. `use_loss_edits` = false decodes on
/// the base graph.
ShotDecode decode_shot(const MatchingGraph& graph, const ShotRecord& shot, bool use_loss_edits = true);

RateEstimate logical_failure_rate(const std::vector<ShotDecode>& decoded, double confidence = 0.95);

}  // namespace zonesim

#endif  // ZONESIM_DECODER_H
