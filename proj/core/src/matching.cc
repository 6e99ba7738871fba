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

#include "zonesim/matching.h"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace zonesim {

namespace {

// Port of the classic primal-dual blossom formulation: labels 1 (S) and
// 2 (T), endpoints p with edge k = p / 2 and endpoint[p ^ 1] the other side.
class Blossom {
   public:
    Blossom(const std::vector<WeightedEdge>& edges, bool max_cardinality)
        : edges_(edges), maxcard_(max_cardinality) {
        for (auto& e : edges_) {
            if (e.u < 0 || e.v < 0 || e.u == e.v) throw std::invalid_argument("bad matching edge");
            n_ = std::max({n_, e.u + 1, e.v + 1});
            e.weight *= 2;  // keeps every dual update integral
        }
        const int m = static_cast<int>(edges_.size());
        int64_t maxw = 0;
        for (const auto& e : edges_) maxw = std::max(maxw, e.weight);
        endpoint_.resize(2 * m);
        for (int p = 0; p < 2 * m; ++p) endpoint_[p] = p % 2 == 0 ? edges_[p / 2].u : edges_[p / 2].v;
        neighbend_.assign(n_, {});
        for (int k = 0; k < m; ++k) {
            neighbend_[edges_[k].u].push_back(2 * k + 1);
            neighbend_[edges_[k].v].push_back(2 * k);
        }
        mate_.assign(n_, -1);
        label_.assign(2 * n_, 0);
        labelend_.assign(2 * n_, -1);
        inblossom_.resize(n_);
        for (int i = 0; i < n_; ++i) inblossom_[i] = i;
        blossomparent_.assign(2 * n_, -1);
        childs_.assign(2 * n_, {});
        endps_.assign(2 * n_, {});
        blossombase_.assign(2 * n_, -1);
        for (int i = 0; i < n_; ++i) blossombase_[i] = i;
        bestedge_.assign(2 * n_, -1);
        bestedges_.assign(2 * n_, {});
        has_bestedges_.assign(2 * n_, 0);
        for (int b = 2 * n_ - 1; b >= n_; --b) unused_.push_back(b);
        std::reverse(unused_.begin(), unused_.end());
        dual_.assign(2 * n_, 0);
        for (int i = 0; i < n_; ++i) dual_[i] = maxw;
        allowedge_.assign(m, 0);
    }

    std::vector<int> solve();

   private:
    std::vector<WeightedEdge> edges_;
    bool maxcard_;
    int n_ = 0;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_, label_, labelend_, inblossom_, blossomparent_;
    std::vector<std::vector<int>> childs_, endps_;
    std::vector<int> blossombase_, bestedge_;
    std::vector<std::vector<int>> bestedges_;
    std::vector<uint8_t> has_bestedges_;
    std::vector<int> unused_;
    std::vector<int64_t> dual_;
    std::vector<uint8_t> allowedge_;
    std::vector<int> queue_;

    int64_t slack(int k) const { return dual_[edges_[k].u] + dual_[edges_[k].v] - 2 * edges_[k].weight; }

    void leaves(int b, std::vector<int>& out) const {
        if (b < n_) {
            out.push_back(b);
            return;
        }
        for (int t : childs_[b]) leaves(t, out);
    }
    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        leaves(b, out);
        return out;
    }
    static int wrap(int j, std::size_t len) {
        const int l = static_cast<int>(len);
        return ((j % l) + l) % l;
    }

    void assign_label(int w, int t, int p);
    int scan_blossom(int v, int w);
    void add_blossom(int base, int k);
    void expand_blossom(int b, bool endstage);
    void augment_blossom(int b, int v);
    void augment_matching(int k);
};

void Blossom::assign_label(int w, int t, int p) {
    const int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
        leaves(b, queue_);
    } else {
        const int base = blossombase_[b];
        assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
}

int Blossom::scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
        int b = inblossom_[v];
        if (label_[b] & 4) {
            base = blossombase_[b];
            break;
        }
        path.push_back(b);
        label_[b] = 5;
        if (labelend_[b] == -1) {
            v = -1;
        } else {
            v = endpoint_[labelend_[b]];
            b = inblossom_[v];
            v = endpoint_[labelend_[b]];
        }
        if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] = 1;
    return base;
}

void Blossom::add_blossom(int base, int k) {
    int v = edges_[k].u;
    int w = edges_[k].v;
    const int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    const int b = unused_.back();
    unused_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    auto& path = childs_[b];
    auto& endps = endps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
        blossomparent_[bv] = b;
        path.push_back(bv);
        endps.push_back(labelend_[bv]);
        v = endpoint_[labelend_[bv]];
        bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
        blossomparent_[bw] = b;
        path.push_back(bw);
        endps.push_back(labelend_[bw] ^ 1);
        w = endpoint_[labelend_[bw]];
        bw = inblossom_[w];
    }
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dual_[b] = 0;
    for (int leaf : leaves(b)) {
        if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
        inblossom_[leaf] = b;
    }
    std::vector<int> bestedgeto(2 * n_, -1);
    for (int sub : path) {
        std::vector<std::vector<int>> nblists;
        if (!has_bestedges_[sub]) {
            for (int leaf : leaves(sub)) {
                std::vector<int> l;
                for (int p : neighbend_[leaf]) l.push_back(p / 2);
                nblists.push_back(std::move(l));
            }
        } else {
            nblists.push_back(bestedges_[sub]);
        }
        for (const auto& nblist : nblists) {
            for (int kk : nblist) {
                int i = edges_[kk].u;
                int j = edges_[kk].v;
                if (inblossom_[j] == b) std::swap(i, j);
                const int bj = inblossom_[j];
                if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                    bestedgeto[bj] = kk;
                }
            }
        }
        bestedges_[sub].clear();
        has_bestedges_[sub] = 0;
        bestedge_[sub] = -1;
    }
    bestedges_[b].clear();
    for (int kk : bestedgeto) {
        if (kk != -1) bestedges_[b].push_back(kk);
    }
    has_bestedges_[b] = 1;
    bestedge_[b] = -1;
    for (int kk : bestedges_[b]) {
        if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
    }
}

void Blossom::expand_blossom(int b, bool endstage) {
    const std::vector<int> children = childs_[b];
    for (int s : children) {
        blossomparent_[s] = -1;
        if (s < n_) {
            inblossom_[s] = s;
        } else if (endstage && dual_[s] == 0) {
            expand_blossom(s, endstage);
        } else {
            for (int leaf : leaves(s)) inblossom_[leaf] = s;
        }
    }
    if (!endstage && label_[b] == 2) {
        const auto& ch = childs_[b];
        const auto& ep = endps_[b];
        const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
        int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
        int jstep;
        int endptrick;
        if (j & 1) {
            j -= static_cast<int>(ch.size());
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        int p = labelend_[b];
        while (j != 0) {
            label_[endpoint_[p ^ 1]] = 0;
            label_[endpoint_[ep[wrap(j - endptrick, ep.size())] ^ endptrick ^ 1]] = 0;
            assign_label(endpoint_[p ^ 1], 2, p);
            allowedge_[ep[wrap(j - endptrick, ep.size())] / 2] = 1;
            j += jstep;
            p = ep[wrap(j - endptrick, ep.size())] ^ endptrick;
            allowedge_[p / 2] = 1;
            j += jstep;
        }
        int bv = ch[wrap(j, ch.size())];
        label_[endpoint_[p ^ 1]] = label_[bv] = 2;
        labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (ch[wrap(j, ch.size())] != entrychild) {
            bv = ch[wrap(j, ch.size())];
            if (label_[bv] == 1) {
                j += jstep;
                continue;
            }
            int v = -1;
            for (int leaf : leaves(bv)) {
                v = leaf;
                if (label_[leaf] != 0) break;
            }
            if (v >= 0 && label_[v] != 0) {
                label_[v] = 0;
                label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
                assign_label(v, 2, labelend_[v]);
            }
            j += jstep;
        }
    }
    label_[b] = labelend_[b] = -1;
    childs_[b].clear();
    endps_[b].clear();
    blossombase_[b] = -1;
    bestedges_[b].clear();
    has_bestedges_[b] = 0;
    bestedge_[b] = -1;
    unused_.push_back(b);
}

void Blossom::augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= n_) augment_blossom(t, v);
    auto& ch = childs_[b];
    auto& ep = endps_[b];
    const int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
    int j = i;
    int jstep;
    int endptrick;
    if (i & 1) {
        j -= static_cast<int>(ch.size());
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    while (j != 0) {
        j += jstep;
        t = ch[wrap(j, ch.size())];
        const int p = ep[wrap(j - endptrick, ep.size())] ^ endptrick;
        if (t >= n_) augment_blossom(t, endpoint_[p]);
        j += jstep;
        t = ch[wrap(j, ch.size())];
        if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
        mate_[endpoint_[p]] = p ^ 1;
        mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(ep.begin(), ep.begin() + i, ep.end());
    blossombase_[b] = blossombase_[ch[0]];
}

void Blossom::augment_matching(int k) {
    const int v = edges_[k].u;
    const int w = edges_[k].v;
    for (auto [s, p] : {std::pair{v, 2 * k + 1}, std::pair{w, 2 * k}}) {
        while (true) {
            const int bs = inblossom_[s];
            if (bs >= n_) augment_blossom(bs, s);
            mate_[s] = p;
            if (labelend_[bs] == -1) break;
            const int t = endpoint_[labelend_[bs]];
            const int bt = inblossom_[t];
            s = endpoint_[labelend_[bt]];
            const int j = endpoint_[labelend_[bt] ^ 1];
            if (bt >= n_) augment_blossom(bt, j);
            mate_[j] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
}

std::vector<int> Blossom::solve() {
    if (edges_.empty()) return std::vector<int>(static_cast<std::size_t>(n_), -1);
    const int m = static_cast<int>(edges_.size());
    for (int stage = 0; stage < n_; ++stage) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (int b = n_; b < 2 * n_; ++b) {
            bestedges_[b].clear();
            has_bestedges_[b] = 0;
        }
        std::fill(allowedge_.begin(), allowedge_.end(), 0);
        queue_.clear();
        for (int v = 0; v < n_; ++v) {
            if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
        }
        bool augmented = false;
        while (true) {
            while (!queue_.empty() && !augmented) {
                const int v = queue_.back();
                queue_.pop_back();
                for (int p : neighbend_[v]) {
                    const int k = p / 2;
                    const int w = endpoint_[p];
                    if (inblossom_[v] == inblossom_[w]) continue;
                    int64_t kslack = 0;
                    if (!allowedge_[k]) {
                        kslack = slack(k);
                        if (kslack <= 0) allowedge_[k] = 1;
                    }
                    if (allowedge_[k]) {
                        if (label_[inblossom_[w]] == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label_[inblossom_[w]] == 1) {
                            const int base = scan_blossom(v, w);
                            if (base >= 0) {
                                add_blossom(base, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label_[w] == 0) {
                            label_[w] = 2;
                            labelend_[w] = p ^ 1;
                        }
                    } else if (label_[inblossom_[w]] == 1) {
                        const int b = inblossom_[v];
                        if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
                    } else if (label_[w] == 0) {
                        if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
                    }
                }
            }
            if (augmented) break;

            int deltatype = -1;
            int64_t delta = 0;
            int deltaedge = -1;
            int deltablossom = -1;
            if (!maxcard_) {
                deltatype = 1;
                delta = *std::min_element(dual_.begin(), dual_.begin() + n_);
            }
            for (int v = 0; v < n_; ++v) {
                if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                    const int64_t d = slack(bestedge_[v]);
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (int b = 0; b < 2 * n_; ++b) {
                if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                    const int64_t kslack = slack(bestedge_[b]);
                    if (kslack % 2 != 0) throw std::logic_error("odd slack between S-blossoms");
                    const int64_t d = kslack / 2;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (int b = n_; b < 2 * n_; ++b) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                    (deltatype == -1 || dual_[b] < delta)) {
                    delta = dual_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                deltatype = 1;
                delta = std::max<int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + n_));
            }
            for (int v = 0; v < n_; ++v) {
                if (label_[inblossom_[v]] == 1) {
                    dual_[v] -= delta;
                } else if (label_[inblossom_[v]] == 2) {
                    dual_[v] += delta;
                }
            }
            for (int b = n_; b < 2 * n_; ++b) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                    if (label_[b] == 1) {
                        dual_[b] += delta;
                    } else if (label_[b] == 2) {
                        dual_[b] -= delta;
                    }
                }
            }
            if (deltatype == 1) break;
            if (deltatype == 2) {
                allowedge_[deltaedge] = 1;
                int i = edges_[deltaedge].u;
                if (label_[inblossom_[i]] == 0) i = edges_[deltaedge].v;
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[deltaedge] = 1;
                queue_.push_back(edges_[deltaedge].u);
            } else {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented) break;
        for (int b = n_; b < 2 * n_; ++b) {
            if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) {
                expand_blossom(b, true);
            }
        }
    }
    (void)m;
    std::vector<int> out(static_cast<std::size_t>(n_), -1);
    for (int v = 0; v < n_; ++v) {
        if (mate_[v] >= 0) out[v] = endpoint_[mate_[v]];
    }
    return out;
}

void check_square(const std::vector<std::vector<int64_t>>& cost) {
    for (const auto& row : cost) {
        if (row.size() != cost.size()) throw std::invalid_argument("cost matrix must be square");
    }
    if (cost.size() % 2 != 0) throw std::invalid_argument("perfect matching needs an even node count");
}

}  // namespace

std::vector<int> max_weight_matching(const std::vector<WeightedEdge>& edges, bool max_cardinality) {
    return Blossom(edges, max_cardinality).solve();
}

PerfectMatching min_cost_perfect_matching(const std::vector<std::vector<int64_t>>& cost) {
    check_square(cost);
    const int n = static_cast<int>(cost.size());
    PerfectMatching out;
    if (n == 0) return out;
    int64_t maxc = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (cost[i][j] != kNoEdge) {
                if (cost[i][j] < 0) throw std::invalid_argument("matching costs must be non-negative");
                maxc = std::max(maxc, cost[i][j]);
            }
        }
    }
    if (maxc > (int64_t{1} << 40)) throw std::invalid_argument("matching costs too large");
    std::vector<WeightedEdge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (cost[i][j] != kNoEdge) edges.push_back({i, j, maxc + 1 - cost[i][j]});
        }
    }
    std::vector<int> mate = max_weight_matching(edges, true);
    mate.resize(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        if (mate[i] < 0) throw std::runtime_error("graph has no perfect matching");
        if (i < mate[i]) out.cost += cost[i][mate[i]];
    }
    out.mate = std::move(mate);
    return out;
}

PerfectMatching brute_force_perfect_matching(const std::vector<std::vector<int64_t>>& cost) {
    check_square(cost);
    const int n = static_cast<int>(cost.size());
    PerfectMatching best;
    best.cost = kNoEdge;
    std::vector<int> mate(static_cast<std::size_t>(n), -1);
    std::function<void(int64_t)> rec = [&](int64_t acc) {
        int i = 0;
        while (i < n && mate[i] >= 0) ++i;
        if (i == n) {
            if (acc < best.cost) {
                best.cost = acc;
                best.mate = mate;
            }
            return;
        }
        for (int j = i + 1; j < n; ++j) {
            if (mate[j] >= 0 || cost[i][j] == kNoEdge) continue;
            mate[i] = j;
            mate[j] = i;
            rec(acc + cost[i][j]);
            mate[i] = mate[j] = -1;
        }
    };
    rec(0);
    if (n > 0 && best.cost == kNoEdge) throw std::runtime_error("graph has no perfect matching");
    if (n == 0) best.cost = 0;
    return best;
}

}  // namespace zonesim
