#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "awesom/cluster.hpp"
#include "awesom/error.hpp"
#include "awesom/parallel.hpp"
#include "awesom/union_find.hpp"

namespace awesom {

/// One clustering of the shared point set.
struct Realization {
    int id = 0;
    ClusterMap map;
};

/// (realization, cluster) pair identifying a mask. Ordered lexicographically.
struct MaskOwner {
    int realization = 0;
    int cluster = 0;

    friend bool operator==(MaskOwner, MaskOwner) = default;
    friend auto operator<=>(MaskOwner, MaskOwner) = default;
};

/// Membership bitset of one cluster over n points.
class ClusterMask {
public:
    ClusterMask(MaskOwner owner, std::size_t n) : owner_(owner), n_(n), words_((n + 63) / 64, 0) {}

    MaskOwner owner() const noexcept { return owner_; }
    std::size_t size() const noexcept { return n_; }
    std::size_t count() const noexcept { return count_; }

    bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) noexcept {
        std::uint64_t& w = words_[i >> 6];
        const std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (!(w & bit)) {
            w |= bit;
            ++count_;
        }
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

private:
    MaskOwner owner_;
    std::size_t n_ = 0;
    std::size_t count_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Realization-independent thresholds. v_min = 0 selects ceil(R / 2).
struct SceConfig {
    double g_min = 0.6;
    int v_min = 0;

    int effective_v_min(std::size_t realizations) const {
        return v_min > 0 ? v_min : static_cast<int>((realizations + 1) / 2);
    }

    void validate() const {
        if (!(g_min >= 0.0 && g_min <= 1.0)) throw config_error("g_min must lie in [0, 1]");
        if (v_min < 0) throw config_error("v_min must be >= 1 (or 0 for the default)");
    }
};

struct SimilarityEdge {
    MaskOwner a;
    MaskOwner b;
    double g = 0.0;
};

struct SimilarityGraph {
    std::vector<SimilarityEdge> edges;
    std::uint64_t comparisons = 0;
};

struct GroupAssignment {
    std::vector<int> group;  // parallel to the mask list
    int n_groups = 0;
};

/// votes[i * n_groups + k] = member masks of group k covering point i.
struct StackedVotes {
    std::size_t n = 0;
    int n_groups = 0;
    std::vector<std::uint16_t> votes;

    std::uint16_t operator()(std::size_t i, int k) const {
        return votes[i * static_cast<std::size_t>(n_groups) + static_cast<std::size_t>(k)];
    }
};

struct FinalMap {
    std::vector<int> labels;  // -1 where no group reaches v_min
    std::vector<int> strengths;
    int n_groups = 0;

    std::size_t unassigned() const {
        return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), -1));
    }
};

/// One mask per cluster id present, in increasing id order.
inline std::vector<ClusterMask> masks_from_map(const Realization& real) {
    const auto& labels = real.map.labels;
    if (labels.empty()) throw config_error("realization " + std::to_string(real.id) + " is empty");
    int max_label = -1;
    for (int l : labels) {
        if (l < 0) throw config_error("realization " + std::to_string(real.id) + " contains unassigned points");
        max_label = std::max(max_label, l);
    }
    std::vector<int> slot(static_cast<std::size_t>(max_label + 1), -1);
    for (int l : labels) slot[static_cast<std::size_t>(l)] = 0;
    std::vector<ClusterMask> masks;
    for (int l = 0; l <= max_label; ++l)
        if (slot[static_cast<std::size_t>(l)] == 0) {
            slot[static_cast<std::size_t>(l)] = static_cast<int>(masks.size());
            masks.emplace_back(MaskOwner{real.id, l}, labels.size());
        }
    for (std::size_t i = 0; i < labels.size(); ++i) masks[static_cast<std::size_t>(slot[static_cast<std::size_t>(labels[i])])].set(i);
    return masks;
}

/// Masks of every realization, concatenated in (realization, cluster) order.
inline std::vector<ClusterMask> masks_from_realizations(std::span<const Realization> reals) {
    std::vector<ClusterMask> all;
    for (const auto& r : reals) {
        auto m = masks_from_map(r);
        std::move(m.begin(), m.end(), std::back_inserter(all));
    }
    std::sort(all.begin(), all.end(), [](const ClusterMask& a, const ClusterMask& b) { return a.owner() < b.owner(); });
    return all;
}

inline std::size_t intersection_count(const ClusterMask& a, const ClusterMask& b) noexcept {
    const auto wa = a.words();
    const auto wb = b.words();
    std::size_t s = 0;
    for (std::size_t k = 0; k < wa.size(); ++k) s += static_cast<std::size_t>(std::popcount(wa[k] & wb[k]));
    return s;
}

/// Spatial similarity index: |a and b| / |a or b|.
inline double similarity_g(const ClusterMask& a, const ClusterMask& b) {
    if (a.size() != b.size())
        throw dimension_error("mask lengths differ (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    const std::size_t inter = intersection_count(a, b);
    const std::size_t uni = a.count() + b.count() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// Compares every pair of masks from different realizations and keeps those
/// with g >= g_min. `masks` must be sorted by owner. Edges come back sorted
/// by (a, b) with a < b.
inline SimilarityGraph build_similarity_edges(std::span<const ClusterMask> masks, const SceConfig& cfg) {
    cfg.validate();
    if (masks.empty()) throw config_error("similarity graph needs at least 2 realizations");
    if (masks.front().owner().realization == masks.back().owner().realization)
        throw config_error("similarity graph needs at least 2 realizations");
    for (std::size_t k = 1; k < masks.size(); ++k) {
        if (!(masks[k - 1].owner() < masks[k].owner())) throw config_error("masks must be sorted by owner");
        if (masks[k].size() != masks[0].size()) throw dimension_error("realizations disagree on point count");
    }

    // per first-mask rows keep the output in canonical order without a global sort
    std::vector<std::vector<SimilarityEdge>> rows(masks.size());
    std::vector<std::uint64_t> compared(masks.size(), 0);
    parallel_for(masks.size(), 1, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const int ri = masks[i].owner().realization;
            for (std::size_t j = i + 1; j < masks.size(); ++j) {
                if (masks[j].owner().realization == ri) continue;
                ++compared[i];
                const double g = similarity_g(masks[i], masks[j]);
                if (g >= cfg.g_min) rows[i].push_back({masks[i].owner(), masks[j].owner(), g});
            }
        }
    });
    SimilarityGraph graph;
    for (std::size_t i = 0; i < masks.size(); ++i) {
        graph.comparisons += compared[i];
        graph.edges.insert(graph.edges.end(), rows[i].begin(), rows[i].end());
    }
    return graph;
}

inline SimilarityGraph build_similarity_edges(std::span<const Realization> reals, const SceConfig& cfg) {
    if (reals.size() < 2) throw config_error("similarity graph needs at least 2 realizations");
    const auto masks = masks_from_realizations(reals);
    return build_similarity_edges(masks, cfg);
}

/// Connected components of the similarity graph over all masks. Group ids
/// follow each component's lowest owner; isolated masks are singletons.
inline GroupAssignment group_clusters(std::span<const SimilarityEdge> edges, std::span<const ClusterMask> masks) {
    std::vector<MaskOwner> owners;
    owners.reserve(masks.size());
    for (const auto& m : masks) owners.push_back(m.owner());
    if (!std::is_sorted(owners.begin(), owners.end())) throw config_error("masks must be sorted by owner");
    auto slot = [&](MaskOwner o) {
        const auto it = std::lower_bound(owners.begin(), owners.end(), o);
        if (it == owners.end() || *it != o) throw config_error("edge references an unknown mask");
        return static_cast<std::size_t>(it - owners.begin());
    };
    UnionFind uf(masks.size());
    for (const auto& e : edges) uf.unite(slot(e.a), slot(e.b));
    std::size_t count = 0;
    GroupAssignment out;
    out.group = uf.components(&count);
    out.n_groups = static_cast<int>(count);
    return out;
}

/// votes(i, k) = number of masks in group k with bit i set.
inline StackedVotes stack_votes(const GroupAssignment& groups, std::span<const ClusterMask> masks) {
    if (groups.group.size() != masks.size()) throw dimension_error("group assignment does not cover every mask");
    StackedVotes out;
    out.n_groups = groups.n_groups;
    out.n = masks.empty() ? 0 : masks.front().size();
    out.votes.assign(out.n * static_cast<std::size_t>(out.n_groups), 0);
    const auto g = static_cast<std::size_t>(out.n_groups);
    // chunks are whole 64-bit words, so every mask word is visited once per chunk
    constexpr std::size_t grain = 64 * 256;
    parallel_for(out.n, grain, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = 0; k < masks.size(); ++k) {
            const auto words = masks[k].words();
            std::uint16_t* col = out.votes.data() + static_cast<std::size_t>(groups.group[k]);
            for (std::size_t wi = b / 64; wi < (e + 63) / 64; ++wi) {
                std::uint64_t w = words[wi];
                while (w) {
                    const std::size_t i = wi * 64 + static_cast<std::size_t>(std::countr_zero(w));
                    w &= w - 1;
                    ++col[i * g];
                }
            }
        }
    });
    return out;
}

/// Winning group per point when its vote count reaches v_min; ties go to the lowest group id.
inline FinalMap assign_final(const StackedVotes& votes, int v_min) {
    if (v_min < 1) throw config_error("v_min must be >= 1");
    FinalMap out;
    out.n_groups = votes.n_groups;
    out.labels.assign(votes.n, -1);
    out.strengths.assign(votes.n, 0);
    parallel_for(votes.n, kRowGrain, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            int best = -1;
            int best_votes = 0;
            for (int k = 0; k < votes.n_groups; ++k)
                if (votes(i, k) > best_votes) {
                    best_votes = votes(i, k);
                    best = k;
                }
            if (best >= 0 && best_votes >= v_min) {
                out.labels[i] = best;
                out.strengths[i] = best_votes;
            }
        }
    });
    return out;
}

struct SceResult {
    std::vector<ClusterMask> masks;
    SimilarityGraph graph;
    GroupAssignment groups;
    FinalMap final_map;
    int v_min = 0;
};

/// Full stack: masks, similarity edges, grouping, votes, final assignment.
inline SceResult run_sce(std::span<const Realization> reals, const SceConfig& cfg) {
    cfg.validate();
    if (reals.size() < 2) throw config_error("SCE needs at least 2 realizations");
    for (const auto& r : reals)
        if (r.map.size() != reals.front().map.size()) throw dimension_error("realizations disagree on point count");
    if (reals.size() > 65535) throw config_error("too many realizations");
    SceResult res;
    res.masks = masks_from_realizations(reals);
    res.graph = build_similarity_edges(res.masks, cfg);
    res.groups = group_clusters(res.graph.edges, res.masks);
    res.v_min = cfg.effective_v_min(reals.size());
    res.final_map = assign_final(stack_votes(res.groups, res.masks), res.v_min);
    return res;
}

}  // namespace awesom
