#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "patterns.hpp"
#include "solver.hpp"

namespace proscribe {

/// Vertex i stands for ground.elements()[i]; edges are the family's instances.
inline ForbiddenHypergraph family_hypergraph(const PatternFamily& family, const NaturalSet& ground,
                                             CapForest caps = {}) {
    const auto& xs = ground.elements();
    std::vector<std::vector<std::uint32_t>> edges;
    for (const auto& inst : detail::raw_instances(family, ground)) {
        std::vector<std::uint32_t> e;
        for (auto x : inst)
            e.push_back(static_cast<std::uint32_t>(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin()));
        edges.push_back(std::move(e));
    }
    return ForbiddenHypergraph(xs.size(), std::move(edges), std::move(caps));
}

/// Maximum free subset of `ground`; the witness is mapped back to naturals.
struct FamilySolve {
    SolveResult result;
    NaturalSet witness;
};

inline FamilySolve solve_family(const PatternFamily& family, const NaturalSet& ground,
                                const SolveOptions& opt = {}, bool oracle = false) {
    auto h = family_hypergraph(family, ground);
    FamilySolve out;
    out.result = oracle ? exhaustive_max_free(h, opt) : max_free(h, opt);
    std::vector<std::uint64_t> w;
    for (auto v : out.result.witness) w.push_back(ground.elements()[v]);
    out.witness = NaturalSet(std::move(w), ground.ground_max());
    return out;
}

/// Incremental r_k(1), r_k(2), ... Each step starts from the previous optimum
/// (still free one element later) and caps every split [1,a] + [a+1,m] by
/// earlier values.
class RSequence {
public:
    explicit RSequence(unsigned k, SolveOptions opt = {}) : k_(k), opt_(std::move(opt)) {
        if (k < 2) throw std::invalid_argument("r_k needs k >= 2");
        opt_.canonical_witness = false;
    }

    /// r_k(m) for m = 0..size()-1.
    const std::vector<std::size_t>& values() const noexcept { return r_; }

    /// Computes and returns the next value.
    std::size_t extend() {
        const auto m = static_cast<std::uint32_t>(r_.size());
        CapForest caps;
        for (std::uint32_t a = 1; a < m; ++a) {
            CapNode left, right, whole;
            for (std::uint32_t v = 0; v < m; ++v) (v < a ? left : right).vertices.push_back(v);
            left.cap = r_[a];
            right.cap = r_[m - a];
            whole.vertices = left.vertices;
            whole.vertices.insert(whole.vertices.end(), right.vertices.begin(), right.vertices.end());
            whole.cap = m;
            whole.children = {caps.nodes.size() + 1, caps.nodes.size() + 2};
            caps.roots.push_back(caps.nodes.size());
            caps.nodes.push_back(std::move(whole));
            caps.nodes.push_back(std::move(left));
            caps.nodes.push_back(std::move(right));
        }
        auto h = family_hypergraph(PatternFamily::ap(k_), NaturalSet::interval(m), std::move(caps));
        SolveOptions o = opt_;
        o.initial = witness_;
        auto res = max_free(h, o);
        if (!res.exact()) throw budget_exceeded("r_k: node budget exceeded at n = " + std::to_string(m));
        r_.push_back(res.optimum);
        witness_ = res.witness;
        return res.optimum;
    }

private:
    unsigned k_;
    SolveOptions opt_;
    std::vector<std::size_t> r_{0};
    std::vector<std::uint32_t> witness_;
};

/// r_k(m) for m = 0..n.
inline std::vector<std::size_t> r_values(unsigned k, std::uint64_t n, const SolveOptions& opt = {}) {
    RSequence seq(k, opt);
    for (std::uint64_t m = 1; m <= n; ++m) seq.extend();
    return seq.values();
}

/// r_k(n): largest subset of [n] with no k-term arithmetic progression.
inline std::size_t r_value(unsigned k, std::uint64_t n, const SolveOptions& opt = {}) {
    return r_values(k, n, opt).back();
}

/// G_family([n]); requires an exact answer.
inline std::size_t g_value(const PatternFamily& family, std::uint64_t n, const SolveOptions& opt = {}) {
    if (n == 0) throw std::invalid_argument("g_value: n must be >= 1");
    if (family.kind == PatternKind::AP) return r_value(family.k, n, opt);
    SolveOptions o = opt;
    o.canonical_witness = false;
    auto res = solve_family(family, NaturalSet::interval(n), o).result;
    if (!res.exact()) throw budget_exceeded("g_value: node budget exceeded for " + family.name());
    return res.optimum;
}

}  // namespace proscribe
