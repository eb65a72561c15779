#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "numtheory.hpp"
#include "patterns.hpp"
#include "values.hpp"

namespace proscribe {

/// Expansion k: each level-(i+1) cell is a disjoint union of exactly k
/// level-i cells. Growth r: each level-(i+1) cell is a level-i cell plus r
/// elements unseen on levels 1..i.
struct GradingKind {
    enum Tag { EXPANSION, GROWTH } tag = EXPANSION;
    unsigned param = 2;

    static GradingKind expansion(unsigned k) { return {EXPANSION, k}; }
    static GradingKind growth(unsigned r) { return {GROWTH, r}; }

    friend bool operator==(const GradingKind&, const GradingKind&) = default;
};

/// Construction parameters of a cell: elements = scale * base * template.
struct CellMeta {
    std::uint64_t base = 1;
    std::uint64_t scale = 1;
    unsigned depth = 0;
};

struct Cell {
    std::vector<std::uint64_t> elements;  // sorted
    std::size_t level = 0;
    CellMeta meta;
};

struct Grading {
    std::uint64_t n = 0;
    GradingKind kind;
    std::vector<std::vector<Cell>> levels;

    std::size_t depth() const { return levels.empty() ? 0 : levels.size() - 1; }
};

namespace detail {

inline std::vector<Cell> singletons(std::uint64_t n) {
    std::vector<Cell> out;
    out.reserve(n);
    for (std::uint64_t x = 1; x <= n; ++x) out.push_back(Cell{{x}, 0, CellMeta{x, 1, 0}});
    return out;
}

inline bool coprime_to_first(std::uint64_t b, const std::vector<std::uint64_t>& ps) {
    for (auto p : ps)
        if (b % p == 0) return false;
    return true;
}

// Products prod p_i^{e_i} with 0 <= e_i < limit, sorted.
inline std::vector<std::uint64_t> exponent_box(const std::vector<std::uint64_t>& ps, unsigned limit) {
    std::vector<std::uint64_t> out{1};
    for (auto p : ps) {
        std::vector<std::uint64_t> next;
        for (auto x : out) {
            std::uint64_t y = x;
            for (unsigned e = 0; e < limit; ++e) {
                next.push_back(y);
                y *= p;
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline Cell dilate(const std::vector<std::uint64_t>& tmpl, std::uint64_t scale, std::uint64_t base,
                   std::size_t level, unsigned depth) {
    Cell c;
    c.level = level;
    c.meta = CellMeta{base, scale, depth};
    for (auto t : tmpl) c.elements.push_back(scale * base * t);
    return c;
}

inline void sort_level(std::vector<Cell>& cells) {
    std::sort(cells.begin(), cells.end(),
              [](const Cell& a, const Cell& b) { return a.elements.front() < b.elements.front(); });
}

inline void trim(Grading& g) {
    while (g.levels.size() > 1 && g.levels.back().empty()) g.levels.pop_back();
}

}  // namespace detail

/// Integer-ratio GP grading with expansion k. Level d >= 1 holds the cells
/// 2^{k(l-1)} b * a_d with a_d = {prod p_i^{e_i} : 0 <= e_i < k},
/// (b, P_d) = 1 and every element <= n.
inline Grading build_gp_grading(std::uint64_t n, unsigned k,
                                std::size_t max_level = std::numeric_limits<std::size_t>::max()) {
    if (n < 1) throw std::invalid_argument("build_gp_grading: n must be >= 1");
    if (k < 3) throw std::invalid_argument("build_gp_grading: k must be >= 3");
    Grading g{n, GradingKind::expansion(k), {detail::singletons(n)}};
    for (unsigned d = 1; d <= max_level; ++d) {
        const BigInt top = boost::multiprecision::pow(primorial(d), k - 1);
        if (top > n) break;
        const auto ps = primes(d);
        const auto tmpl = detail::exponent_box(ps, k);
        const auto lead = static_cast<std::uint64_t>(top);
        std::vector<Cell> level;
        for (std::uint64_t scale = 1; lead <= n / scale; scale <<= k) {
            const std::uint64_t bmax = n / (lead * scale);
            for (std::uint64_t b = 1; b <= bmax; ++b)
                if (detail::coprime_to_first(b, ps)) level.push_back(detail::dilate(tmpl, scale, b, d, d));
            if (scale > (std::numeric_limits<std::uint64_t>::max() >> k)) break;
        }
        detail::sort_level(level);
        g.levels.push_back(std::move(level));
    }
    detail::trim(g);
    return g;
}

/// Prime-power-ratio grading with growth 1: level i holds b * {1, p, ..., p^i}
/// for (b, p) = 1 and b <= n / p^i. The family length k does not shape the cells.
inline Grading build_prime_power_grading(std::uint64_t n, std::uint64_t p, unsigned k) {
    if (n < 1) throw std::invalid_argument("build_prime_power_grading: n must be >= 1");
    if (!is_prime(p)) throw std::invalid_argument("build_prime_power_grading: p must be prime");
    if (k < 3) throw std::invalid_argument("build_prime_power_grading: k must be >= 3");
    Grading g{n, GradingKind::growth(1), {detail::singletons(n)}};
    std::vector<std::uint64_t> tmpl{1};
    for (std::size_t i = 1; tmpl.back() <= n / p; ++i) {
        tmpl.push_back(tmpl.back() * p);
        std::vector<Cell> level;
        for (std::uint64_t b = 1; b <= n / tmpl.back(); ++b)
            if (b % p != 0) level.push_back(detail::dilate(tmpl, 1, b, i, static_cast<unsigned>(i)));
        g.levels.push_back(std::move(level));
    }
    detail::trim(g);
    return g;
}

/// Geometric-square grading with expansion 2: level d holds b 4^i * a_d with
/// a_d the squarefree divisors of P_d and (b, P_d) = 1.
inline Grading build_square_grading(std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("build_square_grading: n must be >= 1");
    Grading g{n, GradingKind::expansion(2), {detail::singletons(n)}};
    for (unsigned d = 1;; ++d) {
        const BigInt big = primorial(d);
        if (big > n) break;
        const auto pd = static_cast<std::uint64_t>(big);
        const auto ps = primes(d);
        const auto tmpl = detail::exponent_box(ps, 2);
        std::vector<Cell> level;
        for (std::uint64_t scale = 1; pd <= n / scale; scale *= 4) {
            const std::uint64_t bmax = n / (pd * scale);
            for (std::uint64_t b = 1; b <= bmax; ++b)
                if (detail::coprime_to_first(b, ps)) level.push_back(detail::dilate(tmpl, scale, b, d, d));
        }
        detail::sort_level(level);
        g.levels.push_back(std::move(level));
    }
    detail::trim(g);
    return g;
}

/// Friable grading with growth 1: level i holds b * {s_1, ..., s_{i+1}} over
/// the d-friable numbers s_1 = 1 < s_2 < ..., with (b, P_d) = 1 and
/// b <= n / s_{i+1}.
inline Grading build_friable_grading(std::uint64_t n, unsigned d) {
    if (n < 1) throw std::invalid_argument("build_friable_grading: n must be >= 1");
    if (d < 1) throw std::invalid_argument("build_friable_grading: d must be >= 1");
    Grading g{n, GradingKind::growth(1), {detail::singletons(n)}};
    const auto s = friable_numbers(d, n);
    const auto ps = primes(d);
    for (std::size_t i = 1; i < s.size(); ++i) {
        std::vector<std::uint64_t> tmpl(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        std::vector<Cell> level;
        for (std::uint64_t b = 1; b <= n / s[i]; ++b)
            if (detail::coprime_to_first(b, ps)) level.push_back(detail::dilate(tmpl, 1, b, i, d));
        g.levels.push_back(std::move(level));
    }
    detail::trim(g);
    return g;
}

/// |F_i| for every level.
inline std::vector<std::uint64_t> level_sizes(const Grading& g) {
    std::vector<std::uint64_t> out;
    for (const auto& level : g.levels) out.push_back(level.size());
    return out;
}

// ---------------------------------------------------------------------------
// Verification

struct ConditionResult {
    enum Status { PASS, FAIL, NOT_APPLICABLE } status = PASS;
    std::string detail;
    /// (level, index) of the offending cells on failure.
    std::vector<std::pair<std::size_t, std::size_t>> cells;

    bool ok() const { return status != FAIL; }
};

/// Outcome of each grading condition; index 0 is condition (1).
struct GradingReport {
    std::array<ConditionResult, 6> conditions;

    bool all_ok() const {
        return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.ok(); });
    }
    const ConditionResult& operator[](std::size_t condition) const { return conditions.at(condition - 1); }
};

namespace detail {

inline std::string cell_str(const Cell& c) { return NaturalSet(c.elements, c.elements.back()).str(); }

// owner[i][x] = index of the level-i cell holding x, or -1. Returns false on
// an element outside [1, n] or an overlap, filling `failure`.
inline bool build_owners(const Grading& g, std::vector<std::vector<std::int64_t>>& owner,
                         ConditionResult& failure) {
    owner.assign(g.levels.size(), std::vector<std::int64_t>(g.n + 1, -1));
    for (std::size_t i = 0; i < g.levels.size(); ++i) {
        for (std::size_t j = 0; j < g.levels[i].size(); ++j) {
            const auto& cell = g.levels[i][j];
            if (cell.elements.empty()) {
                failure = {ConditionResult::FAIL, "level " + std::to_string(i) + " has an empty cell", {{i, j}}};
                return false;
            }
            for (auto x : cell.elements) {
                if (x < 1 || x > g.n) {
                    failure = {ConditionResult::FAIL,
                               "cell " + cell_str(cell) + " leaves [1," + std::to_string(g.n) + "]",
                               {{i, j}}};
                    return false;
                }
                auto& slot = owner[i][x];
                if (slot != -1 && slot != static_cast<std::int64_t>(j)) {
                    const auto other = static_cast<std::size_t>(slot);
                    failure = {ConditionResult::FAIL,
                               "level " + std::to_string(i) + " cells " + cell_str(g.levels[i][other]) +
                                   " and " + cell_str(cell) + " overlap",
                               {{i, other}, {i, j}}};
                    return false;
                }
                slot = static_cast<std::int64_t>(j);
            }
        }
    }
    return true;
}

inline ConditionResult check_singletons(const Grading& g) {
    if (g.levels.empty() || g.levels[0].size() != g.n)
        return {ConditionResult::FAIL, "level 0 is not the n singletons", {}};
    for (std::size_t j = 0; j < g.levels[0].size(); ++j) {
        const auto& c = g.levels[0][j];
        if (c.elements.size() != 1 || c.elements[0] != j + 1)
            return {ConditionResult::FAIL, "level 0 cell " + std::to_string(j) + " is not {" +
                                               std::to_string(j + 1) + "}",
                    {{0, j}}};
    }
    return {};
}

inline ConditionResult check_nesting(const Grading& g, const std::vector<std::vector<std::int64_t>>& owner) {
    for (std::size_t i = 0; i + 1 < g.levels.size(); ++i) {
        for (std::size_t j = 0; j < g.levels[i + 1].size(); ++j) {
            for (auto x : g.levels[i + 1][j].elements) {
                const auto lower = owner[i][x];
                if (lower < 0) continue;
                const auto& low = g.levels[i][static_cast<std::size_t>(lower)];
                for (auto y : low.elements)
                    if (owner[i + 1][y] != static_cast<std::int64_t>(j))
                        return {ConditionResult::FAIL,
                                "level " + std::to_string(i) + " cell " + cell_str(low) +
                                    " meets but is not inside level " + std::to_string(i + 1) + " cell " +
                                    cell_str(g.levels[i + 1][j]),
                                {{i, static_cast<std::size_t>(lower)}, {i + 1, j}}};
            }
        }
    }
    return {};
}

inline ConditionResult check_expansion(const Grading& g, const std::vector<std::vector<std::int64_t>>& owner) {
    const unsigned k = g.kind.param;
    for (std::size_t i = 0; i + 1 < g.levels.size(); ++i) {
        for (std::size_t j = 0; j < g.levels[i + 1].size(); ++j) {
            std::set<std::int64_t> parts;
            bool covered = true;
            for (auto x : g.levels[i + 1][j].elements) {
                if (owner[i][x] < 0) covered = false;
                parts.insert(owner[i][x]);
            }
            if (!covered || parts.size() != k)
                return {ConditionResult::FAIL,
                        "level " + std::to_string(i + 1) + " cell " + cell_str(g.levels[i + 1][j]) +
                            " is not a disjoint union of " + std::to_string(k) + " level " +
                            std::to_string(i) + " cells",
                        {{i + 1, j}}};
        }
    }
    return {};
}

inline ConditionResult check_growth(const Grading& g, const std::vector<std::vector<std::int64_t>>& owner) {
    const unsigned r = g.kind.param;
    // seen[x]: x lies in some member of F_1..F_i (updated as i advances).
    std::vector<bool> seen(g.n + 1, false);
    for (std::size_t i = 0; i + 1 < g.levels.size(); ++i) {
        if (i >= 1)
            for (const auto& c : g.levels[i])
                for (auto x : c.elements) seen[x] = true;
        for (std::size_t j = 0; j < g.levels[i + 1].size(); ++j) {
            const auto& f = g.levels[i + 1][j];
            bool ok = false;
            std::set<std::int64_t> inner;
            for (auto x : f.elements)
                if (owner[i][x] >= 0) inner.insert(owner[i][x]);
            for (auto idx : inner) {
                const auto& low = g.levels[i][static_cast<std::size_t>(idx)];
                if (low.elements.size() + r != f.elements.size()) continue;
                if (!std::includes(f.elements.begin(), f.elements.end(), low.elements.begin(),
                                   low.elements.end()))
                    continue;
                std::vector<std::uint64_t> fresh;
                std::set_difference(f.elements.begin(), f.elements.end(), low.elements.begin(),
                                    low.elements.end(), std::back_inserter(fresh));
                if (std::none_of(fresh.begin(), fresh.end(), [&](auto x) { return bool(seen[x]); })) {
                    ok = true;
                    break;
                }
            }
            if (!ok)
                return {ConditionResult::FAIL,
                        "level " + std::to_string(i + 1) + " cell " + cell_str(f) +
                            " is not a level " + std::to_string(i) + " cell plus " + std::to_string(r) +
                            " fresh elements",
                        {{i + 1, j}}};
        }
    }
    return {};
}

// True when every cell of the level is c * (first cell) for some rational c.
inline std::optional<std::size_t> first_non_dilate(const std::vector<Cell>& level) {
    if (level.empty()) return std::nullopt;
    const auto& t = level.front().elements;
    for (std::size_t j = 1; j < level.size(); ++j) {
        const auto& e = level[j].elements;
        if (e.size() != t.size()) return j;
        for (std::size_t m = 0; m < t.size(); ++m)
            if (static_cast<unsigned __int128>(e[m]) * t[0] != static_cast<unsigned __int128>(t[m]) * e[0])
                return j;
    }
    return std::nullopt;
}

inline ConditionResult check_ramsey(const Grading& g, const PatternFamily& family, bool solve,
                                    const SolveOptions& opt) {
    for (std::size_t i = 0; i < g.levels.size(); ++i) {
        const auto& level = g.levels[i];
        if (level.empty()) continue;
        if (!solve) {
            if (!family.dilation_closed())
                return {ConditionResult::FAIL,
                        family.name() + " is not closed under dilation; run with Ramsey checks", {}};
            if (auto j = first_non_dilate(level))
                return {ConditionResult::FAIL,
                        "level " + std::to_string(i) + " cell " + cell_str(level[*j]) +
                            " is not a dilate of " + cell_str(level[0]),
                        {{i, 0}, {i, *j}}};
            continue;
        }
        SolveOptions o = opt;
        o.canonical_witness = false;
        std::optional<std::size_t> ref;
        for (std::size_t j = 0; j < level.size(); ++j) {
            NaturalSet cell(level[j].elements, g.n);
            auto res = solve_family(family, cell, o).result;
            if (!res.exact()) throw budget_exceeded("verify_grading: node budget exceeded");
            if (!ref) {
                ref = res.optimum;
            } else if (*ref != res.optimum) {
                return {ConditionResult::FAIL,
                        "level " + std::to_string(i) + ": G(" + cell_str(level[0]) + ") = " +
                            std::to_string(*ref) + " but G(" + cell_str(level[j]) + ") = " +
                            std::to_string(res.optimum),
                        {{i, 0}, {i, j}}};
            }
        }
    }
    return {};
}

}  // namespace detail

/// Checks the six grading conditions. Condition (4) either solves G on every
/// cell (check_ramsey) or accepts levels whose cells are dilates of one
/// template under a dilation-closed family. Condition (5) applies to
/// expansion gradings, (6) to growth gradings.
inline GradingReport verify_grading(const Grading& g, const PatternFamily& family, bool check_ramsey,
                                    const SolveOptions& opt = {}) {
    GradingReport rep;
    rep.conditions[0] = detail::check_singletons(g);

    std::vector<std::vector<std::int64_t>> owner;
    ConditionResult overlap;
    const bool packed = detail::build_owners(g, owner, overlap);
    rep.conditions[1] = packed ? ConditionResult{} : overlap;

    const ConditionResult blocked{ConditionResult::FAIL, "requires condition (2)", {}};
    rep.conditions[2] = packed ? detail::check_nesting(g, owner) : blocked;
    rep.conditions[3] = detail::check_ramsey(g, family, check_ramsey, opt);

    const ConditionResult na{ConditionResult::NOT_APPLICABLE, "", {}};
    if (g.kind.tag == GradingKind::EXPANSION) {
        rep.conditions[4] = packed ? detail::check_expansion(g, owner) : blocked;
        rep.conditions[5] = na;
    } else {
        rep.conditions[4] = na;
        rep.conditions[5] = packed ? detail::check_growth(g, owner) : blocked;
    }
    return rep;
}

/// R_i = G of the first cell on each level (all cells of a level agree once
/// condition (4) holds).
inline std::vector<std::uint64_t> level_values(const Grading& g, const PatternFamily& family,
                                               const SolveOptions& opt = {}) {
    SolveOptions o = opt;
    o.canonical_witness = false;
    std::vector<std::uint64_t> R;
    for (const auto& level : g.levels) {
        if (level.empty()) break;
        NaturalSet cell(level.front().elements, g.n);
        auto res = solve_family(family, cell, o).result;
        if (!res.exact()) throw budget_exceeded("level_values: node budget exceeded");
        R.push_back(res.optimum);
    }
    return R;
}

/// The finite-n bound of a grading: expansion gradings use the expansion
/// form, growth gradings the growth form.
inline BoundReport grading_bound(const Grading& g, std::span<const std::uint64_t> R) {
    const auto sizes = level_sizes(g);
    return g.kind.tag == GradingKind::EXPANSION ? theorem1_bound(g.n, sizes, R, g.kind.param)
                                                : theorem2_bound(g.n, sizes, R, g.kind.param);
}

// ---------------------------------------------------------------------------
// Partition view

struct PartitionView {
    /// A_b for the distinct b; each part is a cell at level `level`.
    struct Part {
        std::size_t level = 0;
        std::size_t index = 0;
        std::vector<std::uint64_t> elements;
    };
    std::vector<Part> parts;
    /// alpha[i] = number of parts taken from level i.
    std::vector<std::uint64_t> alpha;
};

/// For each b, A_b is the cell of greatest level containing b; the distinct
/// A_b partition [n].
inline PartitionView partition_from_grading(const Grading& g) {
    GradingReport pre;
    pre.conditions[0] = detail::check_singletons(g);
    std::vector<std::vector<std::int64_t>> owner;
    ConditionResult overlap;
    if (!pre.conditions[0].ok()) throw std::invalid_argument("partition_from_grading: " + pre.conditions[0].detail);
    if (!detail::build_owners(g, owner, overlap))
        throw std::invalid_argument("partition_from_grading: " + overlap.detail);
    if (auto nest = detail::check_nesting(g, owner); !nest.ok())
        throw std::invalid_argument("partition_from_grading: " + nest.detail);

    PartitionView view;
    view.alpha.assign(g.levels.size(), 0);
    std::set<std::pair<std::size_t, std::size_t>> taken;
    for (std::uint64_t b = 1; b <= g.n; ++b) {
        std::size_t level = 0;
        for (std::size_t i = g.levels.size(); i-- > 0;)
            if (owner[i][b] >= 0) {
                level = i;
                break;
            }
        const auto idx = static_cast<std::size_t>(owner[level][b]);
        if (!taken.insert({level, idx}).second) continue;
        view.parts.push_back({level, idx, g.levels[level][idx].elements});
        ++view.alpha[level];
    }
    return view;
}

/// Cell sizes implied by the kind: k^i for expansion k, 1 + r i for growth r.
inline bool partition_identities_hold(const Grading& g, const PartitionView& view) {
    const auto sizes = level_sizes(g);
    const std::size_t D = view.alpha.size();
    if (g.kind.tag == GradingKind::EXPANSION) {
        const BigInt k = g.kind.param;
        BigInt total = 0;
        for (std::size_t i = 0; i < D; ++i) total += boost::multiprecision::pow(k, static_cast<unsigned>(i)) * view.alpha[i];
        if (total != g.n) return false;
        for (std::size_t i = 0; i < D; ++i) {
            BigInt s = 0;
            for (std::size_t j = i; j < D; ++j)
                s += boost::multiprecision::pow(k, static_cast<unsigned>(j - i)) * view.alpha[j];
            if (s != sizes[i]) return false;
        }
        return true;
    }
    const BigInt r = g.kind.param;
    BigInt total = 0;
    for (std::size_t i = 0; i < D; ++i) total += (1 + r * i) * view.alpha[i];
    if (total != g.n) return false;
    for (std::size_t i = 1; i < D; ++i) {
        BigInt s = 0;
        for (std::size_t j = i; j < D; ++j) s += view.alpha[j];
        if (s != sizes[i]) return false;
    }
    return true;
}

/// Checks sum alpha_i R_i against its telescoped form:
///   expansion k: R_0 sum k^i alpha_i - sum_{i>=1} (k R_{i-1} - R_i) sum_{j>=i} k^{j-i} alpha_j
///   growth r:    R_0 sum (1 + r i) alpha_i - sum_{i>=1} (r + R_{i-1} - R_i) sum_{j>=i} alpha_j
/// The growth form assumes R_0 = 1, as it is for singleton level-0 cells.
inline bool algebra_identity_check(const std::vector<BigInt>& alpha, const std::vector<BigInt>& R,
                                   GradingKind kind) {
    if (alpha.size() != R.size()) throw std::invalid_argument("algebra_identity_check: length mismatch");
    const std::size_t D = alpha.size();
    if (D == 0) return true;
    BigInt lhs = 0;
    for (std::size_t i = 0; i < D; ++i) lhs += alpha[i] * R[i];

    const BigInt c = kind.param;
    const bool expansion = kind.tag == GradingKind::EXPANSION;
    auto weight = [&](std::size_t gap) -> BigInt {
        return expansion ? boost::multiprecision::pow(c, static_cast<unsigned>(gap)) : BigInt(1);
    };
    BigInt rhs = 0;
    for (std::size_t i = 0; i < D; ++i)
        rhs += R[0] * alpha[i] * (expansion ? weight(i) : BigInt(1 + c * i));
    for (std::size_t i = 1; i < D; ++i) {
        BigInt coeff = expansion ? BigInt(c * R[i - 1] - R[i]) : BigInt(c + R[i - 1] - R[i]);
        BigInt tail = 0;
        for (std::size_t j = i; j < D; ++j) tail += weight(j - i) * alpha[j];
        rhs -= coeff * tail;
    }
    return lhs == rhs;
}

}  // namespace proscribe
