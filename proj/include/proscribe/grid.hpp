#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "solver.hpp"

namespace proscribe::grid {

/// A point of [k]^d = {0,...,k-1}^d.
struct Word {
    std::vector<unsigned> coordinates;

    friend bool operator==(const Word&, const Word&) = default;
};

/// Point ids are mixed-radix ranks with coordinate 0 least significant.
using PointSet = std::vector<std::uint32_t>;

inline std::uint32_t rank(const Word& w, unsigned k) {
    std::uint32_t id = 0;
    std::uint32_t place = 1;
    for (unsigned c : w.coordinates) {
        if (c >= k) throw std::invalid_argument("word coordinate out of range");
        id += c * place;
        place *= k;
    }
    return id;
}

inline Word unrank(std::uint32_t id, unsigned k, unsigned d) {
    Word w;
    w.coordinates.resize(d);
    for (unsigned i = 0; i < d; ++i) {
        w.coordinates[i] = id % k;
        id /= k;
    }
    return w;
}

inline std::size_t cube_size(unsigned k, unsigned d) {
    std::size_t n = 1;
    for (unsigned i = 0; i < d; ++i) {
        n *= k;
        if (n > (std::size_t{1} << 32)) throw std::invalid_argument("cube too large");
    }
    return n;
}

/// Template cell codes: values below k are fixed coordinates; the rest are
/// wildcards.
struct LineTemplate {
    static constexpr int UP = -1;
    static constexpr int DOWN = -2;
    std::vector<int> cells;

    /// The k points, in order of the running parameter.
    PointSet points(unsigned k) const {
        PointSet out;
        for (unsigned j = 0; j < k; ++j) {
            std::uint32_t id = 0, place = 1;
            for (int c : cells) {
                unsigned v = c >= 0 ? static_cast<unsigned>(c) : (c == UP ? j : k - 1 - j);
                id += v * place;
                place *= k;
            }
            out.push_back(id);
        }
        return out;
    }
};

/// Wildcard classes are encoded as -(class + 1).
struct SpaceTemplate {
    std::vector<int> cells;
    unsigned classes = 0;

    PointSet points(unsigned k) const {
        PointSet out;
        std::vector<unsigned> value(classes, 0);
        while (true) {
            std::uint32_t id = 0, place = 1;
            for (int c : cells) {
                unsigned v = c >= 0 ? static_cast<unsigned>(c) : value[static_cast<unsigned>(-c - 1)];
                id += v * place;
                place *= k;
            }
            out.push_back(id);
            unsigned i = 0;
            while (i < classes && ++value[i] == k) value[i++] = 0;
            if (i == classes) break;
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

namespace detail {

// Visits every word of length d over an alphabet of `base` symbols.
template <class F>
void each_template(unsigned base, unsigned d, F&& f) {
    std::vector<int> cells(d, 0);
    while (true) {
        f(cells);
        unsigned i = 0;
        while (i < d && ++cells[i] == static_cast<int>(base)) cells[i++] = 0;
        if (i == d) break;
    }
}

inline void check_kd(unsigned k, unsigned d) {
    if (k < 2) throw std::invalid_argument("alphabet size k must be >= 2");
    if (d < 1) throw std::invalid_argument("dimension d must be >= 1");
}

}  // namespace detail

inline std::vector<LineTemplate> line_templates(unsigned k, unsigned d) {
    detail::check_kd(k, d);
    std::vector<LineTemplate> out;
    detail::each_template(k + 1, d, [&](const std::vector<int>& raw) {
        LineTemplate t;
        bool wild = false;
        for (int c : raw) {
            if (c == static_cast<int>(k)) {
                t.cells.push_back(LineTemplate::UP);
                wild = true;
            } else {
                t.cells.push_back(c);
            }
        }
        if (wild) out.push_back(std::move(t));
    });
    return out;
}

/// Combinatorial lines of [k]^d; there are (k+1)^d - k^d of them.
inline std::vector<PointSet> enumerate_lines(unsigned k, unsigned d) {
    std::vector<PointSet> out;
    for (const auto& t : line_templates(k, d)) {
        auto pts = t.points(k);
        std::sort(pts.begin(), pts.end());
        out.push_back(std::move(pts));
    }
    return out;
}

/// Geometric-line templates with the first wildcard oriented UP.
inline std::vector<LineTemplate> geometric_line_templates(unsigned k, unsigned d) {
    detail::check_kd(k, d);
    std::vector<LineTemplate> out;
    detail::each_template(k + 2, d, [&](const std::vector<int>& raw) {
        LineTemplate t;
        bool wild = false;
        for (int c : raw) {
            if (c >= static_cast<int>(k)) {
                int code = c == static_cast<int>(k) ? LineTemplate::UP : LineTemplate::DOWN;
                if (!wild && code == LineTemplate::DOWN) return;
                wild = true;
                t.cells.push_back(code);
            } else {
                t.cells.push_back(c);
            }
        }
        if (wild) out.push_back(std::move(t));
    });
    return out;
}

/// Geometric lines of [k]^d as point sets, each set once.
inline std::vector<PointSet> enumerate_geometric_lines(unsigned k, unsigned d) {
    std::vector<PointSet> out;
    std::set<PointSet> seen;
    for (const auto& t : geometric_line_templates(k, d)) {
        auto pts = t.points(k);
        std::sort(pts.begin(), pts.end());
        if (seen.insert(pts).second) out.push_back(std::move(pts));
    }
    return out;
}

/// Templates with exactly s nonempty wildcard classes, classes numbered in
/// order of their least coordinate.
inline std::vector<SpaceTemplate> space_templates(unsigned k, unsigned d, unsigned s) {
    detail::check_kd(k, d);
    if (s < 1 || s > d) throw std::invalid_argument("space dimension s must satisfy 1 <= s <= d");
    std::vector<SpaceTemplate> out;
    detail::each_template(k + s, d, [&](const std::vector<int>& raw) {
        SpaceTemplate t;
        t.classes = s;
        unsigned next_class = 0;
        for (int c : raw) {
            if (c >= static_cast<int>(k)) {
                unsigned cls = static_cast<unsigned>(c) - k;
                if (cls > next_class) return;
                if (cls == next_class) ++next_class;
                t.cells.push_back(-static_cast<int>(cls) - 1);
            } else {
                t.cells.push_back(c);
            }
        }
        if (next_class == s) out.push_back(std::move(t));
    });
    return out;
}

/// Combinatorial s-dimensional subspaces of [k]^d as k^s-point sets.
inline std::vector<PointSet> enumerate_spaces(unsigned k, unsigned d, unsigned s) {
    std::vector<PointSet> out;
    std::set<PointSet> seen;
    for (const auto& t : space_templates(k, d, s)) {
        auto pts = t.points(k);
        if (seen.insert(pts).second) out.push_back(std::move(pts));
    }
    return out;
}

/// Bound hierarchy for [k]^d: for each cyclic order of the directions, the
/// cube splits into slabs, slabs into sub-slabs, down to 1-dimensional rows.
/// A block of dimension m is capped by caps_by_dim[m].
inline CapForest subcube_caps(unsigned k, unsigned d, const std::vector<std::size_t>& caps_by_dim) {
    CapForest forest;
    if (d < 2) return forest;
    const std::size_t n = cube_size(k, d);
    std::vector<Word> words;
    for (std::uint32_t id = 0; id < n; ++id) words.push_back(unrank(id, k, d));

    for (unsigned rot = 0; rot < d; ++rot) {
        std::function<std::size_t(std::vector<unsigned>&)> build =
            [&](std::vector<unsigned>& fixed) -> std::size_t {
            const unsigned depth = static_cast<unsigned>(fixed.size());
            CapNode node;
            for (std::uint32_t id = 0; id < n; ++id) {
                bool match = true;
                for (unsigned j = 0; j < depth && match; ++j)
                    match = words[id].coordinates[(rot + j) % d] == fixed[j];
                if (match) node.vertices.push_back(id);
            }
            const unsigned dim = d - depth;
            node.cap = depth == 0 ? n : caps_by_dim.at(dim);
            const std::size_t idx = forest.nodes.size();
            forest.nodes.push_back(std::move(node));
            if (dim > 1) {
                std::vector<std::size_t> kids;
                for (unsigned v = 0; v < k; ++v) {
                    fixed.push_back(v);
                    kids.push_back(build(fixed));
                    fixed.pop_back();
                }
                forest.nodes[idx].children = std::move(kids);
            }
            return idx;
        };
        std::vector<unsigned> fixed;
        forest.roots.push_back(build(fixed));
    }
    return forest;
}

namespace detail {

inline std::vector<std::vector<std::uint32_t>> to_edges(std::vector<PointSet> sets) {
    return {std::make_move_iterator(sets.begin()), std::make_move_iterator(sets.end())};
}

// Values for dimensions 0..d, each solve capped by the smaller cubes.
inline std::size_t cube_number(unsigned k, unsigned d, const std::string& label,
                               const std::function<std::vector<PointSet>(unsigned)>& objects,
                               const std::function<std::size_t(unsigned)>& trivial,
                               const SolveOptions& opt) {
    std::vector<std::size_t> value{1};
    for (unsigned m = 1; m <= d; ++m) {
        if (std::size_t t = trivial(m); t != 0) {
            value.push_back(t);
            continue;
        }
        const std::size_t n = cube_size(k, m);
        SolveOptions o = opt;
        o.canonical_witness = false;
        ForbiddenHypergraph h(n, to_edges(objects(m)), subcube_caps(k, m, value));
        auto r = max_free(h, o);
        if (!r.exact())
            throw budget_exceeded(label + ": node budget exceeded at dimension " + std::to_string(m));
        value.push_back(r.optimum);
    }
    return value[d];
}

}  // namespace detail

/// c_{d,k}: largest subset of [k]^d with no combinatorial line.
inline std::size_t dhj_number(unsigned d, unsigned k, const SolveOptions& opt = {}) {
    if (k < 2) throw std::invalid_argument("dhj_number: k must be >= 2");
    return detail::cube_number(
        k, d, "dhj_number", [k](unsigned m) { return enumerate_lines(k, m); },
        [](unsigned) { return std::size_t{0}; }, opt);
}

/// c'_{d,k}: largest subset of [k]^d with no geometric line.
inline std::size_t moser_number(unsigned d, unsigned k, const SolveOptions& opt = {}) {
    if (k < 2) throw std::invalid_argument("moser_number: k must be >= 2");
    return detail::cube_number(
        k, d, "moser_number", [k](unsigned m) { return enumerate_geometric_lines(k, m); },
        [](unsigned) { return std::size_t{0}; }, opt);
}

/// c_{d,s,k}: largest subset of [k]^d with no combinatorial s-space. For d < s
/// the whole cube qualifies.
inline std::size_t space_number(unsigned d, unsigned s, unsigned k, const SolveOptions& opt = {}) {
    if (k < 2) throw std::invalid_argument("space_number: k must be >= 2");
    if (s < 1) throw std::invalid_argument("space_number: need s >= 1");
    return detail::cube_number(
        k, d, "space_number", [k, s](unsigned m) { return enumerate_spaces(k, m, s); },
        [k, s](unsigned m) { return m < s ? cube_size(k, m) : std::size_t{0}; }, opt);
}

}  // namespace proscribe::grid
