#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstdint>
#include <deque>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace proscribe {

/// One block of a bound hierarchy: any free set meets `vertices` in at most
/// `cap` vertices. Children must be pairwise disjoint subsets of `vertices`.
struct CapNode {
    std::vector<std::uint32_t> vertices;
    std::size_t cap = 0;
    std::vector<std::size_t> children;
};

/// Laminar families of capped blocks. Each root yields an independent upper
/// bound (block bounds combine by subadditivity); the solver takes the minimum.
struct CapForest {
    std::vector<CapNode> nodes;
    std::vector<std::size_t> roots;

    bool empty() const noexcept { return roots.empty(); }
};

/// Vertices 0..vertex_count-1 and the forbidden subsets among them.
class ForbiddenHypergraph {
public:
    ForbiddenHypergraph() = default;

    ForbiddenHypergraph(std::size_t vertex_count, std::vector<std::vector<std::uint32_t>> edges,
                        CapForest caps = {})
        : vertex_count_(vertex_count), edges_(std::move(edges)), caps_(std::move(caps)) {
        for (auto& e : edges_) {
            std::sort(e.begin(), e.end());
            e.erase(std::unique(e.begin(), e.end()), e.end());
            if (e.size() < 2) throw std::invalid_argument("hypergraph edge needs >= 2 vertices");
            if (e.back() >= vertex_count_)
                throw std::invalid_argument("hypergraph edge references vertex out of range");
        }
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        validate_caps();
    }

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    const std::vector<std::vector<std::uint32_t>>& edges() const noexcept { return edges_; }
    const CapForest& caps() const noexcept { return caps_; }

    /// True iff no edge lies entirely inside `chosen` (sorted or not).
    bool independent(const std::vector<std::uint32_t>& chosen) const {
        std::vector<bool> in(vertex_count_, false);
        for (auto v : chosen) {
            if (v >= vertex_count_) return false;
            in[v] = true;
        }
        for (const auto& e : edges_)
            if (std::all_of(e.begin(), e.end(), [&](auto v) { return in[v]; })) return false;
        return true;
    }

private:
    void validate_caps() const {
        const auto& nodes = caps_.nodes;
        for (const auto& node : nodes) {
            std::vector<int> owner(vertex_count_, -1);
            for (auto v : node.vertices)
                if (v >= vertex_count_) throw std::invalid_argument("cap block vertex out of range");
            std::vector<bool> in(vertex_count_, false);
            for (auto v : node.vertices) in[v] = true;
            for (std::size_t c : node.children) {
                if (c >= nodes.size()) throw std::invalid_argument("cap block child out of range");
                for (auto v : nodes[c].vertices) {
                    if (!in[v]) throw std::invalid_argument("cap block child not a subset");
                    if (owner[v] != -1) throw std::invalid_argument("cap block children overlap");
                    owner[v] = static_cast<int>(c);
                }
            }
        }
        for (std::size_t r : caps_.roots)
            if (r >= nodes.size()) throw std::invalid_argument("cap root out of range");
    }

    std::size_t vertex_count_ = 0;
    std::vector<std::vector<std::uint32_t>> edges_;
    CapForest caps_;
};

enum class ProofStatus { EXACT, BUDGET_EXCEEDED };

struct SolveResult {
    std::size_t optimum = 0;
    std::vector<std::uint32_t> witness;  // sorted vertex ids
    std::uint64_t nodes_explored = 0;
    ProofStatus status = ProofStatus::EXACT;

    bool exact() const noexcept { return status == ProofStatus::EXACT; }
};

struct SolveOptions {
    std::uint64_t node_budget = 1'000'000'000;
    unsigned threads = 1;
    /// Return the lexicographically least optimal witness (costs a second,
    /// usually short, search). When false the witness is whatever optimum the
    /// search met first.
    bool canonical_witness = true;
    /// A known free set; seeds the incumbent.
    std::vector<std::uint32_t> initial;
    std::size_t oracle_cap = 24;
};

/// Thrown by callers that require an exact answer.
class budget_exceeded : public std::runtime_error {
public:
    explicit budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

template <std::size_t W>
struct Bits {
    std::array<std::uint64_t, W> w{};

    void set(std::size_t i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1u; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w) c += static_cast<std::size_t>(std::popcount(x));
        return c;
    }
    bool any() const {
        for (auto x : w)
            if (x) return true;
        return false;
    }
    bool intersects(const Bits& o) const {
        for (std::size_t i = 0; i < W; ++i)
            if (w[i] & o.w[i]) return true;
        return false;
    }
    // this & ~o nonempty
    bool escapes(const Bits& o) const {
        for (std::size_t i = 0; i < W; ++i)
            if (w[i] & ~o.w[i]) return true;
        return false;
    }
    std::size_t count_and(const Bits& o) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < W; ++i) c += static_cast<std::size_t>(std::popcount(w[i] & o.w[i]));
        return c;
    }
    std::size_t first() const {
        for (std::size_t i = 0; i < W; ++i)
            if (w[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(w[i]));
        return W * 64;
    }
    Bits operator&(const Bits& o) const {
        Bits r;
        for (std::size_t i = 0; i < W; ++i) r.w[i] = w[i] & o.w[i];
        return r;
    }
    Bits operator|(const Bits& o) const {
        Bits r;
        for (std::size_t i = 0; i < W; ++i) r.w[i] = w[i] | o.w[i];
        return r;
    }
    Bits& operator|=(const Bits& o) {
        for (std::size_t i = 0; i < W; ++i) w[i] |= o.w[i];
        return *this;
    }
    Bits& and_not(const Bits& o) {
        for (std::size_t i = 0; i < W; ++i) w[i] &= ~o.w[i];
        return *this;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < W; ++i) {
            std::uint64_t x = w[i];
            while (x) {
                f(i * 64 + static_cast<std::size_t>(std::countr_zero(x)));
                x &= x - 1;
            }
        }
    }
};

template <std::size_t W>
class Engine {
    using B = Bits<W>;

    struct State {
        B chosen;
        B open;  // undecided
    };

    struct Block {
        B mask;
        B rest;  // mask minus the union of the children
        std::size_t cap;
        std::vector<std::size_t> children;
    };

public:
    Engine(const ForbiddenHypergraph& h, const SolveOptions& opt) : h_(h), opt_(opt) {
        n_ = h.vertex_count();
        incident_.resize(n_);
        for (const auto& e : h.edges()) {
            B m;
            for (auto v : e) m.set(v);
            for (auto v : e) incident_[v].push_back(edges_.size());
            edges_.push_back(m);
        }
        const auto& nodes = h.caps().nodes;
        for (const auto& node : nodes) {
            Block b;
            for (auto v : node.vertices) b.mask.set(v);
            b.rest = b.mask;
            for (std::size_t c : node.children) {
                B cm;
                for (auto v : nodes[c].vertices) cm.set(v);
                b.rest.and_not(cm);
            }
            b.cap = node.cap;
            b.children = node.children;
            blocks_.push_back(std::move(b));
        }
        roots_ = h.caps().roots;
        for (std::size_t v = 0; v < n_; ++v) all_.set(v);
    }

    SolveResult run() {
        SolveResult result;
        seed_incumbent();

        State root{B{}, all_};
        if (opt_.threads <= 1) {
            search(root, /*lex=*/false, /*stop_at_first=*/false);
        } else {
            parallel_search(root);
        }

        result.optimum = best_.load();
        result.witness = incumbent_;
        result.status = exceeded_.load() ? ProofStatus::BUDGET_EXCEEDED : ProofStatus::EXACT;

        if (result.exact() && opt_.canonical_witness && result.optimum > 0) {
            const std::size_t opt = result.optimum;
            best_.store(opt - 1);
            found_first_ = false;
            search(root, /*lex=*/true, /*stop_at_first=*/true);
            if (exceeded_.load() || !found_first_) {
                // Keep the witness from the first pass; it is still optimal.
                best_.store(opt);
                exceeded_.store(false);
            } else {
                result.witness = incumbent_;
            }
        }
        result.nodes_explored = nodes_.load();
        return result;
    }

    /// Searches only for a free set of at least `size` vertices.
    SolveResult decide(std::size_t size) {
        SolveResult result;
        seed_incumbent();
        if (best_.load() < size) {
            incumbent_.clear();
            best_.store(size - 1);
            found_first_ = false;
            search(State{B{}, all_}, /*lex=*/false, /*stop_at_first=*/true);
        } else {
            found_first_ = true;
        }
        result.optimum = found_first_ ? incumbent_.size() : 0;
        result.witness = found_first_ ? incumbent_ : std::vector<std::uint32_t>{};
        result.status = exceeded_.load() && !found_first_ ? ProofStatus::BUDGET_EXCEEDED : ProofStatus::EXACT;
        result.nodes_explored = nodes_.load();
        return result;
    }

private:
    void seed_incumbent() {
        std::vector<std::uint32_t> init = opt_.initial;
        std::sort(init.begin(), init.end());
        init.erase(std::unique(init.begin(), init.end()), init.end());
        if (!init.empty() && !h_.independent(init))
            throw std::invalid_argument("initial solution contains a forbidden subset");
        // Extend greedily in id order to a maximal free set.
        B chosen;
        for (auto v : init) chosen.set(v);
        for (std::size_t v = 0; v < n_; ++v) {
            if (chosen.test(v)) continue;
            chosen.set(v);
            bool ok = true;
            for (std::size_t e : incident_[v])
                if (!edges_[e].escapes(chosen)) {
                    ok = false;
                    break;
                }
            if (!ok) chosen.reset(v);
        }
        incumbent_.clear();
        chosen.for_each([&](std::size_t v) { incumbent_.push_back(static_cast<std::uint32_t>(v)); });
        best_.store(incumbent_.size());
    }

    // Excludes every undecided vertex that would complete an edge with the
    // chosen set. Called after v joined the chosen set.
    void propagate(State& st, std::size_t v) const {
        for (std::size_t e : incident_[v]) {
            const B& m = edges_[e];
            if (m.escapes(st.chosen | st.open)) continue;  // already broken
            B r = m & st.open;
            if (r.count() == 1) st.open.and_not(r);
        }
    }

    std::size_t block_bound(std::size_t id, const B& avail) const {
        const Block& b = blocks_[id];
        std::size_t here = b.mask.count_and(avail);
        std::size_t best = std::min(here, b.cap);
        if (b.children.empty()) return best;
        std::size_t sum = b.rest.count_and(avail);
        for (std::size_t c : b.children) {
            sum += block_bound(c, avail);
            if (sum >= best) return best;
        }
        return std::min(best, sum);
    }

    std::size_t forest_bound(const B& avail, std::size_t limit) const {
        std::size_t best = limit;
        for (std::size_t r : roots_) {
            B outside = avail;
            outside.and_not(blocks_[r].mask);
            best = std::min(best, block_bound(r, avail) + outside.count());
        }
        return best;
    }

    // Greedy packing of disjoint live edges restricted to the open vertices;
    // each needs at least one open vertex dropped.
    std::size_t packing(const State& st) const {
        const B avail = st.chosen | st.open;
        B used;
        std::size_t count = 0;
        for (int pass = 0; pass < 2; ++pass) {
            for (const B& m : edges_) {
                if (m.escapes(avail)) continue;
                B r = m & st.open;
                std::size_t sz = r.count();
                if (sz == 0) continue;
                if ((pass == 0) != (sz <= 2)) continue;
                if (r.intersects(used)) continue;
                used |= r;
                ++count;
            }
        }
        return count;
    }

    bool budget_ok() {
        if (nodes_.fetch_add(1, std::memory_order_relaxed) + 1 > opt_.node_budget) {
            exceeded_.store(true);
            return false;
        }
        return true;
    }

    void record(const State& st) {
        std::size_t size = st.chosen.count();
        std::lock_guard lock(mutex_);
        if (size > best_.load()) {
            best_.store(size);
            incumbent_.clear();
            st.chosen.for_each([&](std::size_t v) { incumbent_.push_back(static_cast<std::uint32_t>(v)); });
            found_first_ = true;
        }
    }

    // Returns false when the search should unwind (budget hit or first
    // solution found in stop_at_first mode).
    bool search(State st, bool lex, bool stop_at_first) {
        if (exceeded_.load(std::memory_order_relaxed)) return false;
        if (!budget_ok()) return false;

        // Vertices on no live edge can always be taken.
        {
            const B avail = st.chosen | st.open;
            B touched;
            for (const B& m : edges_)
                if (!m.escapes(avail)) touched |= (m & st.open);
            B idle = st.open;
            idle.and_not(touched);
            st.chosen |= idle;
            st.open.and_not(idle);
        }

        const std::size_t s = st.chosen.count();
        const std::size_t u = st.open.count();
        std::size_t best = best_.load(std::memory_order_relaxed);
        if (s + u <= best) return true;
        if (u == 0) {
            record(st);
            return !stop_at_first;
        }
        if (!roots_.empty() && forest_bound(st.chosen | st.open, s + u) <= best) return true;
        if (s + u - packing(st) <= best) return true;

        const std::size_t v = lex ? st.open.first() : pick_vertex(st);

        State with = st;
        with.chosen.set(v);
        with.open.reset(v);
        propagate(with, v);
        if (!search(with, lex, stop_at_first)) return false;

        State without = st;
        without.open.reset(v);
        return search(without, lex, stop_at_first);
    }

    std::size_t pick_vertex(const State& st) const {
        const B avail = st.chosen | st.open;
        std::size_t best_v = st.open.first();
        std::size_t best_score = 0;
        st.open.for_each([&](std::size_t v) {
            std::size_t score = 0;
            for (std::size_t e : incident_[v]) {
                const B& m = edges_[e];
                if (m.escapes(avail)) continue;
                score += (m.count_and(st.open) == 2) ? 4 : 1;
            }
            if (score > best_score) {
                best_score = score;
                best_v = v;
            }
        });
        return best_v;
    }

    void parallel_search(const State& root) {
        // Split the top of the tree into independent subproblems.
        std::deque<State> frontier{root};
        const std::size_t want = 16 * static_cast<std::size_t>(opt_.threads);
        while (frontier.size() < want) {
            State st = frontier.front();
            if (st.open.count() == 0) break;
            frontier.pop_front();
            const std::size_t v = pick_vertex(st);
            State with = st;
            with.chosen.set(v);
            with.open.reset(v);
            propagate(with, v);
            State without = st;
            without.open.reset(v);
            frontier.push_back(with);
            frontier.push_back(without);
        }
        std::vector<State> work(frontier.begin(), frontier.end());
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < opt_.threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < work.size();)
                    if (!search(work[i], false, false)) return;
            });
    }

    const ForbiddenHypergraph& h_;
    SolveOptions opt_;
    std::size_t n_ = 0;
    std::vector<B> edges_;
    std::vector<std::vector<std::size_t>> incident_;
    std::vector<Block> blocks_;
    std::vector<std::size_t> roots_;
    B all_;

    std::atomic<std::size_t> best_{0};
    std::atomic<std::uint64_t> nodes_{0};
    std::atomic<bool> exceeded_{false};
    std::mutex mutex_;
    std::vector<std::uint32_t> incumbent_;
    bool found_first_ = false;
};

}  // namespace detail

/// Exact maximum size of a subset of the vertices containing no edge, by
/// depth-first branch and bound.
inline SolveResult max_free(const ForbiddenHypergraph& h, const SolveOptions& opt = {}) {
    const std::size_t n = h.vertex_count();
    if (n <= 64) return detail::Engine<1>(h, opt).run();
    if (n <= 128) return detail::Engine<2>(h, opt).run();
    if (n <= 256) return detail::Engine<4>(h, opt).run();
    if (n <= 512) return detail::Engine<8>(h, opt).run();
    if (n <= 1024) return detail::Engine<16>(h, opt).run();
    throw std::invalid_argument("max_free: at most 1024 vertices supported");
}

/// Decision form: a free set of at least `size` vertices, or an empty witness
/// when none exists (status EXACT) or the budget ran out (BUDGET_EXCEEDED).
inline SolveResult find_free_of_size(const ForbiddenHypergraph& h, std::size_t size,
                                     const SolveOptions& opt = {}) {
    if (size == 0) return SolveResult{};
    const std::size_t n = h.vertex_count();
    if (n <= 64) return detail::Engine<1>(h, opt).decide(size);
    if (n <= 128) return detail::Engine<2>(h, opt).decide(size);
    if (n <= 256) return detail::Engine<4>(h, opt).decide(size);
    if (n <= 512) return detail::Engine<8>(h, opt).decide(size);
    if (n <= 1024) return detail::Engine<16>(h, opt).decide(size);
    throw std::invalid_argument("find_free_of_size: at most 1024 vertices supported");
}

/// Validation oracle: scans all 2^n subsets. Returns the lexicographically
/// least optimal witness, matching max_free's canonical witness.
inline SolveResult exhaustive_max_free(const ForbiddenHypergraph& h, const SolveOptions& opt = {}) {
    const std::size_t n = h.vertex_count();
    if (n > opt.oracle_cap || n > 30)
        throw std::invalid_argument("exhaustive_max_free: vertex count exceeds oracle cap");
    std::vector<std::uint32_t> masks;
    for (const auto& e : h.edges()) {
        std::uint32_t m = 0;
        for (auto v : e) m |= std::uint32_t{1} << v;
        masks.push_back(m);
    }
    const std::uint64_t total = std::uint64_t{1} << n;
    int best = -1;
    std::uint32_t best_mask = 0;
    for (std::uint64_t x = 0; x < total; ++x) {
        const auto mask = static_cast<std::uint32_t>(x);
        const int size = std::popcount(mask);
        if (size < best) continue;
        bool ok = true;
        for (auto m : masks)
            if ((mask & m) == m) {
                ok = false;
                break;
            }
        if (!ok) continue;
        if (size > best) {
            best = size;
            best_mask = mask;
        } else {
            // Same size: the set holding the lowest differing vertex sorts first.
            const std::uint32_t diff = mask ^ best_mask;
            if (diff && (mask & (diff & (~diff + 1)))) best_mask = mask;
        }
    }
    SolveResult r;
    r.optimum = static_cast<std::size_t>(best);
    for (std::size_t v = 0; v < n; ++v)
        if (best_mask >> v & 1u) r.witness.push_back(static_cast<std::uint32_t>(v));
    r.nodes_explored = total;
    return r;
}

}  // namespace proscribe
