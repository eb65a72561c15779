#pragma once
// Brute-force reference implementations. They share no code with the
// library beyond plain data types.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using Set = std::vector<std::uint64_t>;

inline bool is_prime(std::uint64_t x) {
    if (x < 2) return false;
    for (std::uint64_t d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> first_primes(std::size_t count) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 2; out.size() < count; ++x)
        if (is_prime(x)) out.push_back(x);
    return out;
}

inline bool friable(std::uint64_t x, unsigned d) {
    for (auto p : first_primes(d))
        while (x % p == 0) x /= p;
    return x == 1;
}

// Each predicate takes a strictly increasing tuple.
inline bool is_ap(const Set& x) {
    for (std::size_t i = 2; i < x.size(); ++i)
        if (x[i] - x[i - 1] != x[1] - x[0]) return false;
    return true;
}

inline bool is_int_gp(const Set& x, std::uint64_t* ratio = nullptr) {
    if (x[1] % x[0] != 0) return false;
    const std::uint64_t r = x[1] / x[0];
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i] != x[i - 1] * r) return false;
    if (ratio) *ratio = r;
    return true;
}

inline bool is_rat_gp(const Set& x) {
    for (std::size_t i = 1; i + 1 < x.size(); ++i)
        if (static_cast<unsigned __int128>(x[i]) * x[i] != static_cast<unsigned __int128>(x[i - 1]) * x[i + 1])
            return false;
    return true;
}

inline bool is_prime_power_gp(const Set& x, std::uint64_t p) {
    std::uint64_t r = 0;
    if (!is_int_gp(x, &r)) return false;
    while (r % p == 0) r /= p;
    return r == 1;
}

inline bool is_friable_gp3(const Set& x, unsigned d) {
    std::uint64_t r = 0;
    return x.size() == 3 && is_int_gp(x, &r) && friable(r, d);
}

inline bool is_geom_square(const Set& x) {
    if (x.size() != 4 || x[1] % x[0] || x[2] % x[0]) return false;
    const std::uint64_t r = x[1] / x[0], s = x[2] / x[0];
    return r > 1 && r < s && x[3] == x[0] * r * s;
}

// All increasing `size`-tuples of `ground` satisfying `pred`.
template <class Pred>
std::vector<Set> tuples(const Set& ground, std::size_t size, Pred pred) {
    std::vector<Set> out;
    Set cur;
    auto rec = [&](auto&& self, std::size_t from) -> void {
        if (cur.size() == size) {
            if (pred(cur)) out.push_back(cur);
            return;
        }
        for (std::size_t i = from; i < ground.size(); ++i) {
            cur.push_back(ground[i]);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

// Largest subset of [0, n) avoiding every edge (edges given as bitmasks).
inline std::size_t brute_max_free(std::size_t n, const std::vector<std::uint64_t>& edges) {
    std::size_t best = 0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        const auto c = static_cast<std::size_t>(std::popcount(m));
        if (c <= best) continue;
        if (std::none_of(edges.begin(), edges.end(), [&](std::uint64_t e) { return (m & e) == e; })) best = c;
    }
    return best;
}

// r_k(n) by scanning every subset of [n].
inline std::size_t brute_r(unsigned k, unsigned n) {
    std::vector<std::uint64_t> edges;
    for (unsigned a = 0; a < n; ++a)
        for (unsigned step = 1; a + (k - 1) * step < n; ++step) {
            std::uint64_t m = 0;
            for (unsigned t = 0; t < k; ++t) m |= std::uint64_t{1} << (a + t * step);
            edges.push_back(m);
        }
    return brute_max_free(n, edges);
}

inline std::uint64_t binomial(unsigned n, unsigned r) {
    std::uint64_t c = 1;
    for (unsigned i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return c;
}

}  // namespace oracle
