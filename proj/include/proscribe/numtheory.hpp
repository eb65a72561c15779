#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace proscribe {

using BigInt = boost::multiprecision::cpp_int;

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    for (a %= m; e; e >>= 1, a = mulmod(a, a, m))
        if (e & 1) r = mulmod(r, a, m);
    return r;
}

// Miller-Rabin with the first twelve prime bases; deterministic below 2^64.
inline bool is_prime_u64(std::uint64_t m) {
    if (m < 2) return false;
    constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t p : bases)
        if (m % p == 0) return m == p;
    std::uint64_t d = m - 1;
    int s = 0;
    while (d % 2 == 0) d /= 2, ++s;
    for (std::uint64_t a : bases) {
        std::uint64_t x = powmod(a, d, m);
        if (x == 1 || x == m - 1) continue;
        bool composite = true;
        for (int i = 1; i < s && composite; ++i) {
            x = mulmod(x, x, m);
            if (x == m - 1) composite = false;
        }
        if (composite) return false;
    }
    return true;
}

// a * b, or nullopt-like sentinel 0 when the product exceeds `limit`.
inline std::uint64_t mul_capped(std::uint64_t a, std::uint64_t b, std::uint64_t limit) {
    if (a == 0 || b == 0) return 0;
    if (a > limit / b) return 0;
    std::uint64_t p = a * b;
    return p <= limit ? p : 0;
}

}  // namespace detail

/// The first `count` primes in increasing order.
inline std::vector<std::uint64_t> primes(std::size_t count) {
    std::vector<std::uint64_t> out;
    out.reserve(count);
    for (std::uint64_t m = 2; out.size() < count; ++m) {
        bool prime = true;
        for (std::uint64_t p : out) {
            if (p * p > m) break;
            if (m % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) out.push_back(m);
    }
    return out;
}

inline bool is_prime(std::uint64_t m) { return detail::is_prime_u64(m); }

/// Product of the first d primes. primorial(0) = 1.
inline BigInt primorial(std::size_t d) {
    BigInt value = 1;
    for (std::uint64_t p : primes(d)) value *= p;
    return value;
}

/// phi(P_d) = prod (p_i - 1) over the first d primes.
inline BigInt primorial_phi(std::size_t d) {
    BigInt value = 1;
    for (std::uint64_t p : primes(d)) value *= (p - 1);
    return value;
}

/// Euler's totient by trial-division factorization; intended for small m.
inline std::uint64_t euler_phi(std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("euler_phi: argument must be >= 1");
    std::uint64_t result = m;
    std::uint64_t rest = m;
    for (std::uint64_t p = 2; p <= rest / p; ++p) {
        if (rest % p != 0) continue;
        while (rest % p == 0) rest /= p;
        result -= result / p;
    }
    if (rest > 1) result -= result / rest;
    return result;
}

/// Largest e with p^e | x.
inline unsigned valuation(std::uint64_t p, std::uint64_t x) {
    if (x == 0) throw std::invalid_argument("valuation: x must be >= 1");
    if (p < 2) throw std::invalid_argument("valuation: p must be prime");
    unsigned e = 0;
    while (x % p == 0) {
        x /= p;
        ++e;
    }
    return e;
}

/// All s <= limit whose prime factors lie among the first d primes, ascending.
/// Generated by merging products through a min-heap, so the cost tracks the
/// output length rather than `limit`.
inline std::vector<std::uint64_t> friable_numbers(std::size_t d, std::uint64_t limit) {
    if (d == 0) throw std::invalid_argument("friable_numbers: d must be >= 1");
    if (limit == 0) throw std::invalid_argument("friable_numbers: limit must be >= 1");
    const auto ps = primes(d);
    std::vector<std::uint64_t> out;
    std::priority_queue<std::uint64_t, std::vector<std::uint64_t>, std::greater<>> heap;
    heap.push(1);
    while (!heap.empty()) {
        std::uint64_t s = heap.top();
        heap.pop();
        if (!out.empty() && out.back() == s) continue;
        out.push_back(s);
        for (std::uint64_t p : ps) {
            std::uint64_t next = detail::mul_capped(s, p, limit);
            if (next != 0) heap.push(next);
        }
    }
    return out;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

/// Binomial coefficient C(n, r) in exact arithmetic.
inline BigInt binomial(unsigned n, unsigned r) {
    if (r > n) return 0;
    BigInt value = 1;
    for (unsigned i = 1; i <= r; ++i) {
        value *= (n - r + i);
        value /= i;
    }
    return value;
}

}  // namespace proscribe
