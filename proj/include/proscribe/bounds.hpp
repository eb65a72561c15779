#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "numtheory.hpp"
#include "values.hpp"

namespace proscribe {

using Rational = boost::multiprecision::cpp_rational;

enum class RoundDirection { UP, DOWN };

/// Fixed-point rendering with exactly `digits` fractional digits, rounded
/// toward `direction`. Rounding UP keeps a printed upper bound valid.
inline std::string decimal_render(const Rational& v, unsigned digits, RoundDirection direction) {
    if (digits < 1) throw std::invalid_argument("decimal_render: digits must be >= 1");
    BigInt scale = boost::multiprecision::pow(BigInt(10), digits);
    Rational scaled = v * scale;
    BigInt num = boost::multiprecision::numerator(scaled);
    BigInt den = boost::multiprecision::denominator(scaled);
    // Floor division with den > 0.
    BigInt q = num / den;
    if (num % den != 0 && num < 0) q -= 1;
    if (direction == RoundDirection::UP && num % den != 0) q += 1;

    const bool negative = q < 0;
    if (negative) q = -q;
    std::string whole = BigInt(q / scale).str();
    std::string frac = BigInt(q % scale).str();
    frac.insert(0, digits - frac.size(), '0');
    return (negative ? "-" : "") + whole + "." + frac;
}

inline std::string rational_str(const Rational& v) {
    return boost::multiprecision::numerator(v).str() + "/" + boost::multiprecision::denominator(v).str();
}

struct BoundTerm {
    std::size_t index = 0;
    BigInt coefficient;     // k R_{i-1} - R_i, or its growth analogue
    Rational weight;        // multiplier of the coefficient
    Rational contribution;  // coefficient * weight
};

/// An upper bound of the form 1 - sum(contributions).
struct BoundReport {
    Rational value;
    std::vector<BoundTerm> terms;
    std::size_t depth = 0;
    /// n - sum(coefficient * |F_i|) for finite-n theorem bounds.
    std::optional<BigInt> integer_form;

    std::string decimal(unsigned digits = 6) const {
        return decimal_render(value, digits, RoundDirection::UP);
    }

    /// The bound after the first term only.
    Rational lead() const {
        Rational v = 1;
        if (!terms.empty()) v -= terms.front().contribution;
        return v;
    }
};

namespace detail {

inline BoundReport finite_bound(std::uint64_t n, std::span<const std::uint64_t> level_sizes,
                                std::span<const std::uint64_t> R, const BigInt& slope, bool expansion) {
    if (n == 0) throw std::invalid_argument("bound: n must be >= 1");
    if (level_sizes.empty() || level_sizes[0] != n)
        throw std::invalid_argument("bound: level_sizes[0] must equal n");
    if (R.size() < level_sizes.size())
        throw std::invalid_argument("bound: length mismatch between level sizes and R");
    BoundReport rep;
    BigInt removed = 0;
    for (std::size_t i = 1; i < level_sizes.size(); ++i) {
        BoundTerm t;
        t.index = i;
        t.coefficient = expansion ? slope * BigInt(R[i - 1]) - BigInt(R[i])
                                  : slope + BigInt(R[i - 1]) - BigInt(R[i]);
        t.weight = Rational(BigInt(level_sizes[i]), BigInt(n));
        t.contribution = Rational(t.coefficient) * t.weight;
        removed += t.coefficient * level_sizes[i];
        rep.value -= t.contribution;
        rep.terms.push_back(std::move(t));
    }
    rep.value += 1;
    rep.depth = level_sizes.size() - 1;
    rep.integer_form = BigInt(n) - removed;
    return rep;
}

}  // namespace detail

/// Bound on G([n])/n from a grading with expansion k:
/// 1 - sum_{i>=1} (k R_{i-1} - R_i) |F_i| / n.
inline BoundReport theorem1_bound(std::uint64_t n, std::span<const std::uint64_t> level_sizes,
                                  std::span<const std::uint64_t> R, unsigned k) {
    if (k < 2) throw std::invalid_argument("theorem1_bound: expansion k must be >= 2");
    return detail::finite_bound(n, level_sizes, R, BigInt(k), true);
}

/// Bound from a grading with growth r: 1 - sum_{i>=1} (r + R_{i-1} - R_i) |F_i| / n.
inline BoundReport theorem2_bound(std::uint64_t n, std::span<const std::uint64_t> level_sizes,
                                  std::span<const std::uint64_t> R, unsigned r) {
    if (r < 1) throw std::invalid_argument("theorem2_bound: growth r must be >= 1");
    return detail::finite_bound(n, level_sizes, R, BigInt(r), false);
}

/// Limit form for the primorial gradings:
/// 1 - (2^k/(2^k-1)) sum_{d=1}^{depth} (k c_{d-1} - c_d) phi(P_d) / P_d^k.
/// Serves integer-ratio GPs (c = DHJ numbers), rational-ratio GPs (Moser
/// numbers) and, with k = 2, geometric squares (c_{d,2,2}).
inline BoundReport primorial_asymptotic(unsigned k, std::span<const std::uint64_t> c, std::size_t depth) {
    if (k < 2) throw std::invalid_argument("primorial_asymptotic: k must be >= 2");
    if (c.size() <= depth)
        throw std::invalid_argument("primorial_asymptotic: missing values up to depth " +
                                    std::to_string(depth));
    const BigInt two_k = BigInt(1) << k;
    const Rational scale(two_k, two_k - 1);
    BoundReport rep;
    rep.value = 1;
    rep.depth = depth;
    for (std::size_t d = 1; d <= depth; ++d) {
        BoundTerm t;
        t.index = d;
        t.coefficient = BigInt(k) * c[d - 1] - BigInt(c[d]);
        t.weight = scale * Rational(primorial_phi(d), boost::multiprecision::pow(primorial(d), k));
        t.contribution = Rational(t.coefficient) * t.weight;
        rep.value -= t.contribution;
        rep.terms.push_back(std::move(t));
    }
    return rep;
}

inline BoundReport gp_int_asymptotic(unsigned k, std::span<const std::uint64_t> dhj, std::size_t depth) {
    if (k < 3) throw std::invalid_argument("gp_int_asymptotic: k must be >= 3");
    return primorial_asymptotic(k, dhj, depth);
}

inline BoundReport gp_rat_asymptotic(unsigned k, std::span<const std::uint64_t> moser, std::size_t depth) {
    if (k < 3) throw std::invalid_argument("gp_rat_asymptotic: k must be >= 3");
    return primorial_asymptotic(k, moser, depth);
}

inline BoundReport square_asymptotic(std::span<const std::uint64_t> space22, std::size_t depth) {
    return primorial_asymptotic(2, space22, depth);
}

/// Prime-power-ratio GPs, growth-1 grading whose level-i cells have i+1
/// elements: 1 - (1 - 1/p) sum_{i=1}^{depth} (1 + r_k(i) - r_k(i+1)) / p^i.
/// `r` holds r_k(0), r_k(1), ...; needs entries through depth + 1.
inline BoundReport prime_power_asymptotic(std::uint64_t p, unsigned k, std::span<const std::uint64_t> r,
                                          std::size_t depth) {
    if (!is_prime(p)) throw std::invalid_argument("prime_power_asymptotic: p must be prime");
    if (k < 3) throw std::invalid_argument("prime_power_asymptotic: k must be >= 3");
    if (r.size() < depth + 2)
        throw std::invalid_argument("prime_power_asymptotic: need r_k(i) for i <= depth + 1");
    BoundReport rep;
    rep.value = 1;
    rep.depth = depth;
    const Rational density(BigInt(p - 1), BigInt(p));
    BigInt pw = 1;
    for (std::size_t i = 1; i <= depth; ++i) {
        pw *= p;
        BoundTerm t;
        t.index = i;
        t.coefficient = BigInt(1) + r[i] - BigInt(r[i + 1]);
        t.weight = density / Rational(pw);
        t.contribution = Rational(t.coefficient) * t.weight;
        rep.value -= t.contribution;
        rep.terms.push_back(std::move(t));
    }
    return rep;
}

/// First `count` d-friable numbers s_1 = 1 < s_2 < ...
inline std::vector<std::uint64_t> friable_prefix(unsigned d, std::size_t count) {
    std::uint64_t limit = 2;
    while (true) {
        auto s = friable_numbers(d, limit);
        if (s.size() >= count) {
            s.resize(count);
            return s;
        }
        limit *= 2;
    }
}

/// R_i = largest subset of {s_1, ..., s_{i+1}} free of 3-term GPs with
/// d-friable ratio.
inline std::uint64_t friable_prefix_value(unsigned d, std::size_t i, const SolveOptions& opt = {}) {
    auto s = friable_prefix(d, i + 1);
    NaturalSet ground(s, s.back());
    SolveOptions o = opt;
    o.canonical_witness = false;
    auto res = solve_family(PatternFamily::gp_friable3(d), ground, o).result;
    if (!res.exact()) throw budget_exceeded("friable_prefix_value: node budget exceeded");
    return res.optimum;
}

/// Friable-ratio 3-term GPs over the growth-1 friable grading:
/// 1 - (phi(P_d)/P_d) sum_{i=1}^{depth} (1 + R_{i-1} - R_i) / s_{i+1}.
inline BoundReport mcnew_asymptotic(unsigned d, std::span<const std::uint64_t> R, std::size_t depth) {
    if (d < 1) throw std::invalid_argument("mcnew_asymptotic: d must be >= 1");
    if (R.size() <= depth) throw std::invalid_argument("mcnew_asymptotic: need R_i for i <= depth");
    const auto s = friable_prefix(d, depth + 1);
    const Rational density(primorial_phi(d), primorial(d));
    BoundReport rep;
    rep.value = 1;
    rep.depth = depth;
    for (std::size_t i = 1; i <= depth; ++i) {
        BoundTerm t;
        t.index = i;
        t.coefficient = BigInt(1) + R[i - 1] - BigInt(R[i]);
        t.weight = density / Rational(BigInt(s[i]));
        t.contribution = Rational(t.coefficient) * t.weight;
        rep.value -= t.contribution;
        rep.terms.push_back(std::move(t));
    }
    return rep;
}

struct ThresholdHit {
    std::uint64_t n = 0;
    std::size_t r = 0;     // r_k(n)
    std::uint64_t easy = 0;  // n - floor(n/k)
};

/// Least n <= n_max with r_k(n) < n - floor(n/k), if any.
inline std::optional<ThresholdHit> threshold_search(unsigned k, std::uint64_t n_max,
                                                    const SolveOptions& opt = {}) {
    if (k < 3) throw std::invalid_argument("threshold_search: k must be >= 3");
    if (n_max < 1) throw std::invalid_argument("threshold_search: n_max must be >= 1");
    RSequence seq(k, opt);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const std::size_t r = seq.extend();
        const std::uint64_t easy = n - n / k;
        if (r < easy) return ThresholdHit{n, r, easy};
    }
    return std::nullopt;
}

}  // namespace proscribe
