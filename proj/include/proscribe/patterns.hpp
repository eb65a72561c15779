#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "numtheory.hpp"

namespace proscribe {

/// A finite set of naturals inside the ambient interval [1, ground_max].
class NaturalSet {
public:
    NaturalSet() = default;

    NaturalSet(std::vector<std::uint64_t> elements, std::uint64_t ground_max)
        : elements_(std::move(elements)), ground_max_(ground_max) {
        std::sort(elements_.begin(), elements_.end());
        if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
            throw std::invalid_argument("NaturalSet: duplicate element");
        if (!elements_.empty() && (elements_.front() == 0 || elements_.back() > ground_max_))
            throw std::invalid_argument("NaturalSet: element outside [1, ground_max]");
    }

    /// Ground max defaults to the largest element.
    NaturalSet(std::initializer_list<std::uint64_t> elements)
        : NaturalSet(std::vector<std::uint64_t>(elements),
                     elements.size() == 0 ? 0 : std::max(elements)) {}

    explicit NaturalSet(std::vector<std::uint64_t> elements)
        : NaturalSet(elements, elements.empty() ? 0
                                                : *std::max_element(elements.begin(), elements.end())) {}

    /// [1, n]
    static NaturalSet interval(std::uint64_t n) { return range(1, n); }

    /// [lo, hi] inside ground [1, hi]; empty when lo > hi.
    static NaturalSet range(std::uint64_t lo, std::uint64_t hi) {
        std::vector<std::uint64_t> xs;
        for (std::uint64_t x = std::max<std::uint64_t>(lo, 1); x <= hi; ++x) xs.push_back(x);
        return NaturalSet(std::move(xs), hi);
    }

    const std::vector<std::uint64_t>& elements() const noexcept { return elements_; }
    std::uint64_t ground_max() const noexcept { return ground_max_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }
    auto begin() const noexcept { return elements_.begin(); }
    auto end() const noexcept { return elements_.end(); }
    std::uint64_t max() const { return elements_.empty() ? 0 : elements_.back(); }

    bool contains(std::uint64_t x) const {
        return std::binary_search(elements_.begin(), elements_.end(), x);
    }

    bool includes(const NaturalSet& other) const {
        return std::includes(elements_.begin(), elements_.end(), other.begin(), other.end());
    }

    friend bool operator==(const NaturalSet& a, const NaturalSet& b) {
        return a.elements_ == b.elements_;
    }
    friend bool operator<(const NaturalSet& a, const NaturalSet& b) {
        return a.elements_ < b.elements_;
    }

    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(elements_[i]);
        }
        return s + "}";
    }

private:
    std::vector<std::uint64_t> elements_;
    std::uint64_t ground_max_ = 0;
};

enum class PatternKind { AP, GP_INT, GP_RAT, GEOM_SQUARE, GP_PRIME_POWER, GP_FRIABLE3 };

/// Descriptor of a proscribed family: which subsets a free set must avoid.
struct PatternFamily {
    PatternKind kind = PatternKind::GP_INT;
    unsigned k = 3;
    std::uint64_t p = 0;
    unsigned d = 0;

    static PatternFamily ap(unsigned k) {
        if (k < 2) throw std::invalid_argument("AP family needs k >= 2");
        return {PatternKind::AP, k, 0, 0};
    }
    static PatternFamily gp_int(unsigned k) {
        if (k < 3) throw std::invalid_argument("GP family needs k >= 3");
        return {PatternKind::GP_INT, k, 0, 0};
    }
    static PatternFamily gp_rat(unsigned k) {
        if (k < 3) throw std::invalid_argument("GP family needs k >= 3");
        return {PatternKind::GP_RAT, k, 0, 0};
    }
    static PatternFamily geom_square() { return {PatternKind::GEOM_SQUARE, 4, 0, 0}; }
    static PatternFamily gp_prime_power(std::uint64_t p, unsigned k) {
        if (k < 3) throw std::invalid_argument("GP family needs k >= 3");
        if (!is_prime(p)) throw std::invalid_argument("prime-power GP family needs p prime");
        return {PatternKind::GP_PRIME_POWER, k, p, 0};
    }
    static PatternFamily gp_friable3(unsigned d) {
        if (d < 1) throw std::invalid_argument("friable GP family needs d >= 1");
        return {PatternKind::GP_FRIABLE3, 3, 0, d};
    }

    /// Families closed under a -> c*a; their value on c*X equals the value on X.
    bool dilation_closed() const { return true; }

    std::string name() const {
        switch (kind) {
            case PatternKind::AP: return "AP(" + std::to_string(k) + ")";
            case PatternKind::GP_INT: return "GP_INT(" + std::to_string(k) + ")";
            case PatternKind::GP_RAT: return "GP_RAT(" + std::to_string(k) + ")";
            case PatternKind::GEOM_SQUARE: return "GEOM_SQUARE";
            case PatternKind::GP_PRIME_POWER:
                return "GP_PRIME_POWER(" + std::to_string(p) + "," + std::to_string(k) + ")";
            case PatternKind::GP_FRIABLE3: return "GP_FRIABLE3(" + std::to_string(d) + ")";
        }
        return "?";
    }

    friend bool operator==(const PatternFamily&, const PatternFamily&) = default;
};

namespace detail {

class Membership {
public:
    explicit Membership(const NaturalSet& ground) : max_(ground.max()) {
        if (max_ <= (1u << 24)) {
            dense_.assign(max_ + 1, false);
            for (auto x : ground) dense_[x] = true;
        } else {
            sparse_.insert(ground.begin(), ground.end());
        }
    }
    bool operator()(std::uint64_t x) const {
        if (x > max_) return false;
        return dense_.empty() ? sparse_.count(x) != 0 : dense_[x];
    }
    std::uint64_t max() const { return max_; }

private:
    std::uint64_t max_;
    std::vector<bool> dense_;
    std::unordered_set<std::uint64_t> sparse_;
};

// Appends a*ratio^0 .. a*ratio^(len-1) when every term is in the ground set.
inline bool push_geometric(const Membership& in, std::uint64_t a, std::uint64_t ratio, unsigned len,
                           std::vector<std::vector<std::uint64_t>>& out) {
    std::vector<std::uint64_t> terms{a};
    std::uint64_t x = a;
    for (unsigned i = 1; i < len; ++i) {
        x = mul_capped(x, ratio, in.max());
        if (x == 0 || !in(x)) return false;
        terms.push_back(x);
    }
    out.push_back(std::move(terms));
    return true;
}

inline std::vector<std::vector<std::uint64_t>> raw_instances(const PatternFamily& f,
                                                             const NaturalSet& ground) {
    std::vector<std::vector<std::uint64_t>> out;
    if (ground.empty()) return out;
    const Membership in(ground);
    const std::uint64_t top = ground.max();
    const auto& xs = ground.elements();

    switch (f.kind) {
        case PatternKind::AP:
            for (std::size_t i = 0; i < xs.size(); ++i) {
                for (std::size_t j = i + 1; j < xs.size(); ++j) {
                    std::uint64_t step = xs[j] - xs[i];
                    if (xs[i] + (f.k - 1) * step > top) break;
                    std::vector<std::uint64_t> terms{xs[i], xs[j]};
                    bool ok = true;
                    for (unsigned t = 2; t < f.k && ok; ++t) {
                        std::uint64_t x = xs[i] + t * step;
                        ok = in(x);
                        terms.push_back(x);
                    }
                    if (ok) out.push_back(std::move(terms));
                }
            }
            break;

        case PatternKind::GP_INT:
            for (auto a : xs)
                for (std::uint64_t r = 2; mul_capped(a, r, top) != 0; ++r) {
                    // a*r^(k-1) <= top is needed for the last term; push_geometric checks it.
                    std::uint64_t last = a;
                    for (unsigned t = 1; t < f.k && last != 0; ++t) last = mul_capped(last, r, top);
                    if (last == 0) break;
                    push_geometric(in, a, r, f.k, out);
                }
            break;

        case PatternKind::GP_RAT: {
            // Terms m * p^(k-1-i) * q^i with gcd(p, q) = 1 and q > p >= 1.
            for (std::uint64_t q = 2;; ++q) {
                std::uint64_t qpow = 1;
                for (unsigned t = 1; t < f.k && qpow != 0; ++t) qpow = mul_capped(qpow, q, top);
                if (qpow == 0) break;
                for (std::uint64_t p = 1; p < q; ++p) {
                    if (std::gcd(p, q) != 1) continue;
                    for (std::uint64_t m = 1; mul_capped(m, qpow, top) != 0; ++m) {
                        std::vector<std::uint64_t> terms;
                        bool ok = true;
                        for (unsigned i = 0; i < f.k && ok; ++i) {
                            std::uint64_t x = m;
                            for (unsigned t = 0; t < f.k - 1 - i; ++t) x *= p;
                            for (unsigned t = 0; t < i; ++t) x *= q;
                            ok = in(x);
                            terms.push_back(x);
                        }
                        if (ok) out.push_back(std::move(terms));
                    }
                }
            }
            break;
        }

        case PatternKind::GEOM_SQUARE:
            for (auto a : xs)
                for (std::uint64_t r = 2; mul_capped(mul_capped(a, r, top), r + 1, top) != 0; ++r)
                    for (std::uint64_t s = r + 1;; ++s) {
                        std::uint64_t ar = a * r;
                        std::uint64_t ars = mul_capped(ar, s, top);
                        if (ars == 0) break;
                        if (in(ar) && in(a * s) && in(ars)) out.push_back({a, ar, a * s, ars});
                    }
            break;

        case PatternKind::GP_PRIME_POWER:
            for (auto a : xs)
                for (std::uint64_t ratio = f.p;; ) {
                    std::uint64_t last = a;
                    for (unsigned t = 1; t < f.k && last != 0; ++t) last = mul_capped(last, ratio, top);
                    if (last == 0) break;
                    push_geometric(in, a, ratio, f.k, out);
                    ratio = mul_capped(ratio, f.p, top);
                    if (ratio == 0) break;
                }
            break;

        case PatternKind::GP_FRIABLE3: {
            const auto ratios = friable_numbers(f.d, std::max<std::uint64_t>(top, 1));
            for (auto a : xs)
                for (std::size_t j = 1; j < ratios.size(); ++j) {
                    std::uint64_t s = ratios[j];
                    std::uint64_t last = mul_capped(mul_capped(a, s, top), s, top);
                    if (last == 0) break;
                    if (in(a * s) && in(last)) out.push_back({a, a * s, last});
                }
            break;
        }
    }

    for (auto& inst : out) std::sort(inst.begin(), inst.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

/// Every member of the family contained in `ground`, each once, in lexicographic
/// order of sorted element lists.
inline std::vector<NaturalSet> enumerate_instances(const PatternFamily& family,
                                                   const NaturalSet& ground) {
    std::vector<NaturalSet> out;
    for (auto& inst : detail::raw_instances(family, ground))
        out.emplace_back(std::move(inst), ground.ground_max());
    return out;
}

inline bool is_free(const NaturalSet& set, const PatternFamily& family) {
    return detail::raw_instances(family, set).empty();
}

}  // namespace proscribe
