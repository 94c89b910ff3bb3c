#pragma once

#include <span>
#include <utility>
#include <vector>

#include "multent/gamma.hpp"

namespace multent {

/// Ascending enumeration of the multiplicative semigroup generated by `base`.
struct SmoothSequence {
    std::vector<long long> base;
    std::vector<BigInt> values;  // q_1 = 1 < q_2 < ...
};

namespace detail {

/// Ordered merge over per-generator multiplication frontiers with duplicate
/// suppression (the classic Hamming-sequence scheme). Stops after `count`
/// values or once the next value would exceed `bound` (bound < 0: no bound).
inline std::vector<BigInt> smooth_merge(std::span<const long long> base, std::size_t count,
                                        const BigInt& bound) {
    std::vector<BigInt> values{BigInt(1)};
    if (bound >= 0 && bound < 1) return {};
    std::vector<std::size_t> ptr(base.size(), 0);
    std::vector<BigInt> cand(base.size());
    for (std::size_t j = 0; j < base.size(); ++j) cand[j] = big(base[j]);
    while (values.size() < count) {
        BigInt next = cand[0];
        for (std::size_t j = 1; j < base.size(); ++j) next = std::min(next, cand[j]);
        if (bound >= 0 && next > bound) break;
        values.push_back(next);
        for (std::size_t j = 0; j < base.size(); ++j) {
            while (cand[j] <= next) {
                ++ptr[j];
                cand[j] = values[ptr[j]] * static_cast<long>(base[j]);
            }
        }
    }
    return values;
}

}  // namespace detail

inline SmoothSequence smooth_sequence(const GammaSet& g, bool use_prime_base,
                                      std::size_t limit_count) {
    if (limit_count < 1) throw std::invalid_argument("limit_count must be >= 1");
    SmoothSequence s;
    s.base = use_prime_base ? g.prime_base : g.gammas;
    s.values = detail::smooth_merge(s.base, limit_count, BigInt(-1));
    return s;
}

/// First `count` elements q_1..q_count of the working-base semigroup.
inline std::vector<BigInt> smooth_values(const GammaSet& g, std::size_t count) {
    return detail::smooth_merge(g.working_base(), count, BigInt(-1));
}

/// All working-base semigroup elements <= bound, ascending.
inline std::vector<BigInt> smooth_values_upto(const GammaSet& g, long long bound) {
    return detail::smooth_merge(g.working_base(), std::numeric_limits<std::size_t>::max(),
                                big(bound));
}

/// True iff no working-base element divides n.
inline bool in_complement(long long n, const GammaSet& g) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    for (long long b : g.working_base())
        if (n % b == 0) return false;
    return true;
}

/// Number of complement members in [1, x], by inclusion-exclusion over the
/// working base (whose elements are pairwise coprime).
inline long long complement_count(long long x, const GammaSet& g) {
    if (x < 1) return 0;
    const auto& base = g.working_base();
    const std::size_t q = base.size();
    long long total = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << q); ++mask) {
        long long prod = 1;
        bool odd = false;
        for (std::size_t j = 0; j < q && prod <= x; ++j)
            if (mask & (std::size_t{1} << j)) {
                // products beyond x contribute nothing; saturate instead of overflowing
                prod = prod > x / base[j] ? x + 1 : prod * base[j];
                odd = !odd;
            }
        total += (odd ? -1 : 1) * (x / prod);
    }
    return total;
}

/// Asymptotic density of chain roots, as an exact rational. Computed by
/// direct counting over one period and checked against the product formula
/// (the working base is pairwise coprime, so the two must agree).
inline BigRat beta(const GammaSet& g) {
    long long period = 1;
    for (long long b : g.working_base()) {
        if (period > std::numeric_limits<long long>::max() / b)
            throw std::overflow_error("base period overflow");
        period *= b;
    }
    const BigRat counted = big_ratio(complement_count(period, g), period);
    BigRat product(1);
    for (long long b : g.working_base()) product *= big_ratio(b - 1, b);
    if (counted != product)
        throw std::logic_error("density mismatch between counting and the product formula");
    return counted;
}

/// Chain decomposition of [1, n]: for every root i in the complement set,
/// the length k of its chain {i q_1, ..., i q_k} with i q_k <= n < i q_{k+1}.
struct ChainDecomposition {
    std::vector<std::pair<long long, long long>> chains;  // (root, length), roots ascending
};

inline ChainDecomposition decompose_range(long long n, const GammaSet& g) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const std::vector<BigInt> q = smooth_values_upto(g, n);
    ChainDecomposition d;
    for (long long i = 1; i <= n; ++i) {
        if (!in_complement(i, g)) continue;
        const BigInt limit = big(n / i);
        auto it = std::upper_bound(q.begin(), q.end(), limit);
        d.chains.emplace_back(i, static_cast<long long>(it - q.begin()));
    }
    return d;
}

/// Exact copy count alpha(k; n) for chains of length k in [1, n], with the
/// empirical density and its limit.
struct DensityReport {
    long long k = 0;
    long long n = 0;
    long long alpha = 0;
    BigRat empirical;  // alpha / n
    BigRat limit;      // beta * (1/q_k - 1/q_{k+1})
};

inline DensityReport copy_count(long long k, long long n, const GammaSet& g) {
    if (k < 1 || n < 1) throw std::invalid_argument("k and n must be >= 1");
    const std::vector<BigInt> q = smooth_values(g, static_cast<std::size_t>(k) + 1);
    const auto floor_div = [](long long a, const BigInt& b) -> long long {
        BigInt r = big(a) / b;
        return static_cast<long long>(r.get_si());
    };
    DensityReport r;
    r.k = k;
    r.n = n;
    // roots i with q(n; i) = q_k form the half-open interval (n/q_{k+1}, n/q_k]
    r.alpha = complement_count(floor_div(n, q[k - 1]), g) -
              complement_count(floor_div(n, q[k]), g);
    r.empirical = big_ratio(r.alpha, n);
    BigRat inv_k(BigInt(1), q[k - 1]), inv_k1(BigInt(1), q[k]);
    inv_k.canonicalize();
    inv_k1.canonicalize();
    r.limit = beta(g) * (inv_k - inv_k1);
    r.limit.canonicalize();
    return r;
}

}  // namespace multent
