#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "multent/common.hpp"

namespace multent {

/// A validated multiplier set together with its prime-base reduction.
/// The prime base is the set of primes dividing lcm of the multipliers;
/// it coincides with the multipliers themselves when those are distinct
/// primes, and collapses otherwise (e.g. {2,8} reduces to {2}).
struct GammaSet {
    std::vector<long long> gammas;      // strictly ascending, each >= 2
    bool pairwise_coprime = false;
    std::vector<long long> prime_base;  // ascending primes of lcm(gammas)

    /// Base generating the semigroup the chains live over. A pairwise
    /// coprime set generates its own partition of the integers; otherwise
    /// the set is reduced to its prime base.
    const std::vector<long long>& working_base() const {
        return pairwise_coprime ? gammas : prime_base;
    }
};

namespace detail {

inline std::vector<long long> prime_factors(long long n) {
    std::vector<long long> out;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace detail

inline GammaSet validate_gamma(std::vector<long long> raw) {
    if (raw.empty()) throw std::invalid_argument("multiplier set must be non-empty");
    std::sort(raw.begin(), raw.end());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] < 2) throw std::invalid_argument("multipliers must be >= 2");
        if (i > 0 && raw[i] == raw[i - 1])
            throw std::invalid_argument("duplicate multiplier");
    }

    GammaSet g;
    g.gammas = std::move(raw);
    g.pairwise_coprime = true;
    for (std::size_t i = 0; i < g.gammas.size() && g.pairwise_coprime; ++i)
        for (std::size_t j = i + 1; j < g.gammas.size(); ++j)
            if (std::gcd(g.gammas[i], g.gammas[j]) != 1) {
                g.pairwise_coprime = false;
                break;
            }

    for (long long v : g.gammas)
        for (long long p : detail::prime_factors(v))
            if (std::find(g.prime_base.begin(), g.prime_base.end(), p) == g.prime_base.end())
                g.prime_base.push_back(p);
    std::sort(g.prime_base.begin(), g.prime_base.end());
    return g;
}

}  // namespace multent
