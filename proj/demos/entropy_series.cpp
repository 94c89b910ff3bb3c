// Prints the entropy series for the binary system with multipliers {2,3}:
// per-term counts, the running partial sum, and the certified tail bound.

#include <cstdio>

#include "multent/multent.hpp"

int main() {
    using namespace multent;
    const GammaSet g = validate_gamma({2, 3});
    const ConstraintSystem cs(2, {0});
    const long long terms = 30;

    const std::vector<BigInt> b = count_pattern_series(g, cs, terms);
    const std::vector<BigInt> q = smooth_values(g, terms + 1);
    std::printf("%4s %8s %-22s %-12s %s\n", "k", "q_k", "count", "h_partial", "tail");
    for (long long k = 1; k <= terms; ++k) {
        const EntropyEstimate est = partial_entropy(g, cs, k, Convention::inclusive);
        std::printf("%4lld %8s %-22s %.9f %.3e\n", k, q[k - 1].get_str().c_str(),
                    b[static_cast<std::size_t>(k)].get_str().c_str(), est.value,
                    est.tail_bound);
    }
    return 0;
}
