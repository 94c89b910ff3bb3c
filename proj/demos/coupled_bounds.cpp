// Entropy sandwich for the golden-mean coupled system at increasing degree.

#include <cstdio>

#include "multent/multent.hpp"

int main() {
    using namespace multent;
    ConstraintSystem cs(2, {0});
    cs.sft = SftMatrix::parse("1,1;1,0");

    std::printf("%3s %-14s %-10s %s\n", "k", "count", "lower", "upper");
    for (long long k = 2; k <= 5; ++k) {
        const CoupledBounds b = entropy_bounds(2, cs, k);
        std::printf("%3lld %-14s %.6f   %.6f\n", k, b.count.exact.get_str().c_str(),
                    b.lower, b.upper);
    }
    return 0;
}
