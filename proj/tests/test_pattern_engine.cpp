#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "multent/multent.hpp"

using namespace multent;

namespace {

std::vector<long long> cell_values(const SmoothLattice& lat) {
    std::vector<long long> out;
    for (const LatticeCell& c : lat.cells) out.push_back(c.value.get_si());
    return out;
}

std::vector<long long> instance_values(const SmoothLattice& lat,
                                       const std::vector<std::size_t>& inst) {
    std::vector<long long> out;
    for (std::size_t i : inst) out.push_back(lat.cells[i].value.get_si());
    return out;
}

}  // namespace

TEST_CASE("lattice construction", "[pattern]") {
    const GammaSet g23 = validate_gamma({2, 3});
    CHECK(cell_values(build_lattice(g23, 5, Convention::inclusive)) ==
          std::vector<long long>{1, 2, 3, 4, 6});
    CHECK(cell_values(build_lattice(g23, 5, Convention::strict)) ==
          std::vector<long long>{1, 2, 3, 4});
    CHECK(cell_values(build_lattice(validate_gamma({2, 3, 5}), 5, Convention::inclusive)) ==
          std::vector<long long>{1, 2, 3, 4, 5});

    for (long long k = 1; k <= 40; ++k) {
        CHECK(build_lattice(g23, k, Convention::inclusive).cells.size() ==
              static_cast<std::size_t>(k));
        CHECK(build_lattice(g23, k, Convention::strict).cells.size() ==
              static_cast<std::size_t>(k - 1));
    }
    CHECK_THROWS_AS(build_lattice(g23, 0, Convention::inclusive), std::invalid_argument);
}

TEST_CASE("basic shapes", "[pattern]") {
    const BasicShape s23 = basic_shape(validate_gamma({2, 3}));
    CHECK(s23.offsets == std::vector<std::vector<int>>{{0, 0}, {1, 0}, {0, 1}});
    CHECK(s23.values == std::vector<long long>{1, 2, 3});

    const BasicShape s28 = basic_shape(validate_gamma({2, 8}));
    CHECK(s28.offsets == std::vector<std::vector<int>>{{0}, {1}, {3}});

    CHECK(basic_shape(validate_gamma({2})).offsets ==
          std::vector<std::vector<int>>{{0}, {1}});
    CHECK(basic_shape(validate_gamma({4})).offsets ==
          std::vector<std::vector<int>>{{0}, {1}});
}

TEST_CASE("constraint instances", "[pattern]") {
    const GammaSet g23 = validate_gamma({2, 3});
    const SmoothLattice l5 = build_lattice(g23, 5, Convention::inclusive);
    const auto inst = constraint_instances(l5, basic_shape(g23));
    REQUIRE(inst.size() == 2);
    CHECK(instance_values(l5, inst[0]) == std::vector<long long>{1, 2, 3});
    CHECK(instance_values(l5, inst[1]) == std::vector<long long>{2, 4, 6});

    const GammaSet g235 = validate_gamma({2, 3, 5});
    const SmoothLattice m5 = build_lattice(g235, 5, Convention::inclusive);
    const auto inst5 = constraint_instances(m5, basic_shape(g235));
    REQUIRE(inst5.size() == 1);
    CHECK(instance_values(m5, inst5[0]) == std::vector<long long>{1, 2, 3, 5});

    CHECK(constraint_instances(build_lattice(g23, 1, Convention::inclusive),
                               basic_shape(g23))
              .empty());
}

TEST_CASE("reference pattern counts", "[pattern]") {
    const ConstraintSystem bin(2, {0});
    const GammaSet g23 = validate_gamma({2, 3});
    const GammaSet g235 = validate_gamma({2, 3, 5});

    CHECK(count_patterns(build_lattice(g235, 5, Convention::inclusive), bin).exact == 30);
    CHECK(count_patterns(build_lattice(g235, 10, Convention::inclusive), bin).exact == 904);
    CHECK(count_patterns(build_lattice(g23, 5, Convention::strict), bin).exact == 14);
    CHECK(count_patterns(build_lattice(g23, 5, Convention::inclusive), bin).exact == 25);
    // the strict count at k equals the inclusive count at k-1
    for (long long k = 2; k <= 20; ++k)
        CHECK(count_patterns(build_lattice(g23, k, Convention::strict), bin).exact ==
              count_patterns(build_lattice(g23, k - 1, Convention::inclusive), bin).exact);
}

TEST_CASE("single-multiplier counts are Fibonacci", "[pattern]") {
    const ConstraintSystem bin(2, {0});
    const std::vector<BigInt> b = count_pattern_series(validate_gamma({2}), bin, 40);
    BigInt prev = 2, cur = 3;
    CHECK(b[1] == prev);
    CHECK(b[2] == cur);
    for (std::size_t k = 3; k <= 40; ++k) {
        const BigInt next = cur + prev;
        CHECK(b[k] == next);
        prev = cur;
        cur = next;
    }
}

TEST_CASE("gap-shape counts match the windowed reference", "[pattern]") {
    const ConstraintSystem bin(2, {0});
    const GammaSet g28 = validate_gamma({2, 8});
    const std::vector<BigInt> b = count_pattern_series(g28, bin, 12);
    for (long long m = 1; m <= 3; ++m)
        CHECK(b[static_cast<std::size_t>(m)] == big_pow(BigInt(2), static_cast<unsigned long>(m)));
    CHECK(b[4] == 14);
    for (long long len = 1; len <= 12; ++len)
        CHECK(b[static_cast<std::size_t>(len)] ==
              transfer_counts_1d({0, 1, 3}, 2, {0}, len).exact);
}

TEST_CASE("ternary allowed-product counts", "[pattern]") {
    const ConstraintSystem ternary(3, {0, 2});
    const std::vector<BigInt> b = count_pattern_series(validate_gamma({2}), ternary, 6);
    CHECK(b[1] == 3);
    CHECK(b[2] == 7);  // the seven admissible pairs
    // oracle agreement on every prefix
    for (long long k = 1; k <= 6; ++k) {
        const SmoothLattice lat = build_lattice(validate_gamma({2}), k, Convention::inclusive);
        CHECK(brute_force_count(lat, ternary).exact == b[static_cast<std::size_t>(k)]);
    }
}

TEST_CASE("count growth properties", "[pattern]") {
    for (int symbols : {2, 3}) {
        const ConstraintSystem cs(symbols, {0});
        for (const auto& gammas :
             {std::vector<long long>{2}, {2, 3}, {2, 3, 5}, {2, 8}}) {
            const GammaSet g = validate_gamma(gammas);
            const long long k_max = symbols == 2 ? 30 : 20;
            const std::vector<BigInt> b = count_pattern_series(g, cs, k_max);
            const SmoothLattice lat = build_lattice(g, k_max, Convention::inclusive);
            const auto instances = constraint_instances(lat, basic_shape(g));
            std::vector<std::size_t> last_cell;
            for (const auto& inst : instances) last_cell.push_back(inst.back());
            for (long long k = 1; k <= k_max; ++k) {
                const std::size_t uk = static_cast<std::size_t>(k);
                CHECK(b[uk] <= big_pow(BigInt(symbols), static_cast<unsigned long>(k)));
                if (k >= 2) {
                    CHECK(b[uk] >= b[uk - 1]);
                    // a cell that closes no new instance multiplies by N
                    const bool closes = std::find(last_cell.begin(), last_cell.end(),
                                                  uk - 1) != last_cell.end();
                    if (!closes) CHECK(b[uk] == symbols * b[uk - 1]);
                }
            }
        }
    }
}

TEST_CASE("count ratios", "[pattern]") {
    const GammaSet g23 = validate_gamma({2, 3});
    const ConstraintSystem bin(2, {0});
    const std::vector<BigRat> rs = ratio_sequence(g23, bin, 30);
    const std::vector<BigInt> q = smooth_values(g23, 30);
    CHECK(rs.front() == BigRat(2));
    for (long long k = 2; k <= 30; ++k) {
        const BigRat& r = rs[static_cast<std::size_t>(k - 2)];
        const BigInt& qk = q[static_cast<std::size_t>(k - 1)];
        const bool power_of_two = mpz_popcount(qk.get_mpz_t()) == 1;
        if (power_of_two) {
            CHECK(r == BigRat(2));
        } else {
            CHECK(r <= big_ratio(31, 16));
        }
    }
}

TEST_CASE("engine agrees with the oracle on an enumerated suite", "[pattern]") {
    for (const auto& gammas :
         {std::vector<long long>{2}, {2, 3}, {2, 3, 5}, {2, 8}}) {
        const GammaSet g = validate_gamma(gammas);
        for (int symbols : {2, 3}) {
            for (const auto& allowed :
                 {std::vector<long long>{0}, std::vector<long long>{0, 2}}) {
                const ConstraintSystem cs(symbols, allowed);
                const long long k_max = symbols == 2 ? 16 : 10;
                for (long long k = 1; k <= k_max; k += 3) {
                    for (Convention conv : {Convention::inclusive, Convention::strict}) {
                        const SmoothLattice lat = build_lattice(g, k, conv);
                        CAPTURE(gammas, symbols, allowed, k, conv == Convention::strict);
                        CHECK(count_patterns(lat, cs).exact ==
                              brute_force_count(lat, cs).exact);
                    }
                }
            }
        }
    }
}

TEST_CASE("engine agrees with the oracle on randomized instances", "[pattern]") {
    std::mt19937 rng(20240817);
    const std::vector<std::vector<long long>> gamma_pool{{2}, {2, 3}, {2, 3, 5}, {2, 8}};
    const std::vector<std::vector<long long>> allowed_pool{{0}, {0, 2}};
    int done = 0;
    while (done < 200) {
        const GammaSet g = validate_gamma(gamma_pool[rng() % gamma_pool.size()]);
        const int symbols = 2 + static_cast<int>(rng() % 2);
        const ConstraintSystem cs(symbols, allowed_pool[rng() % allowed_pool.size()]);
        const long long k = 1 + static_cast<long long>(rng() % (symbols == 2 ? 20 : 12));
        const Convention conv = rng() % 2 ? Convention::inclusive : Convention::strict;
        const SmoothLattice lat = build_lattice(g, k, conv);
        CAPTURE(g.gammas, symbols, cs.allowed, k, conv == Convention::strict);
        CHECK(count_patterns(lat, cs).exact == brute_force_count(lat, cs).exact);
        ++done;
    }
}

TEST_CASE("degenerate constraint systems", "[pattern]") {
    const GammaSet g23 = validate_gamma({2, 3});
    const SmoothLattice l5 = build_lattice(g23, 5, Convention::inclusive);

    // no admissible product at all: exact zero, not an error
    const ConstraintSystem impossible(2, {5});
    CHECK(count_patterns(l5, impossible).exact == 0);
    CHECK(brute_force_count(l5, impossible).exact == 0);
    CHECK(count_patterns(l5, impossible).log_value ==
          -std::numeric_limits<double>::infinity());

    // every product allowed: the free count
    const ConstraintSystem free2(2, {0, 1});
    CHECK(count_patterns(l5, free2).exact == 32);

    // single-symbol system with an unsatisfiable constraint
    const ConstraintSystem one(1, {1});
    CHECK(brute_force_count(l5, one).exact == 0);
    CHECK(count_patterns(l5, one).exact == 0);

    // strict k=1 lattice is empty: one empty assignment
    const SmoothLattice empty = build_lattice(g23, 1, Convention::strict);
    CHECK(count_patterns(empty, ConstraintSystem(2, {0})).exact == 1);
    CHECK(brute_force_count(empty, ConstraintSystem(2, {0})).exact == 1);

    // oversized oracle request
    CHECK_THROWS_AS(
        brute_force_count(build_lattice(g23, 40, Convention::inclusive), ConstraintSystem(2, {0})),
        oversize_error);

    // additive matrices belong to the coupled engine
    ConstraintSystem with_sft(2, {0});
    with_sft.sft = SftMatrix::parse("1,1;1,0");
    CHECK_THROWS_AS(count_patterns(l5, with_sft), std::invalid_argument);
}

TEST_CASE("mid-range count confirmed by inclusion-exclusion", "[pattern]") {
    // third route, independent of both the elimination engine and the
    // depth-first oracle: alternating sum over violated-constraint subsets
    const GammaSet g = validate_gamma({2, 3});
    const ConstraintSystem bin(2, {0});
    const SmoothLattice lat = build_lattice(g, 30, Convention::inclusive);
    const auto instances = constraint_instances(lat, basic_shape(g));
    REQUIRE(instances.size() <= 22);
    std::vector<std::uint64_t> masks;
    for (const auto& inst : instances) {
        std::uint64_t m = 0;
        for (std::size_t c : inst) m |= std::uint64_t{1} << c;
        masks.push_back(m);
    }
    BigInt total = 0;
    for (std::uint32_t sub = 0; sub < (std::uint32_t{1} << masks.size()); ++sub) {
        std::uint64_t covered = 0;
        int bits = 0;
        for (std::size_t i = 0; i < masks.size(); ++i)
            if (sub & (std::uint32_t{1} << i)) {
                covered |= masks[i];
                ++bits;
            }
        const BigInt term =
            big_pow(BigInt(2), static_cast<unsigned long>(
                                   30 - __builtin_popcountll(covered)));
        total += bits % 2 == 0 ? term : -term;
    }
    CHECK(count_patterns(lat, bin).exact == total);
}

TEST_CASE("pattern count log values", "[pattern]") {
    const ConstraintSystem bin(2, {0});
    const std::vector<BigInt> b = count_pattern_series(validate_gamma({2, 3}), bin, 42);
    const PatternCount pc =
        count_patterns(build_lattice(validate_gamma({2, 3}), 42, Convention::inclusive), bin);
    CHECK(pc.exact == b[42]);
    CHECK(pc.exact == BigInt("172749984030"));
    const double expect = std::log(172749984030.0);
    CHECK(std::fabs(pc.log_value - expect) <= 1e-12 * expect);
}
