#include <catch2/catch_amalgamated.hpp>

#include "multent/multent.hpp"

using namespace multent;

namespace {

ConstraintSystem golden_mean() {
    ConstraintSystem cs(2, {0});
    cs.sft = SftMatrix::parse("1,1;1,0");
    return cs;
}

CoupledGraph graph_from_vertices(long long q, const std::set<long long>& vertices) {
    CoupledGraph g;
    g.q = q;
    g.vertices.assign(vertices.begin(), vertices.end());
    detail::attach_edges(g);
    return g;
}

/// With an unconstrained transition matrix the graph decomposes into its
/// multiplicative chains; the count is the product of windowed chain counts.
BigInt chain_product_reference(const CoupledGraph& g, const ConstraintSystem& cs) {
    std::set<long long> present(g.vertices.begin(), g.vertices.end());
    BigInt total = 1;
    for (long long v : g.vertices) {
        if (v % g.q == 0 && present.count(v / g.q)) continue;  // not a chain head
        long long len = 0;
        for (long long w = v; present.count(w); w *= g.q) ++len;
        total *= transfer_counts_1d({0, 1}, cs.num_symbols, cs.allowed, len).exact;
    }
    return total;
}

}  // namespace

TEST_CASE("generation graph construction", "[coupled]") {
    const CoupledGraph g = build_coupled_graph(2, 3, 2);
    CHECK(g.vertices == std::vector<long long>{3, 5, 6, 7});
    CHECK(g.mult_edges ==
          std::vector<std::pair<long long, long long>>{{3, 6}});
    CHECK(g.add_edges ==
          std::vector<std::pair<long long, long long>>{{5, 6}, {6, 7}});
    CHECK(g.generation.at(3) == 1);
    CHECK(g.generation.at(6) == 2);

    CHECK(build_coupled_graph(3, 4, 2).vertices.size() == 10);

    CHECK_THROWS_AS(build_coupled_graph(2, 4, 2), std::invalid_argument);  // root even
    CHECK_THROWS_AS(build_coupled_graph(2, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_coupled_graph(1, 1, 2), std::invalid_argument);
}

TEST_CASE("vertex count formula", "[coupled]") {
    for (long long q : {2, 3, 4}) {
        for (long long k = 1; k <= 10; ++k) {
            for (long long root : {3, 5, 7, 25, 49}) {
                if (root % q == 0) continue;
                CAPTURE(q, k, root);
                const CoupledGraph g = build_coupled_graph(q, root, k);
                CHECK(BigInt(static_cast<long>(g.vertices.size())) ==
                      coupled_vertex_count_formula(q, k));
            }
        }
    }
}

TEST_CASE("golden-mean coupled counts", "[coupled]") {
    const ConstraintSystem gm = golden_mean();
    const CoupledGraph g2 = build_coupled_graph(2, 3, 2);
    CHECK(count_coupled_patterns(g2, gm).exact == 9);
    CHECK(brute_force_coupled(g2, gm).exact == 9);

    const CoupledGraph g3 = build_coupled_graph(2, 3, 3);
    CHECK(count_coupled_patterns(g3, gm).exact == 237);
    CHECK(brute_force_coupled(g3, gm).exact == 237);

    CHECK(count_coupled_patterns(build_coupled_graph(2, 3, 4), gm).exact == 213624);

    ConstraintSystem no_matrix(2, {0});
    CHECK_THROWS_AS(count_coupled_patterns(g2, no_matrix), std::invalid_argument);
    ConstraintSystem mismatched(2, {0});
    mismatched.sft = SftMatrix::parse("1,1,1;1,0,1;1,1,0");
    CHECK_THROWS_AS(count_coupled_patterns(g2, mismatched), std::invalid_argument);
}

TEST_CASE("counts do not depend on the root", "[coupled]") {
    const ConstraintSystem gm = golden_mean();
    for (long long k = 2; k <= 4; ++k) {
        const BigInt reference = count_coupled_patterns(build_coupled_graph(2, 3, k), gm).exact;
        int roots = 0;
        for (long long l = 3; roots < 10; l += 2) {
            CAPTURE(k, l);
            CHECK(count_coupled_patterns(build_coupled_graph(2, l, k), gm).exact == reference);
            ++roots;
        }
    }
    for (long long k = 2; k <= 3; ++k) {
        const BigInt reference = count_coupled_patterns(build_coupled_graph(3, 4, k), gm).exact;
        int roots = 0;
        for (long long l = 4; roots < 10; ++l) {
            if (l % 3 == 0) continue;
            CAPTURE(k, l);
            CHECK(count_coupled_patterns(build_coupled_graph(3, l, k), gm).exact == reference);
            ++roots;
        }
    }
}

TEST_CASE("entropy sandwich", "[coupled]") {
    const ConstraintSystem gm = golden_mean();
    const CoupledBounds b2 = entropy_bounds(2, gm, 2);
    CHECK(b2.count.exact == 9);
    CHECK(std::fabs(b2.lower - 0.366204) < 1e-6);
    CHECK(std::fabs(b2.upper - 0.597253) < 1e-6);
    CHECK(b2.padding_admissible);

    const CoupledBounds b3 = entropy_bounds(2, gm, 3);
    CHECK(std::fabs(b3.lower - 0.390576) < 1e-6);
    CHECK(std::fabs(b3.upper - 0.539107) < 1e-6);

    const CoupledBounds b4 = entropy_bounds(2, gm, 4);
    CHECK(std::fabs(b4.lower - 0.409066) < 1e-6);
    CHECK(std::fabs(b4.upper - 0.501485) < 1e-6);

    // lower bounds rise, upper bounds fall
    double lower_prev = 0, upper_prev = 10;
    for (long long k = 2; k <= 5; ++k) {
        const CoupledBounds b = entropy_bounds(2, gm, k);
        CHECK(b.lower >= lower_prev);
        CHECK(b.upper <= upper_prev);
        CHECK(b.lower <= b.upper);
        lower_prev = b.lower;
        upper_prev = b.upper;
    }
}

TEST_CASE("independent copy counts", "[coupled]") {
    const CoupledCopyCount c = copy_count_coupled(2, 2, 5);
    CHECK(c.alpha == 5);  // one copy below 8, four copies in (8, 32)
    CHECK(c.density_limit == big_ratio(1, 6));
    CHECK(copy_count_coupled(2, 2, 3).alpha == 1);
    CHECK_THROWS_AS(copy_count_coupled(2, 3, 3), std::invalid_argument);

    CHECK(unused_vertex_count(2, 2, 5) == 12);

    // conservation: alpha * |L| + unused = Q^n
    for (long long q : {2, 3, 4})
        for (long long k = 1; k <= 5; ++k)
            for (long long n = k + 1; n <= 12; ++n) {
                CAPTURE(q, k, n);
                const BigInt covered =
                    copy_count_coupled(q, k, n).alpha * coupled_vertex_count_formula(q, k);
                CHECK(covered + unused_vertex_count(q, k, n) ==
                      big_pow(big(q), static_cast<unsigned long>(n)));
            }
}

TEST_CASE("mutual independence predicate", "[coupled]") {
    const CoupledGraph m3 = build_coupled_graph(2, 3, 2);
    const CoupledGraph m9 = build_coupled_graph(2, 9, 2);
    const std::set<long long> a(m3.vertices.begin(), m3.vertices.end());
    const std::set<long long> b(m9.vertices.begin(), m9.vertices.end());
    CHECK(a == std::set<long long>{3, 5, 6, 7});
    CHECK(b == std::set<long long>{9, 17, 18, 19});
    CHECK(independence_check(a, b, 2));
    CHECK_FALSE(independence_check({3, 6}, {7, 14}, 2));  // 6,7 consecutive
    CHECK_FALSE(independence_check({3}, {6}, 2));         // related by doubling
}

TEST_CASE("independent pieces multiply", "[coupled]") {
    const ConstraintSystem gm = golden_mean();
    const CoupledGraph m3 = build_coupled_graph(2, 3, 2);
    const CoupledGraph m9 = build_coupled_graph(2, 9, 2);
    std::set<long long> all(m3.vertices.begin(), m3.vertices.end());
    all.insert(m9.vertices.begin(), m9.vertices.end());
    const CoupledGraph joint = graph_from_vertices(2, all);
    CHECK(brute_force_coupled(joint, gm).exact ==
          brute_force_coupled(m3, gm).exact * brute_force_coupled(m9, gm).exact);

    // degree-3 copies
    const CoupledGraph a = build_coupled_graph(2, 3, 3);
    const CoupledGraph b = build_coupled_graph(2, 33, 3);
    std::set<long long> sa(a.vertices.begin(), a.vertices.end());
    std::set<long long> sb(b.vertices.begin(), b.vertices.end());
    REQUIRE(independence_check(sa, sb, 2));
    std::set<long long> uni = sa;
    uni.insert(sb.begin(), sb.end());
    CHECK(count_coupled_patterns(graph_from_vertices(2, uni), gm).exact ==
          count_coupled_patterns(a, gm).exact * count_coupled_patterns(b, gm).exact);
}

TEST_CASE("unconstrained matrix reduces to chain products", "[coupled]") {
    ConstraintSystem all_ones(2, {0});
    all_ones.sft = SftMatrix::parse("1,1;1,1");
    for (long long k = 2; k <= 4; ++k) {
        const CoupledGraph g = build_coupled_graph(2, 3, k);
        CAPTURE(k);
        CHECK(count_coupled_patterns(g, all_ones).exact ==
              chain_product_reference(g, all_ones));
    }
}

TEST_CASE("exhaustive coupled sequences", "[coupled]") {
    const ConstraintSystem gm = golden_mean();
    CHECK(coupled_sequence_naive(2, gm, 2).exact == 3);  // 00, 01, 10
    CHECK(coupled_sequence_naive(2, gm, 4).exact == 7);

    const PatternCount x20 = coupled_sequence_naive(2, gm, 20);
    const double rate = x20.log_value / 20.0;
    for (long long k = 2; k <= 4; ++k) {
        const CoupledBounds b = entropy_bounds(2, gm, k);
        CHECK(rate >= b.lower);
        CHECK(rate <= b.upper);
    }
    CHECK_THROWS_AS(coupled_sequence_naive(2, gm, 40), oversize_error);
}

TEST_CASE("three-symbol coupled systems", "[coupled]") {
    ConstraintSystem cs(3, {0, 2});
    cs.sft = SftMatrix::parse("1,1,1;1,0,1;1,1,0");
    for (long long k = 2; k <= 3; ++k) {
        const CoupledGraph g = build_coupled_graph(2, 3, k);
        CAPTURE(k);
        CHECK(count_coupled_patterns(g, cs).exact == brute_force_coupled(g, cs).exact);
    }
    const CoupledBounds b = entropy_bounds(2, cs, 3);
    CHECK(b.lower <= b.upper);
    CHECK(b.padding_admissible);
}

TEST_CASE("transition matrix parsing", "[coupled]") {
    const SftMatrix m = SftMatrix::parse("1,1;1,0");
    CHECK(m.size == 2);
    CHECK(m.at(0, 0));
    CHECK(m.at(1, 0));
    CHECK_FALSE(m.at(1, 1));
    CHECK_THROWS_AS(SftMatrix::parse("1,1;1"), std::invalid_argument);
    CHECK_THROWS_AS(SftMatrix::parse("2,0;0,1"), std::invalid_argument);
    CHECK_THROWS_AS(SftMatrix::parse(""), std::invalid_argument);
}
