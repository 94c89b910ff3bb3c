#pragma once

#include <map>
#include <set>

#include "multent/entropy.hpp"

namespace multent {

/// Generation graph grown from a root chain: vertices produced by
/// i -> Qi, Qi±1, ..., Qi±(Q-1), with multiplicative edges (i, Qi) and
/// additive edges between every pair of consecutive integers present.
struct CoupledGraph {
    long long q = 2;
    long long root = 1;
    long long degree = 1;
    std::vector<long long> vertices;  // ascending
    std::vector<std::pair<long long, long long>> mult_edges;  // (i, Q i)
    std::vector<std::pair<long long, long long>> add_edges;   // (m, m+1)
    std::map<long long, int> generation;                      // vertex -> first generation
};

inline BigInt coupled_vertex_count_formula(long long q, long long k) {
    // Q (Q^k - 1) / (Q - 1) - k
    BigInt numer = big(q) * (big_pow(big(q), static_cast<unsigned long>(k)) - 1);
    return numer / big(q - 1) - big(k);
}

namespace detail {

/// Builds the edge structure over an explicit (sorted, unique) vertex set.
inline void attach_edges(CoupledGraph& g) {
    const auto present = [&](long long v) {
        return std::binary_search(g.vertices.begin(), g.vertices.end(), v);
    };
    for (long long v : g.vertices) {
        if (present(v + 1)) g.add_edges.emplace_back(v, v + 1);
        if (v <= std::numeric_limits<long long>::max() / g.q && present(v * g.q))
            g.mult_edges.emplace_back(v, v * g.q);
    }
}

}  // namespace detail

inline CoupledGraph build_coupled_graph(long long q, long long l, long long k) {
    if (q < 2) throw std::invalid_argument("Q must be >= 2");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (l < 1 || l % q == 0)
        throw std::invalid_argument("root must be a positive integer not divisible by Q");

    CoupledGraph g;
    g.q = q;
    g.root = l;
    g.degree = k;
    // generations are integer intervals: V_1 = [l, l+Q-2] (a single vertex for
    // Q = 2), V_{j+1} = [Q lo - (Q-1), Q hi + (Q-1)]
    long long lo = l, hi = q == 2 ? l : l + q - 2;
    std::map<long long, int> gen;
    for (int j = 1; j <= k; ++j) {
        // generations are ascending intervals (overlapping only for tiny roots)
        for (long long v = lo; v <= hi; ++v) gen.emplace_hint(gen.end(), v, j);
        if (j < k) {
            if (hi > (std::numeric_limits<long long>::max() - (q - 1)) / q)
                throw std::overflow_error("generation graph exceeds the integer range");
            lo = q * lo - (q - 1);
            hi = q * hi + (q - 1);
        }
    }
    g.generation = std::move(gen);
    g.vertices.reserve(g.generation.size());
    for (const auto& [v, j] : g.generation) g.vertices.push_back(v);
    detail::attach_edges(g);
    return g;
}

namespace detail {

inline EliminationPlan coupled_plan(const CoupledGraph& g, const ConstraintSystem& cs,
                                    std::vector<std::vector<int>>& groups,
                                    std::vector<std::pair<int, int>>& pairs) {
    std::unordered_map<long long, int> pos;
    pos.reserve(g.vertices.size());
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        pos.emplace(g.vertices[i], static_cast<int>(i));
    for (auto [a, b] : g.mult_edges) groups.push_back({pos.at(a), pos.at(b)});
    for (auto [a, b] : g.add_edges) pairs.emplace_back(pos.at(a), pos.at(b));
    EliminationPlan plan;
    plan.cell_count = static_cast<int>(g.vertices.size());
    plan.num_symbols = cs.num_symbols;
    plan.allowed = cs.allowed;
    plan.groups = groups;
    plan.pairs = pairs;
    plan.sft = &*cs.sft;
    return plan;
}

}  // namespace detail

/// Exact number of vertex labelings satisfying the transition matrix on
/// additive edges and the allowed-product set on multiplicative edges.
/// The graph has cycles; counting runs by frontier elimination in
/// ascending integer order.
inline PatternCount count_coupled_patterns(const CoupledGraph& g, const ConstraintSystem& cs) {
    if (!cs.sft) throw std::invalid_argument("coupled counting requires a transition matrix");
    if (cs.sft->size != cs.num_symbols)
        throw std::invalid_argument("matrix size must match the symbol count");
    std::vector<std::vector<int>> groups;
    std::vector<std::pair<int, int>> pairs;
    detail::EliminationPlan plan = detail::coupled_plan(g, cs, groups, pairs);
    return PatternCount::of(detail::eliminate(plan, false).back());
}

/// Exhaustive oracle for coupled counts (vertex sets up to the 2^27 guard).
inline PatternCount brute_force_coupled(const CoupledGraph& g, const ConstraintSystem& cs) {
    if (!cs.sft) throw std::invalid_argument("coupled counting requires a transition matrix");
    if (cs.sft->size != cs.num_symbols)
        throw std::invalid_argument("matrix size must match the symbol count");
    std::vector<std::vector<int>> groups;
    std::vector<std::pair<int, int>> pairs;
    detail::coupled_plan(g, cs, groups, pairs);
    return PatternCount::of(detail::exhaustive_count(
        static_cast<int>(g.vertices.size()), cs, groups, pairs));
}

/// Entropy sandwich at degree k from the count on one generation graph.
struct CoupledBounds {
    long long degree = 0;
    PatternCount count;
    double lower = 0.0;
    double upper = 0.0;
    // symbol 0 pads unused cells in the lower-bound construction, so the
    // bound is asserted only when 0 -> 0 is an admissible transition
    bool padding_admissible = false;
};

inline long long default_coupled_root(long long q) { return q == 3 ? 4 : 3; }

inline CoupledBounds entropy_bounds(long long q, const ConstraintSystem& cs, long long k,
                                    long long root = 0) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    if (root == 0) root = default_coupled_root(q);
    const CoupledGraph g = build_coupled_graph(q, root, k);
    CoupledBounds b;
    b.degree = k;
    b.count = count_coupled_patterns(g, cs);
    const double denom =
        static_cast<double>(q) * (std::pow(static_cast<double>(q), static_cast<double>(k)) - 1.0);
    const double scale = static_cast<double>(q - 1) / denom;
    b.lower = scale * b.count.log_value;
    b.upper = b.lower + scale * static_cast<double>(k) *
                            std::log(static_cast<double>(cs.num_symbols));
    b.padding_admissible = cs.sft->at(0, 0);
    return b;
}

/// Number of mutually independent degree-k graph copies inside (1, Q^n),
/// with the limiting density (Q-1)/(Q (Q^k - 1)).
struct CoupledCopyCount {
    BigInt alpha;
    BigRat density_limit;
};

inline CoupledCopyCount copy_count_coupled(long long q, long long k, long long n) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (n <= k) throw std::invalid_argument("n must be >= k + 1");
    const long long m_star = (n - 1) / k - 1;
    CoupledCopyCount c;
    c.alpha = 0;
    for (long long l = 0; l <= m_star; ++l)
        c.alpha += big(q - 1) *
                   big_pow(big(q), static_cast<unsigned long>(n - k * (l + 1) - 1));
    BigInt denom = big(q) * (big_pow(big(q), static_cast<unsigned long>(k)) - 1);
    c.density_limit = BigRat(big(q - 1), denom);
    c.density_limit.canonicalize();
    return c;
}

/// Cells of [1, Q^n] not covered by any of the independent graph copies.
inline BigInt unused_vertex_count(long long q, long long k, long long n) {
    const CoupledCopyCount c = copy_count_coupled(q, k, n);
    const long long m_star = (n - 1) / k - 1;
    return big(k) * c.alpha +
           big_pow(big(q), static_cast<unsigned long>(n - k * (m_star + 1)));
}

/// Mutual independence: disjoint, no consecutive pair across the sets, and
/// no pair related by multiplication by Q.
inline bool independence_check(const std::set<long long>& a, const std::set<long long>& b,
                               long long q) {
    for (long long m : a) {
        if (b.count(m)) return false;
        if (b.count(m - 1) || b.count(m + 1)) return false;
        if (m % q == 0 && b.count(m / q)) return false;
        if (m <= std::numeric_limits<long long>::max() / q && b.count(m * q)) return false;
    }
    return true;
}

/// Exhaustive count of length-n strings satisfying the transition matrix on
/// all consecutive pairs and the product constraint on (k, Qk) for Qk <= n.
inline PatternCount coupled_sequence_naive(long long q, const ConstraintSystem& cs,
                                           long long n) {
    if (!cs.sft) throw std::invalid_argument("coupled counting requires a transition matrix");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::vector<std::vector<int>> groups;
    for (long long k = 1; k * q <= n; ++k)
        groups.push_back({static_cast<int>(k - 1), static_cast<int>(k * q - 1)});
    std::vector<std::pair<int, int>> pairs;
    for (long long m = 1; m < n; ++m)
        pairs.emplace_back(static_cast<int>(m - 1), static_cast<int>(m));
    return PatternCount::of(detail::exhaustive_count(static_cast<int>(n), cs, groups, pairs));
}

}  // namespace multent
