#pragma once

#include <array>
#include <queue>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "multent/smooth.hpp"

namespace multent {

// Diagnostics for the two-multiplier coupled obstruction structure over the
// base {2,3}. This module only analyzes the consecutiveness graph; it does
// not attempt to split it into independent parts.

namespace detail {

inline const GammaSet& base_23() {
    static const GammaSet g = validate_gamma({2, 3});
    return g;
}

/// First `count` smooth values over {2,3}, as machine integers.
inline std::vector<long long> smooth_ll(std::size_t count) {
    std::vector<long long> out;
    for (const BigInt& v : smooth_values(base_23(), count))
        out.push_back(static_cast<long long>(v.get_si()));
    return out;
}

/// v = (2^a 3^b) * j with j coprime to 6; returns (2^a 3^b, j).
inline std::pair<long long, long long> two_three_split(long long v) {
    long long l = 1;
    while (v % 2 == 0) {
        v /= 2;
        l *= 2;
    }
    while (v % 3 == 0) {
        v /= 3;
        l *= 3;
    }
    return {l, v};
}

}  // namespace detail

/// One arm of the chain {i, 2i, 3i, 4i}: the value multiplier*i + sign and,
/// when that value lies in l * I_{2,3} with l in {1,2,3,4}, its factorization
/// and whether it lands on a chain with a larger root.
struct Arm {
    int multiplier = 1;  // 1..4
    int sign = 1;        // +1 or -1
    long long value = 0;
    bool classified = false;
    int l = 0;
    long long j = 0;
    bool upward = false;
};

struct ArmReport {
    long long i = 1;
    bool residue_plus1 = true;  // i = 6k+1 (otherwise i = 6k+5)
    int k_residue = 0;          // k mod 12
    std::array<Arm, 8> arms;    // (1,+),(1,-),(2,+),(2,-),(3,+),(3,-),(4,+),(4,-)
    int up_count = 0;
    int down_count = 0;
};

namespace detail {

struct ArmRow {
    bool classified = false;
    int l = 0;
    bool upward = false;
};

/// Arm classification is constant on residue classes of i mod 216 (the
/// finest modulus the case analysis needs); rows are precomputed from a
/// representative and re-checked against direct arithmetic in the tests.
inline const std::array<ArmRow, 8>& arm_row(long long residue) {
    static const auto table = [] {
        std::array<std::array<ArmRow, 8>, 216> t{};
        for (long long r = 0; r < 216; ++r) {
            if (std::gcd(r, 6LL) != 1) continue;
            const long long rep = 432 + r;  // large enough to avoid edge cases
            for (int a = 0; a < 8; ++a) {
                const int mult = a / 2 + 1;
                const int sign = a % 2 == 0 ? 1 : -1;
                const long long v = mult * rep + sign;
                auto [l, j] = two_three_split(v);
                ArmRow row;
                if (l <= 4) {
                    row.classified = true;
                    row.l = static_cast<int>(l);
                    row.upward = mult > l || (mult == static_cast<int>(l) && sign > 0);
                }
                t[static_cast<std::size_t>(r)][static_cast<std::size_t>(a)] = row;
            }
        }
        return t;
    }();
    return table[static_cast<std::size_t>(residue)];
}

}  // namespace detail

inline ArmReport classify_arms(long long i) {
    if (!in_complement(i, detail::base_23()))
        throw std::invalid_argument("i must be coprime to 2 and 3");
    ArmReport r;
    r.i = i;
    r.residue_plus1 = i % 6 == 1;
    r.k_residue = static_cast<int>(((i - (r.residue_plus1 ? 1 : 5)) / 6) % 12);
    const auto& rows = detail::arm_row(i % 216);
    for (int a = 0; a < 8; ++a) {
        Arm& arm = r.arms[static_cast<std::size_t>(a)];
        arm.multiplier = a / 2 + 1;
        arm.sign = a % 2 == 0 ? 1 : -1;
        arm.value = arm.multiplier * i + arm.sign;
        if (arm.value < 1) continue;  // the arm below 1 does not exist
        const detail::ArmRow& row = rows[static_cast<std::size_t>(a)];
        arm.classified = row.classified;
        if (row.classified) {
            arm.l = row.l;
            arm.j = arm.value / row.l;
            arm.upward = row.upward;
            ++(arm.upward ? r.up_count : r.down_count);
        }
    }
    return r;
}

/// A verified consecutive pair of chains, with the witnessing integers.
struct FamilyWitness {
    long long l = 0;
    long long root_a = 0, root_b = 0;  // chains root_a M_{k_a} and root_b M_{k_b}
    int k_a = 0, k_b = 0;
    long long member_a = 0, member_b = 0;  // |member_a - member_b| == 1
};

namespace detail {

struct FamilyPattern {
    long long a, b;
    int k1;
    long long c, e;
    int k2;
};

inline const FamilyPattern* family_pattern(int family_id, int sub_id) {
    static const std::array<std::vector<FamilyPattern>, 4> families = {{
        {{6, 1, 2, 12, 1, 1}, {6, 5, 2, 12, 11, 1}},
        {{24, 5, 3, 36, 7, 2},
         {24, 11, 3, 36, 17, 2},
         {24, 13, 3, 36, 19, 2},
         {24, 19, 3, 36, 29, 2}},
        {{18, 1, 4, 72, 5, 1}, {18, 17, 4, 72, 67, 1}},
        {{54, 23, 4, 72, 31, 3}, {54, 31, 4, 72, 41, 3}},
    }};
    if (family_id < 1 || family_id > 4) return nullptr;
    const auto& f = families[static_cast<std::size_t>(family_id - 1)];
    if (sub_id < 1 || sub_id > static_cast<int>(f.size())) return nullptr;
    return &f[static_cast<std::size_t>(sub_id - 1)];
}

}  // namespace detail

inline int family_sub_count(int family_id) {
    switch (family_id) {
        case 1: return 2;
        case 2: return 4;
        case 3: return 2;
        case 4: return 2;
        default: return 0;
    }
}

/// Confirms, for every l <= l_max, that the named pair of chains contains
/// consecutive integers, and returns the witnessing pairs.
inline std::vector<FamilyWitness> verify_consecutive_family(int family_id, int sub_id,
                                                            long long l_max) {
    const detail::FamilyPattern* fp = detail::family_pattern(family_id, sub_id);
    if (!fp) throw std::invalid_argument("unknown family");
    if (l_max < 0) throw std::invalid_argument("l_max must be >= 0");
    const std::vector<long long> q =
        detail::smooth_ll(static_cast<std::size_t>(std::max(fp->k1, fp->k2)));

    std::vector<FamilyWitness> out;
    out.reserve(static_cast<std::size_t>(l_max) + 1);
    for (long long l = 0; l <= l_max; ++l) {
        FamilyWitness w;
        w.l = l;
        w.root_a = fp->a * l + fp->b;
        w.root_b = fp->c * l + fp->e;
        w.k_a = fp->k1;
        w.k_b = fp->k2;
        if (!in_complement(w.root_a, detail::base_23()) ||
            !in_complement(w.root_b, detail::base_23()))
            throw std::logic_error("family root fell outside the complement set");
        bool found = false;
        for (int x = 0; x < fp->k1 && !found; ++x)
            for (int y = 0; y < fp->k2 && !found; ++y) {
                const long long ma = w.root_a * q[static_cast<std::size_t>(x)];
                const long long mb = w.root_b * q[static_cast<std::size_t>(y)];
                if (std::llabs(ma - mb) == 1) {
                    w.member_a = ma;
                    w.member_b = mb;
                    found = true;
                }
            }
        if (!found) throw std::logic_error("family pair is not consecutive");
        out.push_back(w);
    }
    return out;
}

/// Chains i M_k for roots up to the bound, with an edge wherever two chains
/// contain consecutive integers.
struct ObstructionGraph {
    long long degree = 1;
    long long bound = 1;
    std::vector<long long> roots;                            // ascending
    std::vector<std::vector<long long>> chains;              // parallel to roots
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // node index pairs, a < b
};

inline ObstructionGraph build_obstruction_graph(long long k, long long bound) {
    if (k < 1 || bound < 1) throw std::invalid_argument("k and bound must be >= 1");
    const std::vector<long long> q = detail::smooth_ll(static_cast<std::size_t>(k));
    ObstructionGraph g;
    g.degree = k;
    g.bound = bound;
    std::unordered_map<long long, std::size_t> owner;
    for (long long i = 1; i <= bound; ++i) {
        if (!in_complement(i, detail::base_23())) continue;
        std::vector<long long> chain;
        chain.reserve(q.size());
        for (long long v : q) chain.push_back(i * v);
        for (long long m : chain) owner.emplace(m, g.roots.size());
        g.roots.push_back(i);
        g.chains.push_back(std::move(chain));
    }
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t n = 0; n < g.chains.size(); ++n)
        for (long long m : g.chains[n]) {
            auto it = owner.find(m + 1);
            if (it != owner.end() && it->second != n)
                edges.emplace(std::min(n, it->second), std::max(n, it->second));
        }
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

struct ConnectivityPath {
    long long root = 0;
    std::vector<long long> nodes;  // root, ..., 1 (empty when not reached)
    bool reached = false;
    bool decreasing = false;
};

struct ConnectivityReport {
    long long degree = 1;
    long long query_bound = 1;
    long long search_bound = 1;  // bound actually searched (expanded as needed)
    long long component_count = 0;
    std::vector<ConnectivityPath> paths;  // one per root <= query_bound
    bool all_connected = false;
};

/// Breadth-first reachability of chain 1 from every chain root <= bound.
/// Paths may route through chains above the query bound; the search bound
/// grows up to 8x the query bound when needed.
inline ConnectivityReport connectivity_report(long long k, long long bound) {
    ConnectivityReport rep;
    rep.degree = k;
    rep.query_bound = bound;

    long long search = bound;
    ObstructionGraph g;
    std::vector<int> parent;
    std::size_t query_nodes = 0;
    while (true) {
        g = build_obstruction_graph(k, search);
        std::vector<std::vector<std::size_t>> adj(g.roots.size());
        for (auto [a, b] : g.edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        parent.assign(g.roots.size(), -2);  // -2 unseen, -1 BFS origin
        std::queue<std::size_t> bfs;
        bfs.push(0);  // root 1 is always the first node
        parent[0] = -1;
        while (!bfs.empty()) {
            std::size_t n = bfs.front();
            bfs.pop();
            for (std::size_t m : adj[n])
                if (parent[m] == -2) {
                    parent[m] = static_cast<int>(n);
                    bfs.push(m);
                }
        }
        query_nodes = 0;
        bool all = true;
        for (std::size_t n = 0; n < g.roots.size() && g.roots[n] <= bound; ++n) {
            ++query_nodes;
            all &= parent[n] != -2;
        }
        if (all || search >= 8 * bound) break;
        search = std::min(search * 2, 8 * bound);
    }
    rep.search_bound = search;

    // component count over the searched graph
    {
        std::vector<std::size_t> comp(g.roots.size(), SIZE_MAX);
        std::vector<std::vector<std::size_t>> adj(g.roots.size());
        for (auto [a, b] : g.edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::size_t count = 0;
        for (std::size_t s = 0; s < g.roots.size(); ++s) {
            if (comp[s] != SIZE_MAX) continue;
            ++count;
            std::queue<std::size_t> bfs;
            bfs.push(s);
            comp[s] = count;
            while (!bfs.empty()) {
                std::size_t n = bfs.front();
                bfs.pop();
                for (std::size_t m : adj[n])
                    if (comp[m] == SIZE_MAX) {
                        comp[m] = count;
                        bfs.push(m);
                    }
            }
        }
        rep.component_count = static_cast<long long>(count);
    }

    rep.all_connected = true;
    for (std::size_t n = 0; n < query_nodes; ++n) {
        ConnectivityPath p;
        p.root = g.roots[n];
        p.reached = parent[n] != -2;
        if (p.reached) {
            for (std::size_t cur = n;; cur = static_cast<std::size_t>(parent[cur])) {
                p.nodes.push_back(g.roots[cur]);
                if (parent[cur] == -1) break;
            }
            p.decreasing = true;
            for (std::size_t x = 1; x < p.nodes.size(); ++x)
                p.decreasing &= p.nodes[x] < p.nodes[x - 1];
        } else {
            rep.all_connected = false;
        }
        rep.paths.push_back(std::move(p));
    }
    return rep;
}

inline std::string to_dot(const ObstructionGraph& g) {
    std::string out = "graph G {\n";
    for (std::size_t n = 0; n < g.roots.size(); ++n)
        out += "  \"" + std::to_string(g.roots[n]) + "M" + std::to_string(g.degree) + "\";\n";
    for (auto [a, b] : g.edges)
        out += "  \"" + std::to_string(g.roots[a]) + "M" + std::to_string(g.degree) +
               "\" -- \"" + std::to_string(g.roots[b]) + "M" + std::to_string(g.degree) +
               "\";\n";
    out += "}\n";
    return out;
}

inline nlohmann::ordered_json to_json(const ObstructionGraph& g, const ConnectivityReport& rep) {
    nlohmann::ordered_json j;
    j["nodes"] = nlohmann::ordered_json::array();
    for (std::size_t n = 0; n < g.roots.size(); ++n)
        j["nodes"].push_back({{"root", g.roots[n]}, {"chain", g.chains[n]}});
    j["edges"] = nlohmann::ordered_json::array();
    for (auto [a, b] : g.edges) j["edges"].push_back({g.roots[a], g.roots[b]});
    j["components"] = rep.component_count;
    j["paths"] = nlohmann::ordered_json::array();
    for (const ConnectivityPath& p : rep.paths)
        j["paths"].push_back({{"root", p.root},
                              {"reached", p.reached},
                              {"nodes", p.nodes},
                              {"decreasing", p.decreasing}});
    return j;
}

}  // namespace multent
