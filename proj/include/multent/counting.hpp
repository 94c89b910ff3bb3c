#pragma once

#include <cstdint>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "multent/lattice.hpp"

namespace multent {

/// Square 0-1 transition matrix for an additive shift of finite type.
struct SftMatrix {
    int size = 0;
    std::vector<std::uint8_t> row_major;

    bool at(int a, int b) const { return row_major[static_cast<std::size_t>(a) * size + b] != 0; }

    /// Parses "1,1;1,0" (rows separated by ';', entries by ',').
    static SftMatrix parse(const std::string& text) {
        SftMatrix m;
        std::vector<std::vector<std::uint8_t>> rows;
        std::stringstream ss(text);
        std::string row;
        while (std::getline(ss, row, ';')) {
            std::vector<std::uint8_t> r;
            std::stringstream rs(row);
            std::string entry;
            while (std::getline(rs, entry, ',')) {
                entry.erase(std::remove_if(entry.begin(), entry.end(),
                                           [](unsigned char c) { return std::isspace(c); }),
                            entry.end());
                if (entry != "0" && entry != "1")
                    throw std::invalid_argument("matrix entries must be 0 or 1");
                r.push_back(entry == "1" ? 1 : 0);
            }
            rows.push_back(std::move(r));
        }
        if (rows.empty()) throw std::invalid_argument("empty matrix");
        m.size = static_cast<int>(rows.size());
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != m.size)
                throw std::invalid_argument("matrix must be square");
            m.row_major.insert(m.row_major.end(), r.begin(), r.end());
        }
        return m;
    }
};

/// Symbol count, the allowed-product set C, and (for coupled systems only)
/// an additive transition matrix.
struct ConstraintSystem {
    int num_symbols = 2;
    std::vector<long long> allowed = {0};  // sorted, unique
    std::optional<SftMatrix> sft;

    ConstraintSystem() = default;
    ConstraintSystem(int n, std::vector<long long> c) : num_symbols(n), allowed(std::move(c)) {
        normalize();
    }

    void normalize() {
        if (num_symbols < 1) throw std::invalid_argument("num_symbols must be >= 1");
        std::sort(allowed.begin(), allowed.end());
        allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
        if (allowed.empty()) throw std::invalid_argument("allowed-product set must be non-empty");
    }

    bool allows(long long product) const {
        return std::binary_search(allowed.begin(), allowed.end(), product);
    }
};

struct PatternCount {
    BigInt exact = 0;
    double log_value = -std::numeric_limits<double>::infinity();

    static PatternCount of(BigInt v) { return {v, log_big(v)}; }
};

namespace detail {

// Frontier elimination over an ordered cell list. Cells are assigned one at a
// time; what the state remembers is, per unfinished product constraint, the
// partial product of its assigned members, and, per unfinished pair
// constraint, the raw symbol of the earlier endpoint. Constraints are checked
// when their last cell is assigned. A partial product whose every completion
// is allowed collapses to a sentinel, which is what keeps the state space
// small on the binary all-zero-product systems.
struct EliminationPlan {
    int cell_count = 0;
    int num_symbols = 2;
    std::vector<long long> allowed;              // sorted
    std::vector<std::vector<int>> groups;        // member positions, ascending
    std::vector<std::pair<int, int>> pairs;      // (a, b), a < b
    const SftMatrix* sft = nullptr;
};

constexpr std::uint32_t kSatisfied = 0xffffffffu;

class Eliminator {
public:
    explicit Eliminator(const EliminationPlan& plan) : plan_(plan) { prepare(); }

    // prefix_series: also report the admissible count of every prefix
    // {cells 0..t-1}; infeasible-in-the-future states must then be kept
    // alive, they are still valid prefixes until a constraint完成 kills them.
    std::vector<BigInt> run(bool prefix_series) {
        std::unordered_map<std::string, BigInt> cur;
        cur.emplace(std::string(), BigInt(1));
        std::vector<BigInt> prefix(1, BigInt(1));

        for (int t = 0; t < plan_.cell_count; ++t) {
            std::unordered_map<std::string, BigInt> next;
            next.reserve(cur.size() * 2);
            const StepInfo& st = steps_[t];
            for (const auto& [key, count] : cur) {
                for (int sym = 0; sym < plan_.num_symbols; ++sym) {
                    std::string nk;
                    if (advance(st, key, sym, prefix_series, nk)) {
                        auto [it, inserted] = next.emplace(std::move(nk), count);
                        if (!inserted) it->second += count;
                    }
                }
            }
            cur = std::move(next);
            if (prefix_series) {
                BigInt total = 0;
                for (const auto& [key, count] : cur) total += count;
                prefix.push_back(std::move(total));
            }
        }
        if (prefix_series) return prefix;
        BigInt total = 0;
        for (const auto& [key, count] : cur) total += count;
        return {total};
    }

private:
    struct Touch {
        int group = 0;
        int slot_before = -1;  // index into pend_before, -1 when this is the first member
        int remaining = 0;     // members still unassigned after this one
    };
    struct StepInfo {
        std::vector<Touch> touches;
        std::vector<int> pair_a_slots;  // held_before slot of a, for pairs (a, t)
        std::size_t nprod_before = 0;
        std::size_t nheld_before = 0;
        // next-key assembly: for each product slot after this step, either the
        // slot it is copied from (>= 0) or ~index into touches; likewise for
        // held symbols, with -1 meaning the cell assigned this step.
        std::vector<int> prod_src;
        std::vector<int> sym_src;
    };

    void prepare() {
        const int n = plan_.cell_count;
        const std::size_t ng = plan_.groups.size();
        std::vector<int> first(ng), last(ng);
        std::size_t max_group = 0;
        for (std::size_t g = 0; g < ng; ++g) {
            first[g] = plan_.groups[g].front();
            last[g] = plan_.groups[g].back();
            max_group = std::max(max_group, plan_.groups[g].size());
        }
        // products achievable by r free symbols
        possible_.assign(max_group + 1, {});
        possible_[0] = {1};
        for (std::size_t r = 1; r <= max_group; ++r) {
            std::vector<long long> acc;
            for (long long p : possible_[r - 1])
                for (int s = 0; s < plan_.num_symbols; ++s) acc.push_back(p * s);
            std::sort(acc.begin(), acc.end());
            acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
            possible_[r] = std::move(acc);
        }

        std::vector<int> hold_until(n, -1);
        std::vector<std::vector<int>> pairs_ending(n);
        for (std::size_t p = 0; p < plan_.pairs.size(); ++p) {
            auto [a, b] = plan_.pairs[p];
            hold_until[a] = std::max(hold_until[a], b);
            pairs_ending[b].push_back(a);
        }

        auto pending_at = [&](int t) {
            std::vector<int> out;
            for (std::size_t g = 0; g < ng; ++g)
                if (first[g] < t && t <= last[g]) out.push_back(static_cast<int>(g));
            return out;
        };
        auto held_at = [&](int t) {
            std::vector<int> out;
            for (int c = 0; c < t; ++c)
                if (hold_until[c] >= t) out.push_back(c);
            return out;
        };
        auto index_of = [](const std::vector<int>& v, int x) {
            return static_cast<int>(std::find(v.begin(), v.end(), x) - v.begin());
        };

        steps_.resize(n);
        for (int t = 0; t < n; ++t) {
            StepInfo& st = steps_[t];
            const std::vector<int> pend_before = pending_at(t);
            const std::vector<int> pend_after = pending_at(t + 1);
            const std::vector<int> held_before = held_at(t);
            const std::vector<int> held_after = held_at(t + 1);
            st.nprod_before = pend_before.size();
            st.nheld_before = held_before.size();

            for (std::size_t g = 0; g < ng; ++g) {
                const auto& mem = plan_.groups[g];
                auto it = std::find(mem.begin(), mem.end(), t);
                if (it == mem.end()) continue;
                Touch tc;
                tc.group = static_cast<int>(g);
                tc.slot_before = it == mem.begin() ? -1 : index_of(pend_before, tc.group);
                tc.remaining = static_cast<int>(mem.end() - it) - 1;
                st.touches.push_back(tc);
            }
            if (st.touches.size() > 16)
                throw std::invalid_argument("too many constraints meet in one cell");
            for (int a : pairs_ending[t]) st.pair_a_slots.push_back(index_of(held_before, a));

            for (int g : pend_after) {
                int touch = -1;
                for (std::size_t i = 0; i < st.touches.size(); ++i)
                    if (st.touches[i].group == g) touch = static_cast<int>(i);
                st.prod_src.push_back(touch >= 0 ? ~touch : index_of(pend_before, g));
            }
            for (int c : held_after)
                st.sym_src.push_back(c == t ? -1 : index_of(held_before, c));
        }
    }

    static std::uint32_t read_prod(const std::string& key, std::size_t slot) {
        std::uint32_t v;
        std::memcpy(&v, key.data() + slot * 4, 4);
        return v;
    }

    bool allows(long long p) const {
        return std::binary_search(plan_.allowed.begin(), plan_.allowed.end(), p);
    }
    bool all_completions_allowed(long long p, int remaining) const {
        for (long long w : possible_[remaining])
            if (!allows(p * w)) return false;
        return true;
    }
    bool some_completion_allowed(long long p, int remaining) const {
        for (long long w : possible_[remaining])
            if (allows(p * w)) return true;
        return false;
    }

    bool advance(const StepInfo& st, const std::string& key, int sym, bool keep_doomed,
                 std::string& out) const {
        const char* sym_base = key.data() + st.nprod_before * 4;

        for (int slot : st.pair_a_slots)
            if (!plan_.sft->at(sym_base[slot], sym)) return false;

        std::uint32_t computed[16];
        for (std::size_t i = 0; i < st.touches.size(); ++i) {
            const Touch& tc = st.touches[i];
            std::uint32_t p;
            if (tc.slot_before < 0) {
                p = static_cast<std::uint32_t>(sym);
            } else {
                const std::uint32_t prev = read_prod(key, static_cast<std::size_t>(tc.slot_before));
                p = prev == kSatisfied ? kSatisfied : prev * static_cast<std::uint32_t>(sym);
            }
            if (tc.remaining == 0) {
                if (p != kSatisfied && !allows(static_cast<long long>(p))) return false;
                computed[i] = p;
                continue;
            }
            if (p != kSatisfied) {
                if (all_completions_allowed(p, tc.remaining)) {
                    p = kSatisfied;
                } else if (!keep_doomed && !some_completion_allowed(p, tc.remaining)) {
                    return false;
                }
            }
            computed[i] = p;
        }

        out.resize(st.prod_src.size() * 4 + st.sym_src.size());
        for (std::size_t i = 0; i < st.prod_src.size(); ++i) {
            const int src = st.prod_src[i];
            const std::uint32_t v =
                src >= 0 ? read_prod(key, static_cast<std::size_t>(src)) : computed[~src];
            std::memcpy(out.data() + i * 4, &v, 4);
        }
        char* out_syms = out.data() + st.prod_src.size() * 4;
        for (std::size_t i = 0; i < st.sym_src.size(); ++i)
            out_syms[i] =
                st.sym_src[i] >= 0 ? sym_base[st.sym_src[i]] : static_cast<char>(sym);
        return true;
    }

    const EliminationPlan& plan_;
    std::vector<StepInfo> steps_;
    std::vector<std::vector<long long>> possible_;
};

inline std::vector<BigInt> eliminate(const EliminationPlan& plan, bool prefix_series) {
    if (!plan.groups.empty()) {
        std::size_t max_group = 0;
        for (const auto& g : plan.groups) max_group = std::max(max_group, g.size());
        double bound = max_group * std::log2(std::max(plan.num_symbols - 1, 1));
        if (bound > 31)
            throw std::invalid_argument("symbol products exceed the engine's range");
    }
    return Eliminator(plan).run(prefix_series);
}

/// Shared exhaustive oracle: flat bitmask scan for two symbols, pruned
/// depth-first enumeration otherwise. Groups are product constraints,
/// pairs are transition-matrix constraints (a before b).
inline BigInt exhaustive_count(int cell_count, const ConstraintSystem& cs,
                               const std::vector<std::vector<int>>& groups,
                               const std::vector<std::pair<int, int>>& pairs) {
    if (cell_count * std::log2(static_cast<double>(std::max(cs.num_symbols, 2))) > 27.0)
        throw oversize_error("exhaustive oracle would exceed 2^27 assignments");
    if (!pairs.empty() && !cs.sft)
        throw std::invalid_argument("pair constraints require a transition matrix");

    if (cs.num_symbols == 1) {
        // one assignment (all zeros); every product constraint evaluates to 0
        if (!groups.empty() && !cs.allows(0)) return 0;
        if (!pairs.empty() && !cs.sft->at(0, 0)) return 0;
        return 1;
    }

    if (cs.num_symbols == 2) {
        std::vector<std::uint32_t> masks;
        masks.reserve(groups.size());
        for (const auto& g : groups) {
            std::uint32_t m = 0;
            for (int c : g) m |= std::uint32_t{1} << c;
            masks.push_back(m);
        }
        bool pair_ok[2][2] = {{true, true}, {true, true}};
        if (cs.sft)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) pair_ok[a][b] = cs.sft->at(a, b);
        const bool ok0 = cs.allows(0), ok1 = cs.allows(1);
        unsigned long long found = 0;
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << cell_count); ++x) {
            const auto xv = static_cast<std::uint32_t>(x);
            bool good = true;
            for (std::uint32_t m : masks) {
                const bool ones = (xv & m) == m;
                if (ones ? !ok1 : !ok0) {
                    good = false;
                    break;
                }
            }
            if (good)
                for (auto [a, b] : pairs)
                    if (!pair_ok[(xv >> a) & 1][(xv >> b) & 1]) {
                        good = false;
                        break;
                    }
            found += good;
        }
        return BigInt(static_cast<unsigned long>(found));
    }

    // depth-first with constraints checked as soon as their last cell is set
    std::vector<std::vector<const std::vector<int>*>> group_ends(cell_count);
    std::vector<std::vector<std::pair<int, int>>> pair_ends(cell_count);
    for (const auto& g : groups) group_ends[g.back()].push_back(&g);
    for (auto [a, b] : pairs) pair_ends[b].emplace_back(a, b);
    std::vector<int> symbols(cell_count, 0);
    BigInt total = 0;
    auto rec = [&](auto&& self, int t) -> void {
        if (t == cell_count) {
            ++total;
            return;
        }
        for (int s = 0; s < cs.num_symbols; ++s) {
            symbols[t] = s;
            bool good = true;
            for (const auto* g : group_ends[t]) {
                long long prod = 1;
                for (int c : *g) prod *= symbols[c];
                if (!cs.allows(prod)) {
                    good = false;
                    break;
                }
            }
            if (good)
                for (auto [a, b] : pair_ends[t])
                    if (!cs.sft->at(symbols[a], symbols[b])) {
                        good = false;
                        break;
                    }
            if (good) self(self, t + 1);
        }
    };
    rec(rec, 0);
    return total;
}

}  // namespace detail

/// Exact admissible-pattern count on a lattice: assignments of cells to
/// symbols such that every fully-contained shape translate has its symbol
/// product in the allowed set.
inline PatternCount count_patterns(const SmoothLattice& lat, const ConstraintSystem& cs) {
    if (cs.sft)
        throw std::invalid_argument("additive matrices are handled by the coupled engine");
    detail::EliminationPlan plan;
    plan.cell_count = static_cast<int>(lat.cells.size());
    plan.num_symbols = cs.num_symbols;
    plan.allowed = cs.allowed;
    for (auto& inst : constraint_instances(lat, basic_shape(lat.gamma)))
        plan.groups.emplace_back(inst.begin(), inst.end());
    return PatternCount::of(detail::eliminate(plan, false).back());
}

/// Inclusive counts b_1..b_k_max in one elimination sweep: the admissible
/// count of the first t cells is the series entry for t. Index 0 holds 1.
inline std::vector<BigInt> count_pattern_series(const GammaSet& g, const ConstraintSystem& cs,
                                                long long k_max) {
    if (cs.sft)
        throw std::invalid_argument("additive matrices are handled by the coupled engine");
    SmoothLattice lat = build_lattice(g, k_max, Convention::inclusive);
    detail::EliminationPlan plan;
    plan.cell_count = static_cast<int>(lat.cells.size());
    plan.num_symbols = cs.num_symbols;
    plan.allowed = cs.allowed;
    for (auto& inst : constraint_instances(lat, basic_shape(g)))
        plan.groups.emplace_back(inst.begin(), inst.end());
    return detail::eliminate(plan, true);
}

/// Exhaustive oracle for lattice counts; must agree with count_patterns on
/// every instance it can handle.
inline PatternCount brute_force_count(const SmoothLattice& lat, const ConstraintSystem& cs) {
    if (cs.sft)
        throw std::invalid_argument("additive matrices are handled by the coupled engine");
    std::vector<std::vector<int>> groups;
    for (auto& inst : constraint_instances(lat, basic_shape(lat.gamma)))
        groups.emplace_back(inst.begin(), inst.end());
    return PatternCount::of(
        detail::exhaustive_count(static_cast<int>(lat.cells.size()), cs, groups, {}));
}

/// Exact count ratios r_k = b_k / b_{k-1} (inclusive counts), k = 2..k_max.
/// Entry j of the result is r_{j+2}.
inline std::vector<BigRat> ratio_sequence(const GammaSet& g, const ConstraintSystem& cs,
                                          long long k_max) {
    if (k_max < 2) throw std::invalid_argument("k_max must be >= 2");
    const std::vector<BigInt> b = count_pattern_series(g, cs, k_max);
    std::vector<BigRat> out;
    out.reserve(static_cast<std::size_t>(k_max) - 1);
    for (long long k = 2; k <= k_max; ++k) {
        BigRat r(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(k - 1)]);
        r.canonicalize();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace multent
