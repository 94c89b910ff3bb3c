#pragma once

#include "multent/counting.hpp"

namespace multent {

/// Partial entropy sum with its certified tail bound.
struct EntropyEstimate {
    long long terms = 0;
    double value = 0.0;       // sum_{k<=terms} beta (1/q_k - 1/q_{k+1}) ln b_k
    double tail_bound = 0.0;  // remainder bound from b_k <= N^k
    Convention convention = Convention::inclusive;
    BigRat beta_value;
};

namespace detail {

/// Kahan-compensated accumulator; terms are added in ascending k.
struct CompensatedSum {
    long double sum = 0.0L;
    long double carry = 0.0L;
    void add(long double x) {
        const long double y = x - carry;
        const long double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace detail

/// Remainder bound for the entropy series after n terms:
/// beta * ((n+1)/q_{n+1} + S - sum_{k<=n+1} 1/q_k) * ln N, where
/// S = prod p/(p-1) over the prime base is the closed form of sum 1/q_k.
inline double tail_bound(const GammaSet& g, int num_symbols, long long n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (num_symbols < 2) throw std::invalid_argument("num_symbols must be >= 2");
    const std::vector<BigInt> q = smooth_values(g, static_cast<std::size_t>(n) + 1);
    BigRat partial(0);
    for (const BigInt& v : q) {
        BigRat inv(BigInt(1), v);
        inv.canonicalize();
        partial += inv;
    }
    BigRat full(1);
    for (long long b : g.working_base()) full *= big_ratio(b, b - 1);
    BigRat head(big(n + 1), q.back());
    head.canonicalize();
    BigRat inner = beta(g) * (head + full - partial);
    inner.canonicalize();
    return to_double(inner) * std::log(static_cast<double>(num_symbols));
}

/// All partial sums h^(1)..h^(n) from one elimination sweep (entry k-1 holds
/// the k-term estimate).
inline std::vector<EntropyEstimate> partial_entropy_series(const GammaSet& g,
                                                           const ConstraintSystem& cs,
                                                           long long n,
                                                           Convention convention) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const std::vector<BigInt> q = smooth_values(g, static_cast<std::size_t>(n) + 1);
    const long long series_max = convention == Convention::inclusive ? n : n - 1;
    std::vector<BigInt> b{BigInt(1)};
    if (series_max >= 1) b = count_pattern_series(g, cs, series_max);
    const BigRat beta_value = beta(g);

    std::vector<EntropyEstimate> out;
    out.reserve(static_cast<std::size_t>(n));
    detail::CompensatedSum acc;
    for (long long k = 1; k <= n; ++k) {
        BigRat inv_k(BigInt(1), q[k - 1]), inv_k1(BigInt(1), q[k]);
        inv_k.canonicalize();
        inv_k1.canonicalize();
        BigRat coef = beta_value * (inv_k - inv_k1);
        coef.canonicalize();
        const BigInt& bk = convention == Convention::inclusive
                               ? b[static_cast<std::size_t>(k)]
                               : b[static_cast<std::size_t>(k - 1)];
        acc.add(static_cast<long double>(to_double(coef)) * log_big(bk));
        EntropyEstimate est;
        est.terms = k;
        est.convention = convention;
        est.beta_value = beta_value;
        est.value = static_cast<double>(acc.sum);
        est.tail_bound = tail_bound(g, cs.num_symbols, k);
        out.push_back(std::move(est));
    }
    return out;
}

inline EntropyEstimate partial_entropy(const GammaSet& g, const ConstraintSystem& cs,
                                       long long n, Convention convention) {
    return partial_entropy_series(g, cs, n, convention).back();
}

/// Partial sum of (Q-1)^2 sum_k Q^-(k+1) ln a_k with the Fibonacci-type
/// counts a_1 = 2, a_2 = 3, a_{k+1} = a_k + a_{k-1}.
inline double closed_form_xq0(long long q, long long terms) {
    if (q < 2) throw std::invalid_argument("Q must be >= 2");
    if (terms < 1) throw std::invalid_argument("terms must be >= 1");
    BigInt prev = 2, cur = 3;
    const BigInt square = big(q - 1) * big(q - 1);
    detail::CompensatedSum acc;
    for (long long k = 1; k <= terms; ++k) {
        BigRat coef(square, big_pow(big(q), static_cast<unsigned long>(k + 1)));
        coef.canonicalize();
        const BigInt& ak = k == 1 ? prev : cur;
        acc.add(static_cast<long double>(to_double(coef)) * log_big(ak));
        if (k >= 2) {
            BigInt nxt = cur + prev;
            prev = cur;
            cur = nxt;
        }
    }
    return static_cast<double>(acc.sum);
}

/// Exact count of symbol strings of the given length in which every fully
/// contained translate of the offset shape has its product in the allowed
/// set. Sliding-window state over the last max-offset symbols.
inline PatternCount transfer_counts_1d(const std::vector<int>& offsets, int num_symbols,
                                       const std::vector<long long>& allowed, long long length) {
    if (offsets.empty() || offsets.front() != 0)
        throw std::invalid_argument("offsets must start at 0");
    for (std::size_t i = 1; i < offsets.size(); ++i)
        if (offsets[i] <= offsets[i - 1])
            throw std::invalid_argument("offsets must be strictly ascending");
    if (length < 1) throw std::invalid_argument("length must be >= 1");
    ConstraintSystem cs(num_symbols, allowed);

    const int window = offsets.back();
    std::unordered_map<std::string, BigInt> cur;
    cur.emplace(std::string(), BigInt(1));
    for (long long pos = 1; pos <= length; ++pos) {
        std::unordered_map<std::string, BigInt> next;
        next.reserve(cur.size() * cs.num_symbols);
        for (const auto& [window_syms, count] : cur) {
            for (int s = 0; s < cs.num_symbols; ++s) {
                if (pos > window) {
                    // the translate based at pos - window is now complete
                    long long prod = 1;
                    for (int o : offsets)
                        prod *= o == window ? s : window_syms[static_cast<std::size_t>(o)];
                    if (!cs.allows(prod)) continue;
                }
                std::string nw = window_syms;
                nw.push_back(static_cast<char>(s));
                if (static_cast<int>(nw.size()) > window) nw.erase(nw.begin());
                auto [it, inserted] = next.emplace(std::move(nw), count);
                if (!inserted) it->second += count;
            }
        }
        cur = std::move(next);
    }
    BigInt total = 0;
    for (const auto& [k, v] : cur) total += v;
    return PatternCount::of(total);
}

/// Exact |X_n| through the chain decomposition: the product over chains of
/// the inclusive lattice count at the chain length.
inline PatternCount sequence_count_exact(const GammaSet& g, const ConstraintSystem& cs,
                                         long long n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const ChainDecomposition dec = decompose_range(n, g);
    long long k_max = 0;
    for (auto [root, len] : dec.chains) k_max = std::max(k_max, len);
    const std::vector<BigInt> b = count_pattern_series(g, cs, k_max);

    std::unordered_map<long long, unsigned long> multiplicity;
    for (auto [root, len] : dec.chains) ++multiplicity[len];
    PatternCount out;
    out.exact = 1;
    double logv = 0;
    for (auto [len, count] : multiplicity) {
        out.exact *= big_pow(b[static_cast<std::size_t>(len)], count);
        logv += static_cast<double>(count) * log_big(b[static_cast<std::size_t>(len)]);
    }
    out.log_value = logv;
    return out;
}

/// Exhaustive filter oracle for |X_n|.
inline PatternCount sequence_count_naive(const GammaSet& g, const ConstraintSystem& cs,
                                         long long n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const BasicShape shape = basic_shape(g);
    const long long top = shape.values.back();
    std::vector<std::vector<int>> groups;
    for (long long base = 1; base * top <= n; ++base) {
        std::vector<int> members;
        members.reserve(shape.values.size());
        for (long long v : shape.values) members.push_back(static_cast<int>(base * v - 1));
        groups.push_back(std::move(members));
    }
    return PatternCount::of(
        detail::exhaustive_count(static_cast<int>(n), cs, groups, {}));
}

inline double minkowski_dimension(double h, int num_symbols) {
    if (num_symbols < 2) throw std::invalid_argument("num_symbols must be >= 2");
    if (h < 0) throw std::invalid_argument("entropy must be >= 0");
    return h / std::log(static_cast<double>(num_symbols));
}

/// Exact check of Q^n = (n+1) + n(Q-2) + (Q-1)^2 sum_{k=1}^{n-1} k Q^(n-1-k).
inline bool proposition_identity(long long q, long long n) {
    if (q < 2 || n < 1) throw std::invalid_argument("Q >= 2 and n >= 1 required");
    const BigInt lhs = big_pow(big(q), static_cast<unsigned long>(n));
    BigInt sum = 0;
    for (long long k = 1; k <= n - 1; ++k)
        sum += big(k) * big_pow(big(q), static_cast<unsigned long>(n - 1 - k));
    const BigInt rhs = big(n + 1) + big(n) * big(q - 2) +
                       big(q - 1) * big(q - 1) * sum;
    return lhs == rhs;
}

}  // namespace multent
