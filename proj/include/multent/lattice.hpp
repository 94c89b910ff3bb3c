#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "multent/smooth.hpp"

namespace multent {

struct LatticeCell {
    std::vector<int> exponents;  // over the working base
    BigInt value = 1;
};

/// Finite exponent-vector lattice of the k-th smooth bound: all cells with
/// value <= q_k (inclusive, k cells) or < q_k (strict, k-1 cells).
struct SmoothLattice {
    GammaSet gamma;                  // originating multiplier set
    std::vector<long long> base;     // working base
    std::vector<LatticeCell> cells;  // ascending by value
    BigInt bound = 1;                // q_k
    Convention convention = Convention::inclusive;
    long long k = 1;
};

/// Exponent offsets realizing the values {1} ∪ Γ over the working base.
struct BasicShape {
    std::vector<std::vector<int>> offsets;
    std::vector<long long> values;  // ascending, values[0] == 1
};

namespace detail {

inline void enumerate_cells(const std::vector<long long>& base, std::size_t dim,
                            const BigInt& limit, std::vector<int>& exps, const BigInt& value,
                            std::vector<LatticeCell>& out) {
    if (dim == base.size()) {
        out.push_back({exps, value});
        return;
    }
    BigInt v = value;
    int e = 0;
    while (v <= limit) {
        exps[dim] = e;
        enumerate_cells(base, dim + 1, limit, exps, v, out);
        v *= static_cast<long>(base[dim]);
        ++e;
    }
    exps[dim] = 0;
}

inline std::vector<int> exponents_of(long long v, const std::vector<long long>& base) {
    std::vector<int> e(base.size(), 0);
    for (std::size_t j = 0; j < base.size(); ++j)
        while (v % base[j] == 0 && v > 1) {
            v /= base[j];
            ++e[j];
        }
    if (v != 1) throw std::invalid_argument("value does not factor over the base");
    return e;
}

}  // namespace detail

inline SmoothLattice build_lattice(const GammaSet& g, long long k, Convention convention) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const std::vector<BigInt> q = smooth_values(g, static_cast<std::size_t>(k));
    SmoothLattice lat;
    lat.gamma = g;
    lat.base = g.working_base();
    lat.bound = q.back();
    lat.convention = convention;
    lat.k = k;
    const BigInt limit = convention == Convention::inclusive ? lat.bound : lat.bound - 1;
    if (limit >= 1) {
        std::vector<int> exps(lat.base.size(), 0);
        detail::enumerate_cells(lat.base, 0, limit, exps, BigInt(1), lat.cells);
        std::sort(lat.cells.begin(), lat.cells.end(),
                  [](const LatticeCell& a, const LatticeCell& b) { return a.value < b.value; });
    }
    return lat;
}

inline BasicShape basic_shape(const GammaSet& g) {
    BasicShape shape;
    shape.values.push_back(1);
    for (long long v : g.gammas) shape.values.push_back(v);
    std::sort(shape.values.begin(), shape.values.end());
    for (long long v : shape.values)
        shape.offsets.push_back(detail::exponents_of(v, g.working_base()));
    return shape;
}

/// All translates of the shape fully contained in the lattice, each as the
/// list of covered cell indices in ascending value order. A translate is
/// identified by its corner cell b and covers the values b * shape.values.
inline std::vector<std::vector<std::size_t>> constraint_instances(const SmoothLattice& lat,
                                                                  const BasicShape& shape) {
    std::map<BigInt, std::size_t> index;
    for (std::size_t i = 0; i < lat.cells.size(); ++i) index.emplace(lat.cells[i].value, i);

    std::vector<std::vector<std::size_t>> instances;
    for (const LatticeCell& cell : lat.cells) {
        std::vector<std::size_t> members;
        members.reserve(shape.values.size());
        bool ok = true;
        for (long long s : shape.values) {
            auto it = index.find(cell.value * static_cast<long>(s));
            if (it == index.end()) {
                ok = false;
                break;
            }
            members.push_back(it->second);
        }
        if (ok) instances.push_back(std::move(members));
    }
    return instances;
}

}  // namespace multent
