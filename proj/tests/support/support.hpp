#pragma once

// Hand-rolled random generators and small independent oracles shared by the
// unit and acceptance suites. Nothing here calls the library's algorithms
// beyond the plain data types.

#include "datalin/core.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

namespace ts {

using namespace datalin;

struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    long range(long lo, long hi) { return lo + static_cast<long>(g() % static_cast<std::uint64_t>(hi - lo + 1)); }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(g() % n); }
    bool chance(int percent) { return range(1, 100) <= percent; }
};

inline std::vector<KSet> all_subsets(const std::vector<Atom>& atoms, int k) {
    std::vector<KSet> out;
    const int n = static_cast<int>(atoms.size());
    if (k < 0 || k > n) return out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        KSet x;
        for (int i : idx) x.push_back(atoms[i]);
        std::sort(x.begin(), x.end());
        out.push_back(x);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

inline std::vector<Atom> atom_range(Atom first, int count) {
    std::vector<Atom> v;
    for (int i = 0; i < count; ++i) v.push_back(first + static_cast<Atom>(i));
    return v;
}

inline IntVector random_value(Rng& r, int d, long lo, long hi) {
    IntVector v;
    for (int c = 0; c < d; ++c) v.push_back(Int(r.range(lo, hi)));
    return v;
}

inline DataVector random_vector(Rng& r, int k, int d, const std::vector<Atom>& atoms, long lo, long hi, int percent = 50) {
    DataVector v(k, d);
    for (const KSet& x : all_subsets(atoms, k))
        if (r.chance(percent)) v.add(x, random_value(r, d, lo, hi));
    return v;
}

inline Hypergraph random_hypergraph(Rng& r, int k, int d, const std::vector<Atom>& atoms, long lo, long hi,
                                    int percent = 50) {
    Hypergraph h(k, d, std::set<Atom>(atoms.begin(), atoms.end()));
    for (const KSet& x : all_subsets(atoms, k))
        if (r.chance(percent)) h.add_edge(x, random_value(r, d, lo, hi));
    return h;
}

// Weight by the definition: sum over all edges containing x.
inline IntVector naive_weight(const Hypergraph& h, const KSet& x) {
    IntVector w = zero_vector(h.dim());
    for (const auto& [e, v] : h.edges())
        if (std::includes(e.begin(), e.end(), x.begin(), x.end()))
            for (int c = 0; c < h.dim(); ++c) w[c] += v[c];
    return w;
}

// Copy of g moved by an injective map given as parallel atom lists.
inline DataVector moved_copy(const DataVector& g, const std::vector<Atom>& from, const std::vector<Atom>& to) {
    DataVector out(g.arity(), g.dim());
    for (const auto& [x, v] : g.entries()) {
        KSet y;
        for (Atom a : x) {
            auto it = std::find(from.begin(), from.end(), a);
            y.push_back(it == from.end() ? a : to[static_cast<std::size_t>(it - from.begin())]);
        }
        std::sort(y.begin(), y.end());
        out.add(y, v);
    }
    return out;
}

// Random Z-combination of copies of the generators placed on `atoms`.
inline DataVector random_combination(Rng& r, const std::vector<DataVector>& gens, const std::vector<Atom>& atoms,
                                     int copies, long coeff) {
    DataVector out(gens.front().arity(), gens.front().dim());
    for (int t = 0; t < copies; ++t) {
        const DataVector& g = gens[r.below(gens.size())];
        const std::set<Atom> sup = g.support();
        std::vector<Atom> from(sup.begin(), sup.end());
        if (from.size() > atoms.size()) continue;
        std::vector<Atom> pool = atoms;
        std::shuffle(pool.begin(), pool.end(), r.g);
        std::vector<Atom> to(pool.begin(), pool.begin() + static_cast<long>(from.size()));
        long c = r.range(-coeff, coeff);
        const DataVector copy = moved_copy(g, from, to);
        for (const auto& [x, v] : copy.entries()) {
            IntVector s;
            for (const Int& e : v) s.push_back(e * c);
            out.add(x, s);
        }
    }
    return out;
}

// Rank over Q by plain Gaussian elimination on rationals.
inline std::size_t rational_rank(std::vector<std::vector<mpq_class>> m) {
    std::size_t rank = 0;
    const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[rank]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || m[i][c] == 0) continue;
            const mpq_class f = m[i][c] / m[rank][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

// Determinant over Q by elimination.
inline mpq_class rational_det(std::vector<std::vector<mpq_class>> m) {
    const std::size_t n = m.size();
    mpq_class det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            const mpq_class f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

// gcd of all r x r minors of the matrix whose columns are `cols`.
inline Int minor_gcd(const std::vector<IntVector>& cols, std::size_t rows, std::size_t r) {
    Int g = 0;
    const std::vector<Atom> ri = atom_range(0, static_cast<int>(rows));
    const std::vector<Atom> ci = atom_range(0, static_cast<int>(cols.size()));
    for (const KSet& rs : all_subsets(ri, static_cast<int>(r)))
        for (const KSet& cs : all_subsets(ci, static_cast<int>(r))) {
            std::vector<std::vector<mpq_class>> m(r, std::vector<mpq_class>(r));
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) m[i][j] = cols[cs[j]][rs[i]];
            const mpq_class d = rational_det(m);
            g = gcd(g, Int(d.get_num()));
        }
    return g;
}

// y in the integer column span, via determinantal divisors: same rank and
// the same gcd of maximal minors with and without y.
inline bool lattice_member_by_minors(const std::vector<IntVector>& cols, const IntVector& y) {
    const std::size_t rows = y.size();
    auto to_q = [&](const std::vector<IntVector>& cs) {
        std::vector<std::vector<mpq_class>> m(rows, std::vector<mpq_class>(cs.size()));
        for (std::size_t j = 0; j < cs.size(); ++j)
            for (std::size_t i = 0; i < rows; ++i) m[i][j] = cs[j][i];
        return m;
    };
    std::vector<IntVector> with = cols;
    with.push_back(y);
    const std::size_t r1 = cols.empty() ? 0 : rational_rank(to_q(cols));
    const std::size_t r2 = rational_rank(to_q(with));
    if (r1 != r2) return false;
    if (r1 == 0) return true;
    return minor_gcd(cols, rows, r1) == minor_gcd(with, rows, r1);
}

inline Int factorial(long n) {
    Int f = 1;
    for (long i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace ts
