#pragma once

#include "datalin/core.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace datalin {

using Rat = mpq_class;
using RatVector = std::vector<Rat>;

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols = 0);
    static IntMatrix from_columns(const std::vector<IntVector>& cols, std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    IntVector column(std::size_t j) const;
    IntVector mul(const std::vector<Int>& x) const;

    bool operator==(const IntMatrix& o) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> data_;
};

struct NormReport {
    Int inf_norm;      // max |entry|
    Int one_inf_norm;  // max over members of the sum of |entries|
};

NormReport norms(const IntVector& v);
NormReport norms(const std::vector<IntVector>& family);
// Column family of M.
NormReport norms(const IntMatrix& m);

// Integer lattice spanned by a fixed list of columns. Built once by
// extended-gcd column reduction into echelon form; solve() returns a
// coefficient vector over the original columns.
class ZLattice {
public:
    ZLattice(std::size_t dim, std::vector<IntVector> columns);

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return basis_.size(); }
    bool contains(const IntVector& y) const;
    std::optional<std::vector<Int>> solve(const IntVector& y) const;

private:
    struct Row {
        std::size_t pivot;
        IntVector v;
        std::map<std::size_t, Int> expr;  // v as a combination of columns
    };
    std::size_t dim_;
    std::vector<IntVector> cols_;
    std::map<std::size_t, Row> basis_;  // keyed by pivot

    bool reduce(const IntVector& y, std::map<std::size_t, Int>* expr) const;
};

std::optional<std::vector<Int>> z_solve_system(const IntMatrix& m, const IntVector& y);

// Exhaustive search over x in N^m with max entry <= bound, graded by total,
// lexicographically descending within a total. Throws std::length_error
// when the box has more than max_candidates points.
std::optional<std::vector<Int>> n_solve_bounded(const IntMatrix& m, const IntVector& y, const Int& bound,
                                                std::size_t max_candidates = 20'000'000);

// (|M|_{1,inf} + |y|_inf + 2)^(rows + cols)
Int pottier_base_bound(const IntMatrix& m, const IntVector& y);

struct ConeResult {
    bool member = false;
    RatVector coefficients;  // y = sum q_i g_i, q_i >= 0 (when member)
    RatVector farkas;        // f.g_i >= 0 for all i, f.y < 0 (when not member)
};

// Exact rational simplex (phase I, Bland's rule). Both certificates are
// re-checked before returning; a failed check throws std::logic_error.
ConeResult cone_certificate(const std::vector<IntVector>& gens, const IntVector& y);
bool cone_member(const std::vector<IntVector>& gens, const IntVector& y);

// Fraction-free (Bareiss) elimination.
std::size_t rank(const IntMatrix& m);
bool rank_full(const IntMatrix& m);

}  // namespace datalin
