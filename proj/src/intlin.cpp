#include "datalin/intlin.hpp"

#include <algorithm>
#include <functional>

namespace datalin {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
    if (!rows.empty()) cols = rows[0].size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVector>& cols, std::size_t rows) {
    IntMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) throw std::invalid_argument("column length differs from row count");
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

IntVector IntMatrix::column(std::size_t j) const {
    IntVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

IntVector IntMatrix::mul(const std::vector<Int>& x) const {
    if (x.size() != cols_) throw std::invalid_argument("dimension mismatch in matrix product");
    IntVector r(rows_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * x[j];
    return r;
}

NormReport norms(const IntVector& v) {
    NormReport r{0, 0};
    for (const Int& x : v) {
        Int a = abs(x);
        if (a > r.inf_norm) r.inf_norm = a;
        r.one_inf_norm += a;
    }
    return r;
}

NormReport norms(const std::vector<IntVector>& family) {
    NormReport r{0, 0};
    for (const auto& v : family) {
        NormReport n = norms(v);
        if (n.inf_norm > r.inf_norm) r.inf_norm = n.inf_norm;
        if (n.one_inf_norm > r.one_inf_norm) r.one_inf_norm = n.one_inf_norm;
    }
    return r;
}

NormReport norms(const IntMatrix& m) {
    std::vector<IntVector> cols;
    for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
    return norms(cols);
}

// ---- ZLattice ----

namespace {

struct Reducer {
    std::size_t dim;
    std::map<std::size_t, std::pair<IntVector, std::map<std::size_t, Int>>> basis;
    bool track;

    static void axpy(std::map<std::size_t, Int>& acc, const std::map<std::size_t, Int>& x, const Int& c) {
        for (const auto& [j, v] : x) {
            Int& slot = acc[j];
            slot += c * v;
            if (sgn(slot) == 0) acc.erase(j);
        }
    }

    static std::map<std::size_t, Int> combo(const std::map<std::size_t, Int>& a, const Int& ca,
                                            const std::map<std::size_t, Int>& b, const Int& cb) {
        std::map<std::size_t, Int> r;
        axpy(r, a, ca);
        axpy(r, b, cb);
        return r;
    }

    // Brings entries above each pivot into [0, pivot), which keeps the
    // numbers from growing over long insertion sequences.
    void normalize() {
        for (auto& [pj, row_j] : basis) {
            const Int& piv = row_j.first[pj];
            for (auto& [pi, row_i] : basis) {
                if (pi >= pj) break;
                Int& e = row_i.first[pj];
                if (sgn(e) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), e.get_mpz_t(), piv.get_mpz_t());
                if (sgn(q) == 0) continue;
                add_scaled(row_i.first, row_j.first, -q);
                if (track) axpy(row_i.second, row_j.second, -q);
            }
        }
    }

    // Returns true when the column changed the basis.
    bool insert(IntVector v, std::map<std::size_t, Int> expr) {
        const bool changed = place(std::move(v), std::move(expr));
        if (changed) normalize();
        return changed;
    }

    bool place(IntVector v, std::map<std::size_t, Int> expr) {
        bool changed = false;
        std::size_t p = 0;
        while (true) {
            while (p < dim && sgn(v[p]) == 0) ++p;
            if (p == dim) return changed;
            auto it = basis.find(p);
            if (it == basis.end()) {
                if (sgn(v[p]) < 0) {
                    for (auto& x : v) x = -x;
                    for (auto& [j, c] : expr) c = -c;
                }
                basis.emplace(p, std::make_pair(std::move(v), std::move(expr)));
                return true;
            }
            auto& [b, bexpr] = it->second;
            if (mpz_divisible_p(v[p].get_mpz_t(), b[p].get_mpz_t())) {
                Int q;
                mpz_divexact(q.get_mpz_t(), v[p].get_mpz_t(), b[p].get_mpz_t());
                add_scaled(v, b, -q);
                if (track) axpy(expr, bexpr, -q);
                continue;
            }
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), b[p].get_mpz_t(), v[p].get_mpz_t());
            Int bp = b[p] / g, vp = v[p] / g;
            IntVector nb = scale(s, b);
            add_scaled(nb, v, t);
            IntVector nv = scale(bp, v);
            add_scaled(nv, b, -vp);
            if (track) {
                auto nbe = combo(bexpr, s, expr, t);
                expr = combo(expr, bp, bexpr, -vp);
                bexpr = std::move(nbe);
            }
            b = std::move(nb);
            v = std::move(nv);
            changed = true;
        }
    }
};

}  // namespace

ZLattice::ZLattice(std::size_t dim, std::vector<IntVector> columns) : dim_(dim), cols_(std::move(columns)) {
    for (const auto& c : cols_)
        if (c.size() != dim_) throw std::invalid_argument("lattice column has wrong length");
    // Pass 1 finds the columns that actually change the basis; pass 2 tracks
    // expressions for those only, which keeps the bookkeeping small.
    Reducer plain{dim_, {}, false};
    std::vector<std::size_t> essential;
    for (std::size_t j = 0; j < cols_.size(); ++j)
        if (plain.insert(cols_[j], {})) essential.push_back(j);
    Reducer tracked{dim_, {}, true};
    for (std::size_t j : essential) tracked.insert(cols_[j], {{j, Int(1)}});
    for (auto& [p, be] : tracked.basis) basis_.emplace(p, Row{p, std::move(be.first), std::move(be.second)});
}

bool ZLattice::reduce(const IntVector& y, std::map<std::size_t, Int>* expr) const {
    if (y.size() != dim_) throw std::invalid_argument("right-hand side has wrong length");
    IntVector r = y;
    for (std::size_t i = 0; i < dim_; ++i) {
        if (sgn(r[i]) == 0) continue;
        auto it = basis_.find(i);
        if (it == basis_.end()) return false;
        const Row& row = it->second;
        if (!mpz_divisible_p(r[i].get_mpz_t(), row.v[i].get_mpz_t())) return false;
        Int q;
        mpz_divexact(q.get_mpz_t(), r[i].get_mpz_t(), row.v[i].get_mpz_t());
        add_scaled(r, row.v, -q);
        if (expr) Reducer::axpy(*expr, row.expr, q);
    }
    return true;
}

bool ZLattice::contains(const IntVector& y) const { return reduce(y, nullptr); }

std::optional<std::vector<Int>> ZLattice::solve(const IntVector& y) const {
    std::map<std::size_t, Int> expr;
    if (!reduce(y, &expr)) return std::nullopt;
    std::vector<Int> x(cols_.size(), Int(0));
    for (const auto& [j, c] : expr) x[j] = c;
    IntVector check = zero_vector(static_cast<int>(dim_));
    for (std::size_t j = 0; j < x.size(); ++j)
        if (sgn(x[j]) != 0) add_scaled(check, cols_[j], x[j]);
    if (check != y) throw std::logic_error("lattice solution failed verification");
    return x;
}

std::optional<std::vector<Int>> z_solve_system(const IntMatrix& m, const IntVector& y) {
    if (y.size() != m.rows()) throw std::invalid_argument("dimension mismatch in z_solve_system");
    std::vector<IntVector> cols;
    for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
    ZLattice lat(m.rows(), std::move(cols));
    auto x = lat.solve(y);
    if (x && m.mul(*x) != y) throw std::logic_error("z_solve_system produced a wrong solution");
    return x;
}

std::optional<std::vector<Int>> n_solve_bounded(const IntMatrix& m, const IntVector& y, const Int& bound,
                                                std::size_t max_candidates) {
    if (y.size() != m.rows()) throw std::invalid_argument("dimension mismatch in n_solve_bounded");
    if (sgn(bound) < 0) throw std::invalid_argument("negative bound");
    const std::size_t n = m.cols();
    Int box = 1;
    for (std::size_t j = 0; j < n; ++j) {
        box *= bound + 1;
        if (box > max_candidates) throw std::length_error("n_solve_bounded: search box too large");
    }
    const long b = bound.get_si();
    std::vector<long> x(n, 0);
    std::optional<std::vector<Int>> found;

    std::function<bool(std::size_t, long)> fill = [&](std::size_t i, long rest) -> bool {
        if (i + 1 == n || n == 0) {
            if (n != 0) {
                if (rest > b) return false;
                x[i] = rest;
            } else if (rest != 0) {
                return false;
            }
            std::vector<Int> xi(x.begin(), x.end());
            if (m.mul(xi) == y) {
                found = std::move(xi);
                return true;
            }
            return false;
        }
        long tail_max = b * static_cast<long>(n - i - 1);
        for (long v = std::min(b, rest); v >= std::max(0L, rest - tail_max); --v) {
            x[i] = v;
            if (fill(i + 1, rest - v)) return true;
        }
        return false;
    };
    const long max_total = b * static_cast<long>(n);
    for (long total = 0; total <= max_total; ++total)
        if (fill(0, total)) return found;
    return std::nullopt;
}

Int pottier_base_bound(const IntMatrix& m, const IntVector& y) {
    Int base = norms(m).one_inf_norm + norms(y).inf_norm + 2;
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(m.rows() + m.cols()));
    return r;
}

// ---- cone membership ----

ConeResult cone_certificate(const std::vector<IntVector>& gens, const IntVector& y) {
    const std::size_t r = y.size(), n = gens.size();
    for (const auto& g : gens)
        if (g.size() != r) throw std::invalid_argument("dimension mismatch in cone_member");

    // Phase I: min sum(art) s.t. D G lambda + art = D y, with D flipping rows so D y >= 0.
    std::vector<int> flip(r, 1);
    for (std::size_t i = 0; i < r; ++i)
        if (sgn(y[i]) < 0) flip[i] = -1;
    const std::size_t width = n + r;
    std::vector<std::vector<Rat>> t(r, std::vector<Rat>(width, Rat(0)));
    std::vector<Rat> rhs(r);
    std::vector<std::size_t> basis(r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < n; ++j) t[i][j] = Rat(gens[j][i] * flip[i]);
        t[i][n + i] = 1;
        rhs[i] = Rat(y[i] * flip[i]);
        basis[i] = n + i;
    }
    auto cost = [&](std::size_t j) { return j >= n ? Rat(1) : Rat(0); };

    while (true) {
        std::size_t enter = width;
        for (std::size_t j = 0; j < width && enter == width; ++j) {
            if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
            Rat rc = cost(j);
            for (std::size_t i = 0; i < r; ++i) rc -= cost(basis[i]) * t[i][j];
            if (sgn(rc) < 0) enter = j;
        }
        if (enter == width) break;
        std::size_t leave = r;
        Rat best;
        for (std::size_t i = 0; i < r; ++i) {
            if (sgn(t[i][enter]) <= 0) continue;
            Rat ratio = rhs[i] / t[i][enter];
            if (leave == r || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == r) throw std::logic_error("phase I simplex is unbounded");
        Rat piv = t[leave][enter];
        for (auto& x : t[leave]) x /= piv;
        rhs[leave] /= piv;
        for (std::size_t i = 0; i < r; ++i) {
            if (i == leave || sgn(t[i][enter]) == 0) continue;
            Rat f = t[i][enter];
            for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
            rhs[i] -= f * rhs[leave];
        }
        basis[leave] = enter;
    }

    Rat objective = 0;
    for (std::size_t i = 0; i < r; ++i) objective += cost(basis[i]) * rhs[i];

    ConeResult res;
    if (sgn(objective) == 0) {
        res.member = true;
        res.coefficients.assign(n, Rat(0));
        for (std::size_t i = 0; i < r; ++i)
            if (basis[i] < n) res.coefficients[basis[i]] = rhs[i];
        for (std::size_t i = 0; i < r; ++i) {
            Rat s = 0;
            for (std::size_t j = 0; j < n; ++j) s += res.coefficients[j] * Rat(gens[j][i]);
            if (s != Rat(y[i])) throw std::logic_error("cone coefficients failed verification");
        }
        for (const auto& q : res.coefficients)
            if (sgn(q) < 0) throw std::logic_error("negative cone coefficient");
        return res;
    }

    // Dual values u = c_B B^{-1}; B^{-1} sits in the artificial block.
    res.farkas.assign(r, Rat(0));
    for (std::size_t k = 0; k < r; ++k) {
        Rat u = 0;
        for (std::size_t i = 0; i < r; ++i) u += cost(basis[i]) * t[i][n + k];
        res.farkas[k] = -u * flip[k];
    }
    Rat fy = 0;
    for (std::size_t i = 0; i < r; ++i) fy += res.farkas[i] * Rat(y[i]);
    if (sgn(fy) >= 0) throw std::logic_error("Farkas certificate does not separate the target");
    for (const auto& g : gens) {
        Rat fg = 0;
        for (std::size_t i = 0; i < r; ++i) fg += res.farkas[i] * Rat(g[i]);
        if (sgn(fg) < 0) throw std::logic_error("Farkas certificate is negative on a generator");
    }
    return res;
}

bool cone_member(const std::vector<IntVector>& gens, const IntVector& y) { return cone_certificate(gens, y).member; }

// ---- rank ----

std::size_t rank(const IntMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<Int>> a(rows, std::vector<Int>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = m(i, j);
    std::size_t r = 0;
    Int prev = 1;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && sgn(a[p][c]) == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                Int num = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

bool rank_full(const IntMatrix& m) { return rank(m) == std::min(m.rows(), m.cols()); }

}  // namespace datalin
