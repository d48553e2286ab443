#include "datalin/calculus.hpp"

#include "datalin/zsolve.hpp"

#include <algorithm>

namespace datalin {

namespace {

std::vector<KSet> index_subsets(int n, int m) {
    KSet base;
    for (int i = 0; i < n; ++i) base.push_back(static_cast<Atom>(i));
    return subsets_of_size(base, m);
}

Int binomial(long n, long k) {
    Int r = 0;
    if (k < 0 || n < 0 || k > n) return r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

void require_kset(const KSet& x) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i - 1] >= x[i]) throw std::invalid_argument("atom set must be strictly increasing");
}

// Elementwise order on equal-size sorted sets.
bool dominated_by(const KSet& small, const KSet& big) {
    for (std::size_t i = 0; i < small.size(); ++i)
        if (small[i] > big[i]) return false;
    return true;
}

std::vector<Atom> first_outside(const std::vector<Atom>& pool, const KSet& avoid, std::size_t count) {
    std::vector<Atom> out;
    for (Atom a : pool) {
        if (out.size() == count) break;
        if (!std::binary_search(avoid.begin(), avoid.end(), a)) out.push_back(a);
    }
    if (out.size() < count) throw std::invalid_argument("support too small for placement");
    return out;
}

std::set<Atom> atom_set(std::initializer_list<const std::vector<Atom>*> parts) {
    std::set<Atom> s;
    for (const auto* p : parts) s.insert(p->begin(), p->end());
    return s;
}

Hypergraph with_vertices(const Hypergraph& h, const std::set<Atom>& vs) {
    Hypergraph r(h.arity(), h.dim(), vs);
    for (const auto& [e, w] : h.edges()) r.add_edge(e, w);
    return r;
}

std::size_t c_size(int k, int m) { return m < k ? static_cast<std::size_t>(2 * (k - m) - 1) : 0; }

}  // namespace

// ---- reduction matrices ----

ReductionMatrix reduction_matrix(int a, int b, int c) {
    if (a < 0 || b < 0 || c < 0 || b > a || c > a) throw std::invalid_argument("reduction_matrix: bad sizes");
    ReductionMatrix r;
    r.a = a;
    r.b = b;
    r.c = c;
    r.row_sets = index_subsets(a, c);
    r.col_sets = index_subsets(a, b);
    r.matrix = IntMatrix(r.row_sets.size(), r.col_sets.size());
    for (std::size_t i = 0; i < r.row_sets.size(); ++i)
        for (std::size_t j = 0; j < r.col_sets.size(); ++j)
            if (is_subset(r.row_sets[i], r.col_sets[j])) r.matrix(i, j) = 1;
    return r;
}

IntMatrix kneser_matrix(int n, int k) {
    if (n < 0 || k < 0 || k > n) throw std::invalid_argument("kneser_matrix: bad sizes");
    const auto sets = index_subsets(n, k);
    IntMatrix m(sets.size(), sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = 0; j < sets.size(); ++j)
            if (disjoint(sets[i], sets[j])) m(i, j) = 1;
    return m;
}

IntMatrix relabeled_reduction_matrix(int k) {
    if (k < 0) throw std::invalid_argument("relabeled_reduction_matrix: negative k");
    const int n = 2 * k + 1;
    const ReductionMatrix r = reduction_matrix(n, k + 1, k);
    const KSet all = index_subsets(n, n).front();
    std::map<KSet, std::size_t> index;
    for (std::size_t i = 0; i < r.row_sets.size(); ++i) index[r.row_sets[i]] = i;
    IntMatrix out(r.row_sets.size(), r.col_sets.size());
    for (std::size_t j = 0; j < r.col_sets.size(); ++j) {
        const std::size_t target = index.at(set_minus(all, r.col_sets[j]));
        for (std::size_t i = 0; i < r.row_sets.size(); ++i) out(i, target) = r.matrix(i, j);
    }
    return out;
}

bool kneser_full_rank(int k) { return rank_full(kneser_matrix(2 * k + 1, k)); }

// ---- cut / enrich / swap ----

Hypergraph cut(const Hypergraph& h, const KSet& x) {
    require_kset(x);
    if (static_cast<int>(x.size()) >= h.arity()) throw std::invalid_argument("cut: set must be smaller than the arity");
    std::set<Atom> vs = h.vertices();
    for (Atom a : x)
        if (!vs.erase(a)) throw std::invalid_argument("cut: set not contained in the vertex set");
    Hypergraph r(h.arity() - static_cast<int>(x.size()), h.dim(), std::move(vs));
    for (const auto& [e, w] : h.edges())
        if (is_subset(x, e)) r.add_edge(set_minus(e, x), w);
    return r;
}

Hypergraph enrich(const Hypergraph& h, const KSet& x) {
    require_kset(x);
    std::set<Atom> vs = h.vertices();
    for (Atom a : x)
        if (!vs.insert(a).second) throw std::invalid_argument("enrich: set meets the vertex set");
    Hypergraph r(h.arity() + static_cast<int>(x.size()), h.dim(), std::move(vs));
    for (const auto& [e, w] : h.edges()) r.add_edge(set_union(e, x), w);
    return r;
}

Hypergraph swap(const Hypergraph& h, Atom a, Atom b) {
    if (!h.vertices().count(a)) throw std::invalid_argument("swap: atom not a vertex");
    if (h.vertices().count(b)) throw std::invalid_argument("swap: replacement already a vertex");
    return hg_permute(h, Renaming{{a, b}});
}

bool is_m_isolated(const Hypergraph& h, int m) {
    for (int j = 0; j <= std::min(m, h.arity()); ++j)
        if (!weights_of_size(h, j).empty()) return false;
    return true;
}

// A covering set of size <= 2m-1 exists iff the union of the nonzero m-weight
// sets is that small. For m = 0 no such set exists.
bool is_pre_m_isolated(const Hypergraph& h, int m) {
    if (m < 1 || m > h.arity()) return false;
    if (!is_m_isolated(h, m - 1)) return false;
    std::set<Atom> cover;
    for (const auto& [x, w] : weights_of_size(h, m)) cover.insert(x.begin(), x.end());
    return static_cast<int>(cover.size()) <= 2 * m - 1;
}

bool proportionality_check(const Hypergraph& h, const KSet& x, int l) {
    require_kset(x);
    const int k = h.arity();
    const int m = static_cast<int>(x.size());
    if (l < m || l > k) throw std::invalid_argument("proportionality_check: need |x| <= l <= k");
    IntVector lhs = zero_vector(h.dim());
    for (const auto& [y, w] : weights_of_size(h, l))
        if (is_subset(x, y)) add_scaled(lhs, w, 1);
    return lhs == scale(binomial(k - m, l - m), weight(h, x));
}

// ---- simple hypergraphs ----

bool verify_simple(const Hypergraph& h, const SimpleSpec& spec) {
    const int k = h.arity();
    const int m = spec.m;
    if (m < 0 || m > k) return false;
    if (static_cast<int>(spec.a.size()) != h.dim()) return false;
    if (spec.A.size() != static_cast<std::size_t>(m) || spec.B.size() != static_cast<std::size_t>(m)) return false;
    if (spec.C.size() != c_size(k, m)) return false;
    const std::set<Atom> U = atom_set({&spec.A, &spec.B, &spec.C});
    if (U.size() != spec.A.size() + spec.B.size() + spec.C.size()) return false;
    for (Atom a : h.support())
        if (!U.count(a)) return false;
    if (m > 0 && !is_m_isolated(h, m - 1)) return false;

    auto weights = weights_of_size(h, m);
    for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
        KSet y;
        int flips = 0;
        for (int i = 0; i < m; ++i) {
            if (mask >> i & 1ul) {
                y.push_back(spec.B[i]);
                ++flips;
            } else {
                y.push_back(spec.A[i]);
            }
        }
        std::sort(y.begin(), y.end());
        const IntVector expected = flips % 2 ? neg(spec.a) : spec.a;
        auto it = weights.find(y);
        const IntVector got = it == weights.end() ? zero_vector(h.dim()) : it->second;
        if (got != expected) return false;
        if (it != weights.end()) weights.erase(it);
    }
    // Every remaining nonzero m-weight is on a non-transversal set.
    return weights.empty();
}

// ---- copy sums ----

CopySum::CopySum(std::vector<Atom> base) : base_(std::move(base)) {}

CopySum CopySum::identity(std::vector<Atom> base) {
    CopySum s(base);
    s.add(base, 1);
    return s;
}

void CopySum::add(const std::vector<Atom>& image, const Int& c) {
    if (image.size() != base_.size()) throw std::invalid_argument("copy image has the wrong length");
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(image, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

void CopySum::add(const CopySum& other, const Int& c) {
    if (other.base_ != base_) throw std::invalid_argument("copy sums over different bases");
    for (const auto& [img, t] : other.terms_) add(img, t * c);
}

std::set<Atom> CopySum::atoms() const {
    std::set<Atom> s;
    for (const auto& [img, c] : terms_) s.insert(img.begin(), img.end());
    return s;
}

Hypergraph CopySum::evaluate(const Hypergraph& g) const {
    if (!std::equal(base_.begin(), base_.end(), g.vertices().begin(), g.vertices().end()))
        throw std::invalid_argument("copy sum base does not match the hypergraph");
    std::map<Atom, std::size_t> idx;
    for (std::size_t i = 0; i < base_.size(); ++i) idx[base_[i]] = i;
    Hypergraph r(g.arity(), g.dim());
    for (const auto& [img, c] : terms_) {
        if (std::set<Atom>(img.begin(), img.end()).size() != img.size())
            throw std::invalid_argument("copy image is not injective");
        for (const auto& [e, w] : g.edges()) {
            KSet e2;
            for (Atom a : e) e2.push_back(img[idx.at(a)]);
            std::sort(e2.begin(), e2.end());
            r.add_edge(e2, scale(c, w));
        }
    }
    return r;
}

CopySum CopySum::renamed(const Renaming& sigma, FreshAtoms& fresh) const {
    std::set<Atom> range;
    for (const auto& [from, to] : sigma)
        if (!range.insert(to).second) throw std::invalid_argument("renaming is not injective");
    std::map<Atom, Atom> ext;
    auto map_atom = [&](Atom a) {
        if (auto it = sigma.find(a); it != sigma.end()) return it->second;
        if (!range.count(a)) return a;
        auto [it, inserted] = ext.try_emplace(a, 0);
        if (inserted) it->second = fresh.take();
        return it->second;
    };
    CopySum r(base_);
    for (const auto& [img, c] : terms_) {
        std::vector<Atom> out;
        out.reserve(img.size());
        for (Atom a : img) out.push_back(map_atom(a));
        r.add(out, c);
    }
    return r;
}

CopySum compose(const CopySum& outer, const CopySum& inner, FreshAtoms& fresh) {
    CopySum r(inner.base());
    for (const auto& [img, c] : outer.terms()) {
        Renaming sigma;
        for (std::size_t i = 0; i < img.size(); ++i) sigma[outer.base()[i]] = img[i];
        r.add(inner.renamed(sigma, fresh), c);
    }
    return r;
}

void BuildContext::charge(std::size_t terms) {
    if (terms > max_terms) throw ResourceCap("copy-sum term cap exceeded");
    if (++steps > max_steps) throw ResourceCap("construction step cap exceeded");
}

// ---- construction of simple hypergraphs ----

namespace {

SimpleResult build_simple(const Hypergraph& g, const KSet& x, BuildContext& ctx);

SimpleResult zero_simple(const Hypergraph& g, const KSet& x, BuildContext& ctx) {
    const int k = g.arity();
    SimpleResult r;
    r.spec.m = static_cast<int>(x.size());
    r.spec.a = zero_vector(g.dim());
    r.spec.A = x;
    for (std::size_t i = 0; i < x.size(); ++i) r.spec.B.push_back(ctx.fresh.take());
    for (std::size_t i = 0; i < c_size(k, r.spec.m); ++i) r.spec.C.push_back(ctx.fresh.take());
    r.graph = Hypergraph(k, g.dim(), atom_set({&r.spec.A, &r.spec.B, &r.spec.C}));
    r.witness = CopySum(std::vector<Atom>(g.vertices().begin(), g.vertices().end()));
    return r;
}

// Sends term images over V(g) \ {alpha} to images over V(g) with alpha -> target.
std::vector<Atom> lift_image(const std::vector<Atom>& base, Atom alpha, Atom target, const std::vector<Atom>& img,
                             const std::map<Atom, std::size_t>& sub_index) {
    std::vector<Atom> out;
    out.reserve(base.size());
    for (Atom b : base) out.push_back(b == alpha ? target : img[sub_index.at(b)]);
    return out;
}

std::map<Atom, std::size_t> index_of(const std::vector<Atom>& v) {
    std::map<Atom, std::size_t> idx;
    for (std::size_t i = 0; i < v.size(); ++i) idx[v[i]] = i;
    return idx;
}

SimpleResult arity_one(const Hypergraph& g, const KSet& x, BuildContext& ctx) {
    const std::vector<Atom> base(g.vertices().begin(), g.vertices().end());
    const auto idx = index_of(base);
    SimpleResult r;
    r.witness = CopySum(base);
    r.spec.a = weight(g, x);
    const Atom fresh = ctx.fresh.take();
    if (x.size() == 1) {
        const Atom alpha = x[0];
        r.spec.m = 1;
        r.spec.A = {alpha};
        r.spec.B = {fresh};
        r.graph = with_vertices(hg_sub(g, swap(g, alpha, fresh)), {alpha, fresh});
        r.witness.add(base, 1);
        std::vector<Atom> moved = base;
        moved[idx.at(alpha)] = fresh;
        r.witness.add(moved, -1);
    } else {
        // (1-n) g + sum over beta in supp g of g(beta -> fresh)
        const std::set<Atom> sup = g.support();
        r.spec.m = 0;
        r.spec.C = {fresh};
        r.graph = Hypergraph(1, g.dim(), {fresh});
        if (!is_zero(r.spec.a)) r.graph.add_edge({fresh}, r.spec.a);
        r.witness.add(base, 1 - static_cast<long>(sup.size()));
        for (Atom beta : sup) {
            std::vector<Atom> moved = base;
            moved[idx.at(beta)] = fresh;
            r.witness.add(moved, 1);
        }
    }
    return r;
}

SimpleResult lift(const Hypergraph& g, const KSet& x, BuildContext& ctx) {
    const Atom alpha = x.back();
    const KSet rest(x.begin(), x.end() - 1);
    const Hypergraph t = cut(g, {alpha});
    SimpleResult inner = build_simple(t, rest, ctx);
    const Atom alpha2 = ctx.fresh.take();

    const std::vector<Atom> base(g.vertices().begin(), g.vertices().end());
    const auto sub_index = index_of(inner.witness.base());
    SimpleResult r;
    r.witness = CopySum(base);
    for (const auto& [img, c] : inner.witness.terms()) {
        r.witness.add(lift_image(base, alpha, alpha, img, sub_index), c);
        r.witness.add(lift_image(base, alpha, alpha2, img, sub_index), -c);
    }
    ctx.charge(r.witness.size());
    r.graph = hg_sub(enrich(inner.graph, {alpha}), enrich(inner.graph, {alpha2}));
    r.spec = inner.spec;
    r.spec.m += 1;
    r.spec.A.push_back(alpha);
    r.spec.B.push_back(alpha2);
    return r;
}

// Shrinks the support of g to 2k-1 atoms while keeping w_0.
SimpleResult eliminate(const Hypergraph& g, BuildContext& ctx) {
    const int k = g.arity();
    const int d = g.dim();
    const std::vector<Atom> base(g.vertices().begin(), g.vertices().end());
    Hypergraph f = trimmed(g);
    CopySum f_over_g = CopySum::identity(base);

    for (;;) {
        const std::set<Atom> sup = f.support();
        if (static_cast<int>(sup.size()) <= 2 * k - 1) break;
        const std::vector<Atom> fv(sup.begin(), sup.end());
        const Atom alpha = fv.back();
        const Hypergraph t = cut(with_vertices(f, sup), {alpha});
        const std::vector<Atom> w(t.vertices().begin(), t.vertices().end());
        const auto pieces = express_with_simple(t, {t}, w, ctx);
        if (!pieces) throw std::logic_error("a hypergraph failed to express itself");

        const auto w_index = index_of(w);
        CopySum k_over_f(fv);
        Hypergraph kh(k, d);
        for (const SimplePiece& p : *pieces) {
            const std::set<Atom> occupied = atom_set({&p.spec.A, &p.spec.B, &p.spec.C});
            const KSet used(occupied.begin(), occupied.end());
            const Atom target = first_outside(w, used, 1).front();
            CopySum s = p.over_gens.front();
            if (s.atoms().count(target)) s = s.renamed(Renaming{{target, ctx.fresh.take()}}, ctx.fresh);
            for (const auto& [img, c] : s.terms()) {
                k_over_f.add(lift_image(fv, alpha, alpha, img, w_index), c);
                k_over_f.add(lift_image(fv, alpha, target, img, w_index), -c);
            }
            kh = hg_add(kh, hg_sub(enrich(p.graph, {alpha}), enrich(p.graph, {target})));
        }
        ctx.charge(k_over_f.size());
        f_over_g.add(compose(k_over_f, f_over_g, ctx.fresh), -1);
        ctx.charge(f_over_g.size());
        f = hg_sub(f, kh);
        for (const auto& [e, val] : f.edges())
            if (std::binary_search(e.begin(), e.end(), alpha)) throw std::logic_error("vertex elimination left the vertex");
    }

    SimpleResult r;
    r.spec.m = 0;
    r.spec.a = weight(g, {});
    const std::set<Atom> sup = f.support();
    r.spec.C.assign(sup.begin(), sup.end());
    while (r.spec.C.size() < c_size(k, 0)) r.spec.C.push_back(ctx.fresh.take());
    r.graph = with_vertices(f, std::set<Atom>(r.spec.C.begin(), r.spec.C.end()));
    r.witness = std::move(f_over_g);
    return r;
}

SimpleResult build_simple(const Hypergraph& g, const KSet& x, BuildContext& ctx) {
    for (Atom a : x)
        if (!g.vertices().count(a)) return zero_simple(g, x, ctx);
    SimpleResult r;
    if (g.arity() == 1)
        r = arity_one(g, x, ctx);
    else if (!x.empty())
        r = lift(g, x, ctx);
    else
        r = eliminate(g, ctx);
    if (!verify_simple(r.graph, r.spec)) throw std::logic_error("constructed hypergraph is not simple");
    if (!r.witness.evaluate(g).same_weights(r.graph)) throw std::logic_error("simple witness does not evaluate");
    return r;
}

}  // namespace

SimpleResult construct_simple(const Hypergraph& g, const KSet& x, BuildContext& ctx) {
    require_kset(x);
    if (g.arity() < 1) throw std::invalid_argument("construct_simple: arity must be positive");
    if (static_cast<int>(x.size()) > g.arity()) throw std::invalid_argument("construct_simple: set larger than arity");
    for (Atom a : g.vertices())
        if (a >= ctx.fresh.peek()) throw std::invalid_argument("construct_simple: fresh supply overlaps the vertices");
    return build_simple(g, x, ctx);
}

std::optional<std::vector<SimplePiece>> express_with_simple(const Hypergraph& h, const std::vector<Hypergraph>& gens,
                                                            const std::vector<Atom>& support, BuildContext& ctx) {
    const int k = h.arity();
    const int d = h.dim();
    require_kset(support);
    if (static_cast<int>(support.size()) < 2 * k) throw std::invalid_argument("express_with_simple: support too small");
    for (Atom a : h.support())
        if (!std::binary_search(support.begin(), support.end(), a))
            throw std::invalid_argument("express_with_simple: hypergraph leaves the support");
    for (const auto& g : gens)
        if (g.arity() != k || g.dim() != d) throw std::invalid_argument("express_with_simple: generator shape mismatch");

    std::vector<std::vector<Atom>> bases;
    for (const auto& g : gens) bases.emplace_back(g.vertices().begin(), g.vertices().end());
    std::vector<WeightColumns> columns(static_cast<std::size_t>(k) + 1);
    std::vector<std::optional<ZLattice>> lattices(static_cast<std::size_t>(k) + 1);
    std::map<std::pair<std::size_t, KSet>, SimpleResult> cache;

    auto make_piece = [&](int m, const IntVector& a, const KSet& A, const KSet& B,
                          const std::vector<Atom>& C) -> std::optional<SimplePiece> {
        if (!lattices[m]) {
            columns[m] = weight_columns(gens, m);
            lattices[m].emplace(static_cast<std::size_t>(d), columns[m].columns);
        }
        const auto z = lattices[m]->solve(a);
        if (!z) return std::nullopt;
        SimplePiece p;
        p.spec = SimpleSpec{m, a, A, B, C};
        p.graph = Hypergraph(k, d, atom_set({&A, &B, &C}));
        for (const auto& b : bases) p.over_gens.emplace_back(b);
        for (std::size_t j = 0; j < z->size(); ++j) {
            if (sgn((*z)[j]) == 0) continue;
            const auto& source = columns[m].sources[j];
            auto it = cache.find(source);
            if (it == cache.end())
                it = cache.emplace(source, construct_simple(gens[source.first], source.second, ctx)).first;
            const SimpleResult& sr = it->second;
            Renaming sigma;
            for (int i = 0; i < m; ++i) {
                sigma[sr.spec.A[i]] = A[i];
                sigma[sr.spec.B[i]] = B[i];
            }
            for (std::size_t i = 0; i < C.size(); ++i) sigma[sr.spec.C[i]] = C[i];
            p.graph = hg_add(p.graph, hg_scale((*z)[j], hg_permute(sr.graph, sigma)));
            p.over_gens[source.first].add(sr.witness.renamed(sigma, ctx.fresh), (*z)[j]);
            ctx.charge(p.over_gens[source.first].size());
        }
        if (!verify_simple(p.graph, p.spec)) throw std::logic_error("placed simple hypergraph failed verification");
        return p;
    };

    std::vector<SimplePiece> pieces;
    Hypergraph r = h;
    if (const IntVector a0 = weight(r, {}); !is_zero(a0)) {
        const std::vector<Atom> C(support.begin(), support.begin() + static_cast<long>(c_size(k, 0)));
        auto p = make_piece(0, a0, {}, {}, C);
        if (!p) return std::nullopt;
        r = hg_sub(r, p->graph);
        pieces.push_back(std::move(*p));
    }
    for (int m = 1; m <= k; ++m) {
        for (;;) {
            const auto fm = weights_of_size(r, m);
            if (fm.empty()) break;
            std::optional<KSet> best;
            KSet best_partner;
            for (const auto& [L, w] : fm) {
                bool maximal = true;
                for (const auto& [L2, w2] : fm)
                    if (L2 != L && dominated_by(L, L2)) {
                        maximal = false;
                        break;
                    }
                if (!maximal) continue;
                const KSet partner = first_outside(support, L, static_cast<std::size_t>(m));
                if (!dominated_by(partner, L)) continue;
                if (!best || *best < L) {
                    best = L;
                    best_partner = partner;
                }
            }
            if (!best) break;
            const KSet used = set_union(*best, best_partner);
            const std::vector<Atom> C = first_outside(support, used, c_size(k, m));
            auto p = make_piece(m, fm.at(*best), *best, best_partner, C);
            if (!p) return std::nullopt;
            r = hg_sub(r, p->graph);
            pieces.push_back(std::move(*p));
            ctx.charge(pieces.size());
        }
        if (!is_m_isolated(r, m)) throw std::logic_error("residual not isolated after reduction");
    }
    if (!r.zero()) throw std::logic_error("residual not empty after reduction");
    return pieces;
}

}  // namespace datalin
