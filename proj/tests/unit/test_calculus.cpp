#include "datalin/calculus.hpp"
#include "datalin/zsolve.hpp"
#include "simple_oracle.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace datalin;

namespace {

std::vector<std::vector<int>> as_rows(const IntMatrix& m) {
    std::vector<std::vector<int>> out(m.rows(), std::vector<int>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = static_cast<int>(m(i, j).get_si());
    return out;
}

Hypergraph graph_of(int k, std::initializer_list<std::pair<KSet, long>> edges) {
    Hypergraph h(k, 1);
    for (const auto& [e, w] : edges) {
        for (Atom a : e) h.add_vertex(a);
        h.add_edge(e, {Int(w)});
    }
    return h;
}

}  // namespace

TEST_CASE("reduction matrix patterns in lexicographic order") {
    const ReductionMatrix r431 = reduction_matrix(4, 3, 1);
    CHECK(as_rows(r431.matrix) ==
          std::vector<std::vector<int>>{{1, 1, 1, 0}, {1, 1, 0, 1}, {1, 0, 1, 1}, {0, 1, 1, 1}});
    const ReductionMatrix r421 = reduction_matrix(4, 2, 1);
    CHECK(as_rows(r421.matrix) == std::vector<std::vector<int>>{{1, 1, 1, 0, 0, 0},
                                                                {1, 0, 0, 1, 1, 0},
                                                                {0, 1, 0, 1, 0, 1},
                                                                {0, 0, 1, 0, 1, 1}});
    CHECK(r421.col_sets.front() == KSet{0, 1});
    CHECK(r421.row_sets.back() == KSet{3});
}

TEST_CASE("relabeled reduction matrix is the Kneser matrix and has full rank") {
    for (int k = 1; k <= 4; ++k) {
        const IntMatrix kn = kneser_matrix(2 * k + 1, k);
        CHECK(relabeled_reduction_matrix(k) == kn);
        std::vector<std::vector<mpq_class>> q(kn.rows(), std::vector<mpq_class>(kn.cols()));
        for (std::size_t i = 0; i < kn.rows(); ++i)
            for (std::size_t j = 0; j < kn.cols(); ++j) q[i][j] = kn(i, j);
        CHECK(ts::rational_rank(q) == kn.rows());
        CHECK(kneser_full_rank(k));
    }
}

TEST_CASE("cut of a tetrahedron at a vertex is the opposite triangle") {
    Hypergraph t = graph_of(3, {{{1, 2, 3}, 1}, {{1, 2, 4}, 2}, {{1, 3, 4}, 3}, {{2, 3, 4}, 4}});
    const Hypergraph c = cut(t, {1});
    CHECK(c.arity() == 2);
    CHECK(c.edges().size() == 3);
    CHECK(c.edge({2, 3}) == IntVector{Int(1)});
    CHECK(c.edge({3, 4}) == IntVector{Int(3)});
}

TEST_CASE("enrich then cut is the identity") {
    const Hypergraph tri = graph_of(2, {{{1, 2}, 1}, {{2, 3}, 2}, {{1, 3}, 3}});
    const Hypergraph e = enrich(tri, {9});
    CHECK(e.edges().size() == 3);
    CHECK(e.edge({1, 2, 3}) == IntVector{Int(0)});
    CHECK(cut(e, {9}) == tri);
    CHECK(enrich(Hypergraph(2, 1), {9}).vertices() == std::set<Atom>{9});
}

TEST_CASE("cut moves weights and avoids nothing else") {
    ts::Rng r(41);
    for (int it = 0; it < 200; ++it) {
        const int k = static_cast<int>(r.range(2, 3));
        const auto atoms = ts::atom_range(0, 5);
        const Hypergraph h = ts::random_hypergraph(r, k, 1, atoms, -3, 3);
        const int xs = static_cast<int>(r.range(1, k - 1));
        const auto xsets = ts::all_subsets(atoms, xs);
        const KSet x = xsets[r.below(xsets.size())];
        const Hypergraph c = cut(h, x);
        const std::vector<Atom> rest(c.vertices().begin(), c.vertices().end());
        for (int j = 1; j <= k - xs; ++j)
            for (const KSet& y : ts::all_subsets(rest, j)) CHECK(weight(c, y) == ts::naive_weight(h, set_union(x, y)));
        CHECK(cut(enrich(c, x), x) == c);
    }
}

TEST_CASE("swap is an involution and its difference kills outside vertex weights") {
    ts::Rng r(42);
    for (int it = 0; it < 100; ++it) {
        const int k = static_cast<int>(r.range(1, 3));
        const auto atoms = ts::atom_range(0, 5);
        const Hypergraph g = ts::random_hypergraph(r, k, 1, atoms, -2, 2);
        const Atom a = atoms[r.below(atoms.size())];
        const Hypergraph s = swap(g, a, 50);
        CHECK(swap(s, 50, a) == g);
        const Hypergraph diff = hg_sub(g, s);
        for (Atom b : atoms)
            if (b != a) CHECK(is_zero(weight(diff, {b})));
    }
    Hypergraph iso(2, 1, {1, 2, 3});
    iso.add_edge({1, 2}, {Int(1)});
    CHECK(swap(iso, 3, 7).same_weights(iso));
    CHECK_THROWS(swap(iso, 1, 2));
}

TEST_CASE("isolation predicates") {
    CHECK(is_m_isolated(Hypergraph(2, 1), 2));
    const Hypergraph g1 = graph_of(2, {{{10, 12}, 5}, {{11, 12}, -5}});
    CHECK(is_m_isolated(g1, 0));
    CHECK_FALSE(is_m_isolated(g1, 1));
    // Two nonzero vertex weights cannot sit inside one atom.
    CHECK_FALSE(is_pre_m_isolated(g1, 1));
    CHECK_FALSE(is_pre_m_isolated(g1, 0));
    CHECK(is_pre_m_isolated(Hypergraph(2, 1, {1, 2}), 2));
}

TEST_CASE("pre-m-isolated implies m-isolated on random hypergraphs") {
    ts::Rng r(43);
    int hits = 0;
    for (int it = 0; it < 400; ++it) {
        const int k = static_cast<int>(r.range(1, 3));
        const Hypergraph h = ts::random_hypergraph(r, k, 1, ts::atom_range(0, static_cast<int>(r.range(k, 5))), -1, 1, 35);
        for (int m = 1; m <= k; ++m)
            if (is_pre_m_isolated(h, m)) {
                ++hits;
                CHECK(is_m_isolated(h, m));
            }
    }
    CHECK(hits > 0);
}

TEST_CASE("proportionality identity") {
    const Hypergraph tri = graph_of(2, {{{1, 2}, 1}, {{2, 3}, 2}, {{1, 3}, 4}});
    CHECK(proportionality_check(tri, {1}, 2));
    CHECK(proportionality_check(tri, {1}, 1));
    ts::Rng r(44);
    for (int it = 0; it < 100; ++it) {
        const auto atoms = ts::atom_range(0, 5);
        const Hypergraph h = ts::random_hypergraph(r, 3, 2, atoms, -3, 3);
        for (int m = 0; m <= 3; ++m)
            for (const KSet& x : ts::all_subsets(atoms, m))
                for (int l = m; l <= 3; ++l) CHECK(proportionality_check(h, x, l));
    }
}

TEST_CASE("worked simple hypergraphs") {
    const Hypergraph g0 = graph_of(2, {{{1, 2}, 1}, {{2, 3}, 2}, {{1, 3}, 4}});
    const SimpleSpec s0{0, {Int(7)}, {}, {}, {1, 2, 3}};
    CHECK(verify_simple(g0, s0));
    CHECK(ts::naive_simple(g0, s0));

    const Hypergraph g1 = graph_of(2, {{{10, 12}, 5}, {{11, 12}, -5}});
    const SimpleSpec s1{1, {Int(5)}, {10}, {11}, {12}};
    CHECK(verify_simple(g1, s1));
    CHECK(ts::naive_simple(g1, s1));

    const Hypergraph g2 = graph_of(2, {{{20, 21}, 3}, {{21, 23}, -3}, {{22, 23}, 3}, {{20, 22}, -3}});
    const SimpleSpec s2{2, {Int(3)}, {20, 21}, {23, 22}, {}};
    CHECK(verify_simple(g2, s2));
    CHECK(ts::naive_simple(g2, s2));
    // The other pairing puts -a on a same-side transversal.
    CHECK_FALSE(verify_simple(g2, SimpleSpec{2, {Int(3)}, {20, 21}, {22, 23}, {}}));

    CHECK_FALSE(verify_simple(g0, SimpleSpec{1, {Int(7)}, {1}, {2}, {3}}));
}

TEST_CASE("copy sums compose") {
    ts::Rng r(45);
    for (int it = 0; it < 60; ++it) {
        const Hypergraph g = ts::random_hypergraph(r, 2, 1, ts::atom_range(0, 3), -2, 2, 70);
        const std::vector<Atom> gb(g.vertices().begin(), g.vertices().end());
        CopySum inner(gb);
        for (int t = 0; t < 3; ++t) {
            auto pool = ts::atom_range(0, 6);
            std::shuffle(pool.begin(), pool.end(), r.g);
            inner.add(std::vector<Atom>(pool.begin(), pool.begin() + static_cast<long>(gb.size())), Int(r.range(-2, 2)));
        }
        const Hypergraph f = ts::expand(inner, g);
        const std::set<Atom> fa = inner.atoms();
        const std::vector<Atom> fb(fa.begin(), fa.end());
        CopySum outer(fb);
        for (int t = 0; t < 3; ++t) {
            auto pool = ts::atom_range(0, 9);
            std::shuffle(pool.begin(), pool.end(), r.g);
            outer.add(std::vector<Atom>(pool.begin(), pool.begin() + static_cast<long>(fb.size())), Int(r.range(-2, 2)));
        }
        FreshAtoms fresh(1000);
        const CopySum c = compose(outer, inner, fresh);
        CHECK(ts::expand(c, g).same_weights(ts::expand(outer, f)));
        CHECK(c.evaluate(g).same_weights(ts::expand(c, g)));
    }
}

TEST_CASE("constructed simple hypergraphs verify independently") {
    ts::Rng r(46);
    for (int it = 0; it < 60; ++it) {
        const int k = static_cast<int>(r.range(1, 3));
        const auto atoms = ts::atom_range(0, static_cast<int>(r.range(k, k == 3 ? 4 : 5)));
        const Hypergraph g = ts::random_hypergraph(r, k, static_cast<int>(r.range(1, 2)), atoms, -2, 2);
        const int m = static_cast<int>(r.range(0, k));
        const auto xs = ts::all_subsets(atoms, m);
        const KSet x = xs[r.below(xs.size())];
        BuildContext ctx(100);
        const SimpleResult s = construct_simple(g, x, ctx);
        CHECK(s.spec.m == m);
        CHECK(s.spec.a == ts::naive_weight(g, x));
        CHECK(ts::naive_simple(s.graph, s.spec));
        CHECK(ts::expand(s.witness, g).same_weights(s.graph));
        // Adding it leaves every lower weight of another hypergraph alone.
        const Hypergraph h = ts::random_hypergraph(r, k, g.dim(), atoms, -2, 2);
        const Hypergraph sum = hg_add(h, s.graph);
        for (int j = 0; j < m; ++j)
            for (const KSet& y : ts::all_subsets(atoms, j)) CHECK(weight(sum, y) == weight(h, y));
    }
}

TEST_CASE("a set outside the vertices gives a zero simple hypergraph") {
    const Hypergraph g = graph_of(2, {{{1, 2}, 1}});
    BuildContext ctx(10);
    const SimpleResult s = construct_simple(g, {1, 5}, ctx);
    CHECK(s.graph.zero());
    CHECK(is_zero(s.spec.a));
}

TEST_CASE("express locally solvable targets through simple pieces") {
    ts::Rng r(47);
    for (int it = 0; it < 40; ++it) {
        const int k = static_cast<int>(r.range(1, 2));
        std::vector<Hypergraph> gens{ts::random_hypergraph(r, k, 1, ts::atom_range(0, k + 1), -2, 2, 70)};
        std::vector<DataVector> dv{as_data_vector(gens[0])};
        if (gens[0].zero()) continue;
        DataVector t = ts::random_combination(r, dv, ts::atom_range(0, 5), 3, 2);
        Hypergraph h = encode_hypergraph(t);
        std::set<Atom> sup = h.support();
        std::vector<Atom> support(sup.begin(), sup.end());
        for (Atom a = 20; support.size() < static_cast<std::size_t>(2 * k); ++a) support.push_back(a);
        BuildContext ctx(100);
        for (Atom a : gens[0].vertices()) CHECK(a < 100);
        const auto pieces = express_with_simple(h, gens, support, ctx);
        REQUIRE(pieces.has_value());
        Hypergraph total(k, 1);
        for (const auto& p : *pieces) {
            CHECK(ts::naive_simple(p.graph, p.spec));
            CHECK(ts::expand(p.over_gens[0], gens[0]).same_weights(p.graph));
            total = hg_add(total, p.graph);
        }
        CHECK(total.same_weights(h));
    }
}

TEST_CASE("empty-set simple hypergraphs on wide supports need elimination") {
    ts::Rng r(48);
    for (int it = 0; it < 8; ++it) {
        const int k = it % 2 ? 3 : 2;
        const auto atoms = ts::atom_range(0, 2 * k);
        const Hypergraph g = ts::random_hypergraph(r, k, 1, atoms, -2, 2, 70);
        BuildContext ctx(100);
        const SimpleResult s = construct_simple(g, {}, ctx);
        CHECK(s.spec.C.size() == static_cast<std::size_t>(2 * k - 1));
        CHECK(s.spec.a == ts::naive_weight(g, {}));
        CHECK(ts::naive_simple(s.graph, s.spec));
        CHECK(ts::expand(s.witness, g).same_weights(s.graph));
    }
}
