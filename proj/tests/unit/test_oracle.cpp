#include "datalin/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace datalin;

namespace {

Instance pairs(long t) {
    DataVector g(1, 1);
    g.add({4}, {Int(1)});
    g.add({5}, {Int(1)});
    DataVector v(1, 1);
    v.add({2}, {Int(t)});
    return Instance{1, 1, {g}, v};
}

}  // namespace

TEST_CASE("oracle finds the three-term pair witness over Z") {
    OracleConfig cfg;
    cfg.coeff_bound = 1;
    cfg.fresh_atoms = 2;
    const auto w = brute_force(pairs(2), cfg);
    REQUIRE(w);
    CHECK(verify_witness(*w, pairs(2), Mode::Z));
}

TEST_CASE("oracle finds nothing over N for pairs") {
    OracleConfig cfg;
    cfg.coeff_bound = 3;
    cfg.fresh_atoms = 3;
    cfg.mode = Mode::N;
    // Each copy puts 1 on two distinct atoms and only beta may end up nonzero.
    for (long t = 1; t <= 3; ++t) CHECK_FALSE(brute_force(pairs(t), cfg).has_value());
}

TEST_CASE("empty target gives the empty witness") {
    Instance inst = pairs(0);
    for (Mode m : {Mode::Z, Mode::N}) {
        OracleConfig cfg;
        cfg.mode = m;
        const auto w = brute_force(inst, cfg);
        REQUIRE(w);
        CHECK(w->terms.empty());
    }
}

TEST_CASE("negative bounds are rejected") {
    OracleConfig cfg;
    cfg.fresh_atoms = -1;
    CHECK_THROWS_AS(brute_force(pairs(2), cfg), std::invalid_argument);
}

TEST_CASE("oracle results are monotone in the bounds") {
    ts::Rng r(61);
    for (int it = 0; it < 60; ++it) {
        const int k = static_cast<int>(r.range(1, 2));
        std::vector<DataVector> gens{ts::random_vector(r, k, 1, ts::atom_range(0, k + 1), 0, 2)};
        const auto atoms = ts::atom_range(0, 4);
        DataVector t(k, 1);
        // Nonnegative sums of copies, so N witnesses exist at some bound.
        for (int c = 0; c < r.range(1, 2); ++c) {
            DataVector one = ts::random_combination(r, gens, atoms, 1, 1);
            bool nonneg = true;
            for (const auto& [x, v] : one.entries()) nonneg = nonneg && v[0] >= 0;
            if (nonneg) t = dv_add(t, one);
        }
        const Instance inst{k, 1, gens, t};
        for (Mode m : {Mode::Z, Mode::N}) {
            OracleConfig small, big;
            small.mode = big.mode = m;
            small.coeff_bound = 1;
            big.coeff_bound = 2;
            small.fresh_atoms = 0;
            big.fresh_atoms = 1;
            const auto a = brute_force(inst, small);
            const auto b = brute_force(inst, big);
            if (a) CHECK(b.has_value());
            if (b) CHECK(verify_witness(*b, inst, m));
        }
    }
}

TEST_CASE("n_search respects the per-copy multiplicity") {
    DataVector g(1, 1);
    g.add({1}, {Int(1)});
    DataVector v(1, 1);
    v.add({1}, {Int(3)});
    const Instance inst{1, 1, {g}, v};
    NSearchLimits lim;
    lim.per_copy = 2;
    CHECK_FALSE(n_search(inst, v, {1}, 0, lim).has_value());
    lim.per_copy = 3;
    const auto w = n_search(inst, v, {1}, 0, lim);
    REQUIRE(w);
    CHECK(verify_witness(*w, inst, Mode::N));
}

TEST_CASE("oracle guard throws past the placement limit") {
    DataVector g(2, 1);
    for (Atom a = 0; a < 6; ++a) g.add({a, a + 1}, {Int(1)});
    DataVector v(2, 1);
    v.add({0, 9}, {Int(1)});
    OracleConfig cfg;
    cfg.fresh_atoms = 6;
    cfg.max_placements = 10;
    CHECK_THROWS_AS(brute_force(Instance{2, 1, {g}, v}, cfg), std::length_error);
}
