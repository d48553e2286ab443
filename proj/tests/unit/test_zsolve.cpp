#include "datalin/oracle.hpp"
#include "datalin/zsolve.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cstdlib>

using namespace datalin;

namespace {

Instance pair_instance(long t) {
    DataVector g(1, 1);
    g.add({3}, {Int(1)});
    g.add({4}, {Int(1)});
    DataVector v(1, 1);
    v.add({1}, {Int(t)});
    return Instance{1, 1, {g}, v};
}

Instance triangle_instance(long t) {
    DataVector g(2, 1);
    g.add({2, 3}, {Int(1)});
    g.add({3, 4}, {Int(1)});
    g.add({2, 4}, {Int(1)});
    DataVector v(2, 1);
    v.add({2, 3}, {Int(t)});
    return Instance{2, 1, {g}, v};
}

}  // namespace

TEST_CASE("pair generators against a singleton target") {
    CHECK(z_solvable(pair_instance(2)));
    CHECK(z_solvable(pair_instance(-4)));
    const LocalReport r = local_check(pair_instance(3));
    CHECK_FALSE(r.decision);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].subset.empty());
}

TEST_CASE("triangle generator against a single edge") {
    CHECK(z_solvable(triangle_instance(6)));
    const LocalReport r = local_check(triangle_instance(3));
    CHECK_FALSE(r.decision);
    REQUIRE(!r.failures.empty());
    CHECK(r.failures.front().subset.size() == 1);
    for (std::size_t i = 1; i < r.failures.size(); ++i) {
        const auto& a = r.failures[i - 1].subset;
        const auto& b = r.failures[i].subset;
        CHECK(std::make_pair(a.size(), a) < std::make_pair(b.size(), b));
    }
}

TEST_CASE("zero target is always solvable") {
    Instance inst = triangle_instance(1);
    inst.target = DataVector(2, 1);
    CHECK(z_solvable(inst));
    inst.generators.clear();
    CHECK(z_solvable(inst));
}

TEST_CASE("no generators and a nonzero target") {
    Instance inst = triangle_instance(1);
    inst.generators.clear();
    CHECK_FALSE(z_solvable(inst));
}

TEST_CASE("weight columns are distinct and nonzero") {
    Hypergraph t(2, 1);
    t.add_edge({1, 2}, {Int(1)});
    t.add_edge({2, 3}, {Int(1)});
    t.add_edge({1, 3}, {Int(1)});
    const WeightColumns c = weight_columns({t, t}, 1);
    CHECK(c.columns == std::vector<IntVector>{{Int(2)}});
    CHECK(c.sources.size() == 1);
}

TEST_CASE("integer combinations of copies are locally solvable") {
    ts::Rng r(31);
    for (int it = 0; it < 150; ++it) {
        const int k = static_cast<int>(r.range(1, 3)), d = static_cast<int>(r.range(1, 2));
        const auto atoms = ts::atom_range(0, 6);
        std::vector<DataVector> gens;
        for (int j = 0; j < r.range(1, 2); ++j) gens.push_back(ts::random_vector(r, k, d, ts::atom_range(0, k + 1), -2, 2));
        const DataVector target = ts::random_combination(r, gens, atoms, 4, 3);
        CHECK(z_solvable(Instance{k, d, gens, target}));
    }
}

TEST_CASE("local check never rejects what the oracle finds") {
    ts::Rng r(32);
    for (int it = 0; it < 60; ++it) {
        const int k = static_cast<int>(r.range(1, 2));
        std::vector<DataVector> gens{ts::random_vector(r, k, 1, ts::atom_range(0, k + 1), -2, 2)};
        const DataVector target = ts::random_vector(r, k, 1, ts::atom_range(0, 4), -2, 2);
        const Instance inst{k, 1, gens, target};
        OracleConfig cfg;
        cfg.fresh_atoms = 1;
        const auto w = brute_force(inst, cfg);
        if (w) CHECK(z_solvable(inst));
    }
}

TEST_CASE("thread count honours the environment") {
    ::setenv("DATALIN_THREADS", "3", 1);
    CHECK(thread_count() == 3);
    ::setenv("DATALIN_THREADS", "1", 1);
    CHECK(thread_count() == 1);
    const Instance inst = triangle_instance(6);
    CHECK(z_solvable(inst));
    ::unsetenv("DATALIN_THREADS");
    CHECK(thread_count() >= 1);
}
