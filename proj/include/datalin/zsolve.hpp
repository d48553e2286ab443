#pragma once

#include "datalin/core.hpp"
#include "datalin/intlin.hpp"

#include <vector>

namespace datalin {

struct LocalFailure {
    KSet subset;
    IntVector target_weight;
    std::size_t column_count = 0;  // distinct nonzero columns of that cardinality
};

struct LocalReport {
    bool decision = true;
    std::vector<LocalFailure> failures;  // sorted by (|X|, X)
};

// Distinct nonzero m-weights of the generators, each with one (generator, X) source.
struct WeightColumns {
    std::vector<IntVector> columns;
    std::vector<std::pair<std::size_t, KSet>> sources;
};
WeightColumns weight_columns(const std::vector<Hypergraph>& gens, int m);

LocalReport local_check(const Instance& inst);
bool z_solvable(const Instance& inst);

// Worker count from DATALIN_THREADS (0 or unset: hardware concurrency).
unsigned thread_count();

}  // namespace datalin
