#pragma once

#include "datalin/core.hpp"
#include "datalin/witness.hpp"

#include <optional>
#include <vector>

namespace datalin {

struct OracleConfig {
    long coeff_bound = 1;
    long fresh_atoms = 0;
    Mode mode = Mode::Z;
    std::size_t max_placements = 200'000;
    std::size_t max_nodes = 2'000'000;
};

// Search over copies of the generators placed injectively on supp(target)
// plus fresh atoms. Z mode solves the placement lattice exactly (so any
// coefficient size is found); N mode is a depth-first search with per-copy
// multiplicity at most coeff_bound. Throws std::length_error past the guards.
std::optional<Witness> brute_force(const Instance& inst, const OracleConfig& cfg);

struct NSearchLimits {
    long per_copy = 1;                 // multiplicity of one placed copy
    std::optional<long> total;         // total number of copies
    std::size_t max_placements = 200'000;
    std::size_t max_nodes = 2'000'000;
};

// Nonnegative combination of placed copies equal to `target`, copies placed
// on `base` plus `fresh` fresh atoms.
std::optional<Witness> n_search(const Instance& inst, const DataVector& target, const std::vector<Atom>& base, long fresh,
                                const NSearchLimits& limits);

}  // namespace datalin
