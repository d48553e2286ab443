#pragma once

#include "datalin/core.hpp"
#include "datalin/witness.hpp"
#include "datalin/zsolve.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace datalin {

// Sum of all values.
IntVector data_projection(const DataVector& a);

// Sum of a o pi over all permutations pi of `support`. Throws
// std::length_error when |support| exceeds max_support.
DataVector smooth(const DataVector& a, const std::set<Atom>& support, std::size_t max_support = 9);

struct ReversibilityPartition {
    std::vector<std::size_t> reversible;     // I1
    std::vector<std::size_t> nonreversible;  // I2
};

// Generator i is reversible iff -P(v_i) lies in the rational cone of all projections.
ReversibilityPartition reversible_partition(const Instance& inst);

struct NBoundData {
    Int coeff_bound;
    std::size_t s_max = 0;
    Int support_size;
    std::optional<std::vector<Atom>> support_atoms;  // realized below the cap
};

NBoundData nonreversible_bound(const Instance& inst, const ReversibilityPartition& part,
                               std::size_t max_support_atoms = 4096);

struct NCap {
    std::size_t max_states = 1'000'000;
    long max_depth = 10'000;
    std::size_t max_support_atoms = 4096;
};

enum class NStatus { Solvable, Unsolvable, Inconclusive };

struct NDecision {
    NStatus status = NStatus::Inconclusive;
    ReversibilityPartition partition;
    NBoundData bounds;
    Witness guess;         // nonreversible copies, coefficients >= 0
    LocalReport residual;  // local check of target - guess over I1
    std::size_t states = 0;
    std::string reason;
};

NDecision n_solvable(const Instance& inst, const NCap& cap = {});

// -v_i as a nonnegative sum of at most `bound` copies on supp(v_i) plus `bound` fresh atoms.
bool brute_reversible(const Instance& inst, std::size_t i, long bound);

// Guess plus the residual with negative reversible terms rewritten as
// nonnegative ones. Absent when some step does not succeed within the bounds.
std::optional<Witness> n_witness(const Instance& inst, const NDecision& decision, long reverse_bound = 4);

}  // namespace datalin
