#pragma once

#include "datalin/calculus.hpp"
#include "datalin/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace datalin {

enum class Mode { Z, N };

struct WitnessTerm {
    Int coeff;
    std::size_t generator = 0;
    Renaming renaming;

    bool operator==(const WitnessTerm&) const = default;
};

struct Witness {
    std::vector<WitnessTerm> terms;

    bool operator==(const Witness&) const = default;
};

// Sum of coeff * (generator o renaming). Throws std::invalid_argument on a
// bad generator index or a renaming that is not injective on the generator's support.
DataVector evaluate(const Witness& w, const Instance& inst);
// Exact equality with the target; N mode also demands nonnegative coefficients.
bool verify_witness(const Witness& w, const Instance& inst, Mode mode);

// Restricts renamings to generator supports, drops identity pairs, and
// merges equal terms. Zero terms vanish.
Witness merge(const Witness& w, const Instance& inst);

// One copy sum per generator (base = sorted support) flattened to terms.
Witness witness_from_copies(const std::vector<CopySum>& sums);

// Arity-2 replay of the constructive proof. Absent iff local_check fails.
std::optional<Witness> extract_witness_k2(const Instance& inst);

struct ExtractConfig {
    std::size_t max_terms = 2'000'000;
    std::size_t max_steps = 200'000;
};

struct GeneralExtraction {
    bool z_solvable = false;
    std::optional<Witness> witness;  // absent with z_solvable set means the cap was hit
    std::string detail;
};

GeneralExtraction extract_witness_general(const Instance& inst, const ExtractConfig& cfg = {});

}  // namespace datalin
