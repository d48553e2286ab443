#pragma once

#include "datalin/core.hpp"
#include "datalin/witness.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace datalin {

// User-facing input error; the message names the offending field or line.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integer atoms keep their value as id. String atoms get ids above the
// largest integer atom, in sorted name order.
class AtomTable {
public:
    void add_name(const std::string& name, Atom id);
    std::optional<Atom> lookup(const std::string& name) const;
    // Known name, else "_<id>" made unique against the known names.
    std::string name(Atom a) const;
    bool is_named(Atom a) const { return names_.count(a) > 0; }
    nlohmann::json to_json(Atom a) const;
    // Next id above every atom seen so far.
    Atom next_id() const { return next_; }
    void note(Atom a) { next_ = std::max(next_, a + 1); }

private:
    std::map<std::string, Atom> ids_;
    std::map<Atom, std::string> names_;
    Atom next_ = 0;
};

struct ParsedInstance {
    Instance instance;
    AtomTable atoms;
};

ParsedInstance parse_instance(const nlohmann::json& j);
ParsedInstance parse_instance_text(const std::string& text);
ParsedInstance load_instance(const std::string& path);

nlohmann::json emit_instance(const Instance& inst, const AtomTable& atoms);
nlohmann::json emit_data_vector(const DataVector& a, const AtomTable& atoms);

// Renaming keys are atom names (decimal for integer atoms); unknown names are interned.
Witness parse_witness(const nlohmann::json& j, AtomTable& atoms);
Witness load_witness(const std::string& path, AtomTable& atoms);
nlohmann::json emit_witness(const Witness& w, const AtomTable& atoms);

std::string to_decimal(const Int& v);
std::string set_name(const KSet& x, const AtomTable& atoms);

struct GenParams {
    int arity = 2;
    int dim = 1;
    int atoms = 4;
    int gens = 2;
    long lo = -2;
    long hi = 2;
    std::uint64_t seed = 1;
};

// Reproducible random instance over integer atoms 0..atoms-1.
Instance random_instance(const GenParams& p);

}  // namespace datalin
