#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace datalin {

using Int = mpz_class;
using Atom = std::uint64_t;
// Strictly increasing sequence of atoms.
using KSet = std::vector<Atom>;
using IntVector = std::vector<Int>;
// Forward renaming: an entry at X moves to {pi(a) : a in X}. Unmapped atoms stay put.
using Renaming = std::map<Atom, Atom>;

// ---- integer vectors ----

IntVector zero_vector(int d);
bool is_zero(const IntVector& v);
// acc += c * v
void add_scaled(IntVector& acc, const IntVector& v, const Int& c);
IntVector add(const IntVector& a, const IntVector& b);
IntVector sub(const IntVector& a, const IntVector& b);
IntVector scale(const Int& c, const IntVector& a);
IntVector neg(const IntVector& a);
std::string to_string(const IntVector& v);

// ---- atom sets ----

KSet make_kset(std::vector<Atom> atoms);
bool is_subset(const KSet& small, const KSet& big);
KSet set_union(const KSet& a, const KSet& b);
KSet set_minus(const KSet& a, const KSet& b);
bool disjoint(const KSet& a, const KSet& b);
// All m-element subsets of base (sorted) in lexicographic order.
std::vector<KSet> subsets_of_size(const KSet& base, int m);
std::string to_string(const KSet& x);

// ---- data vectors ----

class DataVector {
public:
    DataVector() = default;
    DataVector(int arity, int dim);

    int arity() const { return arity_; }
    int dim() const { return dim_; }
    const std::map<KSet, IntVector>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    IntVector at(const KSet& x) const;
    // Accumulates v at x; zero results are dropped.
    void add(const KSet& x, const IntVector& v);
    std::set<Atom> support() const;

    bool operator==(const DataVector& o) const = default;

private:
    int arity_ = 0;
    int dim_ = 0;
    std::map<KSet, IntVector> entries_;
};

DataVector dv_add(const DataVector& a, const DataVector& b);
DataVector dv_sub(const DataVector& a, const DataVector& b);
DataVector dv_scale(const Int& c, const DataVector& a);
DataVector dv_permute(const DataVector& a, const Renaming& pi);
std::string to_string(const DataVector& a);

// ---- hypergraphs ----

class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(int arity, int dim);
    Hypergraph(int arity, int dim, std::set<Atom> vertices);

    int arity() const { return arity_; }
    int dim() const { return dim_; }
    const std::set<Atom>& vertices() const { return vertices_; }
    const std::map<KSet, IntVector>& edges() const { return mu_; }

    void add_vertex(Atom a) { vertices_.insert(a); }
    void add_edge(const KSet& e, const IntVector& w);
    IntVector edge(const KSet& e) const;
    // Non-isolated vertices.
    std::set<Atom> support() const;
    bool zero() const { return mu_.empty(); }

    // Same edges (vertex sets may differ by isolated atoms).
    bool same_weights(const Hypergraph& o) const { return mu_ == o.mu_; }
    bool operator==(const Hypergraph& o) const = default;

private:
    int arity_ = 0;
    int dim_ = 0;
    std::set<Atom> vertices_;
    std::map<KSet, IntVector> mu_;
};

Hypergraph encode_hypergraph(const DataVector& a);
DataVector as_data_vector(const Hypergraph& h);

IntVector weight(const Hypergraph& h, const KSet& x);
// Nonzero weights of all m-subsets of V(h).
std::map<KSet, IntVector> weights_of_size(const Hypergraph& h, int m);

Hypergraph hg_add(const Hypergraph& g, const Hypergraph& h);
Hypergraph hg_sub(const Hypergraph& g, const Hypergraph& h);
Hypergraph hg_scale(const Int& c, const Hypergraph& h);
Hypergraph hg_permute(const Hypergraph& h, const Renaming& pi);
// Drops isolated vertices.
Hypergraph trimmed(const Hypergraph& h);

// Weight-preserving bijection between non-isolated vertex sets, if any.
std::optional<Renaming> find_isomorphism(const Hypergraph& g, const Hypergraph& h);
bool equivalent(const Hypergraph& g, const Hypergraph& h);

// ---- instances ----

struct Instance {
    int arity = 0;
    int dim = 0;
    std::vector<DataVector> generators;
    DataVector target;

    void validate() const;
};

Atom max_atom(const Instance& inst);

// Monotone supply of atoms never seen before.
class FreshAtoms {
public:
    explicit FreshAtoms(Atom first) : next_(first) {}
    Atom take() { return next_++; }
    Atom peek() const { return next_; }

private:
    Atom next_;
};

}  // namespace datalin
