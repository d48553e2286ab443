#pragma once

#include "datalin/core.hpp"
#include "datalin/intlin.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace datalin {

// ---- reduction matrices ----

struct ReductionMatrix {
    int a = 0, b = 0, c = 0;
    IntMatrix matrix;            // C(a,c) x C(a,b)
    std::vector<KSet> row_sets;  // c-subsets of {0..a-1}, lexicographic
    std::vector<KSet> col_sets;  // b-subsets of {0..a-1}, lexicographic
};

ReductionMatrix reduction_matrix(int a, int b, int c);
// Disjointness matrix of the Kneser graph K(n,k), k-subsets in lexicographic order.
IntMatrix kneser_matrix(int n, int k);
// R(2k+1,k+1,k) with each column B moved to the index of its complement.
IntMatrix relabeled_reduction_matrix(int k);
bool kneser_full_rank(int k);

// ---- cut / enrich / swap ----

Hypergraph cut(const Hypergraph& h, const KSet& x);
Hypergraph enrich(const Hypergraph& h, const KSet& x);
Hypergraph swap(const Hypergraph& h, Atom a, Atom b);

bool is_m_isolated(const Hypergraph& h, int m);
bool is_pre_m_isolated(const Hypergraph& h, int m);

// sum_{Y > x, |Y| = l} w_Y(h) == C(k-m, l-m) w_x(h)
bool proportionality_check(const Hypergraph& h, const KSet& x, int l);

// ---- simple hypergraphs ----

struct SimpleSpec {
    int m = 0;
    IntVector a;
    std::vector<Atom> A, B;  // A[i] paired with B[i]
    std::vector<Atom> C;     // sorted
};

bool verify_simple(const Hypergraph& h, const SimpleSpec& spec);

// Integer combination of renamed copies of one base hypergraph. A term
// sends base()[i] to image[i].
class CopySum {
public:
    CopySum() = default;
    explicit CopySum(std::vector<Atom> base);
    static CopySum identity(std::vector<Atom> base);

    const std::vector<Atom>& base() const { return base_; }
    const std::map<std::vector<Atom>, Int>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    void add(const std::vector<Atom>& image, const Int& c);
    void add(const CopySum& other, const Int& c);
    std::set<Atom> atoms() const;
    Hypergraph evaluate(const Hypergraph& g) const;
    // Applies sigma to every image. Atoms outside sigma's domain stay put
    // unless they collide with sigma's range, in which case they move to fresh atoms.
    CopySum renamed(const Renaming& sigma, FreshAtoms& fresh) const;

private:
    std::vector<Atom> base_;
    std::map<std::vector<Atom>, Int> terms_;
};

// outer is a sum of copies of F (outer.base() = V(F)); inner expresses F
// through copies of g. Returns outer through copies of g.
CopySum compose(const CopySum& outer, const CopySum& inner, FreshAtoms& fresh);

struct ResourceCap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BuildContext {
    FreshAtoms fresh;
    std::size_t max_terms = 2'000'000;
    std::size_t max_steps = 200'000;
    std::size_t steps = 0;

    explicit BuildContext(Atom first_fresh) : fresh(first_fresh) {}
    void charge(std::size_t terms);
};

struct SimpleResult {
    Hypergraph graph;  // vertices = A u B u C
    SimpleSpec spec;
    CopySum witness;   // over copies of g, base = sorted V(g)
};

// (|x|, w_x(g))-simple hypergraph built from copies of g, self-verified.
SimpleResult construct_simple(const Hypergraph& g, const KSet& x, BuildContext& ctx);

// One summand of an expression by simple hypergraphs.
struct SimplePiece {
    Hypergraph graph;
    SimpleSpec spec;
    std::vector<CopySum> over_gens;  // one per generator
};

// Writes h as a sum of simple hypergraphs supported inside `support`
// (sorted, size >= 2k-1), each a Z-combination of copies of gens. Returns
// nullopt when some weight leaves the generators' span.
std::optional<std::vector<SimplePiece>> express_with_simple(const Hypergraph& h, const std::vector<Hypergraph>& gens,
                                                            const std::vector<Atom>& support, BuildContext& ctx);

}  // namespace datalin
