#include "datalin/core.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace datalin {

IntVector zero_vector(int d) { return IntVector(static_cast<std::size_t>(d), Int(0)); }

bool is_zero(const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return sgn(x) == 0; });
}

void add_scaled(IntVector& acc, const IntVector& v, const Int& c) {
    if (acc.size() != v.size()) throw std::invalid_argument("vector dimension mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += c * v[i];
}

IntVector add(const IntVector& a, const IntVector& b) {
    IntVector r = a;
    add_scaled(r, b, 1);
    return r;
}

IntVector sub(const IntVector& a, const IntVector& b) {
    IntVector r = a;
    add_scaled(r, b, -1);
    return r;
}

IntVector scale(const Int& c, const IntVector& a) {
    IntVector r = a;
    for (auto& x : r) x *= c;
    return r;
}

IntVector neg(const IntVector& a) { return scale(-1, a); }

std::string to_string(const IntVector& v) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
    os << ']';
    return os.str();
}

KSet make_kset(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end());
    if (std::adjacent_find(atoms.begin(), atoms.end()) != atoms.end())
        throw std::invalid_argument("set has repeated atoms");
    return atoms;
}

bool is_subset(const KSet& small, const KSet& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

KSet set_union(const KSet& a, const KSet& b) {
    KSet r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

KSet set_minus(const KSet& a, const KSet& b) {
    KSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

bool disjoint(const KSet& a, const KSet& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j]) ++i; else ++j;
    }
    return true;
}

std::vector<KSet> subsets_of_size(const KSet& base, int m) {
    std::vector<KSet> out;
    const int n = static_cast<int>(base.size());
    if (m < 0 || m > n) return out;
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) idx[i] = i;
    while (true) {
        KSet s;
        s.reserve(idx.size());
        for (int i : idx) s.push_back(base[i]);
        out.push_back(std::move(s));
        int i = m - 1;
        while (i >= 0 && idx[i] == n - m + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

std::string to_string(const KSet& x) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << '}';
    return os.str();
}

// ---- DataVector ----

DataVector::DataVector(int arity, int dim) : arity_(arity), dim_(dim) {
    if (arity < 0 || dim < 0) throw std::invalid_argument("negative arity or dimension");
}

IntVector DataVector::at(const KSet& x) const {
    auto it = entries_.find(x);
    return it == entries_.end() ? zero_vector(dim_) : it->second;
}

void DataVector::add(const KSet& x, const IntVector& v) {
    if (static_cast<int>(x.size()) != arity_) throw std::invalid_argument("key size differs from arity");
    if (static_cast<int>(v.size()) != dim_) throw std::invalid_argument("value size differs from dimension");
    if (!std::is_sorted(x.begin(), x.end()) || std::adjacent_find(x.begin(), x.end()) != x.end())
        throw std::invalid_argument("key is not a strictly increasing atom set");
    auto [it, inserted] = entries_.try_emplace(x, zero_vector(dim_));
    add_scaled(it->second, v, 1);
    if (is_zero(it->second)) entries_.erase(it);
}

std::set<Atom> DataVector::support() const {
    std::set<Atom> s;
    for (const auto& [x, v] : entries_) s.insert(x.begin(), x.end());
    return s;
}

static void check_shape(int k1, int d1, int k2, int d2) {
    if (k1 != k2 || d1 != d2) throw std::invalid_argument("arity/dimension mismatch");
}

DataVector dv_add(const DataVector& a, const DataVector& b) {
    check_shape(a.arity(), a.dim(), b.arity(), b.dim());
    DataVector r = a;
    for (const auto& [x, v] : b.entries()) r.add(x, v);
    return r;
}

DataVector dv_sub(const DataVector& a, const DataVector& b) { return dv_add(a, dv_scale(-1, b)); }

DataVector dv_scale(const Int& c, const DataVector& a) {
    DataVector r(a.arity(), a.dim());
    if (sgn(c) == 0) return r;
    for (const auto& [x, v] : a.entries()) r.add(x, scale(c, v));
    return r;
}

static Atom apply(const Renaming& pi, Atom a) {
    auto it = pi.find(a);
    return it == pi.end() ? a : it->second;
}

static void check_injective(const std::set<Atom>& domain, const Renaming& pi) {
    std::set<Atom> image;
    for (Atom a : domain)
        if (!image.insert(apply(pi, a)).second)
            throw std::invalid_argument("renaming is not injective on the support");
}

static KSet rename(const KSet& x, const Renaming& pi) {
    std::vector<Atom> y;
    y.reserve(x.size());
    for (Atom a : x) y.push_back(apply(pi, a));
    return make_kset(std::move(y));
}

DataVector dv_permute(const DataVector& a, const Renaming& pi) {
    check_injective(a.support(), pi);
    DataVector r(a.arity(), a.dim());
    for (const auto& [x, v] : a.entries()) r.add(rename(x, pi), v);
    return r;
}

std::string to_string(const DataVector& a) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [x, v] : a.entries()) {
        os << (first ? "" : ", ") << to_string(x) << "->" << to_string(v);
        first = false;
    }
    os << '}';
    return os.str();
}

// ---- Hypergraph ----

Hypergraph::Hypergraph(int arity, int dim) : arity_(arity), dim_(dim) {
    if (arity < 0 || dim < 0) throw std::invalid_argument("negative arity or dimension");
}

Hypergraph::Hypergraph(int arity, int dim, std::set<Atom> vertices)
    : arity_(arity), dim_(dim), vertices_(std::move(vertices)) {
    if (arity < 0 || dim < 0) throw std::invalid_argument("negative arity or dimension");
}

void Hypergraph::add_edge(const KSet& e, const IntVector& w) {
    if (static_cast<int>(e.size()) != arity_) throw std::invalid_argument("edge size differs from arity");
    if (static_cast<int>(w.size()) != dim_) throw std::invalid_argument("weight size differs from dimension");
    vertices_.insert(e.begin(), e.end());
    auto [it, inserted] = mu_.try_emplace(e, zero_vector(dim_));
    add_scaled(it->second, w, 1);
    if (is_zero(it->second)) mu_.erase(it);
}

IntVector Hypergraph::edge(const KSet& e) const {
    auto it = mu_.find(e);
    return it == mu_.end() ? zero_vector(dim_) : it->second;
}

std::set<Atom> Hypergraph::support() const {
    std::set<Atom> s;
    for (const auto& [e, w] : mu_) s.insert(e.begin(), e.end());
    return s;
}

Hypergraph encode_hypergraph(const DataVector& a) {
    Hypergraph h(a.arity(), a.dim());
    for (const auto& [x, v] : a.entries()) h.add_edge(x, v);
    return h;
}

DataVector as_data_vector(const Hypergraph& h) {
    DataVector r(h.arity(), h.dim());
    for (const auto& [e, w] : h.edges()) r.add(e, w);
    return r;
}

IntVector weight(const Hypergraph& h, const KSet& x) {
    if (static_cast<int>(x.size()) > h.arity()) throw std::invalid_argument("weight set larger than arity");
    IntVector r = zero_vector(h.dim());
    for (const auto& [e, w] : h.edges())
        if (is_subset(x, e)) add_scaled(r, w, 1);
    return r;
}

std::map<KSet, IntVector> weights_of_size(const Hypergraph& h, int m) {
    std::map<KSet, IntVector> out;
    if (m < 0 || m > h.arity()) return out;
    for (const auto& [e, w] : h.edges()) {
        for (const KSet& x : subsets_of_size(e, m)) {
            auto [it, inserted] = out.try_emplace(x, zero_vector(h.dim()));
            add_scaled(it->second, w, 1);
        }
    }
    std::erase_if(out, [](const auto& kv) { return is_zero(kv.second); });
    return out;
}

Hypergraph hg_add(const Hypergraph& g, const Hypergraph& h) {
    check_shape(g.arity(), g.dim(), h.arity(), h.dim());
    Hypergraph r = g;
    for (Atom a : h.vertices()) r.add_vertex(a);
    for (const auto& [e, w] : h.edges()) r.add_edge(e, w);
    return r;
}

Hypergraph hg_scale(const Int& c, const Hypergraph& h) {
    Hypergraph r(h.arity(), h.dim(), h.vertices());
    if (sgn(c) == 0) return r;
    for (const auto& [e, w] : h.edges()) r.add_edge(e, scale(c, w));
    return r;
}

Hypergraph hg_sub(const Hypergraph& g, const Hypergraph& h) { return hg_add(g, hg_scale(-1, h)); }

Hypergraph hg_permute(const Hypergraph& h, const Renaming& pi) {
    check_injective(h.vertices(), pi);
    Hypergraph r(h.arity(), h.dim());
    for (Atom a : h.vertices()) r.add_vertex(apply(pi, a));
    for (const auto& [e, w] : h.edges()) r.add_edge(rename(e, pi), w);
    return r;
}

Hypergraph trimmed(const Hypergraph& h) {
    Hypergraph r(h.arity(), h.dim());
    for (const auto& [e, w] : h.edges()) r.add_edge(e, w);
    return r;
}

// ---- isomorphism ----

namespace {

using Signature = std::vector<IntVector>;

std::map<Atom, Signature> signatures(const Hypergraph& h) {
    std::map<Atom, Signature> sig;
    for (const auto& [e, w] : h.edges())
        for (Atom a : e) sig[a].push_back(w);
    for (auto& [a, s] : sig) std::sort(s.begin(), s.end());
    return sig;
}

}  // namespace

std::optional<Renaming> find_isomorphism(const Hypergraph& g, const Hypergraph& h) {
    if (g.arity() != h.arity() || g.dim() != h.dim()) return std::nullopt;
    if (g.edges().size() != h.edges().size()) return std::nullopt;
    auto gs = signatures(g);
    auto hs = signatures(h);
    if (gs.size() != hs.size()) return std::nullopt;
    {
        std::vector<Signature> a, b;
        for (auto& [v, s] : gs) a.push_back(s);
        for (auto& [v, s] : hs) b.push_back(s);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return std::nullopt;
    }

    // Highest degree first keeps the search narrow.
    std::vector<Atom> order;
    for (auto& [v, s] : gs) order.push_back(v);
    std::stable_sort(order.begin(), order.end(),
                     [&](Atom x, Atom y) { return gs[x].size() > gs[y].size(); });

    std::map<Atom, std::vector<KSet>> incident;
    for (const auto& [e, w] : g.edges())
        for (Atom a : e) incident[a].push_back(e);

    Renaming map;
    std::set<Atom> used;
    std::function<bool(std::size_t)> extend = [&](std::size_t i) -> bool {
        if (i == order.size()) return true;
        Atom u = order[i];
        for (auto& [v, s] : hs) {
            if (used.count(v) || s != gs[u]) continue;
            map[u] = v;
            bool ok = true;
            for (const KSet& e : incident[u]) {
                std::vector<Atom> img;
                bool complete = true;
                for (Atom a : e) {
                    auto it = map.find(a);
                    if (it == map.end()) { complete = false; break; }
                    img.push_back(it->second);
                }
                if (!complete) continue;
                if (h.edge(make_kset(img)) != g.edge(e)) { ok = false; break; }
            }
            if (ok) {
                used.insert(v);
                if (extend(i + 1)) return true;
                used.erase(v);
            }
            map.erase(u);
        }
        return false;
    };
    if (!extend(0)) return std::nullopt;
    return map;
}

bool equivalent(const Hypergraph& g, const Hypergraph& h) { return find_isomorphism(g, h).has_value(); }

// ---- Instance ----

void Instance::validate() const {
    if (arity < 1) throw std::invalid_argument("arity must be at least 1");
    if (dim < 1) throw std::invalid_argument("dimension must be at least 1");
    auto check = [&](const DataVector& v, const std::string& what) {
        if (v.arity() != arity || v.dim() != dim)
            throw std::invalid_argument(what + ": arity/dimension mismatch");
    };
    for (std::size_t i = 0; i < generators.size(); ++i) check(generators[i], "generator " + std::to_string(i));
    check(target, "target");
}

Atom max_atom(const Instance& inst) {
    Atom m = 0;
    auto scan = [&](const DataVector& v) {
        for (Atom a : v.support()) m = std::max(m, a);
    };
    for (const auto& g : inst.generators) scan(g);
    scan(inst.target);
    return m;
}

}  // namespace datalin
