#include "datalin/oracle.hpp"

#include "datalin/intlin.hpp"

#include <algorithm>

namespace datalin {

namespace {

struct Placement {
    std::size_t gen = 0;
    Renaming renaming;
    DataVector value;
    std::vector<Atom> fresh;  // fresh atoms in generator-atom order
};

Int falling(std::size_t n, std::size_t t) {
    Int r = 1;
    for (std::size_t i = 0; i < t; ++i) r *= static_cast<unsigned long>(n > i ? n - i : 0);
    return r;
}

// All injections of each generator's support into the universe, one per distinct placed vector.
std::vector<Placement> enumerate_placements(const Instance& inst, const std::vector<Atom>& universe, Atom first_fresh,
                                            std::size_t guard) {
    std::vector<Placement> out;
    std::set<std::string> seen;
    Int total = 0;
    for (std::size_t j = 0; j < inst.generators.size(); ++j) {
        const auto& g = inst.generators[j];
        if (g.empty()) continue;
        const std::set<Atom> sup_set = g.support();
        const std::vector<Atom> sup(sup_set.begin(), sup_set.end());
        total += falling(universe.size(), sup.size());
        if (total > static_cast<unsigned long>(guard)) throw std::length_error("oracle placement count above guard");
        std::vector<Atom> img(sup.size());
        std::vector<char> taken(universe.size(), 0);
        auto rec = [&](auto&& self, std::size_t i) -> void {
            if (i == sup.size()) {
                Placement p;
                p.gen = j;
                for (std::size_t t = 0; t < sup.size(); ++t) {
                    if (sup[t] != img[t]) p.renaming[sup[t]] = img[t];
                    if (img[t] >= first_fresh) p.fresh.push_back(img[t]);
                }
                p.value = dv_permute(g, p.renaming);
                if (seen.insert(to_string(p.value)).second) out.push_back(std::move(p));
                return;
            }
            for (std::size_t u = 0; u < universe.size(); ++u) {
                if (taken[u]) continue;
                taken[u] = 1;
                img[i] = universe[u];
                self(self, i + 1);
                taken[u] = 0;
            }
        };
        rec(rec, 0);
    }
    return out;
}

std::vector<Atom> make_universe(const std::vector<Atom>& base, long fresh, Atom first_fresh) {
    std::vector<Atom> u = base;
    for (long i = 0; i < fresh; ++i) u.push_back(first_fresh + static_cast<Atom>(i));
    return u;
}

Atom first_fresh_for(const Instance& inst, const DataVector& target, const std::vector<Atom>& base) {
    Atom m = max_atom(inst);
    for (Atom a : target.support()) m = std::max(m, a);
    for (Atom a : base) m = std::max(m, a);
    return m + 1;
}

std::optional<Witness> z_search(const Instance& inst, const OracleConfig& cfg) {
    const std::set<Atom> ts = inst.target.support();
    const std::vector<Atom> base(ts.begin(), ts.end());
    const Atom ff = first_fresh_for(inst, inst.target, base);
    const auto placements = enumerate_placements(inst, make_universe(base, cfg.fresh_atoms, ff), ff, cfg.max_placements);

    std::map<KSet, std::size_t> rows;
    auto row_of = [&](const KSet& x) { return rows.try_emplace(x, rows.size()).first->second; };
    for (const auto& [x, v] : inst.target.entries()) row_of(x);
    for (const auto& p : placements)
        for (const auto& [x, v] : p.value.entries()) row_of(x);
    const std::size_t d = static_cast<std::size_t>(inst.dim);
    auto flatten = [&](const DataVector& a) {
        IntVector out(rows.size() * d, Int(0));
        for (const auto& [x, v] : a.entries())
            for (std::size_t c = 0; c < d; ++c) out[rows.at(x) * d + c] = v[c];
        return out;
    };
    std::vector<IntVector> columns;
    for (const auto& p : placements) columns.push_back(flatten(p.value));
    const ZLattice lattice(rows.size() * d, std::move(columns));
    const auto z = lattice.solve(flatten(inst.target));
    if (!z) return std::nullopt;
    Witness w;
    for (std::size_t i = 0; i < z->size(); ++i)
        if (sgn((*z)[i]) != 0) w.terms.push_back(WitnessTerm{(*z)[i], placements[i].gen, placements[i].renaming});
    return w;
}

class NEngine {
public:
    NEngine(std::vector<Placement> placements, std::vector<Atom> fresh, const NSearchLimits& limits, int dim)
        : placements_(std::move(placements)), fresh_(std::move(fresh)), limits_(limits), count_(placements_.size(), 0) {
        for (std::size_t i = 0; i < placements_.size(); ++i) {
            for (const auto& [x, v] : placements_[i].value.entries()) {
                hits_[x].push_back(i);
                auto [it, ins] = signs_.try_emplace(x, std::vector<std::pair<bool, bool>>(dim, {false, false}));
                for (int c = 0; c < dim; ++c) {
                    if (sgn(v[c]) > 0) it->second[c].first = true;
                    if (sgn(v[c]) < 0) it->second[c].second = true;
                }
            }
        }
    }

    std::optional<Witness> run(const DataVector& target) {
        if (!dfs(target)) return std::nullopt;
        Witness w;
        for (std::size_t i = 0; i < count_.size(); ++i)
            if (count_[i] > 0) w.terms.push_back(WitnessTerm{Int(count_[i]), placements_[i].gen, placements_[i].renaming});
        return w;
    }

private:
    std::vector<Placement> placements_;
    std::vector<Atom> fresh_;
    NSearchLimits limits_;
    std::vector<long> count_;
    long total_ = 0;
    std::map<Atom, long> used_;
    std::map<KSet, std::vector<std::size_t>> hits_;
    std::map<KSet, std::vector<std::pair<bool, bool>>> signs_;
    std::set<std::vector<std::pair<std::size_t, long>>> memo_;
    std::size_t nodes_ = 0;

    // Some entry of r has a sign no placement can supply at that key.
    bool dead(const DataVector& r) const {
        for (const auto& [x, v] : r.entries()) {
            auto it = signs_.find(x);
            if (it == signs_.end()) return true;
            for (std::size_t c = 0; c < v.size(); ++c) {
                if (sgn(v[c]) > 0 && !it->second[c].first) return true;
                if (sgn(v[c]) < 0 && !it->second[c].second) return true;
            }
        }
        return false;
    }

    // New fresh atoms must be the smallest unused ones, in generator-atom order.
    bool canonical(const Placement& p) const {
        std::vector<Atom> fresh_new;
        for (Atom a : p.fresh)
            if (!used_.count(a)) fresh_new.push_back(a);
        std::size_t k = 0;
        for (Atom a : fresh_) {
            if (k == fresh_new.size()) break;
            if (used_.count(a)) continue;
            if (fresh_new[k] != a) return false;
            ++k;
        }
        return k == fresh_new.size();
    }

    void take(std::size_t i, int sign) {
        count_[i] += sign;
        total_ += sign;
        for (Atom a : placements_[i].fresh) {
            if ((used_[a] += sign) == 0) used_.erase(a);
        }
    }

    bool dfs(const DataVector& r) {
        if (r.empty()) return true;
        if (dead(r)) return false;
        if (limits_.total && total_ >= *limits_.total) return false;
        std::vector<std::pair<std::size_t, long>> key;
        for (std::size_t i = 0; i < count_.size(); ++i)
            if (count_[i]) key.emplace_back(i, count_[i]);
        if (!memo_.insert(std::move(key)).second) return false;
        if (++nodes_ > limits_.max_nodes) throw std::length_error("oracle node count above guard");

        const KSet x = r.entries().begin()->first;
        for (std::size_t i : hits_.at(x)) {
            if (count_[i] >= limits_.per_copy) continue;
            if (!canonical(placements_[i])) continue;
            take(i, 1);
            if (dfs(dv_sub(r, placements_[i].value))) return true;
            take(i, -1);
        }
        return false;
    }
};

}  // namespace

std::optional<Witness> n_search(const Instance& inst, const DataVector& target, const std::vector<Atom>& base, long fresh,
                                const NSearchLimits& limits) {
    inst.validate();
    if (target.empty()) return Witness{};
    if (limits.per_copy <= 0 || (limits.total && *limits.total <= 0)) return std::nullopt;
    const Atom ff = first_fresh_for(inst, target, base);
    const auto universe = make_universe(base, fresh, ff);
    auto placements = enumerate_placements(inst, universe, ff, limits.max_placements);
    NEngine engine(std::move(placements), std::vector<Atom>(universe.begin() + static_cast<long>(base.size()), universe.end()),
                   limits, inst.dim);
    return engine.run(target);
}

std::optional<Witness> brute_force(const Instance& inst, const OracleConfig& cfg) {
    inst.validate();
    if (cfg.coeff_bound < 0 || cfg.fresh_atoms < 0) throw std::invalid_argument("oracle bounds must be nonnegative");
    if (inst.target.empty()) return Witness{};
    std::optional<Witness> w;
    if (cfg.mode == Mode::Z) {
        w = z_search(inst, cfg);
    } else {
        const std::set<Atom> ts = inst.target.support();
        NSearchLimits lim;
        lim.per_copy = cfg.coeff_bound;
        lim.max_placements = cfg.max_placements;
        lim.max_nodes = cfg.max_nodes;
        w = n_search(inst, inst.target, std::vector<Atom>(ts.begin(), ts.end()), cfg.fresh_atoms, lim);
    }
    if (w && !verify_witness(*w, inst, cfg.mode)) throw std::logic_error("oracle witness failed verification");
    return w;
}

}  // namespace datalin
