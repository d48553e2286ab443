#include "datalin/nsolve.hpp"

#include "datalin/intlin.hpp"
#include "datalin/oracle.hpp"

#include <algorithm>

namespace datalin {

IntVector data_projection(const DataVector& a) {
    IntVector p = zero_vector(a.dim());
    for (const auto& [x, v] : a.entries()) add_scaled(p, v, 1);
    return p;
}

DataVector smooth(const DataVector& a, const std::set<Atom>& support, std::size_t max_support) {
    for (Atom x : a.support())
        if (!support.count(x)) throw std::invalid_argument("smooth: support must contain supp(a)");
    if (support.size() > max_support) throw std::length_error("smooth: support too large to enumerate");
    const std::vector<Atom> from(support.begin(), support.end());
    std::vector<Atom> to = from;
    DataVector r(a.arity(), a.dim());
    do {
        Renaming pi;
        for (std::size_t i = 0; i < from.size(); ++i) pi[from[i]] = to[i];
        const DataVector moved = dv_permute(a, pi);
        for (const auto& [x, v] : moved.entries()) r.add(x, v);
    } while (std::next_permutation(to.begin(), to.end()));
    return r;
}

ReversibilityPartition reversible_partition(const Instance& inst) {
    inst.validate();
    std::vector<IntVector> proj;
    for (const auto& g : inst.generators) proj.push_back(data_projection(g));
    ReversibilityPartition part;
    for (std::size_t i = 0; i < proj.size(); ++i)
        (cone_member(proj, neg(proj[i])) ? part.reversible : part.nonreversible).push_back(i);
    return part;
}

NBoundData nonreversible_bound(const Instance& inst, const ReversibilityPartition& part, std::size_t max_support_atoms) {
    inst.validate();
    std::vector<IntVector> proj;
    for (const auto& g : inst.generators) proj.push_back(data_projection(g));
    std::set<IntVector> distinct;
    NBoundData b;
    for (std::size_t i : part.nonreversible) {
        distinct.insert(proj[i]);
        b.s_max = std::max(b.s_max, inst.generators[i].support().size());
    }
    Int base = norms(proj).one_inf_norm + norms(data_projection(inst.target)).inf_norm + 2;
    Int power;
    mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(inst.dim) + inst.generators.size());
    b.coeff_bound = Int(static_cast<unsigned long>(distinct.size())) * power;
    const std::set<Atom> sv = inst.target.support();
    b.support_size = Int(static_cast<unsigned long>(sv.size())) + Int(static_cast<unsigned long>(b.s_max)) * b.coeff_bound;
    if (b.support_size <= static_cast<unsigned long>(max_support_atoms)) {
        std::vector<Atom> atoms(sv.begin(), sv.end());
        Atom next = max_atom(inst) + 1;
        while (atoms.size() < b.support_size.get_ui()) atoms.push_back(next++);
        b.support_atoms = std::move(atoms);
    }
    return b;
}

namespace {

constexpr Atom kNewAtom = ~Atom(0);

struct State {
    DataVector sum;
    long parent;
    std::size_t gen;
    Renaming renaming;
    long depth;
};

}  // namespace

NDecision n_solvable(const Instance& inst, const NCap& cap) {
    inst.validate();
    NDecision out;
    out.partition = reversible_partition(inst);
    out.bounds = nonreversible_bound(inst, out.partition, cap.max_support_atoms);
    const int d = inst.dim;
    const DataVector& v = inst.target;

    Instance rinst{inst.arity, d, {}, v};
    std::vector<IntVector> rproj;
    for (std::size_t i : out.partition.reversible) {
        rinst.generators.push_back(inst.generators[i]);
        rproj.push_back(data_projection(inst.generators[i]));
    }
    const ZLattice proj_span(static_cast<std::size_t>(d), rproj);
    const IntVector pv = data_projection(v);

    // Coordinates where every generator entry has one sign: the nonreversible
    // partial sum can never overshoot the target there.
    std::vector<bool> nonneg(d, true), nonpos(d, true);
    for (const auto& g : inst.generators)
        for (const auto& [x, val] : g.entries())
            for (int c = 0; c < d; ++c) {
                if (sgn(val[c]) < 0) nonneg[c] = false;
                if (sgn(val[c]) > 0) nonpos[c] = false;
            }
    auto within_sign = [&](const DataVector& s, const DataVector& placed) {
        for (const auto& [x, ignored] : placed.entries()) {
            const IntVector sx = s.at(x), vx = v.at(x);
            for (int c = 0; c < d; ++c) {
                if (nonneg[c] && sx[c] > vx[c]) return false;
                if (nonpos[c] && sx[c] < vx[c]) return false;
            }
        }
        return true;
    };

    const Atom first_fresh = max_atom(inst) + 1;
    const std::set<Atom> sv = v.support();
    long depth_limit = cap.max_depth;
    if (out.bounds.coeff_bound < depth_limit) depth_limit = out.bounds.coeff_bound.get_si();
    bool truncated = false;

    std::vector<State> states;
    std::set<std::string> seen;
    states.push_back(State{DataVector(inst.arity, d), -1, 0, {}, 0});
    seen.insert(to_string(states.front().sum));

    for (std::size_t at = 0; at < states.size(); ++at) {
        const DataVector s = states[at].sum;
        const long depth = states[at].depth;
        if (proj_span.contains(sub(pv, data_projection(s)))) {
            rinst.target = dv_sub(v, s);
            LocalReport rep = local_check(rinst);
            if (rep.decision) {
                out.status = NStatus::Solvable;
                out.residual = std::move(rep);
                for (long i = static_cast<long>(at); states[i].parent >= 0; i = states[i].parent)
                    out.guess.terms.push_back(WitnessTerm{1, states[i].gen, states[i].renaming});
                out.guess = merge(out.guess, inst);
                out.states = states.size();
                return out;
            }
        }
        if (depth >= depth_limit) {
            if (Int(depth) < out.bounds.coeff_bound) truncated = true;
            continue;
        }

        const std::set<Atom> ss = s.support();
        std::vector<Atom> available(sv.begin(), sv.end());
        for (Atom a : ss)
            if (a >= first_fresh) available.push_back(a);
        std::sort(available.begin(), available.end());

        for (std::size_t j : out.partition.nonreversible) {
            const DataVector& g = inst.generators[j];
            const std::set<Atom> gs = g.support();
            const std::vector<Atom> gsup(gs.begin(), gs.end());
            std::vector<Atom> img(gsup.size());
            std::vector<char> taken(available.size(), 0);
            // Atoms sent to new fresh atoms get the smallest unused ones, in order.
            auto rec = [&](auto&& self, std::size_t i) -> bool {
                if (i == gsup.size()) {
                    Renaming r;
                    Atom next = first_fresh;
                    for (std::size_t t = 0; t < gsup.size(); ++t) {
                        Atom target = img[t];
                        if (target == kNewAtom) {
                            while (ss.count(next)) ++next;
                            target = next++;
                        }
                        if (target != gsup[t]) r[gsup[t]] = target;
                    }
                    const DataVector placed = dv_permute(g, r);
                    DataVector s2 = dv_add(s, placed);
                    if (!within_sign(s2, placed)) return true;
                    if (!seen.insert(to_string(s2)).second) return true;
                    if (states.size() >= cap.max_states) return false;
                    states.push_back(State{std::move(s2), static_cast<long>(at), j, std::move(r), depth + 1});
                    return true;
                }
                for (std::size_t u = 0; u < available.size(); ++u) {
                    if (taken[u]) continue;
                    taken[u] = 1;
                    img[i] = available[u];
                    const bool go = self(self, i + 1);
                    taken[u] = 0;
                    if (!go) return false;
                }
                img[i] = kNewAtom;
                return self(self, i + 1);
            };
            if (!rec(rec, 0)) {
                out.status = NStatus::Inconclusive;
                out.states = states.size();
                out.reason = "state cap reached";
                return out;
            }
        }
    }
    out.states = states.size();
    if (truncated) {
        out.status = NStatus::Inconclusive;
        out.reason = "depth cap below the coefficient bound";
    } else {
        out.status = NStatus::Unsolvable;
    }
    return out;
}

bool brute_reversible(const Instance& inst, std::size_t i, long bound) {
    inst.validate();
    if (i >= inst.generators.size()) throw std::invalid_argument("brute_reversible: generator index out of range");
    const DataVector target = dv_scale(-1, inst.generators[i]);
    const std::set<Atom> sup = inst.generators[i].support();
    NSearchLimits lim;
    lim.per_copy = bound;
    lim.total = bound;
    const auto w = n_search(inst, target, std::vector<Atom>(sup.begin(), sup.end()), bound, lim);
    if (!w) return false;
    Instance check = inst;
    check.target = target;
    if (!verify_witness(*w, check, Mode::N)) throw std::logic_error("reversal witness failed verification");
    return true;
}

std::optional<Witness> n_witness(const Instance& inst, const NDecision& decision, long reverse_bound) {
    if (decision.status != NStatus::Solvable) return std::nullopt;
    const auto& rev = decision.partition.reversible;
    Instance rinst{inst.arity, inst.dim, {}, dv_sub(inst.target, evaluate(decision.guess, inst))};
    for (std::size_t i : rev) rinst.generators.push_back(inst.generators[i]);

    std::optional<Witness> zw;
    if (rinst.target.empty()) {
        zw = Witness{};
    } else if (inst.arity == 2) {
        zw = extract_witness_k2(rinst);
    } else {
        zw = extract_witness_general(rinst).witness;
    }
    if (!zw) return std::nullopt;

    Witness full = decision.guess;
    Atom next = max_atom(inst) + 1;
    for (const auto& t : full.terms)
        for (const auto& [a, b] : t.renaming) next = std::max({next, a + 1, b + 1});
    for (const auto& t : zw->terms)
        for (const auto& [a, b] : t.renaming) next = std::max({next, a + 1, b + 1});
    std::map<std::size_t, Witness> reversals;
    for (const auto& t : zw->terms) {
        const std::size_t gi = rev[t.generator];
        if (sgn(t.coeff) > 0) {
            full.terms.push_back(WitnessTerm{t.coeff, gi, t.renaming});
            continue;
        }
        auto it = reversals.find(gi);
        if (it == reversals.end()) {
            const DataVector target = dv_scale(-1, inst.generators[gi]);
            const std::set<Atom> sup = inst.generators[gi].support();
            NSearchLimits lim;
            lim.per_copy = reverse_bound;
            lim.total = reverse_bound;
            auto w = n_search(inst, target, std::vector<Atom>(sup.begin(), sup.end()), reverse_bound, lim);
            if (!w) return std::nullopt;
            it = reversals.emplace(gi, std::move(*w)).first;
            for (const auto& rt : it->second.terms)
                for (const auto& [a, b] : rt.renaming) next = std::max({next, a + 1, b + 1});
        }
        // -c (g o pi) = c * sum (g_j o pi' o rho) where pi' extends pi by fresh atoms.
        const std::set<Atom> sup = inst.generators[gi].support();
        std::map<Atom, Atom> ext;
        auto pi = [&](Atom a) {
            if (sup.count(a)) {
                auto f = t.renaming.find(a);
                return f == t.renaming.end() ? a : f->second;
            }
            auto [e, ins] = ext.try_emplace(a, 0);
            if (ins) e->second = next++;
            return e->second;
        };
        for (const auto& rt : it->second.terms) {
            Renaming composed;
            for (Atom a : inst.generators[rt.generator].support()) {
                auto f = rt.renaming.find(a);
                composed[a] = pi(f == rt.renaming.end() ? a : f->second);
            }
            full.terms.push_back(WitnessTerm{-t.coeff * rt.coeff, rt.generator, std::move(composed)});
        }
    }
    full = merge(full, inst);
    if (!verify_witness(full, inst, Mode::N)) return std::nullopt;
    return full;
}

}  // namespace datalin
