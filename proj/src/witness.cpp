#include "datalin/witness.hpp"

#include "datalin/intlin.hpp"
#include "datalin/zsolve.hpp"

#include <algorithm>
#include <array>

namespace datalin {

DataVector evaluate(const Witness& w, const Instance& inst) {
    inst.validate();
    DataVector r(inst.arity, inst.dim);
    for (const auto& t : w.terms) {
        if (t.generator >= inst.generators.size())
            throw std::invalid_argument("witness refers to generator " + std::to_string(t.generator) +
                                        " of " + std::to_string(inst.generators.size()));
        const DataVector copy = dv_permute(inst.generators[t.generator], t.renaming);
        for (const auto& [x, v] : copy.entries()) r.add(x, scale(t.coeff, v));
    }
    return r;
}

bool verify_witness(const Witness& w, const Instance& inst, Mode mode) {
    if (mode == Mode::N)
        for (const auto& t : w.terms)
            if (sgn(t.coeff) < 0) return false;
    return evaluate(w, inst) == inst.target;
}

Witness merge(const Witness& w, const Instance& inst) {
    std::map<std::pair<std::size_t, Renaming>, Int> acc;
    for (const auto& t : w.terms) {
        if (t.generator >= inst.generators.size()) throw std::invalid_argument("witness refers to a missing generator");
        Renaming r;
        for (Atom a : inst.generators[t.generator].support()) {
            auto it = t.renaming.find(a);
            if (it != t.renaming.end() && it->second != a) r[a] = it->second;
        }
        acc[{t.generator, std::move(r)}] += t.coeff;
    }
    Witness out;
    for (auto& [key, c] : acc)
        if (sgn(c) != 0) out.terms.push_back(WitnessTerm{c, key.first, key.second});
    return out;
}

Witness witness_from_copies(const std::vector<CopySum>& sums) {
    Witness w;
    for (std::size_t j = 0; j < sums.size(); ++j) {
        const auto& base = sums[j].base();
        for (const auto& [img, c] : sums[j].terms()) {
            Renaming r;
            for (std::size_t i = 0; i < base.size(); ++i)
                if (base[i] != img[i]) r[base[i]] = img[i];
            w.terms.push_back(WitnessTerm{c, j, std::move(r)});
        }
    }
    return w;
}

namespace {

std::vector<Hypergraph> encode_all(const Instance& inst) {
    std::vector<Hypergraph> gens;
    for (const auto& g : inst.generators) gens.push_back(encode_hypergraph(g));
    return gens;
}

// Tracks copies of the generators and the residual target minus their sum.
struct Replay {
    const std::vector<Hypergraph>& gens;
    std::vector<std::vector<Atom>> bases;
    std::vector<std::map<Atom, std::size_t>> index;
    std::vector<CopySum> sums;
    FreshAtoms fresh;
    Hypergraph residual;

    Replay(const std::vector<Hypergraph>& g, const Hypergraph& target, Atom first_fresh)
        : gens(g), fresh(first_fresh), residual(target) {
        for (const auto& h : gens) {
            bases.emplace_back(h.vertices().begin(), h.vertices().end());
            sums.emplace_back(bases.back());
            std::map<Atom, std::size_t> idx;
            for (std::size_t i = 0; i < bases.back().size(); ++i) idx[bases.back()[i]] = i;
            index.push_back(std::move(idx));
        }
    }

    std::vector<Atom> fresh_image(std::size_t j, const std::map<Atom, Atom>& fixed) {
        std::vector<Atom> img;
        for (Atom b : bases[j]) {
            auto it = fixed.find(b);
            img.push_back(it != fixed.end() ? it->second : fresh.take());
        }
        return img;
    }

    std::vector<Atom> moved(std::size_t j, std::vector<Atom> img, Atom a, Atom to) const {
        img[index[j].at(a)] = to;
        return img;
    }

    void use(std::size_t j, const std::vector<Atom>& img, const Int& c) {
        sums[j].add(img, c);
        for (const auto& [e, w] : gens[j].edges()) {
            KSet e2;
            for (Atom a : e) e2.push_back(img[index[j].at(a)]);
            residual.add_edge(make_kset(std::move(e2)), scale(-c, w));
        }
    }

    // Copies of g_j around its edge {p,q}: P0P1 = v, P1P2 = -v, P2P3 = v, P3P0 = -v.
    void edge_gadget(std::size_t j, Atom p, Atom q, const std::array<Atom, 4>& P, const Int& c) {
        const auto img = fresh_image(j, {{p, P[0]}, {q, P[1]}});
        use(j, img, c);
        use(j, moved(j, img, p, P[2]), -c);
        use(j, moved(j, img, q, P[3]), -c);
        use(j, moved(j, moved(j, img, p, P[2]), q, P[3]), c);
    }

    // Copies of g_j around its vertex u: xc = w_u, cy = -w_u.
    void vertex_gadget(std::size_t j, Atom u, Atom x, Atom c, Atom y, const Int& coef) {
        std::set<Atom> nb;
        for (const auto& [e, w] : gens[j].edges())
            if (std::binary_search(e.begin(), e.end(), u))
                for (Atom a : e)
                    if (a != u) nb.insert(a);
        if (nb.empty()) return;
        const std::vector<Atom> gamma(nb.begin(), nb.end());
        const auto img = fresh_image(j, {{u, x}, {gamma.back(), c}});
        use(j, img, coef);
        use(j, moved(j, img, u, y), -coef);
        for (std::size_t i = 0; i + 1 < gamma.size(); ++i)
            edge_gadget(j, u, gamma[i], {img[index[j].at(gamma[i])], y, c, x}, coef);
    }
};

struct Spans {
    std::vector<WeightColumns> columns;
    std::vector<ZLattice> lattices;

    Spans(const std::vector<Hypergraph>& gens, int k, int d) {
        for (int m = 0; m <= k; ++m) {
            columns.push_back(weight_columns(gens, m));
            lattices.emplace_back(static_cast<std::size_t>(d), columns.back().columns);
        }
    }

    std::vector<Int> solve(int m, const IntVector& a) const {
        auto z = lattices[m].solve(a);
        if (!z) throw std::logic_error("residual weight left the generator span");
        return *z;
    }
};

void place_empty_weight(Replay& rp, const Spans& spans) {
    const auto z = spans.solve(0, weight(rp.residual, {}));
    for (std::size_t i = 0; i < z.size(); ++i)
        if (sgn(z[i]) != 0) {
            const std::size_t j = spans.columns[0].sources[i].first;
            rp.use(j, rp.fresh_image(j, {}), z[i]);
        }
}

}  // namespace

std::optional<Witness> extract_witness_k2(const Instance& inst) {
    if (inst.arity != 2) throw std::invalid_argument("extract_witness_k2 needs arity 2");
    if (!local_check(inst).decision) return std::nullopt;
    const auto gens = encode_all(inst);
    const Hypergraph target = encode_hypergraph(inst.target);

    for (std::size_t j = 0; j < gens.size(); ++j) {
        if (target.zero() || gens[j].zero()) continue;
        if (auto iso = find_isomorphism(gens[j], target)) {
            Witness w{{WitnessTerm{1, j, *iso}}};
            if (verify_witness(w, inst, Mode::Z)) return merge(w, inst);
        }
    }

    const Spans spans(gens, 2, inst.dim);
    Replay rp(gens, target, max_atom(inst) + 1);
    place_empty_weight(rp, spans);

    const auto vertex_weights = weights_of_size(rp.residual, 1);
    if (!vertex_weights.empty()) {
        const Atom shared = rp.fresh.take();
        for (const auto& [x, a] : vertex_weights) {
            const Atom c = rp.fresh.take();
            const auto z = spans.solve(1, a);
            for (std::size_t i = 0; i < z.size(); ++i)
                if (sgn(z[i]) != 0) {
                    const auto& [j, u] = spans.columns[1].sources[i];
                    rp.vertex_gadget(j, u.front(), x.front(), c, shared, z[i]);
                }
        }
    }
    if (!weights_of_size(rp.residual, 1).empty()) throw std::logic_error("vertex weights survived neutralization");

    for (;;) {
        const std::set<Atom> sup = rp.residual.support();
        if (sup.size() < 4) break;
        // Largest edge in the order (max, min).
        const KSet* top = nullptr;
        for (const auto& [e, w] : rp.residual.edges())
            if (!top || std::make_pair(e[1], e[0]) > std::make_pair((*top)[1], (*top)[0])) top = &e;
        const Atom alpha = (*top)[1], beta = (*top)[0];
        const IntVector a = rp.residual.edges().at(*top);
        std::optional<Atom> gamma;
        for (const auto& [e, w] : rp.residual.edges())
            if (e[1] == alpha && e[0] != beta) {
                gamma = e[0];
                break;
            }
        if (!gamma) throw std::logic_error("isolated edge with zero vertex weights");
        Atom delta = 0;
        for (Atom v : sup)
            if (v != alpha && v != beta && v != *gamma) {
                delta = v;
                break;
            }
        const auto z = spans.solve(2, a);
        for (std::size_t i = 0; i < z.size(); ++i)
            if (sgn(z[i]) != 0) {
                const auto& [j, e] = spans.columns[2].sources[i];
                rp.edge_gadget(j, e[0], e[1], {alpha, beta, delta, *gamma}, z[i]);
            }
    }
    if (!rp.residual.zero()) throw std::logic_error("residual on three vertices is not empty");

    Witness w = merge(witness_from_copies(rp.sums), inst);
    if (!verify_witness(w, inst, Mode::Z)) throw std::logic_error("extracted witness failed verification");
    return w;
}

GeneralExtraction extract_witness_general(const Instance& inst, const ExtractConfig& cfg) {
    GeneralExtraction out;
    out.z_solvable = local_check(inst).decision;
    if (!out.z_solvable) return out;
    const int k = inst.arity;
    const auto gens = encode_all(inst);
    const Spans spans(gens, 0, inst.dim);
    Replay rp(gens, encode_hypergraph(inst.target), max_atom(inst) + 1);
    place_empty_weight(rp, spans);

    const std::set<Atom> sup = rp.residual.support();
    std::vector<Atom> support(sup.begin(), sup.end());
    while (support.size() < static_cast<std::size_t>(2 * k)) support.push_back(rp.fresh.take());

    BuildContext ctx(rp.fresh.peek());
    ctx.max_terms = cfg.max_terms;
    ctx.max_steps = cfg.max_steps;
    try {
        const auto pieces = express_with_simple(rp.residual, gens, support, ctx);
        if (!pieces) throw std::logic_error("locally solvable target failed to decompose");
        for (const auto& p : *pieces)
            for (std::size_t j = 0; j < gens.size(); ++j) rp.sums[j].add(p.over_gens[j], 1);
    } catch (const ResourceCap& e) {
        out.detail = e.what();
        return out;
    }
    Witness w = merge(witness_from_copies(rp.sums), inst);
    if (!verify_witness(w, inst, Mode::Z)) throw std::logic_error("extracted witness failed verification");
    out.witness = std::move(w);
    return out;
}

}  // namespace datalin
