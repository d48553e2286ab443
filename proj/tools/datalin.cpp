// Command-line front end: solvability decisions, witnesses, oracle, generator.

#include "datalin/io.hpp"
#include "datalin/nsolve.hpp"
#include "datalin/oracle.hpp"
#include "datalin/witness.hpp"
#include "datalin/zsolve.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace datalin;
using nlohmann::json;

namespace {

enum Exit { kYes = 0, kNo = 1, kUsage = 2, kInconclusive = 3, kInternal = 4 };

struct Options {
    std::string path;
    std::string witness_path;
    std::string out_path;
    std::string mode = "z";
    bool json = false;
    bool explain = false;
    bool general = false;
    std::size_t cap = 1'000'000;
    long coeff_bound = 1;
    long fresh = 0;
    GenParams gen;
    std::string weight_range = "-2,2";
};

void print(const std::string& line, const Options& o, const json& doc) {
    std::cout << line << "\n";
    if (o.json) std::cout << doc.dump(2) << "\n";
}

json witness_or_null(const std::optional<Witness>& w, const AtomTable& atoms) {
    return w ? emit_witness(*w, atoms) : json(nullptr);
}

Mode parse_mode(const std::string& m) {
    if (m == "z" || m == "Z") return Mode::Z;
    if (m == "n" || m == "N") return Mode::N;
    throw ParseError("--mode: expected z or n");
}

int cmd_zsolve(const Options& o) {
    auto p = load_instance(o.path);
    const bool yes = z_solvable(p.instance);
    json doc{{"result", yes ? "Z-SOLVABLE" : "NOT-Z-SOLVABLE"}};
    if (o.json && yes) {
        if (p.instance.arity == 2) {
            doc["witness"] = witness_or_null(extract_witness_k2(p.instance), p.atoms);
        } else {
            auto g = extract_witness_general(p.instance);
            doc["witness"] = witness_or_null(g.witness, p.atoms);
            if (!g.witness) doc["witness_status"] = "cap exceeded: " + g.detail;
        }
    }
    print(yes ? "Z-SOLVABLE" : "NOT-Z-SOLVABLE", o, doc);
    return yes ? kYes : kNo;
}

int cmd_nsolve(const Options& o) {
    auto p = load_instance(o.path);
    NCap cap;
    cap.max_states = o.cap;
    const NDecision d = n_solvable(p.instance, cap);
    const char* line = d.status == NStatus::Solvable     ? "N-SOLVABLE"
                       : d.status == NStatus::Unsolvable ? "NOT-N-SOLVABLE"
                                                         : "N-INCONCLUSIVE";
    json doc{{"result", line},
             {"reversible", d.partition.reversible},
             {"nonreversible", d.partition.nonreversible},
             {"coeff_bound", to_decimal(d.bounds.coeff_bound)},
             {"s_max", d.bounds.s_max},
             {"support_size", to_decimal(d.bounds.support_size)},
             {"states", d.states}};
    if (!d.reason.empty()) doc["reason"] = d.reason;
    if (o.json && d.status == NStatus::Solvable) {
        doc["guess"] = emit_witness(d.guess, p.atoms);
        doc["witness"] = witness_or_null(n_witness(p.instance, d), p.atoms);
    }
    print(line, o, doc);
    return d.status == NStatus::Solvable ? kYes : d.status == NStatus::Unsolvable ? kNo : kInconclusive;
}

int cmd_check_local(const Options& o) {
    auto p = load_instance(o.path);
    const LocalReport r = local_check(p.instance);
    const char* line = r.decision ? "LOCALLY-Z-SUM" : "NOT-LOCALLY-Z-SUM";
    json failures = json::array();
    for (const auto& f : r.failures) {
        json set = json::array();
        for (Atom a : f.subset) set.push_back(p.atoms.to_json(a));
        json w = json::array();
        for (const Int& c : f.target_weight) w.push_back(to_decimal(c));
        failures.push_back(json{{"subset", set}, {"target_weight", w}, {"columns", f.column_count}});
    }
    if (o.json) {
        print(line, o, json{{"result", line}, {"failures", failures}});
    } else {
        std::cout << line << "\n";
    }
    if (o.explain)
        for (const auto& f : r.failures)
            std::cout << "  failing X = " << set_name(f.subset, p.atoms) << ": target weight " << to_string(f.target_weight)
                      << " not in the span of " << f.column_count << " generator weight column(s)\n";
    return r.decision ? kYes : kNo;
}

int cmd_witness(const Options& o) {
    auto p = load_instance(o.path);
    std::optional<Witness> w;
    bool solvable = true;
    std::string detail;
    if (p.instance.arity == 2 && !o.general) {
        w = extract_witness_k2(p.instance);
        solvable = w.has_value();
    } else {
        auto g = extract_witness_general(p.instance);
        solvable = g.z_solvable;
        w = std::move(g.witness);
        detail = g.detail;
    }
    if (!solvable) {
        std::cout << "NOT-Z-SOLVABLE\n";
        return kNo;
    }
    if (!w) {
        std::cout << "WITNESS-INCONCLUSIVE (" << detail << ")\n";
        return kInconclusive;
    }
    const json doc = emit_witness(*w, p.atoms);
    std::cout << "WITNESS " << w->terms.size() << " terms\n";
    if (!o.out_path.empty()) {
        std::ofstream out(o.out_path);
        if (!out) throw ParseError(o.out_path + ": cannot write file");
        out << doc.dump(2) << "\n";
    } else {
        std::cout << doc.dump(2) << "\n";
    }
    return kYes;
}

int cmd_verify(const Options& o) {
    auto p = load_instance(o.path);
    const Mode mode = parse_mode(o.mode);
    const Witness w = load_witness(o.witness_path, p.atoms);
    bool ok = false;
    std::string reason;
    try {
        ok = verify_witness(w, p.instance, mode);
        if (!ok) reason = "evaluation differs from the target or a coefficient is negative";
    } catch (const std::invalid_argument& e) {
        reason = e.what();
    }
    json doc{{"result", ok ? "VERIFIED" : "NOT-VERIFIED"}};
    if (!ok) doc["reason"] = reason;
    print(ok ? "VERIFIED" : "NOT-VERIFIED", o, doc);
    if (!ok && !o.json) std::cerr << "reason: " << reason << "\n";
    return ok ? kYes : kNo;
}

int cmd_oracle(const Options& o) {
    auto p = load_instance(o.path);
    OracleConfig cfg;
    cfg.coeff_bound = o.coeff_bound;
    cfg.fresh_atoms = o.fresh;
    cfg.mode = parse_mode(o.mode);
    if (cfg.coeff_bound < 0 || cfg.fresh_atoms < 0) throw ParseError("--coeff-bound and --fresh must be nonnegative");
    std::optional<Witness> w;
    try {
        w = brute_force(p.instance, cfg);
    } catch (const std::length_error& e) {
        std::cout << "ORACLE-INCONCLUSIVE (" << e.what() << ")\n";
        return kInconclusive;
    }
    const char* line = w ? "ORACLE-FOUND" : "ORACLE-NOT-FOUND";
    print(line, o, json{{"result", line}, {"witness", witness_or_null(w, p.atoms)}});
    return w ? kYes : kNo;
}

int cmd_gen(Options o) {
    const auto comma = o.weight_range.find(',');
    if (comma == std::string::npos) throw ParseError("--weight-range: expected LO,HI");
    try {
        o.gen.lo = std::stol(o.weight_range.substr(0, comma));
        o.gen.hi = std::stol(o.weight_range.substr(comma + 1));
    } catch (const std::exception&) {
        throw ParseError("--weight-range: expected LO,HI");
    }
    const Instance inst = random_instance(o.gen);
    AtomTable atoms;
    atoms.note(static_cast<Atom>(o.gen.atoms - 1));
    std::cout << emit_instance(inst, atoms).dump(2) << "\n";
    return kYes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solvability of data-vector equations over permutation sums"};
    app.require_subcommand(1);
    Options o;

    auto* zs = app.add_subcommand("zsolve", "Decide Z-solvability");
    zs->add_option("file", o.path, "instance JSON")->required();
    zs->add_flag("--json", o.json, "print a JSON report after the result line");

    auto* ns = app.add_subcommand("nsolve", "Decide N-solvability (capped search)");
    ns->add_option("file", o.path, "instance JSON")->required();
    ns->add_option("--cap", o.cap, "maximum number of search states");
    ns->add_flag("--json", o.json, "print a JSON report after the result line");

    auto* cl = app.add_subcommand("check-local", "Per-subset weight span check");
    cl->add_option("file", o.path, "instance JSON")->required();
    cl->add_flag("--explain", o.explain, "list every failing subset");
    cl->add_flag("--json", o.json, "print a JSON report after the result line");

    auto* wi = app.add_subcommand("witness", "Extract an explicit Z-witness");
    wi->add_option("file", o.path, "instance JSON")->required();
    wi->add_flag("--general", o.general, "use the general-arity construction");
    wi->add_option("-o,--output", o.out_path, "write the witness JSON to this file");

    auto* ve = app.add_subcommand("verify", "Check a witness against an instance");
    ve->add_option("file", o.path, "instance JSON")->required();
    ve->add_option("witness", o.witness_path, "witness JSON")->required();
    ve->add_option("--mode", o.mode, "z or n")->required();
    ve->add_flag("--json", o.json, "print a JSON report after the result line");

    auto* orc = app.add_subcommand("oracle", "Brute-force search for a witness");
    orc->add_option("file", o.path, "instance JSON")->required();
    orc->add_option("--coeff-bound", o.coeff_bound, "largest coefficient (N mode)");
    orc->add_option("--fresh", o.fresh, "number of fresh atoms");
    orc->add_option("--mode", o.mode, "z or n");
    orc->add_flag("--json", o.json, "print a JSON report after the result line");

    auto* gen = app.add_subcommand("gen", "Emit a reproducible random instance");
    gen->add_option("--arity", o.gen.arity, "hyperedge size")->required();
    gen->add_option("--dim", o.gen.dim, "value dimension")->required();
    gen->add_option("--atoms", o.gen.atoms, "number of atoms")->required();
    gen->add_option("--gens", o.gen.gens, "number of generators")->required();
    gen->add_option("--weight-range", o.weight_range, "LO,HI");
    gen->add_option("--seed", o.gen.seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*zs) return cmd_zsolve(o);
        if (*ns) return cmd_nsolve(o);
        if (*cl) return cmd_check_local(o);
        if (*wi) return cmd_witness(o);
        if (*ve) return cmd_verify(o);
        if (*orc) return cmd_oracle(o);
        if (*gen) return cmd_gen(o);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}
