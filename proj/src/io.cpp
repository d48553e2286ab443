#include "datalin/io.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace datalin {

using nlohmann::json;

namespace {

constexpr std::int64_t kMaxSafe = (std::int64_t{1} << 53);

bool is_decimal(const std::string& s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !s.empty() && s[0] == '-') i = 1;
    if (i == s.size()) return false;
    return std::all_of(s.begin() + static_cast<long>(i), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

[[noreturn]] void fail(const std::string& field, const std::string& msg) { throw ParseError(field + ": " + msg); }

Int parse_int(const json& v, const std::string& field) {
    if (v.is_number_integer()) {
        if (v.is_number_unsigned()) {
            const auto u = v.get<std::uint64_t>();
            if (u > static_cast<std::uint64_t>(kMaxSafe)) fail(field, "integers beyond 53 bits must be decimal strings");
            return Int(static_cast<unsigned long>(u));
        }
        const auto s = v.get<std::int64_t>();
        if (s > kMaxSafe || s < -kMaxSafe) fail(field, "integers beyond 53 bits must be decimal strings");
        return Int(static_cast<long>(s));
    }
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (!is_decimal(s, true)) fail(field, "not a decimal integer: \"" + s + "\"");
        return Int(s, 10);
    }
    fail(field, "expected an integer or a decimal string");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot read file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
    }
}

const json& require(const json& obj, const char* key, const std::string& field) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(field, std::string("missing field \"") + key + "\"");
    return *it;
}

int parse_small(const json& v, const std::string& field, int min) {
    if (!v.is_number_integer()) fail(field, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < min || x > 1'000'000) fail(field, "out of range");
    return static_cast<int>(x);
}

void collect_atoms(const json& vec, const std::string& field, std::set<Atom>& ints, std::set<std::string>& names) {
    if (!vec.is_array()) fail(field, "expected an array of entries");
    for (std::size_t i = 0; i < vec.size(); ++i) {
        const std::string f = field + "[" + std::to_string(i) + "]";
        if (!vec[i].is_object()) fail(f, "expected an object with \"set\" and \"value\"");
        const json& set = require(vec[i], "set", f);
        if (!set.is_array()) fail(f + ".set", "expected an array of atoms");
        for (std::size_t t = 0; t < set.size(); ++t) {
            const json& a = set[t];
            const std::string fa = f + ".set[" + std::to_string(t) + "]";
            if (a.is_number_unsigned()) {
                const auto u = a.get<std::uint64_t>();
                if (u > static_cast<std::uint64_t>(kMaxSafe)) fail(fa, "integer atom beyond 53 bits");
                ints.insert(u);
            } else if (a.is_string() && !a.get<std::string>().empty()) {
                names.insert(a.get<std::string>());
            } else {
                fail(fa, "atoms are nonnegative integers or nonempty strings");
            }
        }
    }
}

DataVector build_vector(const json& vec, const std::string& field, int arity, int dim, const AtomTable& table) {
    DataVector out(arity, dim);
    std::set<KSet> seen;
    for (std::size_t i = 0; i < vec.size(); ++i) {
        const std::string f = field + "[" + std::to_string(i) + "]";
        const json& set = vec[i]["set"];
        if (static_cast<int>(set.size()) != arity)
            fail(f + ".set", "has " + std::to_string(set.size()) + " atoms, arity is " + std::to_string(arity));
        std::vector<Atom> atoms;
        for (const json& a : set) atoms.push_back(a.is_string() ? *table.lookup(a.get<std::string>()) : a.get<Atom>());
        KSet x = atoms;
        std::sort(x.begin(), x.end());
        if (std::adjacent_find(x.begin(), x.end()) != x.end()) fail(f + ".set", "repeated atom");
        if (!seen.insert(x).second) fail(f + ".set", "duplicate set within one vector");
        const json& value = require(vec[i], "value", f);
        if (!value.is_array() || static_cast<int>(value.size()) != dim)
            fail(f + ".value", "expected " + std::to_string(dim) + " integers");
        IntVector v;
        for (std::size_t c = 0; c < value.size(); ++c)
            v.push_back(parse_int(value[c], f + ".value[" + std::to_string(c) + "]"));
        out.add(x, v);
    }
    return out;
}

Atom resolve_value_atom(const json& v, AtomTable& table, const std::string& field) {
    if (v.is_number_unsigned()) {
        const Atom a = v.get<Atom>();
        table.note(a);
        return a;
    }
    if (v.is_string() && !v.get<std::string>().empty()) {
        const std::string s = v.get<std::string>();
        if (auto a = table.lookup(s)) return *a;
        const Atom a = table.next_id();
        table.add_name(s, a);
        return a;
    }
    fail(field, "atoms are nonnegative integers or nonempty strings");
}

Atom resolve_key_atom(const std::string& key, AtomTable& table, const std::string& field) {
    if (auto a = table.lookup(key)) return *a;
    if (is_decimal(key, false)) {
        if (key.size() > 16) fail(field, "integer atom beyond 53 bits");
        const Atom a = std::stoull(key);
        table.note(a);
        return a;
    }
    if (key.empty()) fail(field, "empty atom name");
    const Atom a = table.next_id();
    table.add_name(key, a);
    return a;
}

}  // namespace

// ---- atom table ----

void AtomTable::add_name(const std::string& name, Atom id) {
    ids_[name] = id;
    names_[id] = name;
    note(id);
}

std::optional<Atom> AtomTable::lookup(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::string AtomTable::name(Atom a) const {
    if (auto it = names_.find(a); it != names_.end()) return it->second;
    if (a < next_) return std::to_string(a);
    std::string s = "_" + std::to_string(a);
    while (ids_.count(s)) s = "_" + s;
    return s;
}

json AtomTable::to_json(Atom a) const {
    if (!names_.count(a) && a < next_) return json(a);
    return json(name(a));
}

// ---- instances ----

std::string to_decimal(const Int& v) { return v.get_str(10); }

std::string set_name(const KSet& x, const AtomTable& atoms) {
    std::string s = "{";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + atoms.name(x[i]);
    return s + "}";
}

ParsedInstance parse_instance(const json& j) {
    if (!j.is_object()) throw ParseError("instance: expected a JSON object");
    ParsedInstance p;
    p.instance.arity = parse_small(require(j, "arity", "instance"), "arity", 1);
    p.instance.dim = parse_small(require(j, "dimension", "instance"), "dimension", 1);
    const json& gens = require(j, "generators", "instance");
    if (!gens.is_array()) fail("generators", "expected an array of data vectors");
    const json& target = require(j, "target", "instance");

    std::set<Atom> ints;
    std::set<std::string> names;
    for (std::size_t i = 0; i < gens.size(); ++i) collect_atoms(gens[i], "generators[" + std::to_string(i) + "]", ints, names);
    collect_atoms(target, "target", ints, names);
    Atom next = ints.empty() ? 0 : *ints.rbegin() + 1;
    for (Atom a : ints) p.atoms.note(a);
    for (const auto& n : names) p.atoms.add_name(n, next++);

    for (std::size_t i = 0; i < gens.size(); ++i)
        p.instance.generators.push_back(build_vector(gens[i], "generators[" + std::to_string(i) + "]", p.instance.arity,
                                                     p.instance.dim, p.atoms));
    p.instance.target = build_vector(target, "target", p.instance.arity, p.instance.dim, p.atoms);
    return p;
}

ParsedInstance parse_instance_text(const std::string& text) { return parse_instance(parse_json_text(text)); }

ParsedInstance load_instance(const std::string& path) {
    try {
        return parse_instance_text(read_file(path));
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        if (msg.rfind(path, 0) == 0) throw;
        throw ParseError(path + ": " + msg);
    }
}

json emit_data_vector(const DataVector& a, const AtomTable& atoms) {
    json out = json::array();
    for (const auto& [x, v] : a.entries()) {
        json set = json::array();
        for (Atom t : x) set.push_back(atoms.to_json(t));
        json value = json::array();
        for (const Int& c : v) value.push_back(to_decimal(c));
        out.push_back(json{{"set", set}, {"value", value}});
    }
    return out;
}

json emit_instance(const Instance& inst, const AtomTable& atoms) {
    json gens = json::array();
    for (const auto& g : inst.generators) gens.push_back(emit_data_vector(g, atoms));
    return json{{"arity", inst.arity},
                {"dimension", inst.dim},
                {"generators", gens},
                {"target", emit_data_vector(inst.target, atoms)}};
}

// ---- witnesses ----

Witness parse_witness(const json& j, AtomTable& atoms) {
    if (!j.is_object()) throw ParseError("witness: expected a JSON object");
    const json& terms = require(j, "terms", "witness");
    if (!terms.is_array()) fail("terms", "expected an array");
    Witness w;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string f = "terms[" + std::to_string(i) + "]";
        const json& t = terms[i];
        if (!t.is_object()) fail(f, "expected an object");
        WitnessTerm term;
        term.coeff = parse_int(require(t, "coeff", f), f + ".coeff");
        const json& g = require(t, "generator", f);
        if (!g.is_number_unsigned()) fail(f + ".generator", "expected a nonnegative integer");
        term.generator = g.get<std::size_t>();
        if (auto r = t.find("renaming"); r != t.end()) {
            if (!r->is_object()) fail(f + ".renaming", "expected an object");
            for (const auto& [k, v] : r->items()) {
                const std::string fk = f + ".renaming[\"" + k + "\"]";
                const Atom from = resolve_key_atom(k, atoms, fk);
                term.renaming[from] = resolve_value_atom(v, atoms, fk);
            }
        }
        w.terms.push_back(std::move(term));
    }
    return w;
}

Witness load_witness(const std::string& path, AtomTable& atoms) {
    try {
        return parse_witness(parse_json_text(read_file(path)), atoms);
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        if (msg.rfind(path, 0) == 0) throw;
        throw ParseError(path + ": " + msg);
    }
}

json emit_witness(const Witness& w, const AtomTable& atoms) {
    json terms = json::array();
    for (const auto& t : w.terms) {
        json r = json::object();
        for (const auto& [a, b] : t.renaming) r[atoms.name(a)] = atoms.to_json(b);
        terms.push_back(json{{"coeff", to_decimal(t.coeff)}, {"generator", t.generator}, {"renaming", r}});
    }
    return json{{"terms", terms}};
}

// ---- random instances ----

Instance random_instance(const GenParams& p) {
    if (p.arity < 1 || p.dim < 1 || p.gens < 0 || p.atoms < p.arity || p.lo > p.hi)
        throw std::invalid_argument("gen: need arity >= 1, dim >= 1, atoms >= arity, lo <= hi");
    std::mt19937_64 rng(p.seed);
    auto draw = [&](std::uint64_t n) { return rng() % n; };
    KSet base;
    for (int i = 0; i < p.atoms; ++i) base.push_back(static_cast<Atom>(i));
    const auto sets = subsets_of_size(base, p.arity);
    auto vector = [&] {
        DataVector v(p.arity, p.dim);
        for (const KSet& x : sets) {
            if (draw(2)) continue;
            IntVector val;
            for (int c = 0; c < p.dim; ++c)
                val.push_back(Int(p.lo + static_cast<long>(draw(static_cast<std::uint64_t>(p.hi - p.lo + 1)))));
            v.add(x, val);
        }
        return v;
    };
    Instance inst{p.arity, p.dim, {}, DataVector(p.arity, p.dim)};
    for (int i = 0; i < p.gens; ++i) inst.generators.push_back(vector());
    inst.target = vector();
    return inst;
}

}  // namespace datalin
