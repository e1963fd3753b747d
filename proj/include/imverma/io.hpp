#pragma once

// Config loading (YAML or JSON, with line numbers in errors), the JSON vector
// schema shared by the classical and quantum modules, and generator parsing.

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <json.hpp>
#include <regex>
#include <sstream>
#include <string>

#include "imverma/qmod.hpp"

namespace imverma {

using Json = nlohmann::ordered_json;

/// Config error tagged with the source line (1-based, 0 when unknown).
class ConfigError : public AlgebraError {
public:
    ConfigError(const std::string& what, int line)
        : AlgebraError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

namespace detail {

inline int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

template <class T>
T as(const YAML::Node& n, const std::string& what) {
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("expected " + what, line_of(n));
    }
}

inline Scalar scalar_at(const YAML::Node& n) {
    std::string s = as<std::string>(n, "a scalar expression");
    try {
        return parse_scalar(s);
    } catch (const ParseError& e) {
        throw ConfigError("in '" + s + "': " + e.what(), line_of(n));
    }
}

inline Rational rational_at(const YAML::Node& n) {
    Scalar s = scalar_at(n);
    if (!s.is_constant()) throw ConfigError("expected a rational constant, got '" + s.str() + "'", line_of(n));
    return s.constant_value();
}

}  // namespace detail

/// Raw eigenvalue table: scalar expressions kept exact, specialized per field.
struct TableSpec {
    std::string rule = "generic";  // generic | constant | level-multiple
    Scalar value = 0;
    long multiple = 0;
    std::map<IndexPair, Scalar> entries;

    EigenvalueTable<Scalar> quantum(long a) const {
        EigenvalueTable<Scalar> t;
        t.a = a;
        t.rule = rule == "constant"         ? EigenvalueTable<Scalar>::Default::Constant
                 : rule == "level-multiple" ? EigenvalueTable<Scalar>::Default::LevelMultiple
                                            : EigenvalueTable<Scalar>::Default::Generic;
        t.value = value;
        t.multiple = multiple;
        t.entries = entries;
        return t;
    }

    /// Classical table: entries must be rational constants.
    EigenvalueTable<Rational> classical(long a) const {
        EigenvalueTable<Rational> t;
        t.a = a;
        t.rule = rule == "constant"         ? EigenvalueTable<Rational>::Default::Constant
                 : rule == "level-multiple" ? EigenvalueTable<Rational>::Default::LevelMultiple
                                            : EigenvalueTable<Rational>::Default::Generic;
        auto cst = [](const Scalar& s, const std::string& where) {
            if (!s.is_constant()) throw AlgebraError(where + " = " + s.str() + " is not a rational constant");
            return s.constant_value();
        };
        t.value = cst(value, "default value");
        t.multiple = multiple;
        for (auto& [ik, v] : entries)
            t.entries.emplace(ik, cst(v, "mu[" + std::to_string(ik.first) + "," + std::to_string(ik.second) + "]"));
        return t;
    }
};

struct Windows {
    int D = 2;
    int height = 2;
    int fuel = 30;
    int samples = 20;
    int K = 3;       // diagonal-module index bound
    int budget = 3;  // diagonal-module degree budget
    int heis = 5;    // phi-relation window
};

struct RunConfig {
    std::string parity = "++-";
    long a = 1;
    Weight lambda;
    TableSpec mu;
    std::optional<TableSpec> nu;
    DefectSet defect;
    Windows windows;
    PBWDConfig pbwd;
    unsigned seed = 1;
    bool quantum = false;
    std::optional<YAML::Node> vector;
    std::string generator;

    RootData root_data() const { return RootData(ParitySequence::parse(parity)); }
};

namespace detail {

inline TableSpec table_at(const YAML::Node& n) {
    TableSpec t;
    if (!n.IsMap()) throw ConfigError("eigenvalue table must be a mapping", line_of(n));
    if (n["default"]) {
        t.rule = as<std::string>(n["default"], "default rule");
        if (t.rule != "generic" && t.rule != "constant" && t.rule != "level-multiple")
            throw ConfigError("unknown default rule '" + t.rule + "'", line_of(n["default"]));
    }
    if (n["value"]) t.value = scalar_at(n["value"]);
    if (n["multiple"]) t.multiple = as<long>(n["multiple"], "an integer multiple");
    if (n["entries"]) {
        static const std::regex re(R"(\s*mu\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*=\s*(.+))");
        for (const auto& e : n["entries"]) {
            std::string s = as<std::string>(e, "an entry 'mu[i,k] = <scalar>'");
            std::smatch m;
            if (!std::regex_match(s, m, re)) throw ConfigError("malformed entry '" + s + "', expected 'mu[i,k] = <scalar>'", line_of(e));
            int i = std::stoi(m[1]), k = std::stoi(m[2]);
            if (i < 1 || k < 1) throw ConfigError("entry indices must be positive in '" + s + "'", line_of(e));
            try {
                t.entries[{i, k}] = parse_scalar(m[3].str());
            } catch (const ParseError& err) {
                throw ConfigError("in '" + s + "': " + err.what(), line_of(e));
            }
        }
    }
    return t;
}

inline Json table_json(const TableSpec& t) {
    Json j;
    j["default"] = t.rule;
    if (t.rule == "constant") j["value"] = t.value.str();
    if (t.rule == "level-multiple") j["multiple"] = t.multiple;
    Json e = Json::array();
    for (auto& [ik, v] : t.entries)
        e.push_back("mu[" + std::to_string(ik.first) + "," + std::to_string(ik.second) + "] = " + v.str());
    j["entries"] = e;
    return j;
}

}  // namespace detail

/// Parses a config document. Validates lambda(c) = a and the weight size.
inline RunConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(e.msg, e.mark.line + 1);
    }
    using detail::as;
    using detail::line_of;
    if (!root.IsMap()) throw ConfigError("config must be a mapping", line_of(root));
    RunConfig cfg;
    if (root["algebra"]) {
        cfg.parity = as<std::string>(root["algebra"], "a parity sequence such as \"++-\"");
        try {
            (void)cfg.root_data();
        } catch (const AlgebraError& e) {
            throw ConfigError(e.what(), line_of(root["algebra"]));
        }
    }
    const RootData rd = cfg.root_data();
    if (root["level"]) cfg.a = as<long>(root["level"], "an integer level");
    if (cfg.a == 0) throw ConfigError("level a must be nonzero", root["level"] ? line_of(root["level"]) : 0);
    cfg.lambda.h.assign(static_cast<std::size_t>(rd.rank()), Rational(0));
    cfg.lambda.c = cfg.a;
    if (auto l = root["lambda"]) {
        if (l["h"]) {
            if (!l["h"].IsSequence() || static_cast<int>(l["h"].size()) != rd.rank())
                throw ConfigError("lambda.h must list " + std::to_string(rd.rank()) + " values", line_of(l["h"]));
            for (std::size_t i = 0; i < l["h"].size(); ++i) cfg.lambda.h[i] = detail::rational_at(l["h"][i]);
        }
        if (l["c"]) {
            cfg.lambda.c = detail::rational_at(l["c"]);
            if (cfg.lambda.c != Rational(cfg.a))
                throw ConfigError("inconsistent config: lambda(c) = " + cfg.lambda.c.get_str() + " but level a = " +
                                      std::to_string(cfg.a),
                                  line_of(l["c"]));
        }
        if (l["d"]) cfg.lambda.d = detail::rational_at(l["d"]);
    }
    if (root["mu"]) cfg.mu = detail::table_at(root["mu"]);
    if (root["nu"]) cfg.nu = detail::table_at(root["nu"]);
    if (auto f = root["defect"]) {
        if (f.IsScalar() && f.as<std::string>() == "all") {
            cfg.defect = DefectSet::everything();
        } else if (f.IsSequence()) {
            for (const auto& p : f) {
                if (!p.IsSequence() || p.size() != 2) throw ConfigError("defect entries are pairs [i, k]", line_of(p));
                cfg.defect.pairs.insert({as<int>(p[0], "an index"), as<int>(p[1], "an index")});
            }
        } else {
            throw ConfigError("defect must be 'all' or a list of pairs", line_of(f));
        }
    }
    if (auto w = root["window"]) {
        auto get = [&](const char* key, int& dst) {
            if (w[key]) dst = as<int>(w[key], std::string("an integer for window.") + key);
        };
        get("D", cfg.windows.D);
        get("height", cfg.windows.height);
        get("fuel", cfg.windows.fuel);
        get("samples", cfg.windows.samples);
        get("K", cfg.windows.K);
        get("budget", cfg.windows.budget);
        get("heis", cfg.windows.heis);
    }
    if (auto p = root["pbwd"]) {
        if (p["split"]) {
            auto s = as<std::string>(p["split"], "first or last");
            if (s != "first" && s != "last") throw ConfigError("pbwd.split must be first or last", line_of(p["split"]));
            cfg.pbwd.split = s == "first" ? PBWDConfig::Split::First : PBWDConfig::Split::Last;
        }
        if (p["q_sign"]) {
            int s = as<int>(p["q_sign"], "+1 or -1");
            if (s != 1 && s != -1) throw ConfigError("pbwd.q_sign must be +1 or -1", line_of(p["q_sign"]));
            cfg.pbwd.q_sign = s;
        }
    }
    if (root["seed"]) cfg.seed = as<unsigned>(root["seed"], "a nonnegative seed");
    if (root["quantum"]) cfg.quantum = as<bool>(root["quantum"], "true or false");
    if (root["vector"]) cfg.vector = root["vector"];
    if (root["generator"]) cfg.generator = as<std::string>(root["generator"], "a generator name");
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'", 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

inline Json config_json(const RunConfig& c) {
    Json j;
    j["algebra"] = c.parity;
    j["level"] = c.a;
    Json h = Json::array();
    for (auto& x : c.lambda.h) h.push_back(x.get_str());
    j["lambda"] = {{"h", h}, {"c", c.lambda.c.get_str()}, {"d", c.lambda.d.get_str()}};
    j["mu"] = detail::table_json(c.mu);
    if (c.nu) j["nu"] = detail::table_json(*c.nu);
    if (c.defect.all) {
        j["defect"] = "all";
    } else {
        Json f = Json::array();
        for (auto& [i, k] : c.defect.pairs) f.push_back({i, k});
        j["defect"] = f;
    }
    const auto& w = c.windows;
    j["window"] = {{"D", w.D},           {"height", w.height}, {"fuel", w.fuel}, {"samples", w.samples},
                   {"K", w.K},           {"budget", w.budget}, {"heis", w.heis}};
    j["pbwd"] = c.pbwd.str();
    j["quantum"] = c.quantum;
    return j;
}

// ---------------------------------------------------------------------------
// Vectors: list of {monomial: [[root, degree, exponent]...], diag: [[i,k,sign,power]...], coeff: "scalar"}

template <class F>
Json vector_json(const LinComb<std::pair<MonomialIndex, DiagLabel>, F>& v) {
    Json out = Json::array();
    for (auto& [b, c] : v.terms()) {
        Json mono = Json::array(), diag = Json::array();
        for (auto& [p, e] : b.first.entries()) mono.push_back({p.root.str(), p.degree, e});
        for (auto& [ik, en] : b.second.entries()) diag.push_back({ik.first, ik.second, en.sign, en.power});
        out.push_back({{"monomial", mono}, {"diag", diag}, {"coeff", Field<F>::str(c)}});
    }
    return out;
}

/// Reads a vector from a YAML/JSON node of the shared schema.
template <class F>
LinComb<std::pair<MonomialIndex, DiagLabel>, F> parse_vector(const YAML::Node& n, const RootData& rd) {
    using detail::as;
    using detail::line_of;
    LinComb<std::pair<MonomialIndex, DiagLabel>, F> v;
    if (!n.IsSequence()) throw ConfigError("vector must be a list of terms", line_of(n));
    for (const auto& t : n) {
        if (!t.IsMap()) throw ConfigError("vector term must be a mapping", line_of(t));
        MonomialIndex m;
        if (auto mono = t["monomial"]) {
            for (const auto& e : mono) {
                if (!e.IsSequence() || e.size() != 3) throw ConfigError("monomial entries are [root, degree, exponent]", line_of(e));
                Root r;
                try {
                    r = Root::parse(as<std::string>(e[0], "a root such as \"e1-e3\""));
                } catch (const AlgebraError& err) {
                    throw ConfigError(err.what(), line_of(e[0]));
                }
                if (r.b > rd.N() || r.a < 1 || r.a >= r.b) throw ConfigError("root " + r.str() + " is not a positive root", line_of(e[0]));
                int ex = as<int>(e[2], "an exponent");
                if (ex < 1 || (rd.parity(r) == 1 && ex > 1)) throw ConfigError("illegal exponent for " + r.str(), line_of(e[2]));
                m.add(Position{r, as<int>(e[1], "a degree")}, ex);
            }
        }
        DiagLabel l;
        if (auto diag = t["diag"]) {
            for (const auto& e : diag) {
                if (!e.IsSequence() || e.size() != 4) throw ConfigError("diag entries are [i, k, sign, power]", line_of(e));
                int i = as<int>(e[0], "an index"), k = as<int>(e[1], "an index");
                int s = as<int>(e[2], "a sign"), p = as<int>(e[3], "a power");
                if (i < 1 || i > rd.rank() || k < 1 || (s != 1 && s != -1) || p < 0)
                    throw ConfigError("illegal diag entry", line_of(e));
                l.set(i, k, s, p);
            }
        }
        F c = F(1);
        if (t["coeff"]) {
            std::string s = as<std::string>(t["coeff"], "a scalar expression");
            try {
                c = Field<F>::parse(s);
            } catch (const AlgebraError& err) {
                throw ConfigError("in coefficient '" + s + "': " + err.what(), line_of(t["coeff"]));
            }
        }
        v.add({m, l}, c);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Generator names: the str() forms of LoopGenerator and QGenerator.

inline LoopGenerator parse_loop_generator(const std::string& s) {
    static const std::regex x(R"(x([+-])\((e\d+-e\d+),\s*(-?\d+)\))"), h(R"(h\((\d+),\s*(-?\d+)\))");
    std::smatch m;
    if (s == "c") return LoopGenerator::c();
    if (s == "d") return LoopGenerator::d();
    if (std::regex_match(s, m, x)) {
        Root r = Root::parse(m[2].str());
        int k = std::stoi(m[3]);
        return m[1] == "+" ? LoopGenerator::xplus(r, k) : LoopGenerator::xminus(r, k);
    }
    if (std::regex_match(s, m, h)) return LoopGenerator::h(std::stoi(m[1]), std::stoi(m[2]));
    throw AlgebraError("unknown classical generator '" + s + "' (expected x+(e1-e2,k), x-(...), h(i,r), c or d)");
}

inline QGenerator parse_qgenerator(const std::string& s) {
    static const std::regex ik(R"((X\+|X-|H|K\+|K-)\((\d+),\s*(-?\d+)\))"), k(R"(K\((\d+)\)(\^-1)?)"),
        div(R"(\{(K\((\d+)\)|q\^c|q\^d);\s*(-?\d+);\s*(\d+)\})");
    std::smatch m;
    if (s == "q^c") return QGenerator::qc(1);
    if (s == "q^-c") return QGenerator::qc(-1);
    if (s == "q^d") return QGenerator::qd(1);
    if (s == "q^-d") return QGenerator::qd(-1);
    if (std::regex_match(s, m, ik)) {
        int i = std::stoi(m[2]), n = std::stoi(m[3]);
        if (m[1] == "X+") return QGenerator::xplus(i, n);
        if (m[1] == "X-") return QGenerator::xminus(i, n);
        if (m[1] == "H") return QGenerator::h(i, n);
        int sign = m[1] == "K+" ? 1 : -1;
        if (sign * n < 0) throw AlgebraError("K-mode index has the wrong sign in '" + s + "'");
        return QGenerator::kmode(i, sign, std::abs(n));
    }
    if (std::regex_match(s, m, k)) return QGenerator::kgen(std::stoi(m[1]), m[2].matched ? -1 : 1);
    if (std::regex_match(s, m, div)) {
        auto t = m[2].matched ? QGenerator::OnK : m[1] == "q^c" ? QGenerator::OnC : QGenerator::OnD;
        return QGenerator::div(t, m[2].matched ? std::stoi(m[2]) : 0, std::stoi(m[3]), std::stoi(m[4]));
    }
    throw AlgebraError("unknown quantum generator '" + s + "'");
}

}  // namespace imverma
