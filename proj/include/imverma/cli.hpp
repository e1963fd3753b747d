#pragma once

// Batch front end: runs a named command on a parsed config and produces a
// single JSON report. Reports are deterministic given the seed except for the
// timing field.

#include <chrono>

#include "imverma/io.hpp"

namespace imverma {

struct RunResult {
    int exit_code = 0;  // 0 PASS, 1 FAIL
    Json report;
};

inline const std::vector<std::string>& cli_commands() {
    static const std::vector<std::string> c{"relations-heis", "diag-irred",  "diag-iso",          "act",
                                            "ht-reduce",      "cyclicity",   "kac-compare",       "pbwd-rank",
                                            "relations-quantum", "limit-check", "q-cyclicity"};
    return c;
}

namespace detail {

inline Json lattice_json(const RootLattice& b) {
    Json j = Json::array();
    for (long x : b) j.push_back(x);
    return j;
}

inline Json phi_report_json(const PhiRelationReport& r) {
    Json mism = Json::array();
    for (std::size_t t = 0; t < r.mismatches.size() && t < 5; ++t) {
        const auto& m = r.mismatches[t];
        mism.push_back({{"i", m.i}, {"j", m.j}, {"r", m.r}, {"s", m.s}, {"computed", m.computed}, {"expected", m.expected}});
    }
    return {{"window", r.window},
            {"checked", r.checked},
            {"mismatches", r.mismatches.size()},
            {"first_mismatches", mism},
            {"grading_checked", r.grading_checked},
            {"grading_failures", r.grading_failures}};
}

template <class F>
Json diag_irred_json(const DiagModule<F>& m, const Windows& w) {
    Json fset = Json::array();
    for (auto& [ik, t] : reducibility_set(m.table(), m.rank(), w.K)) fset.push_back({ik.first, ik.second, t});
    bool lemma = m.is_irreducible(w.K);
    auto search = truncated_submodule_search(m, w.K, w.budget);
    Json j{{"reducibility_set", fset},
           {"lemma_irreducible", lemma},
           {"truncated_span_dim", search.dimension},
           {"proper_subspace_found", search.found},
           {"agree", lemma == !search.found}};
    if (search.found) {
        j["generator"] = search.generator.str();
        j["closure_dim"] = search.closure_dim;
    }
    return j;
}

inline Json steps_json(const std::vector<CertStep>& steps) {
    Json j = Json::array();
    for (const auto& s : steps) j.push_back(s.str());
    return j;
}

inline const char* status_name(CyclicityCertificate::Status s) {
    switch (s) {
        case CyclicityCertificate::Certified:
            return "certified";
        case CyclicityCertificate::Submodule:
            return "submodule";
        default:
            return "inconclusive";
    }
}

inline const YAML::Node& need_vector(const RunConfig& c, const std::string& cmd) {
    if (!c.vector) throw ConfigError("command '" + cmd + "' needs a 'vector' entry", 0);
    return *c.vector;
}

inline InducedModule classical_module(const RunConfig& c) {
    auto rd = c.root_data();
    return InducedModule(AffineAlgebra(rd), c.lambda, DiagModule<Rational>(rd, c.mu.classical(c.a), c.defect));
}

inline QModule quantum_module(const RunConfig& c) {
    auto rd = c.root_data();
    return QModule(rd, c.lambda, DiagModule<Scalar>(rd, c.mu.quantum(c.a), c.defect), c.windows.D, c.pbwd);
}

/// All beta in Q^+ with 1 <= ht beta <= h.
inline std::vector<RootLattice> weights_up_to(int rank, int h) {
    std::vector<RootLattice> out;
    RootLattice b(static_cast<std::size_t>(rank), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == rank) {
            if (height(b) >= 1) out.push_back(b);
            return;
        }
        for (int x = 0; x <= left; ++x) {
            b[static_cast<std::size_t>(pos)] = x;
            rec(pos + 1, left - x);
        }
        b[static_cast<std::size_t>(pos)] = 0;
    };
    rec(0, h);
    return out;
}

}  // namespace detail

inline RunResult run(const std::string& command, const RunConfig& cfg) {
    using namespace detail;
    const auto t0 = std::chrono::steady_clock::now();
    if (std::find(cli_commands().begin(), cli_commands().end(), command) == cli_commands().end())
        throw ConfigError("unknown command '" + command + "'", 0);
    for (const char* c : {"act", "ht-reduce", "cyclicity", "q-cyclicity"})
        if (command == c) (void)detail::need_vector(cfg, command);
    if (command == "act" && cfg.generator.empty()) throw ConfigError("command 'act' needs a 'generator' entry", 0);
    if (command == "diag-iso" && !cfg.nu) throw ConfigError("command 'diag-iso' needs a second table 'nu'", 0);
    const RootData rd = cfg.root_data();
    const Windows& w = cfg.windows;
    Json result;
    bool pass = true;

    if (command == "relations-heis") {
        auto rc = verify_phi_relations(PhiTable<Rational>(rd.heis_cartan(), w.heis), w.heis);
        auto rq = verify_phi_relations(PhiTable<Scalar>(rd.heis_cartan(), w.heis), w.heis);
        result = {{"classical", phi_report_json(rc)}, {"quantum", phi_report_json(rq)}};
        pass = rc.pass() && rq.pass();
    } else if (command == "diag-irred") {
        result = cfg.quantum ? diag_irred_json(DiagModule<Scalar>(rd, cfg.mu.quantum(cfg.a), cfg.defect), w)
                             : diag_irred_json(DiagModule<Rational>(rd, cfg.mu.classical(cfg.a), cfg.defect), w);
        pass = result["agree"].get<bool>();
    } else if (command == "diag-iso") {
        auto res = cfg.quantum ? iso_test(cfg.mu.quantum(cfg.a), cfg.nu->quantum(cfg.a), cfg.defect, rd.heis_rank(), w.K)
                               : iso_test(cfg.mu.classical(cfg.a), cfg.nu->classical(cfg.a), cfg.defect, rd.heis_rank(), w.K);
        Json wit = Json::array();
        for (auto& [ik, n] : res.witness) wit.push_back({ik.first, ik.second, n});
        result = {{"isomorphic", res.iso}, {"reason", res.reason}, {"witness", wit}};
        if (res.iso) result["image_of_cyclic_vector"] = apply_witness(res).str();
    } else if (command == "act") {
        if (cfg.quantum) {
            auto M = quantum_module(cfg);
            auto v = parse_vector<Scalar>(need_vector(cfg, command), rd);
            auto g = parse_qgenerator(cfg.generator);
            result = {{"generator", g.str()}, {"input", vector_json(v)}, {"output", vector_json(M.act(g, v))}};
        } else {
            auto M = classical_module(cfg);
            auto v = parse_vector<Rational>(need_vector(cfg, command), rd);
            auto g = parse_loop_generator(cfg.generator);
            result = {{"generator", g.str()}, {"input", vector_json(v)}, {"output", vector_json(M.act(g, v))}};
        }
    } else if (command == "ht-reduce") {
        auto M = classical_module(cfg);
        auto v = parse_vector<Rational>(need_vector(cfg, command), rd);
        auto red = M.ht_reduce(v);
        const long h0 = height(M.beta(v));
        pass = !red.result.is_zero() && height(M.beta(red.result)) < h0;
        result = {{"input_height", h0},       {"generator", red.g.str()},          {"ell", red.ell},
                  {"result", vector_json(red.result)}, {"result_height", red.result.is_zero() ? -1 : height(M.beta(red.result))}};
    } else if (command == "cyclicity") {
        auto M = classical_module(cfg);
        auto v = parse_vector<Rational>(need_vector(cfg, command), rd);
        auto cert = M.cyclicity_certificate(v, w.fuel);
        result = {{"status", status_name(cert.status)}, {"steps", steps_json(cert.steps)}, {"reason", cert.reason}};
        if (cert.status == CyclicityCertificate::Certified) {
            bool replay = M.replay(cert, v) == InducedVector({MonomialIndex{}, DiagLabel{}}, cert.scalar) && cert.scalar != 0;
            result["scalar"] = cert.scalar.get_str();
            result["replay_ok"] = replay;
            pass = replay;
        } else if (cert.status == CyclicityCertificate::Submodule) {
            result["witness"] = vector_json(cert.witness);
            pass = !M.V().is_irreducible(w.K);
        } else {
            pass = false;
        }
    } else if (command == "kac-compare") {
        auto M = classical_module(cfg);
        auto rep = M.kac_graded_compare(w.height, w.D);
        Json rows = Json::array();
        for (const auto& r : rep.rows)
            rows.push_back({{"beta", lattice_json(r.beta)}, {"n", r.n}, {"direct", r.direct}, {"kac", r.product}});
        result = {{"rows", rows}};
        pass = rep.pass();
    } else if (command == "pbwd-rank") {
        NormalFormEngine eng(rd, cfg.pbwd);
        Json reps = Json::array();
        for (const auto& beta : weights_up_to(rd.rank(), w.height)) {
            auto rep = eng.rank_check(beta, w.D);
            Json rows = Json::array();
            for (const auto& r : rep.rows) {
                Json row{{"n", r.n},
                         {"words", r.words},
                         {"relations", r.relations},
                         {"relation_rank", r.relation_rank},
                         {"pbwd", r.pbwd},
                         {"quotient_dim", r.quotient_dim},
                         {"inner_words", r.inner_words},
                         {"independent", r.independent},
                         {"inner_spanned", r.inner_spanned},
                         {"pbwd_rank", r.pbwd_rank},
                         {"count_match", r.count_match()},
                         {"codimension", r.codimension()}};
                if (!r.offending.empty()) row["offending"] = r.offending;
                rows.push_back(row);
            }
            reps.push_back({{"beta", lattice_json(beta)},
                            {"D", rep.D},
                            {"D_prime", rep.Dp},
                            {"rows", rows},
                            {"status", rep.pass() ? "PASS" : "FAIL"}});
            pass = pass && rep.pass();
        }
        result = {{"config", cfg.pbwd.str()}, {"weights", reps}};
    } else if (command == "relations-quantum") {
        auto M = quantum_module(cfg);
        auto rep = verify_relations_on_module(M, w.samples, cfg.seed);
        Json fams = Json::array();
        for (const auto& f : rep.families) {
            Json j{{"family", f.name}, {"checked", f.checked}, {"failures", f.failures}};
            if (f.failures) j["first_failure"] = f.first_failure;
            fams.push_back(j);
        }
        result = {{"window", w.D}, {"families", fams}};
        pass = rep.pass();
    } else if (command == "limit-check") {
        auto table = cfg.mu.quantum(cfg.a);
        if (!limit_faithful(table)) {
            Json poles = Json::array();
            for (auto& [ik, v] : table.entries)
                if (!v.in_A()) poles.push_back("mu[" + std::to_string(ik.first) + "," + std::to_string(ik.second) + "] = " + v.str());
            if (!table.value.in_A()) poles.push_back("default = " + table.value.str());
            result = {{"limit_faithful", false}, {"poles", poles}};
            pass = false;
        } else {
            auto M = quantum_module(cfg);
            auto rep = limit_consistency_check(M, w.samples, cfg.seed, w.height);
            Json kinds = Json::array();
            for (const auto& k : rep.kinds) {
                Json j{{"kind", k.kind}, {"checked", k.checked}, {"failures", k.failures}};
                if (k.failures) j["first_failure"] = k.first_failure;
                kinds.push_back(j);
            }
            result = {{"limit_faithful", true}, {"kinds", kinds}};
            pass = rep.pass();
        }
    } else {  // q-cyclicity
        auto M = quantum_module(cfg);
        auto v = parse_vector<Scalar>(need_vector(cfg, command), rd);
        auto cert = M.cyclicity_probe(v, w.fuel);
        Json steps = Json::array(), rescale = Json::array();
        for (const auto& s : cert.steps) {
            steps.push_back(s.str());
            if (s.kind == QCertStep::Rescale) rescale.push_back(s.e.str());
        }
        result = {{"status", status_name(cert.status)}, {"steps", steps}, {"rescaling_factors", rescale}, {"reason", cert.reason}};
        if (cert.status == CyclicityCertificate::Certified) {
            bool replay = !cert.scalar.is_zero() && M.replay(cert, v) == QVector({MonomialIndex{}, DiagLabel{}}, cert.scalar);
            result["scalar"] = cert.scalar.str();
            result["replay_ok"] = replay;
            pass = replay;
        } else if (cert.status == CyclicityCertificate::Submodule) {
            result["witness"] = vector_json(cert.witness);
            pass = !M.V().is_irreducible(w.K);
        } else {
            pass = false;
        }
    }

    RunResult out;
    out.exit_code = pass ? 0 : 1;
    out.report["command"] = command;
    out.report["seed"] = cfg.seed;
    out.report["inputs"] = config_json(cfg);
    out.report["result"] = result;
    out.report["status"] = pass ? "PASS" : "FAIL";
    out.report["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace imverma
