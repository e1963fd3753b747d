#include <gtest/gtest.h>

#include "imverma/cli.hpp"

using namespace imverma;

namespace {

const char* kBase = R"cfg(algebra: "++-"
level: 1
lambda: {h: ["1", "1"], c: "1", d: "0"}
mu:
  default: generic
  entries: ["mu[1,1] = [2]"]
window: {D: 2, height: 2, samples: 3, fuel: 20}
seed: 5
quantum: true
vector:
  - monomial: [["e1-e2", -1, 1]]
    coeff: "q"
)cfg";

Json strip_timing(Json j) {
    j.erase("timing_ms");
    return j;
}

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST(Config, ParsesTablesWeightsAndVectors) {
    auto cfg = parse_config(kBase);
    EXPECT_EQ(cfg.parity, "++-");
    EXPECT_EQ(cfg.a, 1);
    EXPECT_EQ(cfg.mu.entries.at({1, 1}), qnum(2));
    EXPECT_EQ(cfg.lambda.h[1], Rational(1));
    EXPECT_EQ(cfg.windows.samples, 3);
    ASSERT_TRUE(cfg.vector.has_value());
    auto v = parse_vector<Scalar>(*cfg.vector, cfg.root_data());
    EXPECT_EQ(v.size(), 1u);
    EXPECT_EQ(v.terms().begin()->second, Scalar::q());
}

TEST(Config, InconsistentLevelIsRejectedWithLine) {
    std::string bad = kBase;
    bad.replace(bad.find("c: \"1\""), 6, "c: \"2\"");
    EXPECT_EQ(error_line(bad), 3);
    try {
        parse_config(bad);
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("lambda(c)"), std::string::npos);
    }
}

TEST(Config, ErrorsCarryLineNumbers) {
    EXPECT_EQ(error_line("algebra: \"++-\"\nlevel: [1\n"), 3);                    // syntax
    EXPECT_EQ(error_line("algebra: \"++-\"\nmu:\n  entries: [\"mu[1,1] = q +* 2\"]\n"), 3);  // scalar
    EXPECT_EQ(error_line("algebra: \"++-\"\nmu:\n  entries: [\"nu(1,1) = 2\"]\n"), 3);       // entry shape
    EXPECT_EQ(error_line("algebra: \"++-\"\nlambda:\n  h: [\"1\"]\n"), 3);                    // weight size
    EXPECT_EQ(error_line("algebra: \"+x-\"\n"), 1);
    EXPECT_EQ(error_line("level: 1\nwindow: {D: two}\n"), 2);
}

TEST(Config, VectorErrorsCarryLineNumbers) {
    auto cfg = parse_config("vector:\n  - monomial: [[\"e1-e4\", 0, 1]]\n");
    try {
        parse_vector<Rational>(*cfg.vector, cfg.root_data());
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 2);
    }
    auto odd = parse_config("vector:\n  - monomial: [[\"e2-e3\", 0, 2]]\n");
    EXPECT_THROW(parse_vector<Rational>(*odd.vector, odd.root_data()), ConfigError);
}

TEST(Config, VectorRoundTrip) {
    auto rd = RootData(ParitySequence::parse("++-"));
    MonomialIndex m;
    m.add(Position{Root{1, 3}, -2}, 1);
    m.add(Position{Root{1, 2}, 0}, 2);
    DiagLabel l;
    l.set(2, 1, -1, 3);
    QVector v({m, l}, parse_scalar("(q^2+1)/q"));
    auto node = YAML::Load(vector_json(v).dump());
    EXPECT_EQ(parse_vector<Scalar>(node, rd), v);
}

TEST(Generators, NamesRoundTrip) {
    for (auto g : {QGenerator::xplus(1, -2), QGenerator::xminus(2, 3), QGenerator::h(1, -1), QGenerator::kgen(2, -1),
                   QGenerator::kgen(1), QGenerator::kmode(1, 1, 2), QGenerator::kmode(2, -1, 1), QGenerator::qc(-1),
                   QGenerator::qd(), QGenerator::div(QGenerator::OnK, 2, -1, 2), QGenerator::div(QGenerator::OnD, 0, 0, 1)})
        EXPECT_EQ(parse_qgenerator(g.str()), g) << g.str();
    for (auto g : {LoopGenerator::xplus(Root{1, 3}, 2), LoopGenerator::xminus(Root{2, 3}, -1), LoopGenerator::h(2, 1),
                   LoopGenerator::c(), LoopGenerator::d()})
        EXPECT_EQ(parse_loop_generator(g.str()), g) << g.str();
    EXPECT_THROW(parse_qgenerator("Y(1,0)"), AlgebraError);
}

TEST(Run, ReportsAreDeterministicGivenSeed) {
    auto cfg = parse_config(kBase);
    for (std::string cmd : {"relations-quantum", "limit-check", "q-cyclicity", "pbwd-rank"}) {
        auto a = run(cmd, cfg), b = run(cmd, cfg);
        EXPECT_EQ(strip_timing(a.report).dump(), strip_timing(b.report).dump()) << cmd;
        EXPECT_EQ(a.report["seed"], 5);
        EXPECT_EQ(a.report["status"], "PASS") << a.report.dump(2);
        EXPECT_TRUE(a.report.contains("timing_ms"));
        EXPECT_EQ(a.exit_code, 0);
    }
}

TEST(Run, ClassicalCommands) {
    auto cfg = parse_config(R"cfg(algebra: "++-"
level: 1
lambda: {h: ["2", "1"], c: "1"}
generator: "x+(e1-e2,0)"
vector:
  - monomial: [["e1-e2", 0, 1]]
)cfg");
    auto act = run("act", cfg);
    EXPECT_EQ(act.report["result"]["output"].size(), 1u);
    EXPECT_EQ(run("ht-reduce", cfg).report["status"], "PASS");
    auto cyc = run("cyclicity", cfg);
    EXPECT_EQ(cyc.report["result"]["status"], "certified");
    EXPECT_EQ(cyc.report["result"]["replay_ok"], true);
    EXPECT_EQ(run("relations-heis", cfg).report["status"], "PASS");
    EXPECT_EQ(run("diag-irred", cfg).report["result"]["lemma_irreducible"], true);
}

TEST(Run, FailuresAndMisuse) {
    auto cfg = parse_config(R"cfg(level: 1
mu:
  entries: ["mu[1,1] = 1/(q-1)"]
)cfg");
    auto rep = run("limit-check", cfg);
    EXPECT_EQ(rep.exit_code, 1);
    EXPECT_EQ(rep.report["status"], "FAIL");
    EXPECT_EQ(rep.report["result"]["poles"].size(), 1u);
    EXPECT_THROW(run("cyclicity", cfg), ConfigError);  // no vector
    EXPECT_THROW(run("no-such-command", cfg), ConfigError);
    EXPECT_THROW(run("diag-iso", cfg), ConfigError);  // no second table
}
