#include <gtest/gtest.h>

#include <random>

#include "imverma/affmod.hpp"

using namespace imverma;

namespace {

using CTable = EigenvalueTable<Rational>;

RootData sl21_rd() { return RootData(ParitySequence::parse("++-")); }

InducedModule make_module(long a, CTable mu = {}, DefectSet f = {}) {
    RootData rd = sl21_rd();
    mu.a = a;
    Weight lam{{Rational(1), Rational(-2)}, Rational(a), Rational(0)};
    return InducedModule(AffineAlgebra(rd), lam, DiagModule<Rational>(rd, mu, f));
}

RMatrix mat3(std::initializer_list<std::tuple<int, int, int>> entries) {
    RMatrix m(3, std::vector<Rational>(3, 0));
    for (auto [a, b, v] : entries) m[a - 1][b - 1] = v;
    return m;
}

InducedVector basis(const MonomialIndex& m, const DiagLabel& l = {}) { return InducedVector({m, l}, 1); }

MonomialIndex mono(std::initializer_list<std::tuple<int, int, int, int>> letters) {
    MonomialIndex m;
    for (auto [a, b, k, e] : letters) m.add({{a, b}, k}, e);
    return m;
}

struct RandomGen {
    std::mt19937 rng;
    const RootData& rd;
    explicit RandomGen(unsigned seed, const RootData& r) : rng(seed), rd(r) {}

    int uni(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    LoopGenerator gen() {
        const auto& roots = rd.positive_roots();
        switch (uni(0, 5)) {
            case 0:
                return LoopGenerator::xplus(roots[uni(0, static_cast<int>(roots.size()) - 1)], uni(-2, 2));
            case 1:
            case 2:
                return LoopGenerator::xminus(roots[uni(0, static_cast<int>(roots.size()) - 1)], uni(-2, 2));
            case 3:
                return LoopGenerator::h(uni(1, rd.rank()), uni(-2, 2));
            case 4:
                return uni(0, 1) ? LoopGenerator::d() : LoopGenerator::c();
            default:
                return LoopGenerator::h(uni(1, rd.rank()), uni(1, 2) * (uni(0, 1) ? 1 : -1));
        }
    }

    DiagLabel label() {
        DiagLabel l;
        for (int t = uni(0, 2); t > 0; --t) l.set(uni(1, 2), uni(1, 2), uni(0, 1) ? 1 : -1, uni(1, 2));
        return l;
    }

    MonomialIndex monomial() {
        MonomialIndex m;
        const auto& roots = rd.positive_roots();
        for (int t = uni(0, 3); t > 0; --t) {
            Root r = roots[uni(0, static_cast<int>(roots.size()) - 1)];
            Position p{r, uni(-2, 2)};
            if (rd.parity(r) == 1 && m(p) > 0) continue;
            m.add(p, 1);
        }
        return m;
    }
};

}  // namespace

TEST(AffineAlgebra, MatrixRealization) {
    AffineAlgebra g(sl21_rd());
    // x^+ = e_ab for every positive root
    EXPECT_EQ(g.xplus_matrix({1, 3}), mat3({{1, 3, 1}}));
    EXPECT_EQ(g.h_matrix(2), mat3({{2, 2, 1}, {3, 3, 1}}));
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) EXPECT_EQ(g.form(g.h_matrix(i), g.h_matrix(j)), Rational(g.root_data().A(i, j)));
}

TEST(AffineAlgebra, BracketExamples) {
    AffineAlgebra g(sl21_rd());
    auto b = g.bracket(LoopGenerator::xplus({1, 2}, 1), LoopGenerator::xminus({1, 2}, -1));
    LoopElement want(LoopGenerator::cartan(1));
    want.add(LoopGenerator::c(), g.form(mat3({{1, 2, 1}}), mat3({{2, 1, 1}})));
    EXPECT_EQ(b, want);
    // odd root: anticommutator of e_23 and e_32 is e_22 + e_33 = h_2
    auto odd = g.bracket(LoopGenerator::xplus({2, 3}, 0), LoopGenerator::xminus({2, 3}, 0));
    RMatrix e23 = mat3({{2, 3, 1}}), e32 = mat3({{3, 2, 1}});
    RMatrix anti = multiply(e23, e32);
    auto rev = multiply(e32, e23);
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) anti[a][c] += rev[a][c];
    EXPECT_EQ(anti, g.h_matrix(2));
    EXPECT_EQ(odd, LoopElement(LoopGenerator::cartan(2)));
    EXPECT_TRUE(g.bracket(LoopGenerator::c(), LoopGenerator::xplus({1, 3}, 2)).is_zero());
    EXPECT_EQ(g.bracket(LoopGenerator::d(), LoopGenerator::xminus({1, 3}, -2)),
              LoopElement(LoopGenerator::xminus({1, 3}, -2), -2));
}

TEST(AffineAlgebra, SuperJacobiOnSamples) {
    RootData rd = sl21_rd();
    AffineAlgebra g(rd);
    RandomGen R(3, rd);
    for (int it = 0; it < 300; ++it) {
        auto x = R.gen(), y = R.gen(), z = R.gen();
        int px = g.parity(x), py = g.parity(y), pz = g.parity(z);
        auto sgn = [](int p) { return Rational(p ? -1 : 1); };
        LoopElement X(x), Y(y), Z(z);
        auto lhs = sgn(px * pz) * g.bracket(X, g.bracket(Y, Z)) + sgn(py * px) * g.bracket(Y, g.bracket(Z, X)) +
                   sgn(pz * py) * g.bracket(Z, g.bracket(X, Y));
        EXPECT_TRUE(lhs.is_zero()) << x.str() << " " << y.str() << " " << z.str();
        // supersymmetry
        EXPECT_EQ(g.bracket(X, Y), sgn((px * py + 1) % 2) * g.bracket(Y, X));
    }
}

TEST(InducedModule, ActionExamples) {
    auto M = make_module(1);
    const auto& alg = M.algebra();
    for (Root r : M.root_data().positive_roots())
        for (int ell : {1, -2}) {
            for (int rr : {0, 2}) {
                if (ell + rr == 0) continue;
                auto v = basis(mono({{r.a, r.b, rr, 1}}));
                auto out = M.act(LoopGenerator::xplus(r, ell), v);
                auto co = alg.coroot(r);
                DiagVector<Rational> hv;
                for (int i = 1; i <= 2; ++i) hv.add(M.V().h_act(i, ell + rr, DiagLabel{}), co[i - 1]);
                EXPECT_EQ(out, InducedModule::from_diag(hv)) << r.str();
            }
            auto v = basis(mono({{r.a, r.b, -ell, 1}}));
            auto co = alg.coroot(r);
            Rational lh = 0;
            for (int i = 1; i <= 2; ++i) lh += co[i - 1] * M.weight().h[i - 1];
            Rational want = lh + Rational(ell) * alg.root_pairing(r) * M.level();
            EXPECT_EQ(M.act(LoopGenerator::xplus(r, ell), v), InducedVector({MonomialIndex{}, DiagLabel{}}, want));
        }
    // odd isotropic root vectors square to zero
    auto v = basis(mono({{2, 3, 1, 1}}));
    EXPECT_TRUE(M.act(LoopGenerator::xminus({2, 3}, 1), v).is_zero());
    EXPECT_TRUE(M.act(LoopGenerator::xminus({1, 3}, 0), basis(mono({{1, 3, 0, 1}}))).is_zero());
    EXPECT_TRUE(M.act(LoopGenerator::xplus({1, 2}, 3), basis({})).is_zero());
}

TEST(InducedModule, RepresentationProperty) {
    auto M = make_module(1);
    RandomGen R(17, M.root_data());
    int checked = 0;
    for (int it = 0; it < 150; ++it) {
        auto g1 = R.gen(), g2 = R.gen();
        auto v = basis(R.monomial(), R.label());
        Rational sgn = (M.algebra().parity(g1) & M.algebra().parity(g2)) ? -1 : 1;
        auto lhs = M.act(g1, M.act(g2, v)) - sgn * M.act(g2, M.act(g1, v));
        auto rhs = M.act(M.algebra().bracket(g1, g2), v);
        ASSERT_EQ(lhs, rhs) << g1.str() << " " << g2.str();
        ++checked;
    }
    EXPECT_GE(checked, 100);
}

TEST(InducedModule, CanonicalOrderBuildsBasisVectors) {
    auto M = make_module(2);
    RandomGen R(5, M.root_data());
    for (int it = 0; it < 60; ++it) {
        auto m = R.monomial();
        auto l = R.label();
        InducedVector w = basis({}, l);
        for (auto& [p, e] : m.entries())
            for (int t = 0; t < e; ++t) w = M.act(LoopGenerator::xminus(p.root, p.degree), w);
        EXPECT_EQ(w, basis(m, l)) << m.str();
    }
}

TEST(InducedModule, HeightAndGrading) {
    auto M = make_module(1);
    EXPECT_EQ(M.ht(basis(mono({{1, 2, 0, 1}}))), 1);
    EXPECT_EQ(M.ht(basis({})), 0);
    EXPECT_EQ(M.ht(basis(mono({{1, 3, 2, 1}}))), 2);
    InducedVector mixed = basis(mono({{1, 2, 0, 1}})) + basis(mono({{2, 3, 0, 1}}));
    EXPECT_THROW(M.ht(mixed), AlgebraError);
    RandomGen R(2, M.root_data());
    for (int it = 0; it < 40; ++it) {
        auto m = R.monomial();
        auto l = R.label();
        EXPECT_EQ(M.act(LoopGenerator::d(), basis(m, l)),
                  InducedVector({m, l}, M.weight().d + Rational(m.total_degree() + l.degree())));
    }
}

TEST(InducedModule, HtReduceExamples) {
    auto M = make_module(1);
    auto red = M.ht_reduce(basis(mono({{1, 2, 0, 1}})));
    EXPECT_EQ(red.g.kind, LoopGenerator::XPlus);
    EXPECT_EQ(red.ell, 1);
    EXPECT_EQ(M.ht(red.result), 0);
    EXPECT_FALSE(red.result.is_zero());

    InducedVector v = basis(mono({{1, 2, 0, 1}})) + basis(mono({{1, 2, 1, 1}}));
    auto r2 = M.ht_reduce(v);
    EXPECT_FALSE(r2.result.is_zero());

    DiagLabel l1, l2;
    l1.set(1, 1, 1, 1);
    l2.set(2, 2, -1, 1);
    InducedVector v3 = basis(mono({{1, 3, 0, 1}}), l1) + basis(mono({{1, 3, 0, 1}}), l2);
    auto r3 = M.ht_reduce(v3);
    EXPECT_FALSE(r3.result.is_zero());
    EXPECT_LT(M.ht(r3.result), 2);
    EXPECT_THROW(M.ht_reduce(basis({})), AlgebraError);
}

TEST(Cyclicity, IrreducibleModuleCertificates) {
    auto M = make_module(1);
    auto v = basis(mono({{2, 3, -1, 1}, {1, 2, 3, 1}}));
    auto cert = M.cyclicity_certificate(v, 20);
    ASSERT_EQ(cert.status, CyclicityCertificate::Certified) << cert.reason;
    EXPECT_GE(cert.steps.size(), 2u);
    EXPECT_EQ(M.replay(cert, v), InducedVector({MonomialIndex{}, DiagLabel{}}, cert.scalar));
    EXPECT_NE(cert.scalar, 0);

    auto trivial = M.cyclicity_certificate(basis({}), 5);
    EXPECT_EQ(trivial.status, CyclicityCertificate::Certified);
    EXPECT_TRUE(trivial.steps.empty());
    EXPECT_EQ(trivial.scalar, 1);
}

TEST(Cyclicity, ReducibleModuleWitness) {
    CTable mu;
    mu.set(1, 1, Rational(1));  // [a] at a = 1
    auto M = make_module(1, mu);
    DiagLabel l;
    l.set(1, 1, 1, 1);
    auto cert = M.cyclicity_certificate(basis({}, l), 5);
    EXPECT_EQ(cert.status, CyclicityCertificate::Submodule);
    EXPECT_EQ(cert.witness, basis({}, l));
}

TEST(KacCompare, Sl21ConstantPhi) {
    RootData rd = sl21_rd();
    Weight lam{{Rational(0), Rational(1)}, Rational(1), Rational(0)};
    InducedModule M(AffineAlgebra(rd), lam, phi_verma<Rational>(rd.heis_cartan(), 1, {}, 1));
    auto rep = M.kac_graded_compare(2, 2);
    EXPECT_TRUE(rep.pass());
    EXPECT_FALSE(rep.rows.empty());
    bool saw_zero = false;
    for (auto& row : rep.rows)
        if (height(row.beta) == 0 && row.n == 0) {
            saw_zero = true;
            EXPECT_EQ(row.direct, 1u);
        }
    EXPECT_TRUE(saw_zero);
    RootData nd(ParitySequence::parse("+-+"));
    Weight lam2{{Rational(0), Rational(0)}, Rational(1), Rational(0)};
    InducedModule N(AffineAlgebra(nd), lam2, phi_verma<Rational>(nd.heis_cartan(), 1, {}, 1));
    EXPECT_THROW(N.kac_graded_compare(2, 2), AlgebraError);
}
