#include <gtest/gtest.h>

#include <random>

#include "imverma/diagmod.hpp"

using namespace imverma;

namespace {

using QTable = EigenvalueTable<Scalar>;
using QModule = DiagModule<Scalar>;

const RootData& sl21() {
    static RootData rd(ParitySequence::parse("++-"));
    return rd;
}

QTable generic_table(long a) {
    QTable t;
    t.a = a;
    return t;
}

DiagLabel label(std::initializer_list<std::array<int, 4>> es) {
    DiagLabel l;
    for (auto& e : es) l.set(e[0], e[1], e[2], e[3]);
    return l;
}

// coefficients of prod_r (1 - z^r)^{-c}
std::vector<long> colored_partitions(int colors, int nmax) {
    std::vector<long> p(static_cast<std::size_t>(nmax) + 1, 0);
    p[0] = 1;
    for (int c = 0; c < colors; ++c)
        for (int r = 1; r <= nmax; ++r)
            for (int n = r; n <= nmax; ++n) p[n] += p[n - r];
    return p;
}

}  // namespace

TEST(ReducibilitySet, Examples) {
    for (long a : {1, 2}) {
        QTable t = generic_table(a);
        t.set(1, 1, Scalar(2) * qnum(static_cast<int>(a)));
        t.set(2, 1, Scalar(0));
        t.set(1, 2, Scalar(1));
        auto f = reducibility_set(t, 2, 4);
        EXPECT_EQ(f.at({1, 1}), 2);
        EXPECT_EQ(f.at({2, 1}), 0);
        EXPECT_EQ(f.count({1, 2}), 0u);
        EXPECT_EQ(f.size(), 2u);
    }
    // constant 1 at level 1: [k] divides 1 only for k = 1
    QTable c;
    c.rule = QTable::Default::Constant;
    c.value = Scalar(1);
    auto f = reducibility_set(c, 2, 5);
    EXPECT_EQ(f.size(), 2u);
    EXPECT_EQ(f.count({1, 1}), 1u);
}

TEST(DiagModule, PhiActionExamples) {
    QTable t = generic_table(1);
    QModule m(sl21(), t);
    DiagLabel v;
    Scalar mu = t(1, 2);
    auto up = m.phi_act(1, 2, v);
    EXPECT_EQ(m.phi_act(1, -2, up), DiagVector<Scalar>(v, mu - qnum(2)));
    auto down = m.phi_act(1, -2, v);
    EXPECT_EQ(m.phi_act(1, 2, down), DiagVector<Scalar>(v, mu));
    // truncation: t = 2 kills phi_{1,1}^2 v
    QTable t2 = generic_table(1);
    t2.set(1, 1, Scalar(2));
    QModule q(sl21(), t2, DefectSet{false, {{1, 1}}});
    EXPECT_TRUE(q.phi_act(1, 1, q.phi_act(1, 1, v)).is_zero());
    EXPECT_FALSE(q.phi_act(1, 1, v).is_zero());
    EXPECT_THROW(QModule(sl21(), generic_table(1), DefectSet{false, {{1, 1}}}), AlgebraError);
}

TEST(DiagModule, ZeroRatioKillsLoweringDirection) {
    QTable t = generic_table(2);
    t.set(2, 1, Scalar(0));
    QModule m(sl21(), t, DefectSet{false, {{2, 1}}});
    EXPECT_TRUE(m.phi_act(2, -1, DiagLabel{}).is_zero());
    EXPECT_FALSE(m.phi_act(2, 1, DiagLabel{}).is_zero());
}

TEST(DiagModule, CommutationRelationOnAllLabels) {
    // [phi_{i,k}, phi_{j,-l}] = delta_ij delta_kl [ka], checked label by label
    for (long a : {1, 2}) {
        QTable t = generic_table(a);
        t.set(1, 1, qnum(static_cast<int>(a)) + Scalar(1));
        QModule m(sl21(), t);
        for (const auto& l : m.enumerate(3, 4))
            for (int i = 1; i <= 2; ++i)
                for (int j = 1; j <= 2; ++j)
                    for (int k = 1; k <= 3; ++k)
                        for (int ll = 1; ll <= 3; ++ll) {
                            auto lhs = m.phi_act(i, k, m.phi_act(j, -ll, DiagVector<Scalar>(l))) -
                                       m.phi_act(j, -ll, m.phi_act(i, k, DiagVector<Scalar>(l)));
                            DiagVector<Scalar> rhs;
                            if (i == j && k == ll) rhs = DiagVector<Scalar>(l, qnum(static_cast<int>(k * a)));
                            ASSERT_EQ(lhs, rhs) << l.str();
                        }
    }
}

TEST(DiagModule, EigenbasisOnEnumeratedLabels) {
    QTable t = generic_table(1);
    t.set(1, 1, Scalar(3));
    QModule m(sl21(), t, DefectSet{false, {{1, 1}}});
    for (const auto& l : m.enumerate(3, 5)) {
        ASSERT_TRUE(m.legal(l));
        for (int i = 1; i <= 2; ++i)
            for (int k = 1; k <= 3; ++k) {
                auto w = m.phi_act(i, k, m.phi_act(i, -k, DiagVector<Scalar>(l)));
                auto en = l.get(i, k);
                EXPECT_EQ(w, DiagVector<Scalar>(l, m.mu(i, k) - Scalar(en.sign * en.power) * qnum(k)));
            }
    }
}

TEST(DiagModule, HActionThroughPhiTable) {
    QModule m(sl21(), generic_table(1));
    DiagLabel v;
    EXPECT_EQ(m.h_act(1, 2, v), m.phi_act(1, 2, DiagVector<Scalar>(v)));
    // substituting H back: sum_j B_ij H_{j,-r} v = phi_{i,-r} v
    for (int r = 1; r <= 3; ++r) {
        PhiTable<Scalar> tab(sl21(), r);
        for (int i = 1; i <= 2; ++i) {
            DiagVector<Scalar> acc;
            for (int j = 1; j <= 2; ++j) acc.add(m.h_act(j, -r, v), tab.B(r)[i - 1][j - 1]);
            EXPECT_EQ(acc, m.phi_act(i, -r, DiagVector<Scalar>(v)));
        }
    }
    // H_{1,-1} v = [2] phi_{1,-1} v - phi_{2,-1} v is nonzero
    DiagVector<Scalar> want = m.phi_act(1, -1, DiagVector<Scalar>(v));
    want = qnum(2) * want - m.phi_act(2, -1, DiagVector<Scalar>(v));
    EXPECT_EQ(m.h_act(1, -1, v), want);
}

TEST(DiagModule, HModesNeverVanishTogether) {
    for (long a : {1, 2}) {
        QTable t = generic_table(a);
        t.set(1, 1, Scalar(0));
        t.set(2, 2, qnum(static_cast<int>(2 * a)));
        QModule m(sl21(), t, DefectSet{false, {{1, 1}, {2, 2}}});
        for (const auto& l : m.enumerate(2, 3))
            for (int j = 1; j <= 2; ++j)
                for (int k = 1; k <= 3; ++k)
                    EXPECT_FALSE(m.h_act(j, k, l).is_zero() && m.h_act(j, -k, l).is_zero()) << l.str();
    }
}

TEST(DiagModule, IrreducibilityExamples) {
    EXPECT_TRUE(QModule(sl21(), generic_table(1)).is_irreducible(5));
    QTable t = generic_table(1);
    t.set(1, 1, qnum(1));
    EXPECT_FALSE(QModule(sl21(), t).is_irreducible(5));
    EXPECT_TRUE(QModule(sl21(), t, DefectSet{false, {{1, 1}}}).is_irreducible(5));
    auto s = truncated_submodule_search(QModule(sl21(), t), 3, 3);
    EXPECT_TRUE(s.found);
    EXPECT_EQ(s.generator, label({{1, 1, 1, 1}}));
    EXPECT_FALSE(truncated_submodule_search(QModule(sl21(), t, DefectSet{false, {{1, 1}}}), 3, 3).found);
}

TEST(DiagModule, ClassicalQuantumAsymmetry) {
    for (long a : {1, 2, 3}) {
        QTable q = generic_table(a);
        q.set(1, 1, parse_scalar("q-1") + Scalar(a));
        EigenvalueTable<Rational> c;
        c.a = a;
        c.set(1, 1, q(1, 1).at_one());
        EXPECT_FALSE(q.ratio(1, 1).has_value());
        EXPECT_EQ(c.ratio(1, 1), 1);
        EXPECT_TRUE(QModule(sl21(), q).is_irreducible(4));
        EXPECT_FALSE(DiagModule<Rational>(sl21(), c).is_irreducible(4));
    }
}

TEST(IsoTest, ShiftWitness) {
    QTable mu = generic_table(1), nu = generic_table(1);
    nu.set(1, 1, mu(1, 1) + qnum(1));
    auto r = iso_test(mu, nu, {}, 2, 4);
    ASSERT_TRUE(r.iso) << r.reason;
    ASSERT_EQ(r.witness.size(), 1u);
    EXPECT_EQ(r.witness[0].first, (IndexPair{1, 1}));
    // the image of v_mu in V(nu) carries mu's eigenvalues
    QModule vn(sl21(), nu);
    DiagLabel w = apply_witness(r);
    for (int i = 1; i <= 2; ++i)
        for (int k = 1; k <= 4; ++k) EXPECT_EQ(vn.eigenvalue(w, i, k), mu(i, k));

    EXPECT_TRUE(iso_test(mu, mu, {}, 2, 4).iso);
    EXPECT_TRUE(iso_test(mu, mu, {}, 2, 4).witness.empty());

    QTable bad = generic_table(2);
    QTable bad2 = generic_table(2);
    bad2.set(1, 1, bad(1, 1) + Scalar(1));
    auto rb = iso_test(bad, bad2, {}, 2, 4);
    EXPECT_FALSE(rb.iso);
    EXPECT_FALSE(rb.reason.empty());
}

TEST(IsoTest, NegativeShiftAndDefectSigns) {
    QTable mu = generic_table(2), nu = generic_table(2);
    mu.set(2, 3, Scalar(3) * qnum(6));
    nu.set(2, 3, Scalar(1) * qnum(6));
    DefectSet f{false, {{2, 3}}};
    auto r = iso_test(mu, nu, f, 2, 4);
    ASSERT_TRUE(r.iso) << r.reason;
    QModule vn(sl21(), nu, f);
    DiagLabel w = apply_witness(r);
    EXPECT_TRUE(vn.legal(w));
    EXPECT_EQ(vn.eigenvalue(w, 2, 3), mu(2, 3));
    nu.set(2, 3, Scalar(-1) * qnum(6));
    EXPECT_FALSE(iso_test(mu, nu, f, 2, 4).iso);
}

TEST(PhiVerma, GradedDimensionsAreColoredPartitions) {
    auto expect = colored_partitions(2, 6);
    for (long a : {1, 2}) {
        auto plus = phi_verma<Scalar>(sl21().heis_cartan(), 1, {}, a);
        auto minus = phi_verma<Scalar>(sl21().heis_cartan(), -1, {}, a);
        for (int n = 0; n <= 6; ++n) {
            auto gp = graded_dim(plus, -n, 0);
            EXPECT_TRUE(gp.finite);
            EXPECT_EQ(static_cast<long>(gp.count), expect[n]);
            EXPECT_EQ(static_cast<long>(graded_dim(minus, n, 0).count), expect[n]);
        }
        EXPECT_EQ(graded_dim(plus, 1, 0).count, 0u);
        for (int r = 1; r <= 4; ++r)
            for (int i = 1; i <= 2; ++i) EXPECT_TRUE(plus.phi_act(i, r, DiagLabel{}).is_zero());
    }
    EXPECT_EQ(graded_dim(phi_verma<Scalar>(sl21().heis_cartan(), 1, {}, 1), -2, 0).count, 5u);
}

TEST(PhiVerma, MixedSigns) {
    auto m = phi_verma<Scalar>(sl21().heis_cartan(), 1, {{{2, 1}, -1}}, 1);
    EXPECT_FALSE(m.finite_graded());
    EXPECT_TRUE(m.phi_act(2, -1, DiagLabel{}).is_zero());
    EXPECT_FALSE(m.phi_act(2, 1, DiagLabel{}).is_zero());
    EXPECT_TRUE(m.phi_act(1, 1, DiagLabel{}).is_zero());
    for (const auto& l : m.enumerate(3, 4))
        for (auto& [ik, en] : l.entries()) EXPECT_EQ(en.sign, (ik == IndexPair{2, 1}) ? 1 : -1);
}

TEST(GradedDim, GenericDegreeZeroIsBoundedEnumeration) {
    QModule m(sl21(), generic_table(1));
    auto g = graded_dim(m, 0, 2);
    EXPECT_FALSE(g.finite);
    EXPECT_GT(g.count, 1u);
}

TEST(CyclicReturn, IrreducibleAndReducible) {
    QModule m(sl21(), generic_table(1));
    DiagVector<Scalar> v;
    v.add(label({{1, 1, 1, 2}}), Scalar(1));
    v.add(label({{2, 2, -1, 1}}), qnum(3));
    v.add(label({{1, 1, -1, 1}, {2, 1, 1, 1}}), Scalar(-2));
    auto r = cyclic_return(m, v);
    ASSERT_TRUE(r.success);
    auto w = v;
    for (auto& s : r.steps) w = apply_step(m, s, w);
    EXPECT_EQ(w, DiagVector<Scalar>(DiagLabel{}, r.scalar));
    EXPECT_FALSE(r.scalar.is_zero());

    QTable t = generic_table(1);
    t.set(1, 1, qnum(1));
    QModule red(sl21(), t);
    EXPECT_FALSE(cyclic_return(red, DiagVector<Scalar>(label({{1, 1, 1, 1}}))).success);
}
