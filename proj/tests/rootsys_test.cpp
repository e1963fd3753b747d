#include <gtest/gtest.h>

#include <random>

#include "imverma/rootsys.hpp"

using namespace imverma;

namespace {

// (e_a | e_b) = s_a delta_ab applied to alpha_i = e_i - e_{i+1}, independently of RootData
long oracle_form(const ParitySequence& s, int i, int j) {
    auto e = [&](int a, int b) -> long { return a == b ? s[a] : 0; };
    return e(i, j) - e(i, j + 1) - e(i + 1, j) + e(i + 1, j + 1);
}

std::vector<ParitySequence> all_sequences(int max_n) {
    std::vector<ParitySequence> out;
    for (int N = 2; N <= max_n; ++N)
        for (int mask = 0; mask < (1 << N); ++mask) {
            std::vector<int> s;
            for (int a = 0; a < N; ++a) s.push_back(mask >> a & 1 ? -1 : 1);
            out.emplace_back(s);
        }
    return out;
}

}  // namespace

TEST(RootData, Sl21CartanAndParities) {
    RootData rd(ParitySequence::parse("++-"));
    std::vector<std::vector<long>> expect{{2, -1}, {-1, 0}};
    EXPECT_EQ(rd.cartan(), expect);
    EXPECT_EQ(rd.simple_parity(1), 0);
    EXPECT_EQ(rd.simple_parity(2), 1);
    EXPECT_FALSE(rd.is_reduced());
}

TEST(RootData, SmallCases) {
    RootData odd(ParitySequence::parse("+-"));
    EXPECT_EQ(odd.cartan(), (std::vector<std::vector<long>>{{0}}));
    EXPECT_EQ(odd.simple_parity(1), 1);
    EXPECT_TRUE(odd.is_reduced());
    EXPECT_EQ(odd.heis_rank(), 0);
    RootData even(ParitySequence::parse("++"));
    EXPECT_EQ(even.cartan(), (std::vector<std::vector<long>>{{2}}));
    EXPECT_THROW(RootData(ParitySequence::parse("+")), AlgebraError);
    EXPECT_THROW(ParitySequence::parse("+x-"), ParseError);
}

TEST(RootData, CartanMatchesBilinearFormOracle) {
    for (const auto& s : all_sequences(5)) {
        RootData rd(s);
        for (int i = 1; i <= rd.rank(); ++i) {
            for (int j = 1; j <= rd.rank(); ++j) {
                EXPECT_EQ(rd.A(i, j), oracle_form(s, i, j)) << s.str();
                EXPECT_EQ(rd.A(i, j), rd.A(j, i));
            }
            if (rd.simple_parity(i) == 1) EXPECT_EQ(rd.A(i, i), 0);
        }
        for (const Root& r : rd.positive_roots()) {
            if (rd.parity(r) == 1) EXPECT_EQ(rd.form(r, r), 0) << r.str();
            auto c = rd.coordinates(r);
            EXPECT_EQ(rd.form(c, c), rd.form(r, r));
        }
        if (s.even_count() != s.odd_count()) EXPECT_NE(rd.cartan_determinant(), 0) << s.str();
    }
}

TEST(RootData, ReducedMatrixForEqualCounts) {
    RootData rd(ParitySequence::parse("+-+-"));
    EXPECT_TRUE(rd.is_reduced());
    EXPECT_EQ(rd.cartan_determinant(), 0);
    EXPECT_EQ(rd.heis_rank(), 2);
    EXPECT_NE(RootData::determinant(rd.heis_cartan()), 0);
}

TEST(RootOrder, ExamplesAndBetweenness) {
    RootData rd(ParitySequence::parse("++-"));
    Root a12{1, 2}, a13{1, 3}, a23{2, 3};
    EXPECT_TRUE(rd.compare_roots(a12, a13) < 0);
    EXPECT_TRUE(rd.compare_roots(a13, a23) < 0);
    EXPECT_TRUE(rd.compare_roots(a12, a12) == 0);
    EXPECT_THROW((void)rd.compare_roots(Root{2, 1}, a12), AlgebraError);
    for (const auto& s : all_sequences(5)) EXPECT_TRUE(RootData(s).satisfies_betweenness());

    RootData rd4(ParitySequence::parse("++--"));
    std::vector<Root> lex{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
    EXPECT_EQ(rd4.positive_roots(), lex);
}

TEST(RootOrder, RootSerialization) {
    EXPECT_EQ((Root{1, 3}.str()), "e1-e3");
    EXPECT_EQ(Root::parse("e2-e4"), (Root{2, 4}));
    EXPECT_THROW(Root::parse("e3-e1"), ParseError);
    EXPECT_THROW(Root::parse("x1-e2"), ParseError);
}

TEST(PositionOrder, Examples) {
    Position p1{{1, 2}, 5}, p2{{2, 3}, -100}, p3{{1, 2}, -1}, p4{{1, 2}, 0};
    EXPECT_TRUE(RootData::compare_positions(p1, p2) < 0);
    EXPECT_TRUE(RootData::compare_positions(p3, p4) < 0);
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> a(1, 3), deg(-3, 3);
    auto rnd = [&] {
        int x = a(rng);
        return Position{{x, x + 1}, deg(rng)};
    };
    for (int it = 0; it < 300; ++it) {
        Position x = rnd(), y = rnd(), z = rnd();
        EXPECT_TRUE(RootData::compare_positions(x, x) == 0);
        if (x < y) EXPECT_FALSE(y < x);
        if (x < y && y < z) EXPECT_TRUE(x < z);
    }
}

TEST(MonomialOrder, Examples) {
    MonomialIndex m1, m2, m3;
    m1.set({{1, 2}, 0}, 1);
    m2.set({{2, 3}, 0}, 1);
    EXPECT_TRUE(compare_monomials(m2, m1) < 0);
    EXPECT_TRUE(compare_monomials(m1, m1) == 0);
    m3.set({{1, 2}, 0}, 2);
    EXPECT_TRUE(compare_monomials(m1, m3) < 0);
}

TEST(MonomialOrder, TotalAndExtendsDominance) {
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> root(1, 2), deg(-1, 1), ex(0, 2);
    auto rnd = [&] {
        MonomialIndex m;
        for (int t = 0; t < 3; ++t) {
            int a = root(rng);
            m.set({{a, a + 1}, deg(rng)}, ex(rng));
        }
        return m;
    };
    for (int it = 0; it < 500; ++it) {
        MonomialIndex x = rnd(), y = rnd(), z = rnd();
        auto xy = compare_monomials(x, y);
        EXPECT_EQ(xy == 0, x == y);
        EXPECT_TRUE((compare_monomials(y, x) < 0) == (xy > 0));
        if (x < y && y < z) EXPECT_TRUE(x < z);
        // componentwise dominance x <= x + z
        MonomialIndex w = x;
        for (auto& [p, e] : z.entries()) w.add(p, e);
        if (!(w == x)) EXPECT_TRUE(x < w);
    }
}

TEST(MonomialIndex, OddExponentBound) {
    RootData rd(ParitySequence::parse("++-"));
    MonomialIndex m;
    m.set({{2, 3}, 0}, 2);
    EXPECT_FALSE(rd.is_valid(m));
    m.set({{2, 3}, 0}, 1);
    m.set({{1, 2}, 4}, 3);
    EXPECT_TRUE(rd.is_valid(m));
    EXPECT_EQ(m.letter_count(), 4);
    EXPECT_EQ(m.total_degree(), 12);
    EXPECT_EQ(rd.weight(m), (RootLattice{3, 1}));
}

TEST(Height, Examples) {
    EXPECT_EQ(height({1, 2}), 3);
    EXPECT_EQ(height({0, 0}), 0);
    EXPECT_THROW(height({1, -1}), AlgebraError);
    RootData rd(ParitySequence::parse("++--"));
    EXPECT_EQ(height(rd.coordinates(Root{1, 4})), 3);
    Root r;
    EXPECT_TRUE(rd.root_of({0, 1, 1}, r));
    EXPECT_EQ(r, (Root{2, 4}));
    EXPECT_FALSE(rd.root_of({1, 0, 1}, r));
}

TEST(Weight, Integrality) {
    Weight w{{Rational(1), Rational(-2)}, Rational(1), Rational(0)};
    EXPECT_TRUE(w.is_integral());
    w.h[1] = Rational(1, 2);
    EXPECT_FALSE(w.is_integral());
}
