#include <gtest/gtest.h>

#include <random>

#include "imverma/linalg.hpp"

using namespace imverma;

TEST(Echelon, RankAndExpressRational) {
    Echelon<Rational> e(true);
    EXPECT_TRUE(e.insert({{0, Rational(1)}, {1, Rational(2)}}, 0));
    EXPECT_TRUE(e.insert({{1, Rational(1)}, {2, Rational(1)}}, 1));
    EXPECT_FALSE(e.insert({{0, Rational(1)}, {1, Rational(3)}, {2, Rational(1)}}, 2));
    EXPECT_EQ(e.rank(), 2u);
    SparseVec<Rational> target{{0, Rational(2)}, {1, Rational(1)}, {2, Rational(-3)}};
    auto c = e.express(target);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ((*c)[0], Rational(2));
    EXPECT_EQ((*c)[1], Rational(-3));
    EXPECT_FALSE(e.express({{2, Rational(1)}}).has_value());
}

TEST(Echelon, ExpressionIsExactOverScalars) {
    std::mt19937 rng(4);
    std::uniform_int_distribution<int> pick(-2, 2), col(0, 5);
    std::vector<SparseVec<Scalar>> inputs;
    Echelon<Scalar> e(true);
    for (int i = 0; i < 4; ++i) {
        SparseVec<Scalar> v;
        for (int t = 0; t < 3; ++t) v[col(rng)] = qnum(pick(rng) + 3) * Scalar::q_power(pick(rng));
        inputs.push_back(v);
        e.insert(v, i);
    }
    SparseVec<Scalar> target;
    axpy(target, qnum(2), inputs[0]);
    axpy(target, Scalar(-1) / qnum(3), inputs[3]);
    auto c = e.express(target);
    ASSERT_TRUE(c.has_value());
    SparseVec<Scalar> back;
    for (auto& [i, x] : *c) axpy(back, x, inputs[static_cast<std::size_t>(i)]);
    EXPECT_EQ(back, target);
}

TEST(DenseInverse, RoundTrip) {
    Matrix<Scalar> a{{qnum(2), Scalar(-1)}, {Scalar(-1), Scalar(0)}};
    auto inv = inverse(a);
    ASSERT_TRUE(inv.has_value());
    auto id = multiply(a, *inv);
    EXPECT_EQ(id[0][0], Scalar(1));
    EXPECT_EQ(id[0][1], Scalar(0));
    EXPECT_EQ(id[1][0], Scalar(0));
    EXPECT_EQ(id[1][1], Scalar(1));
    Matrix<Rational> sing{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
    EXPECT_FALSE(inverse(sing).has_value());
}
