#include <gtest/gtest.h>

#include <random>

#include "imverma/scalar.hpp"

using namespace imverma;

namespace {

Scalar random_poly_scalar(std::mt19937& rng, int max_deg = 3) {
    std::uniform_int_distribution<int> deg(0, max_deg), coef(-4, 4);
    std::vector<Integer> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& x : c) x = coef(rng);
    return Scalar::from_poly(Poly(std::move(c)));
}

Scalar random_scalar(std::mt19937& rng) {
    Scalar d = random_poly_scalar(rng, 2);
    while (d.is_zero()) d = random_poly_scalar(rng, 2);
    std::uniform_int_distribution<int> shift(-2, 2);
    return random_poly_scalar(rng) / d * Scalar::q_power(shift(rng));
}

}  // namespace

TEST(Scalar, ArithmeticExamples) {
    Scalar q = Scalar::q();
    EXPECT_EQ(q + Scalar(1) / q, parse_scalar("(q^2+1)/q"));
    EXPECT_TRUE((parse_scalar("q^3-7") * Scalar(0)).is_zero());
    Scalar num = parse_scalar("q^2-1"), den = parse_scalar("q-1");
    EXPECT_EQ(num / den, parse_scalar("q+1"));
    EXPECT_TRUE((num / den).is_polynomial());
    EXPECT_THROW(num / Scalar(0), DivisionByZero);
}

TEST(Scalar, CanonicalFormIsStructural) {
    Scalar a = parse_scalar("(2*q^2-2)/(4*q-4)");
    Scalar b = parse_scalar("(q+1)/2");
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.den(), Poly(2));
    Scalar c = parse_scalar("1/(-q)");
    EXPECT_EQ(c.den(), Poly::q());
    EXPECT_EQ(c.num(), Poly(-1));
}

TEST(Scalar, QNumbers) {
    EXPECT_EQ(qnum(2), parse_scalar("(q^2+1)/q"));
    EXPECT_EQ(qnum(2), Scalar::q() + Scalar::q_power(-1));
    EXPECT_EQ(qnum(1), Scalar(1));
    EXPECT_TRUE(qnum(0).is_zero());
    for (int k = 1; k <= 5; ++k) EXPECT_EQ(qnum(-k), -qnum(k));
    // defining formula
    for (int k = -6; k <= 6; ++k)
        EXPECT_EQ(qnum(k), (Scalar::q_power(k) - Scalar::q_power(-k)) / q_minus_qinv());
}

TEST(Scalar, QNumberAdditionFormula) {
    for (int a = -5; a <= 5; ++a)
        for (int b = -5; b <= 5; ++b)
            EXPECT_EQ(qnum(a + b), qnum(a) * Scalar::q_power(b) + qnum(b) * Scalar::q_power(-a)) << a << "," << b;
}

TEST(Scalar, SpecializeAtOne) {
    for (int k = -5; k <= 5; ++k) EXPECT_EQ(qnum(k).at_one(), Rational(k));
    Scalar pole = Scalar(1) / parse_scalar("q-1");
    EXPECT_FALSE(pole.in_A());
    try {
        (void)(pole * pole).at_one();
        FAIL() << "expected a pole";
    } catch (const PoleAtOne& e) {
        EXPECT_EQ(e.order(), 2);
    }
    // (q^6 - q^-6)/(q^2 - q^-2) cancels to a Laurent polynomial with value 3
    Scalar r = qnum(6) / qnum(2);
    EXPECT_TRUE(r.in_A());
    EXPECT_EQ(r.at_one(), Rational(3));
    // cancellation decides membership: (q-1)/(q-1)^2 has a pole, (q-1)^2/(q-1) not
    EXPECT_FALSE(parse_scalar("(q-1)/((q-1)*(q-1))").in_A());
    EXPECT_TRUE(parse_scalar("((q-1)*(q-1))/(q-1)").in_A());
    EXPECT_EQ(parse_scalar("(q-1)^3/(q^2-1)").order_at_one(), 2);
}

TEST(Scalar, FieldAxiomsOnRandomSamples) {
    std::mt19937 rng(7);
    for (int it = 0; it < 200; ++it) {
        Scalar x = random_scalar(rng), y = random_scalar(rng), z = random_scalar(rng);
        EXPECT_EQ((x + y) + z, x + (y + z));
        EXPECT_EQ((x * y) * z, x * (y * z));
        EXPECT_EQ(x * (y + z), x * y + x * z);
        EXPECT_EQ(x + y, y + x);
        EXPECT_TRUE((x - x).is_zero());
        if (!x.is_zero()) EXPECT_EQ(x * x.inverse(), Scalar(1));
    }
}

TEST(Scalar, SpecializationIsRingHomomorphismOnA) {
    std::mt19937 rng(11);
    int checked = 0;
    while (checked < 100) {
        Scalar x = random_scalar(rng), y = random_scalar(rng);
        if (!x.in_A() || !y.in_A()) continue;
        EXPECT_NE(x.den().eval_at_one(), 0);
        EXPECT_EQ((x + y).at_one(), x.at_one() + y.at_one());
        EXPECT_EQ((x * y).at_one(), x.at_one() * y.at_one());
        ++checked;
    }
}

TEST(Scalar, PrintParseRoundTrip) {
    std::mt19937 rng(3);
    for (int it = 0; it < 200; ++it) {
        Scalar x = random_scalar(rng);
        EXPECT_EQ(parse_scalar(x.str()), x) << x.str();
    }
    EXPECT_EQ(parse_scalar("(q^2+1)/(q*(q-1))").str(), "(q^2+1)/(q^2-q)");
    EXPECT_EQ(parse_scalar("q^-2").str(), "1/q^2");
    EXPECT_EQ(parse_scalar("-3/(2*q)").str(), "-3/(2*q)");
    EXPECT_EQ(parse_scalar("[2]"), qnum(2));
    EXPECT_EQ(parse_scalar("2*[-3] + 1"), Scalar(2) * qnum(-3) + Scalar(1));
    EXPECT_THROW(parse_scalar("[2"), ParseError);
}

TEST(Scalar, ParseErrorsCarryPosition) {
    EXPECT_THROW(parse_scalar("q +* 2"), ParseError);
    EXPECT_THROW(parse_scalar("(q+1"), ParseError);
    EXPECT_THROW(parse_scalar("1/(q-q)"), ParseError);
    try {
        parse_scalar("q + x");
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 4u);
    }
}

TEST(Scalar, GaussianBinomial) {
    EXPECT_EQ(qbinomial(4, 2), parse_scalar("(q^8+q^6+2*q^4+q^2+1)/q^4"));
    EXPECT_EQ(qbinomial(5, 2).at_one(), Rational(10));
}
