#include <doctest.h>

#include <presym/matrix.hpp>
#include <presym/rational.hpp>

#include <random>

using namespace presym;

TEST_CASE("rationals are canonical and exact") {
    CHECK(parse_rational("2/4") == parse_rational("1/2"));
    CHECK(parse_rational("-3") / parse_rational("-6") == parse_rational("1/2"));
    CHECK(parse_rational("2/4").get_den() == 2); // stored in lowest terms
    CHECK(parse_rational("7/3") == Rational(7) / Rational(3));
    CHECK(parse_rational("-5") == Rational(-5));
    CHECK(format_rational(parse_rational("7/3")) == "7/3");
    CHECK(format_rational(Rational(4)) == "4");
    CHECK_THROWS(parse_rational("1/0"));
    // exactness across a chain that would drift in floating point
    Rational x(1, 3);
    for (int i = 0; i < 50; ++i) x = x * Rational(3) / Rational(3);
    CHECK(x == Rational(1, 3));
}

TEST_CASE("matrix algebra basics") {
    RationalMatrix a(2, 3), b(3, 2);
    a(0, 0) = Rational(1); a(0, 2) = Rational(2); a(1, 1) = Rational(-1);
    b(0, 1) = Rational(3); b(2, 0) = Rational(1);
    const RationalMatrix p = a * b;
    CHECK(p(0, 0) == Rational(2));
    CHECK(p(0, 1) == Rational(3));
    CHECK(p(1, 0) == Rational(0));
    CHECK(a.transpose().transpose() == a);
    CHECK((a + (-a)).is_zero());
    CHECK_THROWS(b * b);
}

TEST_CASE("exact rank agrees with the float mirror on random matrices") {
    std::mt19937_64 rng(0);
    std::uniform_int_distribution<int> d(-4, 4);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const std::size_t r = trial % (n + 1);
        // random matrix of known rank r = product of n x r and r x n
        RationalMatrix u(n, r), v(r, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < r; ++j) u(i, j) = Rational(d(rng));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < n; ++j) v(i, j) = Rational(d(rng));
        const RationalMatrix m = u * v;
        const std::size_t exact = rank(m);
        CHECK(exact <= r);
        CHECK(exact == rank(float_of(m)));
    }
}

TEST_CASE("congruence preserves rank and skewness") {
    RationalMatrix b(4, 4);
    b(0, 1) = Rational(1); b(1, 0) = Rational(-1);
    b(2, 3) = Rational(2); b(3, 2) = Rational(-2);
    RationalMatrix s = RationalMatrix::identity(4);
    s(0, 2) = Rational(5); s(1, 3) = Rational(-3);
    const RationalMatrix c = congruence(s, b);
    CHECK(skew_check(c));
    CHECK(rank(c) == rank(b));
}

TEST_CASE("rational snap accepts near-grid and rejects off-grid") {
    FloatMatrix m(2, 2);
    m(0, 1) = 1.0 + 1e-12;
    m(1, 0) = -1.0;
    const std::vector<Rational> grid{Rational(-1), Rational(0), Rational(1)};
    const RationalMatrix r = rational_snap(m, grid, 1e-9);
    CHECK(r(0, 1) == Rational(1));
    m(1, 1) = 0.5;
    CHECK_THROWS_AS(rational_snap(m, grid, 1e-9), std::domain_error);
}

TEST_CASE("permutation matrices compose and invert") {
    const Permutation p({2, 0, 1});
    const RationalMatrix pm = p.matrix<Rational>();
    CHECK(pm * pm.transpose() == RationalMatrix::identity(3));
    // (P x)[images[i]] = x[i]
    RationalMatrix x(3, 1);
    x(0, 0) = Rational(7);
    CHECK((pm * x)(2, 0) == Rational(7));
    CHECK_THROWS(Permutation({0, 0, 1}));
}
