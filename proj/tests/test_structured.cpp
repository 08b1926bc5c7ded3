#include <doctest.h>

#include "fixtures.hpp"

#include <presym/structured.hpp>

#include <random>

using namespace presym;

namespace {

RationalMatrix random_int_matrix(std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> d(-3, 3);
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = Rational(d(rng));
    return m;
}

} // namespace

TEST_CASE("blockstar is an anti-automorphism and an involution") {
    for (const JordanSpec& spec :
         {fixtures::real_spec({{3, 1}, {2, -1}}),
          fixtures::real_spec({{3, 0}, {2, 0}, {1, 0}}),
          fixtures::complex_spec({{2, 1, 1}, {1, -1, 1}})}) {
        const BlockPartition part = block_partition(spec);
        std::mt19937_64 rng(1);
        for (int trial = 0; trial < 5; ++trial) {
            const RationalMatrix a = random_int_matrix(part.total(), rng);
            const RationalMatrix b = random_int_matrix(part.total(), rng);
            CHECK(blockstar(a * b, part) ==
                  blockstar(b, part) * blockstar(a, part));
            CHECK(blockstar(blockstar(a, part), part) == a);
            CHECK(blockstar(a + b, part) ==
                  blockstar(a, part) + blockstar(b, part));
        }
        // a real Jordan matrix is blockstar-symmetric (rotation cells are
        // transposed by blockstar, so complex blocks pick up a conjugation)
        if (spec.complex_blocks.empty()) {
            const RationalMatrix j = build_jordan(spec);
            CHECK(blockstar(j, part) == j);
        }
    }
}

TEST_CASE("toeplitz_ext carries leading diagonals, right-aligned") {
    RationalMatrix a(2, 2);
    a(0, 0) = Rational(3); a(1, 1) = Rational(3);
    a(0, 1) = Rational(5);
    const RationalMatrix e = toeplitz_ext(a, 4, 3, 1);
    // 4x3: q = 3, first diagonal starts at column offset 0
    CHECK(e(0, 0) == Rational(3));
    CHECK(e(2, 2) == Rational(3));
    CHECK(e(0, 1) == Rational(5));
    CHECK(e(1, 2) == Rational(5));
    CHECK(e(3, 0) == Rational(0));
    const RationalMatrix w = toeplitz_ext(a, 2, 6, 1);
    // 2x6: q = 2, diagonals right-aligned at column offset 4
    CHECK(w(0, 4) == Rational(3));
    CHECK(w(0, 5) == Rational(5));
    CHECK(w(0, 0) == Rational(0));
    CHECK_THROWS(toeplitz_ext(a, 1, 1, 1));
    CHECK_THROWS(toeplitz_ext(a, 6, 6, 3)); // cell must divide the source
}

TEST_CASE("pair admissibility follows the eigenvalue conditions") {
    const JordanSpec s = fixtures::real_spec({{3, 1}, {2, -1}, {2, 0}});
    // canonical order: J2(0), J3(1), J2(-1)
    REQUIRE(s.real_blocks[0].eig == Rational(0));
    CHECK(commutant_pair_allowed(s, 0, 0));
    CHECK(!commutant_pair_allowed(s, 1, 2)); // +1 vs -1
    CHECK(lyapunov_pair_allowed(s, 1, 2));   // +1 vs -1 negate
    CHECK(lyapunov_pair_allowed(s, 0, 0));   // 0 vs 0
    CHECK(!lyapunov_pair_allowed(s, 0, 1));  // 0 vs 1
}

TEST_CASE("structured Lyapunov basis solves the dense equations") {
    for (const JordanSpec& spec :
         {fixtures::real_spec({{3, 1}, {2, -1}}),
          fixtures::real_spec({{3, 0}, {1, 0}, {1, 0}}),
          fixtures::complex_spec({{2, 0, 1}}),
          fixtures::complex_spec({{1, 1, 1}, {1, -1, 1}})}) {
        const RationalMatrix j = build_jordan(spec);
        for (const RationalMatrix& b : lyapunov_basis(spec)) {
            CHECK(skew_check(b));
            CHECK((b * j + j.transpose() * b).is_zero());
            CHECK(membership(b, spec, Membership::lyapunov).ok);
        }
        for (const RationalMatrix& a : commutant_basis(spec)) {
            CHECK((a * j - j * a).is_zero());
            CHECK(membership(a, spec, Membership::commutant).ok);
        }
    }
}

TEST_CASE("membership rejects non-solutions with a nonzero residual") {
    const JordanSpec spec = fixtures::real_spec({{3, 1}, {2, -1}});
    RationalMatrix b(5, 5);
    b(0, 1) = Rational(1);
    b(1, 0) = Rational(-1);
    const MembershipResult r = membership(b, spec, Membership::lyapunov);
    CHECK(!r.ok);
    CHECK(!r.residual.is_zero());
    CHECK_THROWS(make_solution(b, spec));
}

TEST_CASE("reference 5x5 solutions: reversal products of the frozen matrices") {
    const JordanSpec spec = fixtures::real_spec({{3, 1}, {2, -1}});
    const RationalMatrix rev = reversal_matrix(block_partition(spec));

    const RationalMatrix b1 = rev * fixtures::example_a1();
    const MembershipResult m1 = membership(b1, spec, Membership::lyapunov);
    CHECK(m1.ok);
    CHECK(m1.residual.is_zero());
    CHECK(rank(b1) == 4);

    const RationalMatrix b2 = rev * fixtures::example_a2();
    const MembershipResult m2 = membership(b2, spec, Membership::lyapunov);
    CHECK(m2.ok);
    CHECK(m2.residual.is_zero());
    CHECK(rank(b2) == 2);
}

TEST_CASE("place_diagonal writes the alternating upper-Toeplitz pattern") {
    const JordanSpec spec = fixtures::real_spec({{3, 0}, {2, 0}});
    const BlockPartition part = block_partition(spec);
    RationalMatrix m(5, 5);
    place_diagonal(m, part, 0, 1, 1, Rational(1), Rational(0), true);
    // block (0,1): 3x2, q = 2, diagonal 1 at cells (0,0) and (1,1) of the block
    CHECK(m(0, 3) == Rational(1));
    CHECK(m(1, 4) == Rational(-1));
    CHECK(m(2, 3) == Rational(0));
}
