#include <doctest.h>

#include "fixtures.hpp"

#include <presym/constructor.hpp>
#include <presym/oracle.hpp>
#include <presym/reducer.hpp>

using namespace presym;

namespace {

// Scrambled maximal-rank solution: congruence by a seeded commutant element.
StructuredSolution scrambled_max(const JordanSpec& spec, std::uint64_t seed) {
    const StructuredSolution top = construct_max(spec);
    const RationalMatrix a = random_commutant(spec, seed);
    return make_solution(a.transpose() * top.matrix * a, spec);
}

} // namespace

TEST_CASE("toeplitz inverse square root solves X t X = I") {
    FloatMatrix t(3, 3);
    for (std::size_t i = 0; i < 3; ++i) t(i, i) = -4.0;
    t(0, 1) = t(1, 2) = 2.5;
    t(0, 2) = -0.75;
    const auto [x, sign] = toeplitz_inv_sqrt(t, 1);
    CHECK(sign == -1.0); // negative lead flips
    CHECK(max_abs(x * t.scaled(sign) * x - FloatMatrix::identity(3)) < 1e-12);

    // rotation cells: a 4x4 Toeplitz in 2x2 cells with complex lead
    FloatMatrix c(4, 4);
    c(0, 0) = c(1, 1) = c(2, 2) = c(3, 3) = 2.0;
    c(0, 1) = c(2, 3) = -1.0;
    c(1, 0) = c(3, 2) = 1.0;
    c(0, 2) = c(1, 3) = 0.5;
    const auto [xc, signc] = toeplitz_inv_sqrt(c, 2);
    CHECK(signc == 1.0);
    CHECK(max_abs(xc * c * xc - FloatMatrix::identity(4)) < 1e-12);

    CHECK_THROWS(toeplitz_inv_sqrt(FloatMatrix(2, 2), 1)); // zero lead
}

TEST_CASE("permutation extraction factors skew subpermutations exactly") {
    for (std::size_t d : {4u, 5u, 7u})
        for (std::size_t r = 0; r <= d; r += 2) {
            const RationalMatrix j = canonical_form_matrix(d, r);
            const auto [p, k] = extract_permutation(j);
            CHECK(k == r);
            const RationalMatrix pm = p.matrix<Rational>();
            CHECK(pm.transpose() * canonical_form_matrix(d, r) * pm == j);
        }

    // shuffled pairing
    RationalMatrix a(5, 5);
    a(0, 3) = Rational(1); a(3, 0) = Rational(-1);
    a(4, 1) = Rational(1); a(1, 4) = Rational(-1);
    const auto [p, k] = extract_permutation(a);
    CHECK(k == 4);
    const RationalMatrix pm = p.matrix<Rational>();
    CHECK(pm.transpose() * canonical_form_matrix(5, 4) * pm == a);

    RationalMatrix bad(2, 2);
    bad(0, 1) = Rational(2); bad(1, 0) = Rational(-2);
    CHECK_THROWS(extract_permutation(bad));
}

TEST_CASE("scrambled maximal solutions reduce to the canonical class") {
    const std::vector<JordanSpec> corpus{
        fixtures::real_spec({{3, 1}, {2, -1}}),
        fixtures::real_spec({{3, 0}, {1, 0}, {1, 0}}),
        fixtures::real_spec({{3, 0}, {2, 0}}),
        fixtures::real_spec({{2, 0}, {2, 0}, {1, 0}}),
        fixtures::real_spec({{3, 0}, {2, 0}, {2, 0}}),
        fixtures::real_spec({{3, 0}}),
        fixtures::real_spec({{2, 0}}),
        fixtures::real_spec({{2, 1}, {2, -1}}),
        fixtures::real_spec({{3, 1}, {3, -1}, {1, 0}}),
        fixtures::complex_spec({{1, 1, 1}, {1, -1, 1}}),
        fixtures::complex_spec({{2, 1, 1}, {2, -1, 1}}),
        fixtures::complex_spec({{2, 0, 1}}),
    };
    for (const JordanSpec& spec : corpus) {
        const std::size_t expected = construct_max(spec).rank;
        for (std::uint64_t seed = 1000; seed < 1004; ++seed) {
            const ReductionResult r =
                reduce_to_canonical(scrambled_max(spec, seed), spec);
            CHECK(r.rank == expected);
            CHECK(r.residual < 1e-6);
            CHECK(commutant_structured(r.accumulated_s, spec));
            CHECK(skew_check(r.a_skew));
            const RationalMatrix pm = r.perm.matrix<Rational>();
            CHECK(pm.transpose() *
                      canonical_form_matrix(spec.n_total(), r.rank) * pm ==
                  r.a_skew);
        }
    }
}

TEST_CASE("purely rotational solutions reach the 2x2 canonical cell") {
    const JordanSpec spec = fixtures::complex_spec({{1, 0, 1}});
    const auto basis = dense_solution_space(spec);
    REQUIRE(basis.size() == 1);
    for (std::uint64_t seed = 2000; seed < 2004; ++seed) {
        RationalMatrix b = basis[0];
        const RationalMatrix a = random_commutant(spec, seed);
        b = a.transpose() * b * a;
        const ReductionResult r = reduce_to_canonical(make_solution(b, spec), spec);
        CHECK(r.rank == 2);
        CHECK(r.residual < 1e-6);
        CHECK(r.a_skew == canonical_form_matrix(2, 2));
    }
}

TEST_CASE("reduction rejects inputs below the maximal-rank regime") {
    const JordanSpec spec = fixtures::real_spec({{3, 1}, {2, -1}});
    const StructuredSolution low = lower_rank(construct_max(spec), 2, spec);
    CHECK_THROWS_AS(reduce_to_canonical(low, spec), std::domain_error);
}

TEST_CASE("reducing the snapped output again is the identity run") {
    for (const JordanSpec& spec :
         {fixtures::real_spec({{3, 0}, {2, 0}, {2, 0}}),
          fixtures::complex_spec({{2, 1, 1}, {2, -1, 1}})}) {
        const ReductionResult r1 = reduce_to_canonical(scrambled_max(spec, 77), spec);
        const ReductionResult r2 =
            reduce_to_canonical(make_solution(r1.a_skew, spec), spec);
        CHECK(r2.a_skew == r1.a_skew);
        CHECK(max_abs(r2.accumulated_s - FloatMatrix::identity(spec.n_total())) <
              1e-12);
    }
}

TEST_CASE("commutant structure check rejects off-pattern transforms") {
    const JordanSpec spec = fixtures::real_spec({{3, 1}, {2, -1}});
    CHECK(commutant_structured(FloatMatrix::identity(5), spec));
    FloatMatrix s = FloatMatrix::identity(5);
    s(0, 3) = 0.5; // +1 block into -1 block: not commutant-admissible
    CHECK(!commutant_structured(s, spec));
    FloatMatrix t = FloatMatrix::identity(5);
    t(0, 0) = 2.0; // breaks diagonal constancy inside the first block
    CHECK(!commutant_structured(t, spec));
}

TEST_CASE("moduli class is invariant under the equivalence group") {
    const JordanSpec spec = fixtures::real_spec({{3, 0}, {1, 0}, {1, 0}});
    const StructuredSolution top = construct_max(spec);
    const LiftedForm f = lift(top, top.rank + 2, spec, 7);
    const ModuliResult base = moduli_class(f.matrix, spec);
    CHECK(base.cls.rank == top.rank);
    CHECK(!base.cls.key().empty());
    for (std::uint64_t seed = 55; seed < 63; ++seed) {
        const RationalMatrix g =
            apply_equivalence(f.matrix, random_equivalence(spec, seed));
        const ModuliResult mr = moduli_class(g, spec);
        CHECK(mr.cls == base.cls);
        CHECK(mr.cls.key() == base.cls.key());
        CHECK(mr.reduction.residual < 1e-6);
    }
}

TEST_CASE("reduction trace serializes") {
    const JordanSpec spec = fixtures::real_spec({{3, 1}, {2, -1}});
    const ReductionResult r = reduce_to_canonical(scrambled_max(spec, 5), spec);
    const std::string json = trace_to_json(r);
    CHECK(json.find("\"steps\"") != std::string::npos);
    CHECK(json.find("\"rank\"") != std::string::npos);
}
