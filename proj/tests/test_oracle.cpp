#include <doctest.h>

#include "fixtures.hpp"

#include <presym/constructor.hpp>
#include <presym/oracle.hpp>
#include <presym/rank_existence.hpp>
#include <presym/structured.hpp>

using namespace presym;

TEST_CASE("dense solution space matches the structured basis dimension") {
    for (const JordanSpec& spec :
         {fixtures::real_spec({{3, 1}, {2, -1}}),
          fixtures::real_spec({{3, 0}, {2, 0}, {1, 0}}),
          fixtures::complex_spec({{2, 0, 1}}),
          fixtures::complex_spec({{1, 1, 1}, {1, -1, 1}})}) {
        const auto dense = dense_solution_space(spec);
        CHECK(dense.size() == lyapunov_basis(spec).size());
        const RationalMatrix j = build_jordan(spec);
        for (const RationalMatrix& b : dense) {
            CHECK(skew_check(b));
            CHECK((b * j + j.transpose() * b).is_zero());
        }
    }
}

TEST_CASE("parallel and serial generic rank agree and are deterministic") {
    for (const JordanSpec& spec :
         {fixtures::real_spec({{3, 1}, {2, -1}}),
          fixtures::real_spec({{2, 0}, {2, 0}, {1, 0}}),
          fixtures::complex_spec({{2, 0, 1}})}) {
        const std::size_t par = generic_rank(spec, 20, 0);
        CHECK(par == generic_rank_serial(spec, 20, 0));
        CHECK(par == generic_rank(spec, 20, 0));
        CHECK(par == max_rank_real(spec) + max_rank_complex(spec));
    }
}

TEST_CASE("achievable ranks are the even interval up to the maximum") {
    const auto a = achievable_ranks(fixtures::real_spec({{3, 1}, {2, -1}}));
    CHECK(a == std::set<std::size_t>{0, 2, 4});
    const auto b = achievable_ranks(fixtures::complex_spec({{4, 0, 1}}));
    CHECK(b == std::set<std::size_t>{0, 2, 4, 6, 8});
}

TEST_CASE("errata report flags the purely imaginary odd-cell undershoot") {
    const std::vector<JordanSpec> corpus{
        fixtures::complex_spec({{1, 0, 1}}),
        fixtures::real_spec({{3, 1}, {2, -1}}),
    };
    const auto reports = errata_report(corpus, 25, 0);
    REQUIRE(reports.size() == 2);

    const OracleReport& r0 = reports[0];
    CHECK(r0.formula_rank == 0);
    CHECK(r0.generic_rank == 2);
    CHECK(!r0.agreement);
    REQUIRE(r0.witness.has_value());
    CHECK(rank(*r0.witness) == 2);
    CHECK(membership(*r0.witness, corpus[0], Membership::lyapunov).ok);

    const OracleReport& r1 = reports[1];
    CHECK(r1.agreement);
    CHECK(r1.generic_rank == 4);
    CHECK(r1.closure_ok);
    CHECK(!r1.witness.has_value());
}

TEST_CASE("spec labels are readable and canonical") {
    const std::string l = spec_label(fixtures::real_spec({{3, 1}, {2, -1}}));
    CHECK(!l.empty());
    CHECK(l == spec_label(fixtures::real_spec({{2, -1}, {3, 1}})));
}
