#include <doctest.h>

#include "fixtures.hpp"

#include <presym/rank_existence.hpp>

using namespace presym;

TEST_CASE("manhattan distance") {
    CHECK(manhattan({3, 2, 0}, {2, 2, 1}) == 2);
    CHECK(manhattan({}, {}) == 0);
    CHECK_THROWS(manhattan({1}, {1, 2}));
}

TEST_CASE("maximal rank formula on known specs") {
    CHECK(max_rank_real(fixtures::real_spec({{3, 1}, {2, -1}})) == 4);
    CHECK(max_rank_real(fixtures::real_spec({{2, 0}})) == 2);
    CHECK(max_rank_real(fixtures::real_spec({{3, 0}})) == 2);
    CHECK(max_rank_real(fixtures::real_spec({{3, 0}, {3, 0}})) == 6);
    CHECK(max_rank_real(fixtures::real_spec({{3, 0}, {1, 0}, {1, 0}})) == 4);
    CHECK(max_rank_real(fixtures::real_spec({{2, 1}})) == 0);
    CHECK(max_rank_real(fixtures::real_spec({{2, 1}, {2, -1}})) == 4);

    CHECK(max_rank_complex(fixtures::complex_spec({{4, 0, 1}})) == 8);
    CHECK(max_rank_complex(fixtures::complex_spec({{1, 0, 1}})) == 0);
    CHECK(max_rank_complex(fixtures::complex_spec({{1, 1, 1}})) == 0);
    CHECK(max_rank_complex(fixtures::complex_spec({{1, 1, 1}, {1, -1, 1}})) == 4);
    CHECK(max_rank_complex(fixtures::complex_spec({{2, 1, 1}, {1, -1, 1}})) == 4);
}

TEST_CASE("formula outputs are even and bounded over the small corpus") {
    for (const JordanSpec& spec : fixtures::small_real_corpus()) {
        const std::size_t r = max_rank_real(spec) + max_rank_complex(spec);
        CHECK(r % 2 == 0);
        CHECK(r <= spec.n_total());
    }
}

TEST_CASE("existence predicate: threshold, parity and input validation") {
    const JordanSpec spec = fixtures::real_spec({{3, 1}, {2, -1}}); // max 4, D 6
    CHECK(exists_presymplectic(spec, 0));
    CHECK(exists_presymplectic(spec, 2));
    CHECK(exists_presymplectic(spec, 6));
    CHECK_THROWS(exists_presymplectic(spec, 3));
    CHECK_THROWS(exists_presymplectic(spec, 8));

    const JordanSpec tight = fixtures::real_spec({{2, 1}, {1, 0}}); // max 0, D 4
    CHECK(exists_presymplectic(tight, 2));
    CHECK(!exists_presymplectic(tight, 4));
}

TEST_CASE("oracle backend agrees with the formula away from the errata") {
    const JordanSpec spec = fixtures::real_spec({{3, 0}, {1, 0}, {1, 0}});
    for (std::size_t r = 0; r <= spec.dim(); r += 2)
        CHECK(exists_presymplectic(spec, r, ExistenceBackend::oracle) ==
              exists_presymplectic(spec, r, ExistenceBackend::formula));
}

TEST_CASE("symplectic admissibility and its clauses") {
    SymplecticVerdict v = symplectic_admissible(fixtures::real_spec({{3, 1}, {2, -1}}));
    CHECK(v.admissible);
    CHECK(v.clause == SymplecticClause::c3b_ii);

    v = symplectic_admissible(fixtures::real_spec({{3, 0}, {1, 0}, {1, 0}}));
    CHECK(v.admissible);
    CHECK(v.clause == SymplecticClause::c3a);

    v = symplectic_admissible(fixtures::real_spec({{1, 1}, {2, 0}}));
    CHECK(v.admissible);
    CHECK(v.clause == SymplecticClause::c3b_i);

    v = symplectic_admissible(fixtures::real_spec({{2, 1}, {1, -1}}));
    CHECK(v.admissible);
    CHECK(v.clause == SymplecticClause::c3b_ii);

    v = symplectic_admissible(fixtures::real_spec({{3, 1}, {1, 0}, {1, 0}}));
    CHECK(!v.admissible);

    CHECK_THROWS(symplectic_admissible(fixtures::real_spec({{2, 0}}))); // D odd

    // admissibility is exactly the D-2 threshold over the even-D corpus
    for (const JordanSpec& spec : fixtures::small_real_corpus()) {
        if (spec.dim() % 2 != 0) continue;
        const bool threshold =
            max_rank_real(spec) + max_rank_complex(spec) >= spec.dim() - 2;
        CHECK(symplectic_admissible(spec).admissible == threshold);
    }
}
