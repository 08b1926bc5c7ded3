#include <doctest.h>

#include "fixtures.hpp"

#include <presym/jordan.hpp>
#include <presym/json_io.hpp>

using namespace presym;

TEST_CASE("spec parsing, validation and canonical order") {
    const std::string text = R"({
        "real_blocks": [{"size": 2, "eig": "-1"}, {"size": 3, "eig": "1"}],
        "complex_blocks": [{"half_size": 4, "re": "0", "im": "-1"}]
    })";
    Permutation u2c;
    const JordanSpec s = parse_spec(text, &u2c);
    REQUIRE(s.real_blocks.size() == 2);
    REQUIRE(s.complex_blocks.size() == 1);
    // +lambda group first, imaginary part normalized positive
    CHECK(s.real_blocks[0].eig == Rational(1));
    CHECK(s.real_blocks[1].eig == Rational(-1));
    CHECK(s.complex_blocks[0].im == Rational(1));
    CHECK(s.n_total() == 13);
    CHECK(s.dim() == 14);
    // the user->canonical row permutation moves the -1 block behind
    CHECK(u2c.images[0] == 3);
    CHECK(u2c.images[2] == 0);

    CHECK_THROWS(parse_spec("{"));
    CHECK_THROWS(parse_spec(R"({"real_blocks": [{"size": 0, "eig": "1"}]})"));
    CHECK_THROWS(parse_spec(
        R"({"complex_blocks": [{"half_size": 1, "re": "1", "im": "0"}]})"));
    // abelian: only size-1 zero-eigenvalue blocks
    CHECK_THROWS(parse_spec(R"({"real_blocks": [{"size": 1, "eig": "0"}]})"));
}

TEST_CASE("jordan matrix and partition layout") {
    const JordanSpec s = fixtures::real_spec({{3, 1}, {2, -1}});
    const RationalMatrix j = build_jordan(s);
    CHECK(j(0, 0) == Rational(1));
    CHECK(j(0, 1) == Rational(1));
    CHECK(j(2, 2) == Rational(1));
    CHECK(j(3, 3) == Rational(-1));
    CHECK(j(3, 4) == Rational(1));
    CHECK(j(2, 3) == Rational(0));

    const BlockPartition p = block_partition(s);
    CHECK(p.count() == 2);
    CHECK(p.total() == 5);
    CHECK(p.offsets[1] == 3);
    CHECK(p.cell_sizes[0] == 1);

    const JordanSpec c = fixtures::complex_spec({{2, 0, 1}});
    const RationalMatrix jc = build_jordan(c);
    // rotation cell [a b; -b a] with the identity-cell superdiagonal
    CHECK(jc(0, 1) == Rational(1));
    CHECK(jc(1, 0) == Rational(-1));
    CHECK(jc(0, 2) == Rational(1));
    CHECK(jc(1, 3) == Rational(1));
    CHECK(jc(0, 3) == Rational(0));
}

TEST_CASE("structural matrices") {
    const JordanSpec s = fixtures::real_spec({{3, 1}, {2, -1}});
    const BlockPartition p = block_partition(s);
    const RationalMatrix rev = reversal_matrix(p);
    CHECK(rev * rev == RationalMatrix::identity(5));
    CHECK(rev(0, 2) == Rational(1));
    CHECK(rev(3, 4) == Rational(1));

    const RationalMatrix alt = alternating_sign_matrix(p);
    CHECK(alt(0, 0) == Rational(1));
    CHECK(alt(1, 1) == Rational(-1));
    CHECK(alt(3, 3) == Rational(1));
    CHECK(alt(4, 4) == Rational(-1));

    // complex blocks reverse and alternate in whole 2x2 cells
    const BlockPartition pc = block_partition(fixtures::complex_spec({{2, 0, 1}}));
    const RationalMatrix revc = reversal_matrix(pc);
    CHECK(revc(0, 2) == Rational(1));
    CHECK(revc(1, 3) == Rational(1));
    const RationalMatrix altc = alternating_sign_matrix(pc);
    CHECK(altc(1, 1) == Rational(1));
    CHECK(altc(2, 2) == Rational(-1));

    const RationalMatrix cf = canonical_form_matrix(5, 4);
    CHECK(cf(0, 2) == Rational(1));
    CHECK(cf(1, 3) == Rational(1));
    CHECK(cf(2, 0) == Rational(-1));
    CHECK(skew_check(cf));
    CHECK(rank(cf) == 4);
    CHECK_THROWS(canonical_form_matrix(4, 3));

    const RationalMatrix sh = shift_matrix(p, 0);
    CHECK(sh(0, 1) == Rational(1));
    CHECK(sh(2, 3) == Rational(0));
    CHECK(sh(3, 3) == Rational(1));
}

TEST_CASE("spec fingerprint is stable under key order") {
    nlohmann::json a = {{"real_blocks", {{{"size", 2}, {"eig", "1"}}}}};
    nlohmann::json b = {{"real_blocks", {{{"eig", "1"}, {"size", 2}}}}};
    CHECK(spec_hash_hex(a) == spec_hash_hex(b)); // objects sort keys
}
