#ifndef TESTS_FIXTURES_HPP
#define TESTS_FIXTURES_HPP

#include <presym/jordan.hpp>
#include <presym/matrix.hpp>

#include <initializer_list>
#include <tuple>
#include <utility>
#include <vector>

namespace fixtures {

using presym::JordanSpec;
using presym::Rational;
using presym::RationalMatrix;

inline JordanSpec real_spec(
    std::initializer_list<std::pair<std::size_t, int>> blocks) {
    JordanSpec s;
    for (const auto& [n, e] : blocks) s.real_blocks.push_back({n, Rational(e)});
    return presym::canonical_order(s);
}

inline JordanSpec complex_spec(
    std::initializer_list<std::tuple<std::size_t, int, int>> blocks) {
    JordanSpec s;
    for (const auto& [m, a, b] : blocks)
        s.complex_blocks.push_back({m, Rational(a), Rational(b)});
    return presym::canonical_order(s);
}

inline RationalMatrix matrix_of(std::size_t n,
                                std::initializer_list<int> entries) {
    RationalMatrix m(n, n);
    std::size_t idx = 0;
    for (int v : entries) m(idx / n, idx % n) = Rational(v), ++idx;
    return m;
}

/*
 * Frozen reference matrices for the 5-dimensional two-block real example
 * (sizes 3 and 2, eigenvalues +1/-1) and the 8-dimensional single complex
 * block example.  They live on the reversed (upper alternating Toeplitz)
 * side; the corresponding skew solutions are the block-reversal products.
 */
inline RationalMatrix example_a1() {
    return matrix_of(5, {0, 0, 0, 1, 0,
                         0, 0, 0, 0, -1,
                         0, 0, 0, 0, 0,
                         0, 1, 0, 0, 0,
                         0, 0, -1, 0, 0});
}

inline RationalMatrix example_a2() {
    return matrix_of(5, {0, 0, 0, 0, 1,
                         0, 0, 0, 0, 0,
                         0, 0, 0, 0, 0,
                         0, 0, -1, 0, 0,
                         0, 0, 0, 0, 0});
}

inline RationalMatrix example_b1() {
    return matrix_of(8, {1, 1, 0, 0, 1, 1, 0, 0,
                         -1, 1, 0, 0, -1, 1, 0, 0,
                         0, 0, -1, -1, 0, 0, -1, -1,
                         0, 0, 1, -1, 0, 0, 1, -1,
                         0, 0, 0, 0, 1, 1, 0, 0,
                         0, 0, 0, 0, -1, 1, 0, 0,
                         0, 0, 0, 1, 0, 0, -1, -1,
                         0, 0, 0, 1, 0, 0, 1, -1});
}

inline RationalMatrix example_b2() {
    return matrix_of(8, {0, 0, 0, 0, 1, 1, 0, 0,
                         0, 0, 0, 0, -1, 1, 0, 0,
                         0, 0, 0, 0, 0, 0, -1, -1,
                         0, 0, 0, 0, 0, 0, 1, -1,
                         0, 0, 0, 0, 0, 0, 0, 0,
                         0, 0, 0, 0, 0, 0, 0, 0,
                         0, 0, 0, 0, 0, 0, 0, 0,
                         0, 0, 0, 0, 0, 0, 0, 0});
}

// Exhaustive real-only corpus: block sizes <= 3, eigenvalues in {-1,0,1},
// N <= 6, deduplicated up to canonical order, abelian specs excluded.
std::vector<JordanSpec> small_real_corpus();

} // namespace fixtures

#endif // TESTS_FIXTURES_HPP
