#ifndef PRESYM_JORDAN_HPP
#define PRESYM_JORDAN_HPP

#include <presym/matrix.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace presym {

/*
 * Input data model: a real Jordan normal form given as a list of real blocks
 * J_n(lambda) and complex blocks C_m(a, b) (2x2 rotation cells a+bi, block
 * occupying 2m real rows).  The matrix it describes is the adjoint action
 * defining an almost abelian Lie algebra; everything downstream is phrased
 * in the block partition this spec induces.
 */

struct RealBlock {
    std::size_t size = 0; // n >= 1
    Rational eig;         // lambda
};

struct ComplexBlock {
    std::size_t half_size = 0; // m >= 1; block is 2m x 2m
    Rational re;               // a
    Rational im;               // b, normalized to b > 0
};

struct JordanSpec {
    std::vector<RealBlock> real_blocks;
    std::vector<ComplexBlock> complex_blocks;

    std::size_t n_real() const;    // sum of real block sizes
    std::size_t n_complex() const; // 2 * sum of half sizes
    std::size_t n_total() const { return n_real() + n_complex(); }
    std::size_t dim() const { return n_total() + 1; }

    std::size_t block_count() const {
        return real_blocks.size() + complex_blocks.size();
    }
};

/*
 * Row/column layout induced by a spec: one block per Jordan block, real
 * blocks of scalar size n_i, complex blocks of scalar size 2*m_j.
 * cell_size distinguishes the two regimes (1 = scalars, 2 = rotation cells).
 */
struct BlockPartition {
    std::vector<std::size_t> block_sizes; // scalar rows per block
    std::vector<std::size_t> offsets;     // prefix sums, offsets[i] = start row
    std::vector<std::size_t> cell_sizes;  // 1 for real blocks, 2 for complex

    std::size_t total() const {
        return offsets.empty() ? 0 : offsets.back() + block_sizes.back();
    }
    std::size_t count() const { return block_sizes.size(); }
};

// Parse + validate + canonically order a spec from its JSON document.
// Rejects abelian specs (zero map), nonpositive sizes, and zero imaginary
// parts.  The permutation mapping user row order to canonical row order is
// returned through user_to_canonical when non-null.
JordanSpec parse_spec(const std::string& json_text,
                      Permutation* user_to_canonical = nullptr);

// Canonical block order: real blocks first (eigenvalue 0, sizes descending;
// then each +/-lambda pair, |lambda| ascending, +lambda group before
// -lambda group, sizes descending inside a group), then complex blocks
// (purely imaginary first, b ascending; then +/-a pairs, |a| then b
// ascending, +a group first), with b normalized positive.
JordanSpec canonical_order(const JordanSpec& spec,
                           Permutation* user_to_canonical = nullptr);

// Block partition induced by a canonical spec.
BlockPartition block_partition(const JordanSpec& spec);

// Materialize the N x N Jordan matrix itself.
RationalMatrix build_jordan(const JordanSpec& spec);

// ---- auxiliary structured matrices ----

// Block anti-diagonal reversal: direct sum of per-block reversals.  Complex
// blocks reverse in whole 2x2 cells (I_2 units on the cell anti-diagonal).
RationalMatrix reversal_matrix(const BlockPartition& part);

// Alternating sign matrix: per block diag(1,-1,1,...), in cell units for
// complex blocks (so signs flip every cell row, both scalar rows alike).
RationalMatrix alternating_sign_matrix(const BlockPartition& part);

// Canonical rank-R skew form on D coordinates: J_R (+) 0 with
// J_R = [[0, I_{R/2}], [-I_{R/2}, 0]].  R must be even, 0 <= R <= D.
RationalMatrix canonical_form_matrix(std::size_t D, std::size_t R);

// Upper shift inside block `block` (ones on the first superdiagonal of that
// block, in scalar units), identity elsewhere.
RationalMatrix shift_matrix(const BlockPartition& part, std::size_t block);

// Single-block helpers (scalar size n, cell size s with s | n).
RationalMatrix reversal_block(std::size_t n, std::size_t cell);
RationalMatrix alternating_block(std::size_t n, std::size_t cell);

} // namespace presym

#endif // PRESYM_JORDAN_HPP
