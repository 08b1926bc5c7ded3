#ifndef PRESYM_REDUCER_HPP
#define PRESYM_REDUCER_HPP

#include <presym/jordan.hpp>
#include <presym/matrix.hpp>
#include <presym/structured.hpp>

#include <string>
#include <utility>
#include <vector>

namespace presym {

/*
 * Canonical-form pipeline: a maximal-rank skew Lyapunov solution is carried
 * by a commutant congruence S^x C S (x = blockstar) to a signed
 * subpermutation, which is then snapped to exact entries and factored as
 * P^t J_(N,K) P.  The pipeline runs in floating point; exactness is
 * recovered at the end by snapping to the {-1,0,1} grid.
 */

struct ReductionStep {
    std::string rule;      // normalize / sweep / cross_pair / offset_pair
                           // (complex-cell variants carry a C suffix)
    std::size_t l = 0;     // pivot block row
    std::size_t m = 0;     // pivot block column (== l for diagonal pivots)
    std::size_t k = 1;     // pivot diagonal index (cell units)
    double t = 1.0;        // pivot sign
    FloatMatrix transform; // the congruence factor applied at this step
};

struct ReductionResult {
    std::vector<ReductionStep> steps;
    FloatMatrix accumulated_s; // product of all step transforms
    FloatMatrix c_final;       // accumulated_s^x C accumulated_s (pre-snap)
    RationalMatrix a_skew;     // exact skew subpermutation after snapping
    Permutation perm;          // P with P^t J_(N,K) P == a_skew exactly
    std::size_t rank = 0;      // K
    double residual = 0.0;     // max-abs distance of the pre-snap matrix
                               // from the exact canonical target
};

/*
 * Inverse square root in the upper Toeplitz algebra: X with X t X = I,
 * where t is sign * input and sign makes the leading coefficient admissible
 * (positive for scalar cells; principal branch for rotation cells, flipping
 * only a negative real leading cell).  The input's leading cell must be
 * nonzero.  Returns (X, sign).
 */
std::pair<FloatMatrix, double> toeplitz_inv_sqrt(const FloatMatrix& t,
                                                 std::size_t cell = 1);

// Factor an exact skew subpermutation as P^t J_(N,K) P.  Pairs are sorted by
// ascending first index; the +1 member of pair i maps to slot i and its
// partner to slot K/2 + i; unpaired (kernel) rows map to the trailing slots.
std::pair<Permutation, std::size_t> extract_permutation(const RationalMatrix& a);

// Reduce a maximal-rank solution to its canonical representative.
// Throws std::domain_error for inputs outside the maximal-rank regime and
// when the final snap misses the {-1,0,1} grid.
ReductionResult reduce_to_canonical(const StructuredSolution& sol,
                                    const JordanSpec& spec, double tol = 1e-6);

// Structural zero-pattern check of a congruence factor: entries vanish
// outside commutant-admissible blocks, each admissible block is constant
// along its upper diagonals, and rotation cells have rotation form.
bool commutant_structured(const FloatMatrix& s, const JordanSpec& spec,
                          double tol = 1e-6);

/*
 * Moduli class of a symplectic form: the canonical pair list of the reduced
 * principal minor, normalized for the sign freedoms of the congruence group
 * (cross-block pair families are orientation-free; sign patterns of
 * within-block families are sorted among interchangeable blocks; the global
 * scale flip picks the lexicographically larger sign vector).
 */
struct ModuliClass {
    std::size_t rank = 0; // rank of the principal minor (D - 2)
    // Oriented pairs (i,j): the normalized representative has +1 at (i,j).
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    std::string key() const;
    bool operator==(const ModuliClass& o) const {
        return rank == o.rank && pairs == o.pairs;
    }
    bool operator!=(const ModuliClass& o) const { return !(*this == o); }
};

struct ModuliResult {
    ModuliClass cls;
    Permutation perm_d; // e1-stabilizing permutation on D coordinates
    ReductionResult reduction;
};

ModuliResult moduli_class(const RationalMatrix& form, const JordanSpec& spec,
                          double tol = 1e-6);

// Trace export (one JSON document per reduction run).
std::string trace_to_json(const ReductionResult& r);

} // namespace presym

#endif // PRESYM_REDUCER_HPP
