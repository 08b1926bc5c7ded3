#ifndef PRESYM_CONSTRUCTOR_HPP
#define PRESYM_CONSTRUCTOR_HPP

#include <presym/rank_existence.hpp>
#include <presym/structured.hpp>

#include <cstdint>

namespace presym {

/*
 * Explicit witnesses: maximal-rank skew Lyapunov solutions by block pairing,
 * rank lowering by sliding the placed diagonals, and the lift from an N x N
 * solution to a D x D closed 2-form.
 */

struct LiftedForm {
    RationalMatrix matrix; // D x D skew; first row r, first column -r
    std::size_t rank = 0;
    bool v_in_image = true;
    std::size_t retries = 0; // seeded draws consumed picking v
};

struct EquivalenceMap {
    Rational alpha;            // nonzero scale on the distinguished direction
    std::vector<Rational> v;   // length N
    RationalMatrix A;          // N x N, nonsingular, commutes with J
};

// Maximal-rank solution.  Zero-eigenvalue blocks: even sizes take their own
// first diagonal, odd sizes pair with an equal-size partner, an unpaired odd
// block takes its second diagonal (size 1: zero rows).  +/-lambda blocks
// pair in descending size order.  Complex blocks follow the same scheme in
// rotation cells.  All placed parameters are +/-1 and the result's exact
// rank always equals max_rank_real + max_rank_complex.
StructuredSolution construct_max(const JordanSpec& spec);

// Solution of rank exactly `target` (even, <= sol.rank), produced by sliding
// diagonals of the pairing plan toward the block corners.  Complex cross
// pairs lose rank 4 per slide; when the target parity cannot be met the
// slack is traded to a step-2 assignment.  Throws std::domain_error when no
// combination of the structured family reaches the target (possible only
// for specs whose every contribution comes from complex cross pairs).
StructuredSolution lower_rank(const StructuredSolution& sol, std::size_t target,
                              const JordanSpec& spec);

// Border an N x N solution to the D x D form of rank R = sol.rank (v inside
// the column space) or R = sol.rank + 2 (v outside).  Deterministic given
// seed; v entries drawn from [-3,3].
LiftedForm lift(const StructuredSolution& sol, std::size_t R,
                const JordanSpec& spec, std::uint64_t seed = 0);

struct ClosedCheck {
    bool closed = false;
    RationalMatrix residual; // of the minor equation B J + J^t B
};

// Closedness of a D x D skew form: the principal-minor Lyapunov residual,
// cross-checked against the full triple sum of the exterior derivative.
ClosedCheck check_closed(const RationalMatrix& form, const JordanSpec& spec);

// Congruence by [[alpha, 0], [v, A]]; preserves closedness and rank.
RationalMatrix apply_equivalence(const RationalMatrix& form, const EquivalenceMap& eq);

// Seeded nonsingular commutant element / equivalence map (test scrambles).
RationalMatrix random_commutant(const JordanSpec& spec, std::uint64_t seed);
EquivalenceMap random_equivalence(const JordanSpec& spec, std::uint64_t seed);

} // namespace presym

#endif // PRESYM_CONSTRUCTOR_HPP
