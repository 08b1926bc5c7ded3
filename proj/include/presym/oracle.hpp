#ifndef PRESYM_ORACLE_HPP
#define PRESYM_ORACLE_HPP

#include <presym/jordan.hpp>
#include <presym/matrix.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace presym {

/*
 * Brute-force ground truth, structurally independent of the Toeplitz/Hankel
 * characterizations: the Lyapunov equation is vectorized over the skew
 * coordinates and solved by exact elimination, and the attainable ranks are
 * probed by seeded random sampling of the solution space.
 */

struct OracleReport {
    std::string spec_label;
    std::size_t basis_dim = 0;
    std::size_t generic_rank = 0;
    std::set<std::size_t> achievable;   // witness-verified ranks
    std::size_t formula_rank = 0;
    bool agreement = false;             // formula_rank == generic_rank
    bool closure_ok = false;            // achievable == {0,2,...,generic_rank}
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    // A verified solution whose rank exceeds formula_rank, when one exists.
    std::optional<RationalMatrix> witness;
};

// Exact basis of {B skew : BJ + J^t B = 0}, no structure assumed.  N <= 16.
std::vector<RationalMatrix> dense_solution_space(const JordanSpec& spec);

// Max rank over seeded random integer combinations of the dense basis;
// exact ranks, deterministic per (seed, trial index).  The parallel variant
// distributes trials over OpenMP threads; results merge by max and are
// schedule-independent.
std::size_t generic_rank(const JordanSpec& spec, std::size_t trials = 25,
                         std::uint64_t seed = 0);
std::size_t generic_rank_serial(const JordanSpec& spec, std::size_t trials = 25,
                                std::uint64_t seed = 0);

// Exact rank of the trial combination with the given index (shared by the
// serial and parallel paths).
std::size_t generic_rank_trial(const std::vector<RationalMatrix>& basis,
                               std::uint64_t seed, std::size_t trial);

// Every even rank for which a verified witness exists (construction route:
// construct_max + lower_rank, each checked by dense membership).  N <= 10.
std::set<std::size_t> achievable_ranks(const JordanSpec& spec);

// Formula-vs-oracle comparison for each spec; emitted even on disagreement.
std::vector<OracleReport> errata_report(const std::vector<JordanSpec>& corpus,
                                        std::size_t trials = 25,
                                        std::uint64_t seed = 0);

std::string spec_label(const JordanSpec& spec);

} // namespace presym

#endif // PRESYM_ORACLE_HPP
