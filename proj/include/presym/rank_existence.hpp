#ifndef PRESYM_RANK_EXISTENCE_HPP
#define PRESYM_RANK_EXISTENCE_HPP

#include <presym/jordan.hpp>

#include <map>
#include <string>
#include <vector>

namespace presym {

/*
 * Closed-form rank bounds for the skew Lyapunov solution space, and the
 * existence predicates they induce for closed 2-forms of prescribed rank.
 */

struct BlockCounts {
    // (size, eigenvalue) -> number of real Jordan blocks
    std::map<std::pair<std::size_t, Rational>, std::size_t> real;
    // (half_size, (a, b)) -> number of complex blocks
    std::map<std::pair<std::size_t, std::pair<Rational, Rational>>, std::size_t> complex;
};

BlockCounts block_counts(const JordanSpec& spec);

// Sum of componentwise absolute differences; vectors must have equal length.
std::size_t manhattan(const std::vector<long long>& u, const std::vector<long long>& v);

// Block-size vectors of the +lambda and -lambda groups, sorted descending
// and zero-padded to a common length.
struct PairingVectors {
    std::vector<long long> plus, minus;
};

// Maximal rank over the real part: N_R minus one per odd-size zero-eigenvalue
// block class with odd multiplicity, minus the pairing distance of every
// +/-lambda class.
std::size_t max_rank_real(const JordanSpec& spec);

// Complex analogue; deductions count double (cells are 2x2).  Evaluated
// literally as printed; the oracle module documents where it undershoots
// (odd half-size purely imaginary blocks admit rotation-cell solutions).
std::size_t max_rank_complex(const JordanSpec& spec);

enum class ExistenceBackend { formula, oracle };

// Does a closed 2-form of rank R exist on the D-dimensional algebra?
// formula: R <= 2 + max_rank_real + max_rank_complex.
// oracle: a verified witness of rank R or R-2 on the Lyapunov side.
bool exists_presymplectic(const JordanSpec& spec, std::size_t R,
                          ExistenceBackend backend = ExistenceBackend::formula);

enum class SymplecticClause { none, c3a, c3b_i, c3b_ii };

struct SymplecticVerdict {
    bool admissible = false;
    SymplecticClause clause = SymplecticClause::none;
    std::string describe() const;
};

// D must be even.  True iff max_rank_real + max_rank_complex >= D - 2;
// the clause reports which branch of the structural characterization holds.
SymplecticVerdict symplectic_admissible(const JordanSpec& spec);

} // namespace presym

#endif // PRESYM_RANK_EXISTENCE_HPP
