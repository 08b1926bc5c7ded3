#ifndef PRESYM_STRUCTURED_HPP
#define PRESYM_STRUCTURED_HPP

#include <presym/jordan.hpp>
#include <presym/matrix.hpp>

#include <optional>
#include <vector>

namespace presym {

/*
 * Structure theory of the two linear problems attached to a Jordan matrix J:
 *
 *   commutant:  A J - J A   = 0   (block upper Toeplitz, blocks allowed only
 *                                  between equal eigenvalues)
 *   Lyapunov:   B J + J^t B = 0, B skew
 *                                 (block lower alternating Hankel, blocks
 *                                  allowed only between negated eigenvalues)
 *
 * Complex blocks carry 2x2 rotation-form cells alpha*I + beta*J2 in place of
 * scalars.  The Lyapunov side is generated on the equivalent upper
 * alternating Toeplitz side and converted through the block reversal P:
 * B is a solution iff P*B is "blockstar-skew" upper alternating Toeplitz.
 */

// One structural parameter: diagonal k (1-based, cell units) of block (bi,bj)
// with cell value alpha*I + beta*J2 (beta meaningful only for complex pairs).
struct DiagonalParam {
    std::size_t bi = 0, bj = 0, k = 1;
    Rational alpha, beta;
};

using ToeplitzProfile = std::vector<DiagonalParam>;
using HankelProfile = std::vector<DiagonalParam>;

struct StructuredSolution {
    RationalMatrix matrix; // N x N, skew, exact Lyapunov solution
    std::size_t rank = 0;
    HankelProfile profile; // generators on the alternating-Toeplitz side
};

enum class Membership { commutant, lyapunov };

struct MembershipResult {
    bool ok = false;
    RationalMatrix residual; // zero when ok
    bool skew = false;       // only meaningful for the Lyapunov check
};

// ---- eigenvalue conditions ----

// May block (i,j) of a commutant element be nonzero?
bool commutant_pair_allowed(const JordanSpec& spec, std::size_t i, std::size_t j);
// May block (i,j) of a Lyapunov solution be nonzero?
bool lyapunov_pair_allowed(const JordanSpec& spec, std::size_t i, std::size_t j);

// ---- block diagonal placement ----

/*
 * Write the constant diagonal k (cell units) of block (bi,bj) into m.
 * Rectangular upper-Toeplitz alignment: with q = min cell counts, diagonal k
 * sits at cell positions (r, r + col_cells - q + k - 1), r = 0..q-k.
 * With `alternate`, cell row r is scaled by (-1)^r (the alternating
 * sign pattern of the Lyapunov side).
 */
void place_diagonal(RationalMatrix& m, const BlockPartition& part,
                    std::size_t bi, std::size_t bj, std::size_t k,
                    const Rational& alpha, const Rational& beta, bool alternate);

// ---- core operators ----

// P m^t P with P the block reversal of the partition.
template <typename T>
Matrix<T> blockstar(const Matrix<T>& m, const BlockPartition& part);

/*
 * Embed a k x k upper Toeplitz matrix (cell size `cell`, k in scalar units)
 * into an n x m upper Toeplitz matrix carrying the same leading diagonals
 * (1 <= i <= k/cell) and zeros beyond.
 */
template <typename T>
Matrix<T> toeplitz_ext(const Matrix<T>& a, std::size_t n, std::size_t m,
                       std::size_t cell = 1);

// ---- bases and membership ----

// Basis of {A : AJ - JA = 0}, one element per free Toeplitz parameter.
std::vector<RationalMatrix> commutant_basis(const JordanSpec& spec);

// Basis of {B skew : BJ + J^t B = 0}, built structurally (every element is
// verified against the dense equations before being returned).
std::vector<RationalMatrix> lyapunov_basis(const JordanSpec& spec);

// Same basis, with the generating parameters attached.
std::vector<std::pair<RationalMatrix, DiagonalParam>>
lyapunov_basis_with_params(const JordanSpec& spec);

MembershipResult membership(const RationalMatrix& m, const JordanSpec& spec,
                            Membership which);

// Wrap an exact Lyapunov solution, computing its rank (throws if m is not a
// solution).
StructuredSolution make_solution(const RationalMatrix& m, const JordanSpec& spec,
                                 HankelProfile profile = {});

// ---- template definitions ----

template <typename T>
Matrix<T> blockstar(const Matrix<T>& m, const BlockPartition& part) {
    if (m.rows() != part.total() || m.cols() != part.total())
        throw std::invalid_argument("blockstar: partition mismatch");
    RationalMatrix pq = reversal_matrix(part);
    Matrix<T> p(pq.rows(), pq.cols());
    for (std::size_t i = 0; i < pq.rows(); ++i)
        for (std::size_t j = 0; j < pq.cols(); ++j)
            if (pq(i, j) != Rational(0)) p(i, j) = T(1);
    return p * m.transpose() * p;
}

template <typename T>
Matrix<T> toeplitz_ext(const Matrix<T>& a, std::size_t n, std::size_t m,
                       std::size_t cell) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("toeplitz_ext: input must be square");
    if (cell == 0 || a.rows() % cell || n % cell || m % cell)
        throw std::invalid_argument("toeplitz_ext: cell size must divide dimensions");
    const std::size_t k = a.rows() / cell;      // diagonals carried
    const std::size_t nc = n / cell, mc = m / cell;
    const std::size_t q = std::min(nc, mc);
    if (k > q)
        throw std::invalid_argument("toeplitz_ext: source larger than target profile");
    Matrix<T> out(n, m);
    for (std::size_t t = 1; t <= k; ++t) {
        // Coefficient cell of diagonal t, read off the source's first row.
        for (std::size_t r = 0; r + t <= q; ++r) {
            const std::size_t c = r + (mc - q) + (t - 1);
            for (std::size_t u = 0; u < cell; ++u)
                for (std::size_t v = 0; v < cell; ++v)
                    out(r * cell + u, c * cell + v) = a(u, (t - 1) * cell + v);
        }
    }
    return out;
}

} // namespace presym

#endif // PRESYM_STRUCTURED_HPP
