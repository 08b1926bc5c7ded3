#include <presym/structured.hpp>

#include <stdexcept>

namespace presym {

namespace {

// Cell count (Toeplitz diagonal count) of block b.
std::size_t cells_of(const BlockPartition& part, std::size_t b) {
    return part.block_sizes[b] / part.cell_sizes[b];
}

} // namespace

bool commutant_pair_allowed(const JordanSpec& spec, std::size_t i, std::size_t j) {
    const std::size_t nr = spec.real_blocks.size();
    const bool ir = i < nr, jr = j < nr;
    if (ir != jr) return false;
    if (ir)
        return spec.real_blocks[i].eig == spec.real_blocks[j].eig;
    const auto& a = spec.complex_blocks[i - nr];
    const auto& b = spec.complex_blocks[j - nr];
    return a.re == b.re && a.im == b.im;
}

bool lyapunov_pair_allowed(const JordanSpec& spec, std::size_t i, std::size_t j) {
    const std::size_t nr = spec.real_blocks.size();
    const bool ir = i < nr, jr = j < nr;
    if (ir != jr) return false;
    if (ir)
        return spec.real_blocks[i].eig == -spec.real_blocks[j].eig;
    const auto& a = spec.complex_blocks[i - nr];
    const auto& b = spec.complex_blocks[j - nr];
    return a.re == -b.re && a.im == b.im;
}

void place_diagonal(RationalMatrix& m, const BlockPartition& part,
                    std::size_t bi, std::size_t bj, std::size_t k,
                    const Rational& alpha, const Rational& beta, bool alternate) {
    const std::size_t cell = part.cell_sizes[bi];
    if (cell != part.cell_sizes[bj])
        throw std::invalid_argument("place_diagonal: mixed cell sizes");
    const std::size_t qi = cells_of(part, bi), qj = cells_of(part, bj);
    const std::size_t q = std::min(qi, qj);
    if (k < 1 || k > q)
        throw std::invalid_argument("place_diagonal: diagonal index out of range");
    const std::size_t ro = part.offsets[bi], co = part.offsets[bj];
    for (std::size_t r = 0; r + k <= q; ++r) {
        const std::size_t c = r + (qj - q) + (k - 1);
        const Rational sign = (alternate && r % 2 == 1) ? Rational(-1) : Rational(1);
        const Rational a = alpha * sign, b = beta * sign;
        if (cell == 1) {
            m(ro + r, co + c) = a;
        } else {
            m(ro + 2 * r, co + 2 * c) = a;
            m(ro + 2 * r, co + 2 * c + 1) = b;
            m(ro + 2 * r + 1, co + 2 * c) = -b;
            m(ro + 2 * r + 1, co + 2 * c + 1) = a;
        }
    }
}

std::vector<RationalMatrix> commutant_basis(const JordanSpec& spec) {
    const BlockPartition part = block_partition(spec);
    std::vector<RationalMatrix> basis;
    for (std::size_t i = 0; i < part.count(); ++i)
        for (std::size_t j = 0; j < part.count(); ++j) {
            if (!commutant_pair_allowed(spec, i, j)) continue;
            const std::size_t q = std::min(cells_of(part, i), cells_of(part, j));
            for (std::size_t k = 1; k <= q; ++k) {
                RationalMatrix m(part.total(), part.total());
                place_diagonal(m, part, i, j, k, Rational(1), Rational(0), false);
                basis.push_back(m);
                if (part.cell_sizes[i] == 2) {
                    RationalMatrix mj(part.total(), part.total());
                    place_diagonal(mj, part, i, j, k, Rational(0), Rational(1), false);
                    basis.push_back(mj);
                }
            }
        }
    // Defensive: every element must actually commute with the Jordan matrix.
    for (const auto& m : basis)
        if (!membership(m, spec, Membership::commutant).ok)
            throw std::logic_error("commutant basis element failed dense verification");
    return basis;
}

std::vector<std::pair<RationalMatrix, DiagonalParam>>
lyapunov_basis_with_params(const JordanSpec& spec) {
    const BlockPartition part = block_partition(spec);
    const std::size_t n = part.total();
    const std::size_t nr = spec.real_blocks.size();
    const RationalMatrix rev = reversal_matrix(part);
    std::vector<std::pair<RationalMatrix, DiagonalParam>> basis;

    auto emit = [&](const RationalMatrix& toeplitz_side, const DiagonalParam& p) {
        // Convert the alternating-Toeplitz side back to the Lyapunov side.
        RationalMatrix b = rev * toeplitz_side;
        if (!membership(b, spec, Membership::lyapunov).ok)
            throw std::logic_error("Lyapunov basis element failed dense verification");
        basis.emplace_back(std::move(b), p);
    };

    for (std::size_t i = 0; i < part.count(); ++i) {
        const std::size_t qi = cells_of(part, i);
        const bool complex_block = part.cell_sizes[i] == 2;

        // Diagonal block: allowed only for eigenvalue 0 (real) or purely
        // imaginary (complex).  A single alternating diagonal k is
        // blockstar-skew iff its run length q-k+1 is even for scalar cells;
        // rotation cells admit the skew cell J2 on odd run lengths.
        if (lyapunov_pair_allowed(spec, i, i)) {
            for (std::size_t k = 1; k <= qi; ++k) {
                const bool even_run = (qi - k + 1) % 2 == 0;
                if (!complex_block && !even_run) continue;
                RationalMatrix m(n, n);
                const Rational alpha = even_run ? Rational(1) : Rational(0);
                const Rational beta = even_run ? Rational(0) : Rational(1);
                place_diagonal(m, part, i, i, k, alpha, beta, true);
                if (blockstar(m, part) != -m)
                    throw std::logic_error("diagonal generator is not blockstar-skew");
                emit(m, DiagonalParam{i, i, k, alpha, beta});
            }
        }

        // Off-diagonal pairs i < j: free diagonal, the (j,i) side follows
        // from blockstar-skewness.
        for (std::size_t j = i + 1; j < part.count(); ++j) {
            if (!lyapunov_pair_allowed(spec, i, j)) continue;
            const std::size_t q = std::min(qi, cells_of(part, j));
            for (std::size_t k = 1; k <= q; ++k) {
                const std::size_t ncells = complex_block ? 2u : 1u;
                for (std::size_t which = 0; which < ncells; ++which) {
                    RationalMatrix m(n, n);
                    const Rational alpha = which == 0 ? Rational(1) : Rational(0);
                    const Rational beta = which == 0 ? Rational(0) : Rational(1);
                    place_diagonal(m, part, i, j, k, alpha, beta, true);
                    RationalMatrix full = m - blockstar(m, part);
                    emit(full, DiagonalParam{i, j, k, alpha, beta});
                }
            }
        }
    }
    return basis;
}

std::vector<RationalMatrix> lyapunov_basis(const JordanSpec& spec) {
    std::vector<RationalMatrix> basis;
    for (auto& [m, p] : lyapunov_basis_with_params(spec)) basis.push_back(m);
    return basis;
}

MembershipResult membership(const RationalMatrix& m, const JordanSpec& spec,
                            Membership which) {
    const RationalMatrix j = build_jordan(spec);
    if (m.rows() != j.rows() || m.cols() != j.cols())
        throw std::invalid_argument("membership: dimension mismatch with spec");
    MembershipResult res;
    if (which == Membership::commutant) {
        res.residual = m * j - j * m;
        res.skew = false;
        res.ok = res.residual.is_zero();
    } else {
        res.residual = m * j + j.transpose() * m;
        res.skew = skew_check(m);
        res.ok = res.skew && res.residual.is_zero();
    }
    return res;
}

StructuredSolution make_solution(const RationalMatrix& m, const JordanSpec& spec,
                                 HankelProfile profile) {
    if (!membership(m, spec, Membership::lyapunov).ok)
        throw std::invalid_argument("make_solution: matrix is not a skew Lyapunov solution");
    StructuredSolution sol;
    sol.matrix = m;
    sol.rank = rank(m);
    sol.profile = std::move(profile);
    return sol;
}

} // namespace presym
