#include <presym/constructor.hpp>

#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace presym {

namespace {

/*
 * Pairing plan: where the maximal-rank construction places its diagonals.
 * Each assignment owns a block (self) or an ordered block pair (cross) and
 * contributes an even amount of rank that can be lowered in fixed steps by
 * sliding the placed diagonal toward the corner.
 */
struct Assignment {
    std::size_t i = 0, j = 0;  // blocks; i == j for self assignments
    std::size_t q = 0;         // min cell count of the two blocks
    bool complex_cells = false;
    bool odd_self = false;     // unpaired odd block (diagonal starts at k=2)
    std::size_t max_contrib = 0;
    std::size_t step = 2;      // rank lost per single slide
    std::size_t contrib = 0;   // chosen contribution (set by the planner)
};

std::vector<Assignment> pairing_plan(const JordanSpec& spec) {
    const BlockPartition part = block_partition(spec);
    const std::size_t nr = spec.real_blocks.size();
    std::vector<Assignment> plan;

    auto cells = [&](std::size_t b) {
        return part.block_sizes[b] / part.cell_sizes[b];
    };
    auto add_self = [&](std::size_t b, bool cx) {
        Assignment a;
        a.i = a.j = b;
        a.q = cells(b);
        a.complex_cells = cx;
        a.odd_self = a.q % 2 == 1;
        // First usable diagonal is k=1 (even q) or k=2 (odd q).  An odd-q
        // rotation block does admit a full k=1 skew-cell solution, but the
        // planner stays on the formula budget; the oracle module reports
        // that excess separately.
        const std::size_t run = a.q % 2 == 1 ? a.q - 1 : a.q;
        a.max_contrib = (cx ? 2 : 1) * run;
        a.step = 2;
        if (a.max_contrib > 0) plan.push_back(a);
    };
    auto add_pair = [&](std::size_t b1, std::size_t b2, bool cx) {
        Assignment a;
        a.i = b1;
        a.j = b2;
        a.q = std::min(cells(b1), cells(b2));
        a.complex_cells = cx;
        a.max_contrib = (cx ? 4 : 2) * a.q;
        a.step = cx ? 4 : 2;
        plan.push_back(a);
    };

    // Real zero-eigenvalue group: even sizes stand alone; odd sizes pair up
    // within their size class; a leftover odd block >= 3 takes k=2; a
    // leftover size-1 block contributes nothing.
    std::map<std::size_t, std::size_t> pending; // size -> waiting block index
    for (std::size_t b = 0; b < nr; ++b) {
        const auto& rb = spec.real_blocks[b];
        if (rb.eig != 0) continue;
        if (rb.size % 2 == 0) {
            add_self(b, false);
        } else if (auto it = pending.find(rb.size); it != pending.end()) {
            add_pair(it->second, b, false);
            pending.erase(it);
        } else {
            pending[rb.size] = b;
        }
    }
    for (const auto& [size, b] : pending)
        if (size >= 3) add_self(b, false);

    // Real +/-lambda classes: pair the +lambda and -lambda blocks in their
    // canonical (descending size) order; unmatched blocks stay zero.
    std::map<Rational, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> classes;
    for (std::size_t b = 0; b < nr; ++b) {
        const auto& rb = spec.real_blocks[b];
        if (rb.eig == 0) continue;
        auto& c = classes[rb.eig < 0 ? Rational(-rb.eig) : rb.eig];
        (rb.eig > 0 ? c.first : c.second).push_back(b);
    }
    for (const auto& [key, c] : classes)
        for (std::size_t t = 0; t < std::min(c.first.size(), c.second.size()); ++t)
            add_pair(c.first[t], c.second[t], false);

    // Complex purely imaginary groups (a = 0), keyed by b: same scheme as
    // the real zero group but in rotation cells (odd self blocks keep k=1).
    std::map<Rational, std::map<std::size_t, std::size_t>> im_pending;
    for (std::size_t b = 0; b < spec.complex_blocks.size(); ++b) {
        const auto& cb = spec.complex_blocks[b];
        if (cb.re != 0) continue;
        const std::size_t blk = nr + b;
        if (cb.half_size % 2 == 0) {
            add_self(blk, true);
        } else {
            auto& pend = im_pending[cb.im];
            if (auto it = pend.find(cb.half_size); it != pend.end()) {
                add_pair(it->second, blk, true);
                pend.erase(it);
            } else {
                pend[cb.half_size] = blk;
            }
        }
    }
    for (const auto& [imv, pend] : im_pending)
        for (const auto& [hs, blk] : pend)
            if (hs >= 2)
                add_self(blk, true); // unpaired odd: k=2 start, rank 2(m-1)

    // Complex +/-a classes keyed by (|a|, b).
    std::map<std::pair<Rational, Rational>,
             std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> cx_classes;
    for (std::size_t b = 0; b < spec.complex_blocks.size(); ++b) {
        const auto& cb = spec.complex_blocks[b];
        if (cb.re == 0) continue;
        auto& c = cx_classes[{cb.re < 0 ? Rational(-cb.re) : cb.re, cb.im}];
        (cb.re > 0 ? c.first : c.second).push_back(nr + b);
    }
    for (const auto& [key, c] : cx_classes)
        for (std::size_t t = 0; t < std::min(c.first.size(), c.second.size()); ++t)
            add_pair(c.first[t], c.second[t], true);

    return plan;
}

// Fix an unpaired odd scalar self block's usable contributions: q odd means
// the run length q-k+1 must be even, i.e. k even, ranks q-1, q-3, ..., 0.
// Everything else steps uniformly by `step` from max_contrib down to 0.

// Materialize the plan with the chosen contributions.
StructuredSolution materialize(const std::vector<Assignment>& plan,
                               const JordanSpec& spec) {
    const BlockPartition part = block_partition(spec);
    const std::size_t n = part.total();
    RationalMatrix toe(n, n);
    HankelProfile profile;

    for (const Assignment& a : plan) {
        if (a.contrib == 0) continue;
        std::size_t k;
        Rational alpha(0), beta(0);
        if (a.i == a.j) {
            const std::size_t run =
                a.complex_cells ? a.contrib / 2 : a.contrib;
            k = a.q - run + 1;
            if (a.complex_cells)
                ((run % 2 == 0) ? alpha : beta) = Rational(1);
            else
                alpha = Rational(1); // run is even by construction
            RationalMatrix m(n, n);
            place_diagonal(m, part, a.i, a.i, k, alpha, beta, true);
            toe = toe + m;
            profile.push_back({a.i, a.i, k, alpha, beta});
        } else {
            const std::size_t run =
                a.complex_cells ? a.contrib / 4 : a.contrib / 2;
            k = a.q - run + 1;
            alpha = Rational(1);
            RationalMatrix m(n, n);
            place_diagonal(m, part, a.i, a.j, k, alpha, beta, true);
            toe = toe + (m - blockstar(m, part));
            profile.push_back({a.i, a.j, k, alpha, beta});
        }
    }

    const RationalMatrix b = reversal_matrix(part) * toe;
    StructuredSolution sol = make_solution(b, spec, std::move(profile));

    std::size_t expected = 0;
    for (const Assignment& a : plan) expected += a.contrib;
    if (sol.rank != expected) {
        std::ostringstream os;
        os << "witness rank " << sol.rank << " != planned " << expected;
        throw std::logic_error(os.str());
    }
    return sol;
}

} // namespace

StructuredSolution construct_max(const JordanSpec& spec) {
    std::vector<Assignment> plan = pairing_plan(spec);
    for (Assignment& a : plan) a.contrib = a.max_contrib;
    StructuredSolution sol = materialize(plan, spec);
    const std::size_t formula = max_rank_real(spec) + max_rank_complex(spec);
    if (sol.rank != formula) {
        std::ostringstream os;
        os << "construct_max rank " << sol.rank << " != formula " << formula;
        throw std::logic_error(os.str());
    }
    return sol;
}

StructuredSolution lower_rank(const StructuredSolution& sol, std::size_t target,
                              const JordanSpec& spec) {
    if (target % 2 != 0)
        throw std::invalid_argument("lower_rank: target must be even");
    if (target > sol.rank)
        throw std::invalid_argument("lower_rank: target exceeds current rank");
    if (target == sol.rank) return sol;

    // Rebuild from the pairing plan at the requested total: sliding a placed
    // diagonal toward the corner is exactly the shift congruence, so every
    // reachable total is a plain allocation problem over the assignments.
    std::vector<Assignment> plan = pairing_plan(spec);
    for (Assignment& a : plan) a.contrib = a.max_contrib;
    std::size_t total = 0;
    for (const Assignment& a : plan) total += a.contrib;
    if (target > total)
        throw std::invalid_argument("lower_rank: target exceeds constructible rank");

    std::size_t deficit = total - target;
    for (auto it = plan.rbegin(); it != plan.rend() && deficit > 0; ++it)
        while (deficit >= it->step && it->contrib >= it->step) {
            it->contrib -= it->step;
            deficit -= it->step;
        }
    if (deficit > 0) {
        // Only step-4 (complex cross) capacity left while the deficit is 2:
        // trade one extra slide of a cross pair against re-raising a step-2
        // assignment.
        for (Assignment& cross : plan) {
            if (deficit == 0) break;
            if (cross.step != 4 || cross.contrib < 4) continue;
            for (Assignment& other : plan) {
                if (&other == &cross || other.step != 2) continue;
                if (other.contrib + 2 <= other.max_contrib) {
                    cross.contrib -= 4;
                    other.contrib += 2;
                    deficit -= 2;
                    break;
                }
            }
        }
    }
    if (deficit > 0)
        throw std::domain_error(
            "lower_rank: target rank unreachable within the structured family "
            "(complex cross pairs change rank in steps of 4)");

    return materialize(plan, spec);
}

namespace {

std::mt19937_64 seeded_rng(std::uint64_t seed) {
    std::seed_seq sq{seed, seed ^ static_cast<std::uint64_t>(0x9e3779b97f4a7c15ULL)};
    return std::mt19937_64(sq);
}

std::vector<Rational> draw_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> d(-3, 3);
    std::vector<Rational> v(n);
    for (auto& x : v) x = Rational(d(rng));
    return v;
}

// rank([B | v]) > rank(B) iff v lies outside the column space of B.
bool in_image(const RationalMatrix& b, const std::vector<Rational>& v) {
    RationalMatrix aug(b.rows(), b.cols() + 1);
    aug.set_block(0, 0, b);
    for (std::size_t i = 0; i < b.rows(); ++i) aug(i, b.cols()) = v[i];
    return rank(aug) == rank(b);
}

RationalMatrix border(const RationalMatrix& b, const std::vector<Rational>& r) {
    const std::size_t n = b.rows();
    RationalMatrix f(n + 1, n + 1);
    f.set_block(1, 1, b);
    for (std::size_t j = 0; j < n; ++j) {
        f(0, j + 1) = r[j];
        f(j + 1, 0) = -r[j];
    }
    return f;
}

} // namespace

LiftedForm lift(const StructuredSolution& sol, std::size_t R,
                const JordanSpec& spec, std::uint64_t seed) {
    const std::size_t n = spec.n_total();
    if (sol.matrix.rows() != n)
        throw std::invalid_argument("lift: solution does not match spec size");
    if (R != sol.rank && R != sol.rank + 2)
        throw std::invalid_argument("lift: rank must be sol.rank or sol.rank + 2");
    if (R > spec.dim())
        throw std::invalid_argument("lift: rank exceeds dimension");

    auto rng = seeded_rng(seed);
    LiftedForm out;
    out.v_in_image = (R == sol.rank);
    constexpr std::size_t max_retries = 8;
    for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
        std::vector<Rational> v;
        if (out.v_in_image) {
            // v = B w is automatically inside the column space.
            const std::vector<Rational> w = draw_vector(rng, n);
            v.assign(n, Rational(0));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    v[i] += sol.matrix(i, j) * w[j];
        } else {
            v = draw_vector(rng, n);
            if (in_image(sol.matrix, v)) continue;
        }
        RationalMatrix f = border(sol.matrix, v);
        if (rank(f) != R) continue;
        out.matrix = std::move(f);
        out.rank = R;
        out.retries = attempt;
        if (!check_closed(out.matrix, spec).closed)
            throw std::logic_error("lift: constructed form is not closed");
        return out;
    }
    throw std::runtime_error("lift: no suitable border vector found after 8 draws");
}

ClosedCheck check_closed(const RationalMatrix& form, const JordanSpec& spec) {
    const std::size_t d = spec.dim();
    if (form.rows() != d || form.cols() != d)
        throw std::invalid_argument("check_closed: form size does not match spec");
    if (!skew_check(form))
        throw std::invalid_argument("check_closed: form is not skew");

    const RationalMatrix j = build_jordan(spec);
    const RationalMatrix b = form.block(1, 1, d - 1, d - 1);
    ClosedCheck res;
    res.residual = b * j + j.transpose() * b;
    res.closed = res.residual.is_zero();

    // Independent route: the full exterior-derivative triple sum.  Brackets:
    // [e_0, e_q] is column q-1 of J in coordinates 1..D-1, all others zero.
    auto omega = [&](std::size_t a, const std::vector<Rational>& w) {
        Rational s(0);
        for (std::size_t t = 0; t < d; ++t) s += form(a, t) * w[t];
        return s;
    };
    auto bracket = [&](std::size_t x, std::size_t y) {
        std::vector<Rational> w(d, Rational(0));
        if (x == y) return w;
        if (x == 0)
            for (std::size_t i = 0; i < d - 1; ++i) w[i + 1] = j(i, y - 1);
        else if (y == 0)
            for (std::size_t i = 0; i < d - 1; ++i) w[i + 1] = -j(i, x - 1);
        return w;
    };
    bool triple_ok = true;
    for (std::size_t x = 0; x < d && triple_ok; ++x)
        for (std::size_t y = x + 1; y < d && triple_ok; ++y)
            for (std::size_t z = y + 1; z < d && triple_ok; ++z) {
                const Rational s = omega(x, bracket(y, z)) +
                                   omega(z, bracket(x, y)) +
                                   omega(y, bracket(z, x));
                if (s != 0) triple_ok = false;
            }
    if (triple_ok != res.closed)
        throw std::logic_error("check_closed: triple sum disagrees with minor equation");
    return res;
}

RationalMatrix apply_equivalence(const RationalMatrix& form, const EquivalenceMap& eq) {
    const std::size_t n = eq.A.rows();
    if (form.rows() != n + 1 || form.cols() != n + 1 || eq.v.size() != n)
        throw std::invalid_argument("apply_equivalence: dimension mismatch");
    if (eq.alpha == 0)
        throw std::invalid_argument("apply_equivalence: alpha must be nonzero");
    if (rank(eq.A) != n)
        throw std::invalid_argument("apply_equivalence: singular commutant part");
    RationalMatrix abar(n + 1, n + 1);
    abar(0, 0) = eq.alpha;
    for (std::size_t i = 0; i < n; ++i) abar(i + 1, 0) = eq.v[i];
    abar.set_block(1, 1, eq.A);
    return congruence(abar, form);
}

RationalMatrix random_commutant(const JordanSpec& spec, std::uint64_t seed) {
    const auto basis = commutant_basis(spec);
    const std::size_t n = spec.n_total();
    auto rng = seeded_rng(seed ^ 0xc0337a37ULL);
    std::uniform_int_distribution<int> d(-4, 4);
    for (int attempt = 0; attempt < 64; ++attempt) {
        RationalMatrix a(n, n);
        for (const auto& e : basis) {
            const int c = d(rng);
            if (c != 0) a = a + e.scaled(Rational(c));
        }
        if (rank(a) == n) return a;
    }
    throw std::runtime_error("random_commutant: no nonsingular sample found");
}

EquivalenceMap random_equivalence(const JordanSpec& spec, std::uint64_t seed) {
    EquivalenceMap eq;
    eq.A = random_commutant(spec, seed);
    auto rng = seeded_rng(seed ^ 0x5ca1ab1eULL);
    std::uniform_int_distribution<int> d(-3, 3);
    const std::size_t n = spec.n_total();
    eq.v.resize(n);
    for (auto& x : eq.v) x = Rational(d(rng));
    int a = 0;
    while (a == 0) a = d(rng);
    eq.alpha = Rational(a);
    return eq;
}

} // namespace presym
