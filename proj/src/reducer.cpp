#include <presym/reducer.hpp>

#include <presym/json_io.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace presym {

namespace {

/* ---------------- cell-level and block-level helpers ---------------- */

struct Ctx {
    const JordanSpec* spec = nullptr;
    BlockPartition part;
    RationalMatrix rev_rat{0, 0};
    FloatMatrix rev{0, 0};
    double tolw = 1e-9; // absolute working tolerance (scaled at entry)
    std::size_t nb = 0;

    std::size_t cell(std::size_t b) const { return part.cell_sizes[b]; }
    std::size_t size(std::size_t b) const { return part.block_sizes[b]; }
    std::size_t off(std::size_t b) const { return part.offsets[b]; }
    std::size_t cells(std::size_t b) const { return size(b) / cell(b); }
};

FloatMatrix boxstar(const Ctx& cx, const FloatMatrix& m) {
    return cx.rev * m.transpose() * cx.rev;
}

FloatMatrix get_block(const Ctx& cx, const FloatMatrix& c, std::size_t l,
                      std::size_t m) {
    return c.block(cx.off(l), cx.off(m), cx.size(l), cx.size(m));
}

// Transpose every cell in place (the cell-level conjugation: a I + b J
// becomes a I - b J).  No-op for scalar cells.
FloatMatrix cell_conj(const FloatMatrix& m, std::size_t s) {
    if (s == 1) return m;
    FloatMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i + 1 < m.rows(); i += 2)
        for (std::size_t j = 0; j + 1 < m.cols(); j += 2)
            for (std::size_t u = 0; u < 2; ++u)
                for (std::size_t v = 0; v < 2; ++v)
                    out(i + u, j + v) = m(i + v, j + u);
    return out;
}

FloatMatrix alt_f(std::size_t n, std::size_t s) {
    return float_of(alternating_block(n, s));
}

// Block diagonal repetition of one cell (aI + bJ for s = 2, scalar a else).
FloatMatrix cell_rep(double a, double b, std::size_t n_cells, std::size_t s) {
    FloatMatrix out(n_cells * s, n_cells * s);
    for (std::size_t i = 0; i < n_cells; ++i) {
        out(i * s, i * s) = a;
        if (s == 2) {
            out(i * s + 1, i * s + 1) = a;
            out(i * s, i * s + 1) = b;
            out(i * s + 1, i * s) = -b;
        }
    }
    return out;
}

/*
 * Toeplitz coefficient vectors over the cell algebra (scalars, or rotation
 * cells read as complex numbers).  Index = shift from the leading diagonal;
 * products truncate at the carried length.
 */
using CVec = std::vector<std::complex<double>>;

CVec cvec_mul(const CVec& a, const CVec& b) {
    CVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// Conjugated-and-alternated factor: passing a commutant Toeplitz element
// through the alternating sign matrix flips odd shifts; the blockstar side
// additionally transposes (conjugates) each cell.
CVec cvec_hat_conj(const CVec& a) {
    CVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = (i % 2 == 0) ? std::conj(a[i]) : -std::conj(a[i]);
    return r;
}

FloatMatrix cvec_to_toeplitz(const CVec& x, std::size_t s) {
    const std::size_t w = x.size();
    FloatMatrix out(w * s, w * s);
    for (std::size_t d = 0; d < w; ++d)
        for (std::size_t r = 0; r + d < w; ++r) {
            out(r * s, (r + d) * s) = x[d].real();
            if (s == 2) {
                out(r * s + 1, (r + d) * s + 1) = x[d].real();
                out(r * s, (r + d) * s + 1) = x[d].imag();
                out(r * s + 1, (r + d) * s) = -x[d].imag();
            }
        }
    return out;
}

/*
 * Diagonal-pivot normalization: find X in the cell Toeplitz algebra with
 * hat(conj(X)) W X = e, where e = t for a real leading cell and e = t i for
 * a rotational one.  The leading coefficient fixes |x_0|; each later shift
 * has exactly one real degree of freedom (the imaginary part on odd shifts,
 * the real part on even ones), which is solved by least squares; a residual
 * outside that line means the content is not normalizable and the input is
 * rejected.
 */
struct DiagNorm {
    FloatMatrix x{0, 0};
    double t = 1.0;
    bool jcell = false;
};

DiagNorm solve_diag_norm(const FloatMatrix& wmat, std::size_t s, double tolw) {
    const std::size_t w = wmat.rows() / s;
    CVec wv(w);
    for (std::size_t d = 0; d < w; ++d)
        wv[d] = {wmat(0, d * s), s == 2 ? wmat(0, d * s + 1) : 0.0};
    const double scale = std::max(1.0, max_abs(wmat));
    const double lead_mag = std::abs(wv[0]);
    if (lead_mag <= tolw)
        throw std::domain_error("reduce: zero leading diagonal coefficient");

    DiagNorm out;
    if (std::fabs(wv[0].imag()) <= 1e-7 * lead_mag) {
        out.t = (wv[0].real() > 0) ? 1.0 : -1.0;
        out.jcell = false;
    } else if (std::fabs(wv[0].real()) <= 1e-7 * lead_mag) {
        out.t = (wv[0].imag() > 0) ? 1.0 : -1.0;
        out.jcell = true;
    } else {
        throw std::domain_error(
            "reduce: mixed rotation-cell leading coefficient is outside the "
            "canonical-form regime");
    }
    const std::complex<double> e =
        out.jcell ? std::complex<double>(0.0, out.t)
                  : std::complex<double>(out.t, 0.0);

    CVec x(w, 0.0);
    x[0] = 1.0 / std::sqrt(out.t * (out.jcell ? wv[0].imag() : wv[0].real()));
    for (std::size_t sh = 1; sh < w; ++sh) {
        const CVec f = cvec_mul(cvec_hat_conj(x), cvec_mul(wv, x));
        const std::complex<double> delta = -f[sh];
        const std::complex<double> dir =
            wv[0] * x[0] *
            (sh % 2 == 0 ? std::complex<double>(2.0, 0.0)
                         : std::complex<double>(0.0, 2.0));
        if (s == 1 && sh % 2 == 1) {
            // scalar cells have no imaginary degree of freedom; the
            // alternating parity of the skew structure must leave nothing
            if (std::abs(delta) > 1e3 * tolw * scale)
                throw std::domain_error(
                    "reduce: diagonal content violates the alternating "
                    "parity of the skew structure");
            continue;
        }
        const double y =
            (delta * std::conj(dir)).real() / std::norm(dir);
        const std::complex<double> orth = delta - y * dir;
        if (std::abs(orth) > 1e3 * tolw * scale)
            throw std::domain_error(
                "reduce: rotation-cell diagonal content is outside the "
                "canonical-form regime");
        x[sh] += (sh % 2 == 0) ? std::complex<double>(y, 0.0)
                               : std::complex<double>(0.0, y);
    }
    CVec check = cvec_mul(cvec_hat_conj(x), cvec_mul(wv, x));
    check[0] -= e;
    for (const auto& v : check)
        if (std::abs(v) > 1e-6 * scale)
            throw std::logic_error("solve_diag_norm: verification failed");
    out.x = cvec_to_toeplitz(x, s);
    return out;
}

// Plain Toeplitz-algebra inverse (leading cell must be invertible).
FloatMatrix toeplitz_inv(const FloatMatrix& t, std::size_t cell) {
    const std::size_t w = t.rows() / cell;
    const double a = t(0, 0), b = (cell == 2) ? t(0, 1) : 0.0;
    const double den = a * a + b * b;
    if (den < 1e-300)
        throw std::domain_error("toeplitz_inv: zero leading coefficient");
    const FloatMatrix ci = cell_rep(a / den, -b / den, w, cell);
    FloatMatrix m = ci * t;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= 1.0;
    FloatMatrix x = FloatMatrix::identity(w * cell);
    FloatMatrix pw = FloatMatrix::identity(w * cell);
    double sg = 1.0;
    for (std::size_t j = 1; j < w; ++j) {
        pw = pw * m;
        sg = -sg;
        x = x + pw.scaled(sg);
    }
    return x * ci;
}

// Coefficient cell of diagonal t (1-based, cell units) of block (l,m),
// read off the block's first cell row (alternating sign +).
FloatMatrix coeff_cell(const Ctx& cx, const FloatMatrix& c, std::size_t l,
                       std::size_t m, std::size_t t) {
    const std::size_t s = cx.cell(l);
    const std::size_t ql = cx.cells(l), qm = cx.cells(m);
    const std::size_t q = std::min(ql, qm);
    const std::size_t cc = (qm - q) + (t - 1);
    FloatMatrix out(s, s);
    for (std::size_t u = 0; u < s; ++u)
        for (std::size_t v = 0; v < s; ++v)
            out(u, v) = c(cx.off(l) + u, cx.off(m) + cc * s + v);
    return out;
}

double diag_mag(const Ctx& cx, const FloatMatrix& c, std::size_t l,
                std::size_t m, std::size_t t) {
    const std::size_t s = cx.cell(l);
    const std::size_t ql = cx.cells(l), qm = cx.cells(m);
    const std::size_t q = std::min(ql, qm);
    double best = 0.0;
    for (std::size_t r = 0; r + t <= q; ++r) {
        const std::size_t cc = r + (qm - q) + (t - 1);
        for (std::size_t u = 0; u < s; ++u)
            for (std::size_t v = 0; v < s; ++v)
                best = std::max(best, std::fabs(c(cx.off(l) + r * s + u,
                                                  cx.off(m) + cc * s + v)));
    }
    return best;
}

// First nonzero diagonal (1-based), or 0 when the whole block is clean.
std::size_t first_diag(const Ctx& cx, const FloatMatrix& c, std::size_t l,
                       std::size_t m) {
    const std::size_t q = std::min(cx.cells(l), cx.cells(m));
    for (std::size_t t = 1; t <= q; ++t)
        if (diag_mag(cx, c, l, m, t) > cx.tolw) return t;
    return 0;
}

double tail_mag(const Ctx& cx, const FloatMatrix& c, std::size_t l,
                std::size_t m, std::size_t k) {
    const std::size_t q = std::min(cx.cells(l), cx.cells(m));
    double best = 0.0;
    for (std::size_t t = k; t <= q; ++t)
        best = std::max(best, diag_mag(cx, c, l, m, t));
    return best;
}

double block_mag(const Ctx& cx, const FloatMatrix& c, std::size_t l,
                 std::size_t m) {
    return max_abs(get_block(cx, c, l, m));
}

// Square upper Toeplitz carrying diagonals k..q of block (l,m), with the
// alternating sign stripped (coefficients as they appear on cell row 0).
FloatMatrix compress(const Ctx& cx, const FloatMatrix& c, std::size_t l,
                     std::size_t m, std::size_t k) {
    const std::size_t s = cx.cell(l);
    const std::size_t q = std::min(cx.cells(l), cx.cells(m));
    const std::size_t w = q - k + 1;
    FloatMatrix out(w * s, w * s);
    for (std::size_t d = 1; d <= w; ++d) {
        const FloatMatrix a = coeff_cell(cx, c, l, m, k + d - 1);
        for (std::size_t r = 0; r + d <= w; ++r)
            for (std::size_t u = 0; u < s; ++u)
                for (std::size_t v = 0; v < s; ++v)
                    out(r * s + u, (r + d - 1) * s + v) = a(u, v);
    }
    return out;
}

// Keep only the leading wmax diagonals of a square Toeplitz matrix.
FloatMatrix clamp_toeplitz(const FloatMatrix& w, std::size_t wmax,
                           std::size_t s) {
    if (w.rows() / s <= wmax) return w;
    return w.block(0, 0, wmax * s, wmax * s);
}

// The alternating diagonal pattern t * I^{k+-} of block (l,m) (J_2 cells
// instead of identity cells when jcell is set).
FloatMatrix pattern_block(const Ctx& cx, std::size_t l, std::size_t m,
                          std::size_t k, double t, bool jcell) {
    const std::size_t s = cx.cell(l);
    const std::size_t ql = cx.cells(l), qm = cx.cells(m);
    const std::size_t q = std::min(ql, qm);
    FloatMatrix out(cx.size(l), cx.size(m));
    for (std::size_t r = 0; r + k <= q; ++r) {
        const std::size_t cc = r + (qm - q) + (k - 1);
        const double sg = (r % 2 == 0) ? t : -t;
        if (s == 1) {
            out(r, cc) = sg;
        } else if (!jcell) {
            out(2 * r, 2 * cc) = sg;
            out(2 * r + 1, 2 * cc + 1) = sg;
        } else {
            out(2 * r, 2 * cc + 1) = sg;
            out(2 * r + 1, 2 * cc) = -sg;
        }
    }
    return out;
}

/* ---------------- pipeline state ---------------- */

struct Pivot {
    std::size_t l = 0, m = 0, k = 1;
    double t = 1.0;
    bool jcell = false; // rotation-cell diagonal pivot (J_2 pattern)
    int kind = 0;       // 0 diagonal, 1 equal-size pair, 2 size-diff-1 pair
};

struct State {
    Ctx cx;
    FloatMatrix c{0, 0};
    FloatMatrix sacc{0, 0};
    std::vector<ReductionStep> steps;
};

std::string tag(const State& st, std::size_t l, const char* base) {
    std::string out = base;
    if (st.cx.cell(l) == 2) out += "C";
    return out;
}

void apply_s(State& st, const FloatMatrix& s, const std::string& rule,
             std::size_t l, std::size_t m, std::size_t k, double t) {
    st.c = boxstar(st.cx, s) * st.c * s;
    st.sacc = st.sacc * s;
    st.steps.push_back({rule, l, m, k, t, s});
}

FloatMatrix identity_n(const State& st) {
    return FloatMatrix::identity(st.c.rows());
}

/* ---------------- pivot normalization ---------------- */

void normalize_pivot(State& st, Pivot& p) {
    Ctx& cx = st.cx;
    const std::size_t s = cx.cell(p.l);
    const FloatMatrix w = compress(cx, st.c, p.l, p.m, p.k);
    const std::size_t wc = w.rows() / s;

    if (p.l == p.m) {
        const DiagNorm dn = solve_diag_norm(w, s, cx.tolw);
        p.t = dn.t;
        p.jcell = dn.jcell;
        FloatMatrix sfull = identity_n(st);
        sfull.set_block(cx.off(p.l), cx.off(p.l),
                        toeplitz_ext(dn.x, cx.size(p.l), cx.size(p.l), s));
        apply_s(st, sfull, tag(st, p.l, "normalize"), p.l, p.m, p.k, p.t);
        const FloatMatrix target =
            pattern_block(cx, p.l, p.l, p.k, p.t, p.jcell);
        if (max_abs(get_block(cx, st.c, p.l, p.l) + target.scaled(-1.0)) >
            1e3 * cx.tolw)
            throw std::logic_error("normalize: diagonal pivot failed to normalize");
        return;
    }

    // off-diagonal pivot: one factor per side, hatted factor at position l;
    // an asymmetric variant (identity, Toeplitz inverse) is kept as a
    // fallback when no symmetric splitting lands on the pattern
    auto [x, t] = toeplitz_inv_sqrt(w, s);
    p.jcell = false;
    const FloatMatrix alt = alt_f(wc * s, s);
    const FloatMatrix eye = FloatMatrix::identity(wc * s);
    const FloatMatrix xhat_conj = alt * cell_conj(x, s) * alt;
    const FloatMatrix xhat_plain = alt * x * alt;
    const FloatMatrix winv = toeplitz_inv(w, s);
    struct Variant {
        FloatMatrix xl, xm;
        double t;
    };
    const std::vector<Variant> variants = {{xhat_conj, x, t},
                                           {xhat_plain, x, t},
                                           {x, xhat_conj, t},
                                           {x, xhat_plain, t},
                                           {eye, winv, 1.0},
                                           {alt * cell_conj(winv, s) * alt, eye, 1.0}};
    for (const auto& v : variants) {
        const FloatMatrix target = pattern_block(cx, p.l, p.m, p.k, v.t, false);
        FloatMatrix sfull = identity_n(st);
        sfull.set_block(cx.off(p.l), cx.off(p.l),
                        toeplitz_ext(v.xl, cx.size(p.l), cx.size(p.l), s));
        sfull.set_block(cx.off(p.m), cx.off(p.m),
                        toeplitz_ext(v.xm, cx.size(p.m), cx.size(p.m), s));
        const FloatMatrix ctry = boxstar(cx, sfull) * st.c * sfull;
        if (max_abs(ctry.block(cx.off(p.l), cx.off(p.m), cx.size(p.l),
                               cx.size(p.m)) +
                    target.scaled(-1.0)) <= 1e3 * cx.tolw) {
            p.t = v.t;
            apply_s(st, sfull, tag(st, p.l, "normalize"), p.l, p.m, p.k, p.t);
            return;
        }
    }
    throw std::logic_error("normalize: off-diagonal pivot failed to normalize");
}

/* ---------------- eliminations ---------------- */

// Try an elimination factor with both signs on a copy; keep the better one.
// Returns true when an improvement was committed.
bool try_signed(State& st, FloatMatrix sfull, std::size_t bl, std::size_t bm,
                const FloatMatrix& eblock,
                const std::function<double(const FloatMatrix&)>& measure,
                const std::string& rule, std::size_t l, std::size_t m,
                std::size_t k, double t) {
    const double before = measure(st.c);
    double best = before;
    int best_sign = 0;
    for (int sg : {+1, -1}) {
        sfull.set_block(st.cx.off(bl), st.cx.off(bm),
                        eblock.scaled(static_cast<double>(sg)));
        const FloatMatrix ctry = boxstar(st.cx, sfull) * st.c * sfull;
        const double after = measure(ctry);
        if (after < best) {
            best = after;
            best_sign = sg;
        }
    }
    if (best_sign == 0 || best > 0.9 * before) return false;
    sfull.set_block(st.cx.off(bl), st.cx.off(bm),
                    eblock.scaled(static_cast<double>(best_sign)));
    apply_s(st, sfull, rule, l, m, k, t);
    return true;
}

// Diagonal pivot t I^{k+-} at (l,l): clear diagonals >= k of block row l.
void eliminate_first(State& st, const Pivot& p) {
    Ctx& cx = st.cx;
    const std::size_t s = cx.cell(p.l);
    // (pivot leading cell)^{-1}: t I or (t J)^{-1} = -t J
    const double pa = p.jcell ? 0.0 : p.t;
    const double pb = p.jcell ? -p.t : 0.0;
    for (int iter = 0; iter < 40; ++iter) {
        FloatMatrix sfull = identity_n(st);
        bool dirty = false;
        for (std::size_t j = 0; j < cx.nb; ++j) {
            if (j == p.l || cx.cell(j) != s) continue;
            const std::size_t q = std::min(cx.cells(p.l), cx.cells(j));
            if (q < p.k) continue;
            if (tail_mag(cx, st.c, p.l, j, p.k) <= cx.tolw) continue;
            const FloatMatrix w = compress(cx, st.c, p.l, j, p.k);
            const FloatMatrix e =
                cell_rep(pa, pb, w.rows() / s, s) * w.scaled(-1.0);
            sfull.set_block(cx.off(p.l), cx.off(j),
                            toeplitz_ext(e, cx.size(p.l), cx.size(j), s));
            dirty = true;
        }
        if (!dirty) return;
        apply_s(st, sfull, tag(st, p.l, "sweep"), p.l, p.l, p.k, p.t);
    }
    throw std::logic_error("sweep: elimination did not converge");
}

// Off-diagonal pivot t I^{k+-} at (l,m), equal sizes: kill C_ll and C_mm,
// then the rest of block rows l and m.
void eliminate_second(State& st, const Pivot& p) {
    Ctx& cx = st.cx;
    const std::size_t s = cx.cell(p.l);
    const std::string lem = tag(st, p.l, "cross_pair");

    // phase one: the C_ll / C_mm cleanup loop
    for (int iter = 0;; ++iter) {
        const double dl = tail_mag(cx, st.c, p.l, p.l, p.k);
        const double dm = tail_mag(cx, st.c, p.m, p.m, p.k);
        if (dl <= cx.tolw && dm <= cx.tolw) break;
        if (iter >= 40)
            throw std::logic_error("cross_pair: diagonal cleanup stalled");
        bool moved = false;
        if (dl > cx.tolw) {
            const FloatMatrix w = compress(cx, st.c, p.l, p.l, p.k);
            const FloatMatrix e =
                toeplitz_ext(w.scaled(p.t / 2.0), cx.size(p.m), cx.size(p.l), s);
            auto measure = [&](const FloatMatrix& c) {
                return tail_mag(cx, c, p.l, p.l, p.k);
            };
            moved |= try_signed(st, identity_n(st), p.m, p.l, e, measure, lem,
                                p.l, p.m, p.k, p.t);
        }
        if (dm > cx.tolw) {
            const FloatMatrix w = compress(cx, st.c, p.m, p.m, p.k);
            const FloatMatrix e =
                toeplitz_ext(w.scaled(p.t / 2.0), cx.size(p.l), cx.size(p.m), s);
            auto measure = [&](const FloatMatrix& c) {
                return tail_mag(cx, c, p.m, p.m, p.k);
            };
            moved |= try_signed(st, identity_n(st), p.l, p.m, e, measure, lem,
                                p.l, p.m, p.k, p.t);
        }
        if (!moved)
            throw std::logic_error("cross_pair: diagonal cleanup stalled");
    }

    // phase two: clear the remaining blocks of rows l and m
    for (int iter = 0; iter < 40; ++iter) {
        bool dirty = false;
        for (std::size_t j = 0; j < cx.nb; ++j) {
            if (j == p.l || j == p.m || cx.cell(j) != s) continue;
            // junk at (l,j) is killed through the pivot by a factor at (m,j)
            const struct {
                std::size_t src, via;
            } lanes[2] = {{p.l, p.m}, {p.m, p.l}};
            for (const auto& lane : lanes) {
                const std::size_t q = std::min(cx.cells(lane.src), cx.cells(j));
                if (q < p.k) continue;
                if (tail_mag(cx, st.c, lane.src, j, p.k) <= cx.tolw) continue;
                FloatMatrix w = compress(cx, st.c, lane.src, j, p.k);
                w = clamp_toeplitz(
                    w, std::min(cx.cells(lane.via), cx.cells(j)) - p.k + 1, s);
                const FloatMatrix e = toeplitz_ext(
                    w.scaled(-p.t), cx.size(lane.via), cx.size(j), s);
                auto measure = [&](const FloatMatrix& c) {
                    return tail_mag(cx, c, lane.src, j, p.k);
                };
                dirty |= try_signed(st, identity_n(st), lane.via, j, e, measure,
                                    lem, p.l, p.m, p.k, p.t);
            }
        }
        if (!dirty) return;
    }
    throw std::logic_error("cross_pair: row cleanup did not converge");
}

// Off-diagonal pivot t I^{1+-} at (l,m) with cells(l) = cells(m) + 1.
void eliminate_special(State& st, const Pivot& p) {
    Ctx& cx = st.cx;
    const std::size_t s = cx.cell(p.l);
    const std::string lem = tag(st, p.l, "offset_pair");

    for (int iter = 0;; ++iter) {
        const double dl = block_mag(cx, st.c, p.l, p.l);
        const double dm = block_mag(cx, st.c, p.m, p.m);
        if (dl <= cx.tolw && dm <= cx.tolw) break;
        if (iter >= 40)
            throw std::logic_error("offset_pair: diagonal cleanup stalled");
        bool moved = false;
        if (dl > cx.tolw && cx.cells(p.l) >= 2) {
            const FloatMatrix w = compress(cx, st.c, p.l, p.l, 2);
            const FloatMatrix e =
                toeplitz_ext(w.scaled(p.t / 2.0), cx.size(p.m), cx.size(p.l), s);
            auto measure = [&](const FloatMatrix& c) {
                return block_mag(cx, c, p.l, p.l);
            };
            moved |= try_signed(st, identity_n(st), p.m, p.l, e, measure, lem,
                                p.l, p.m, p.k, p.t);
        }
        if (dm > cx.tolw && cx.cells(p.m) >= 2) {
            const FloatMatrix w = compress(cx, st.c, p.m, p.m, 2);
            const FloatMatrix e =
                toeplitz_ext(w.scaled(p.t / 2.0), cx.size(p.l), cx.size(p.m), s);
            auto measure = [&](const FloatMatrix& c) {
                return block_mag(cx, c, p.m, p.m);
            };
            moved |= try_signed(st, identity_n(st), p.l, p.m, e, measure, lem,
                                p.l, p.m, p.k, p.t);
        }
        if (!moved)
            throw std::logic_error("offset_pair: diagonal cleanup stalled");
    }

    // remaining blocks of rows l and m, as in the equal-size case
    for (int iter = 0; iter < 40; ++iter) {
        bool dirty = false;
        for (std::size_t j = 0; j < cx.nb; ++j) {
            if (j == p.l || j == p.m || cx.cell(j) != s) continue;
            const struct {
                std::size_t src, via;
            } lanes[2] = {{p.l, p.m}, {p.m, p.l}};
            for (const auto& lane : lanes) {
                if (block_mag(cx, st.c, lane.src, j) <= cx.tolw) continue;
                FloatMatrix w = compress(cx, st.c, lane.src, j, 1);
                w = clamp_toeplitz(w, std::min(cx.cells(lane.via), cx.cells(j)),
                                   s);
                const FloatMatrix e = toeplitz_ext(
                    w.scaled(-p.t), cx.size(lane.via), cx.size(j), s);
                auto measure = [&](const FloatMatrix& c) {
                    return block_mag(cx, c, lane.src, j);
                };
                dirty |= try_signed(st, identity_n(st), lane.via, j, e, measure,
                                    lem, p.l, p.m, p.k, p.t);
            }
        }
        if (!dirty) return;
    }
    throw std::logic_error("offset_pair: row cleanup did not converge");
}

void run_pivot(State& st, Pivot& p) {
    normalize_pivot(st, p);
    if (p.kind == 0)
        eliminate_first(st, p);
    else if (p.kind == 1)
        eliminate_second(st, p);
    else
        eliminate_special(st, p);
}

/* ---------------- pivot selection ---------------- */

// Deterministic pivot choice for block row l: minimal first nonzero
// diagonal; ties prefer the diagonal block, then an equal-size partner,
// then a size-difference-one partner (which only qualifies at diagonal 1).
bool choose_pivot(const State& st, std::size_t l,
                  const std::vector<bool>& processed, Pivot& out) {
    const Ctx& cx = st.cx;
    bool found = false;
    auto consider = [&](std::size_t j, std::size_t k, int kind) {
        if (k == 0) return;
        if (!found || k < out.k || (k == out.k && kind < out.kind) ||
            (k == out.k && kind == out.kind && j < out.m)) {
            out.l = l;
            out.m = j;
            out.k = k;
            out.kind = kind;
            found = true;
        }
    };
    consider(l, first_diag(cx, st.c, l, l), 0);
    for (std::size_t j = 0; j < cx.nb; ++j) {
        if (j == l || processed[j] || cx.cell(j) != cx.cell(l)) continue;
        const std::size_t k = first_diag(cx, st.c, l, j);
        if (k == 0) continue;
        if (cx.cells(j) == cx.cells(l)) {
            consider(j, k, 1);
        } else if (cx.cells(l) == cx.cells(j) + 1 && k == 1) {
            consider(j, k, 2);
        }
    }
    return found;
}

} // namespace

/* ---------------- public operations ---------------- */

std::pair<FloatMatrix, double> toeplitz_inv_sqrt(const FloatMatrix& t,
                                                 std::size_t cell) {
    if (t.rows() != t.cols() || cell == 0 || t.rows() % cell)
        throw std::invalid_argument("toeplitz_inv_sqrt: bad dimensions");
    const std::size_t w = t.rows() / cell;
    const double a = t(0, 0);
    const double b = (cell == 2) ? t(0, 1) : 0.0;
    const double lead = std::hypot(a, b);
    if (lead < 1e-300)
        throw std::domain_error("toeplitz_inv_sqrt: zero leading coefficient");
    // sign choice: positive real leading coefficient for scalar cells; for
    // rotation cells flip only a negative real one (principal branch
    // handles every other direction)
    double sign = 1.0;
    if (std::fabs(b) <= 1e-12 * lead && a < 0) sign = -1.0;
    const double ca = sign * a, cb = sign * b;
    const double den = ca * ca + cb * cb;

    // M = c^{-1} (sign*t) - I is nilpotent up to rounding
    const FloatMatrix ci = cell_rep(ca / den, -cb / den, w, cell);
    FloatMatrix m = ci * t.scaled(sign);
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= 1.0;

    FloatMatrix x0 = FloatMatrix::identity(w * cell);
    FloatMatrix pw = FloatMatrix::identity(w * cell);
    double coef = 1.0;
    for (std::size_t j = 1; j < w; ++j) {
        pw = pw * m;
        coef *= (-0.5 - static_cast<double>(j - 1)) / static_cast<double>(j);
        x0 = x0 + pw.scaled(coef);
    }
    // principal inverse square root of the leading cell
    FloatMatrix cs(0, 0);
    if (cell == 1) {
        cs = cell_rep(1.0 / std::sqrt(ca), 0.0, w, 1);
    } else {
        const double r = std::hypot(ca, cb), th = std::atan2(cb, ca);
        const double s0 = 1.0 / std::sqrt(r);
        cs = cell_rep(s0 * std::cos(th / 2.0), -s0 * std::sin(th / 2.0), w, 2);
    }
    FloatMatrix x = cs * x0;
    if (max_abs(x * t.scaled(sign) * x + FloatMatrix::identity(w * cell).scaled(-1.0)) >
        1e-7 * std::max(1.0, max_abs(t)))
        throw std::logic_error("toeplitz_inv_sqrt: verification failed");
    return {x, sign};
}

std::pair<Permutation, std::size_t> extract_permutation(const RationalMatrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("extract_permutation: not square");
    if (!skew_check(a))
        throw std::invalid_argument("extract_permutation: matrix not skew");
    std::vector<std::pair<std::size_t, std::size_t>> pairs; // (+1 row, col)
    std::vector<int> used(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Rational& v = a(i, j);
            if (v == Rational(0)) continue;
            if (v != Rational(1) && v != Rational(-1))
                throw std::invalid_argument(
                    "extract_permutation: entries must be -1, 0 or 1");
            if (used[i] || used[j])
                throw std::invalid_argument(
                    "extract_permutation: row with two nonzero entries");
            used[i] = used[j] = 1;
            if (v == Rational(1))
                pairs.emplace_back(i, j);
            else
                pairs.emplace_back(j, i);
        }
    std::sort(pairs.begin(), pairs.end());
    const std::size_t r = pairs.size();
    std::vector<std::size_t> images(n, n);
    for (std::size_t i = 0; i < r; ++i) {
        images[pairs[i].first] = i;
        images[pairs[i].second] = r + i;
    }
    std::size_t slot = 2 * r;
    for (std::size_t i = 0; i < n; ++i)
        if (!used[i]) images[i] = slot++;
    Permutation perm{images};
    const RationalMatrix pm = perm.matrix<Rational>();
    if (!(pm.transpose() * canonical_form_matrix(n, 2 * r) * pm == a))
        throw std::logic_error("extract_permutation: factorization failed");
    return {perm, 2 * r};
}

ReductionResult reduce_to_canonical(const StructuredSolution& sol,
                                    const JordanSpec& spec, double tol) {
    State st;
    st.cx.spec = &spec;
    st.cx.part = block_partition(spec);
    st.cx.rev_rat = reversal_matrix(st.cx.part);
    st.cx.rev = float_of(st.cx.rev_rat);
    st.cx.nb = st.cx.part.count();
    const std::size_t n = spec.n_total();
    if (sol.matrix.rows() != n)
        throw std::invalid_argument("reduce: solution does not match the spec");

    // maximal-rank regime: full-rank rotation part, deficiency at most one
    // (the odd-dimension kernel row) on the scalar part
    const std::size_t nr = spec.n_real(), ncx = spec.n_complex();
    if (nr > 0) {
        const std::size_t rr = rank(sol.matrix.block(0, 0, nr, nr));
        const std::size_t need = (nr % 2 == 0) ? nr : nr - 1;
        if (rr != need)
            throw std::domain_error("reduce: non-maximal-rank input");
    }
    if (ncx > 0) {
        if (rank(sol.matrix.block(nr, nr, ncx, ncx)) != ncx)
            throw std::domain_error("reduce: non-maximal-rank input");
    }

    st.c = float_of(st.cx.rev_rat * sol.matrix);
    st.sacc = FloatMatrix::identity(n);
    const double scale = std::max(1.0, max_abs(st.c));
    st.cx.tolw = 1e-9 * scale;

    // first pass: process pivots globally by ascending diagonal index (ties
    // prefer diagonal pivots, then equal-size partners, then the smallest
    // block indices); remaining rows are kernel rows
    std::vector<bool> processed(st.cx.nb, false);
    std::vector<Pivot> pivots;
    for (;;) {
        Pivot best;
        bool found = false;
        for (std::size_t l = 0; l < st.cx.nb; ++l) {
            if (processed[l]) continue;
            Pivot p;
            if (!choose_pivot(st, l, processed, p)) continue;
            if (!found ||
                std::tie(p.k, p.kind, p.l, p.m) <
                    std::tie(best.k, best.kind, best.l, best.m)) {
                best = p;
                found = true;
            }
        }
        if (!found) break;
        run_pivot(st, best);
        processed[best.l] = processed[best.m] = true;
        pivots.push_back(best);
    }

    // sweep to fixpoint: renormalize drifted pivots, re-run eliminations
    const auto target_matrix = [&]() {
        FloatMatrix up(n, n), full(n, n);
        for (const Pivot& p : pivots)
            if (p.l != p.m)
                up.set_block(st.cx.off(p.l), st.cx.off(p.m),
                             pattern_block(st.cx, p.l, p.m, p.k, p.t, p.jcell));
        full = up + boxstar(st.cx, up).scaled(-1.0);
        for (const Pivot& p : pivots)
            if (p.l == p.m)
                full.set_block(st.cx.off(p.l), st.cx.off(p.l),
                               pattern_block(st.cx, p.l, p.l, p.k, p.t,
                                             p.jcell));
        return full;
    };
    double prev_dev = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < 25; ++sweep) {
        const double dev = max_abs(st.c + target_matrix().scaled(-1.0));
        if (dev <= 10 * st.cx.tolw) break;
        if (dev > 0.9 * prev_dev)
            throw std::domain_error("reduce: reduction did not converge");
        prev_dev = dev;
        for (Pivot& p : pivots) {
            const FloatMatrix pat =
                pattern_block(st.cx, p.l, p.m, p.k, p.t, p.jcell);
            if (max_abs(get_block(st.cx, st.c, p.l, p.m) + pat.scaled(-1.0)) >
                st.cx.tolw)
                run_pivot(st, p);
            else if (p.kind == 0)
                eliminate_first(st, p);
            else if (p.kind == 1)
                eliminate_second(st, p);
            else
                eliminate_special(st, p);
        }
    }

    ReductionResult out;
    out.steps = std::move(st.steps);
    out.accumulated_s = st.sacc;
    out.c_final = st.c;
    const FloatMatrix b_final = st.cx.rev * st.c;
    out.a_skew = rational_snap(b_final, {Rational(-1), Rational(0), Rational(1)}, tol);
    if (!skew_check(out.a_skew))
        throw std::domain_error("reduce: snapped matrix is not skew");
    auto [perm, k] = extract_permutation(out.a_skew);
    out.perm = perm;
    out.rank = k;
    out.residual = max_abs(b_final + float_of(out.a_skew).scaled(-1.0));
    return out;
}

bool commutant_structured(const FloatMatrix& s, const JordanSpec& spec,
                          double tol) {
    const BlockPartition part = block_partition(spec);
    if (s.rows() != part.total() || s.cols() != part.total()) return false;
    const double bound = tol * std::max(1.0, max_abs(s));
    for (std::size_t bi = 0; bi < part.count(); ++bi)
        for (std::size_t bj = 0; bj < part.count(); ++bj) {
            const std::size_t oi = part.offsets[bi], oj = part.offsets[bj];
            const std::size_t ni = part.block_sizes[bi], nj = part.block_sizes[bj];
            const bool allowed = commutant_pair_allowed(spec, bi, bj);
            const std::size_t ci = part.cell_sizes[bi];
            if (!allowed || part.cell_sizes[bi] != part.cell_sizes[bj]) {
                for (std::size_t r = 0; r < ni; ++r)
                    for (std::size_t c = 0; c < nj; ++c)
                        if (std::fabs(s(oi + r, oj + c)) > bound) return false;
                continue;
            }
            const std::size_t qi = ni / ci, qj = nj / ci;
            const std::size_t q = std::min(qi, qj);
            // collect the allowed diagonal cell positions
            std::vector<std::vector<int>> on(qi, std::vector<int>(qj, 0));
            for (std::size_t k = 1; k <= q; ++k)
                for (std::size_t r = 0; r + k <= q; ++r)
                    on[r][r + (qj - q) + (k - 1)] = static_cast<int>(k);
            for (std::size_t rc = 0; rc < qi; ++rc)
                for (std::size_t cc = 0; cc < qj; ++cc) {
                    if (!on[rc][cc]) {
                        for (std::size_t u = 0; u < ci; ++u)
                            for (std::size_t v = 0; v < ci; ++v)
                                if (std::fabs(s(oi + rc * ci + u,
                                                oj + cc * ci + v)) > bound)
                                    return false;
                        continue;
                    }
                    // constancy along the diagonal + rotation cell form
                    const std::size_t k = static_cast<std::size_t>(on[rc][cc]);
                    const std::size_t r0 = 0, c0 = (qj - q) + (k - 1);
                    for (std::size_t u = 0; u < ci; ++u)
                        for (std::size_t v = 0; v < ci; ++v)
                            if (std::fabs(s(oi + rc * ci + u, oj + cc * ci + v) -
                                          s(oi + r0 * ci + u, oj + c0 * ci + v)) >
                                bound)
                                return false;
                    if (ci == 2) {
                        if (std::fabs(s(oi + rc * 2, oj + cc * 2) -
                                      s(oi + rc * 2 + 1, oj + cc * 2 + 1)) > bound)
                            return false;
                        if (std::fabs(s(oi + rc * 2, oj + cc * 2 + 1) +
                                      s(oi + rc * 2 + 1, oj + cc * 2)) > bound)
                            return false;
                    }
                }
        }
    return true;
}

/* ---------------- moduli classes ---------------- */

std::string ModuliClass::key() const {
    std::ostringstream os;
    os << "rank=" << rank << ";";
    for (const auto& [i, j] : pairs) os << i << ">" << j << ";";
    return os.str();
}

ModuliResult moduli_class(const RationalMatrix& form, const JordanSpec& spec,
                          double tol) {
    const std::size_t d = spec.dim(), n = spec.n_total();
    if (form.rows() != d || form.cols() != d)
        throw std::invalid_argument("moduli_class: dimension mismatch");
    if (d % 2 != 0 || rank(form) != d)
        throw std::domain_error("moduli_class: form is not symplectic");
    const RationalMatrix minor = form.block(1, 1, n, n);
    const StructuredSolution sol = make_solution(minor, spec);

    ModuliResult out;
    out.reduction = reduce_to_canonical(sol, spec, tol);

    const BlockPartition part = block_partition(spec);
    auto block_of = [&](std::size_t row) {
        std::size_t b = 0;
        while (b + 1 < part.count() && part.offsets[b + 1] <= row) ++b;
        return b;
    };

    // positional pairs with their raw orientation sign
    struct RawPair {
        std::size_t i, j; // i < j
        int sign;         // a(i,j)
    };
    struct Family {
        std::size_t bi, bj;
        std::vector<RawPair> members; // sorted by i
    };
    std::vector<RawPair> raw;
    const RationalMatrix& a = out.reduction.a_skew;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (a(i, j) == Rational(0)) continue;
            raw.push_back({i, j, (a(i, j) == Rational(1)) ? 1 : -1});
        }

    // interchangeability key of a block hosting a within-block family
    auto block_ident = [&](std::size_t b, const Family& f) {
        std::ostringstream os;
        if (b < spec.real_blocks.size())
            os << "R" << spec.real_blocks[b].size << ","
               << format_rational(spec.real_blocks[b].eig);
        else {
            const auto& cb = spec.complex_blocks[b - spec.real_blocks.size()];
            os << "C" << cb.half_size << "," << format_rational(cb.re) << ","
               << format_rational(cb.im);
        }
        // relative pair pattern inside the block
        const int lead = f.members.front().sign;
        for (const auto& mb : f.members)
            os << "|" << mb.i - part.offsets[b] << "-" << mb.j - part.offsets[b]
               << "x" << mb.sign * lead;
        return os.str();
    };

    // Normalize a raw pair list for the sign freedoms of the congruence
    // group and return the oriented, sorted pair positions.
    auto normalize = [&](const std::vector<RawPair>& input) {
        std::map<std::pair<std::size_t, std::size_t>, Family> fams;
        for (const RawPair& rp : input) {
            const auto key = std::make_pair(block_of(rp.i), block_of(rp.j));
            auto& f = fams[key];
            f.bi = key.first;
            f.bj = key.second;
            f.members.push_back(rp);
        }
        for (auto& [key, f] : fams)
            std::sort(f.members.begin(), f.members.end(),
                      [](const RawPair& x, const RawPair& y) {
                          return std::tie(x.i, x.j) < std::tie(y.i, y.j);
                      });

        // cross-block families: orientation free, normalize the lead to +1
        // within-block families: record lead signs per interchange group
        std::map<std::string, std::vector<std::size_t>> groups; // key -> blocks
        std::map<std::size_t, int> lead_sign;                   // block -> sign
        for (auto& [key, f] : fams) {
            if (f.bi != f.bj) {
                const int lead = f.members.front().sign;
                if (lead < 0)
                    for (auto& mb : f.members) mb.sign = -mb.sign;
            } else {
                lead_sign[f.bi] = f.members.front().sign;
                groups[block_ident(f.bi, f)].push_back(f.bi);
            }
        }
        // sort signs descending among interchangeable blocks, then settle the
        // global scale flip by picking the lexicographically larger sign vector
        auto assigned = [&](int flip) {
            std::map<std::size_t, int> sig;
            for (const auto& [gkey, blocks] : groups) {
                std::vector<int> signs;
                for (std::size_t b : blocks) signs.push_back(flip * lead_sign[b]);
                std::sort(signs.rbegin(), signs.rend());
                for (std::size_t i = 0; i < blocks.size(); ++i)
                    sig[blocks[i]] = signs[i];
            }
            return sig;
        };
        const auto plus = assigned(+1), minus = assigned(-1);
        std::vector<int> vp, vm;
        for (const auto& [b, s] : plus) vp.push_back(s);
        for (const auto& [b, s] : minus) vm.push_back(s);
        const auto& chosen = (vm > vp) ? minus : plus;

        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (const auto& [key, f] : fams)
            for (const auto& mb : f.members) {
                int sg = mb.sign;
                if (f.bi == f.bj)
                    sg = mb.sign * f.members.front().sign * chosen.at(f.bi);
                if (sg > 0)
                    pairs.emplace_back(mb.i, mb.j);
                else
                    pairs.emplace_back(mb.j, mb.i);
            }
        std::sort(pairs.begin(), pairs.end(),
                  [](const auto& x, const auto& y) {
                      return std::minmax(x.first, x.second) <
                             std::minmax(y.first, y.second);
                  });
        return pairs;
    };

    // Relabeling freedom: identical Jordan blocks may be permuted by the
    // congruence group.  Enumerate the relabelings inside each group of
    // identical blocks and keep the lexicographically smallest normalized
    // pair list.
    auto block_data = [&](std::size_t b) {
        std::ostringstream os;
        if (b < spec.real_blocks.size())
            os << "R" << spec.real_blocks[b].size << ","
               << format_rational(spec.real_blocks[b].eig);
        else {
            const auto& cb = spec.complex_blocks[b - spec.real_blocks.size()];
            os << "C" << cb.half_size << "," << format_rational(cb.re) << ","
               << format_rational(cb.im);
        }
        return os.str();
    };
    std::map<std::string, std::vector<std::size_t>> same_blocks;
    for (std::size_t b = 0; b < part.count(); ++b)
        same_blocks[block_data(b)].push_back(b);
    std::vector<std::vector<std::size_t>> interchange;
    std::size_t combos = 1;
    for (const auto& [key, blocks] : same_blocks)
        if (blocks.size() > 1) {
            interchange.push_back(blocks);
            for (std::size_t t = 2; t <= blocks.size(); ++t) combos *= t;
        }
    if (combos > 40320)
        throw std::domain_error(
            "moduli_class: too many interchangeable blocks to normalize");

    std::vector<std::size_t> relabel(part.count());
    for (std::size_t b = 0; b < part.count(); ++b) relabel[b] = b;
    std::vector<std::pair<std::size_t, std::size_t>> best;
    bool have_best = false;
    std::function<void(std::size_t)> visit = [&](std::size_t g) {
        if (g == interchange.size()) {
            std::vector<RawPair> moved = raw;
            for (RawPair& rp : moved) {
                const std::size_t bi = block_of(rp.i), bj = block_of(rp.j);
                std::size_t ni = part.offsets[relabel[bi]] + (rp.i - part.offsets[bi]);
                std::size_t nj = part.offsets[relabel[bj]] + (rp.j - part.offsets[bj]);
                if (ni > nj) {
                    std::swap(ni, nj);
                    rp.sign = -rp.sign;
                }
                rp.i = ni;
                rp.j = nj;
            }
            auto pairs = normalize(moved);
            if (!have_best || pairs < best) {
                best = std::move(pairs);
                have_best = true;
            }
            return;
        }
        std::vector<std::size_t> targets = interchange[g];
        std::sort(targets.begin(), targets.end());
        do {
            for (std::size_t t = 0; t < targets.size(); ++t)
                relabel[interchange[g][t]] = targets[t];
            visit(g + 1);
        } while (std::next_permutation(targets.begin(), targets.end()));
    };
    visit(0);

    ModuliClass cls;
    cls.rank = out.reduction.rank;
    cls.pairs = std::move(best);
    out.cls = cls;

    std::vector<std::size_t> images(d);
    images[0] = 0;
    for (std::size_t i = 0; i < n; ++i)
        images[i + 1] = out.reduction.perm.images[i] + 1;
    out.perm_d = Permutation{images};
    return out;
}

std::string trace_to_json(const ReductionResult& r) {
    nlohmann::json doc;
    doc["steps"] = nlohmann::json::array();
    for (const auto& s : r.steps) {
        nlohmann::json step;
        step["rule"] = s.rule;
        step["pivot"] = {s.l, s.m};
        step["k"] = s.k;
        step["t"] = s.t;
        step["transform"] = matrix_to_json(s.transform);
        doc["steps"].push_back(std::move(step));
    }
    doc["accumulated_s"] = matrix_to_json(r.accumulated_s);
    doc["residual"] = r.residual;
    doc["rank"] = r.rank;
    doc["permutation"] = r.perm.images;
    return doc.dump(2);
}

} // namespace presym
