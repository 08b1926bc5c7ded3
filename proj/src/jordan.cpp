#include <presym/jordan.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <stdexcept>

namespace presym {

std::size_t JordanSpec::n_real() const {
    std::size_t n = 0;
    for (const auto& b : real_blocks) n += b.size;
    return n;
}

std::size_t JordanSpec::n_complex() const {
    std::size_t n = 0;
    for (const auto& b : complex_blocks) n += 2 * b.half_size;
    return n;
}

namespace {

Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

void validate(const JordanSpec& spec) {
    if (spec.block_count() == 0)
        throw std::invalid_argument("spec has no blocks");
    for (const auto& b : spec.real_blocks)
        if (b.size < 1) throw std::invalid_argument("real block size must be >= 1");
    for (const auto& b : spec.complex_blocks) {
        if (b.half_size < 1)
            throw std::invalid_argument("complex block half_size must be >= 1");
        if (b.im == 0)
            throw std::invalid_argument("complex block must have nonzero imaginary part");
    }
    // Abelian (zero adjoint map): only size-1 real blocks with eigenvalue 0.
    bool nonzero = !spec.complex_blocks.empty();
    for (const auto& b : spec.real_blocks)
        if (b.size >= 2 || b.eig != 0) nonzero = true;
    if (!nonzero)
        throw std::invalid_argument(
            "spec describes an abelian Lie algebra (zero map); rejected");
}

} // namespace

JordanSpec canonical_order(const JordanSpec& spec, Permutation* user_to_canonical) {
    validate(spec);

    // Normalize complex blocks to b > 0 (conjugate has the same real form).
    JordanSpec s = spec;
    for (auto& b : s.complex_blocks)
        if (b.im < 0) b.im = -b.im;

    // Sort keys.  Real: (0 first) then |lambda| ascending, within a pair the
    // +lambda group first, sizes descending, and a stable index tiebreak.
    std::vector<std::size_t> ridx(s.real_blocks.size());
    for (std::size_t i = 0; i < ridx.size(); ++i) ridx[i] = i;
    std::sort(ridx.begin(), ridx.end(), [&](std::size_t a, std::size_t b) {
        const RealBlock& x = s.real_blocks[a];
        const RealBlock& y = s.real_blocks[b];
        const bool xz = (x.eig == 0), yz = (y.eig == 0);
        if (xz != yz) return xz;
        if (!xz) {
            const Rational ax = rat_abs(x.eig), ay = rat_abs(y.eig);
            if (ax != ay) return ax < ay;
            const bool xp = (x.eig > 0), yp = (y.eig > 0);
            if (xp != yp) return xp;
        }
        if (x.size != y.size) return x.size > y.size;
        return a < b;
    });

    // Complex: purely imaginary (a=0) first ordered by b, then mixed groups
    // by (|a|, b) with the +a group first; sizes descending inside a group.
    std::vector<std::size_t> cidx(s.complex_blocks.size());
    for (std::size_t i = 0; i < cidx.size(); ++i) cidx[i] = i;
    std::sort(cidx.begin(), cidx.end(), [&](std::size_t a, std::size_t b) {
        const ComplexBlock& x = s.complex_blocks[a];
        const ComplexBlock& y = s.complex_blocks[b];
        const bool xz = (x.re == 0), yz = (y.re == 0);
        if (xz != yz) return xz;
        const Rational ax = rat_abs(x.re), ay = rat_abs(y.re);
        if (ax != ay) return ax < ay;
        if (x.im != y.im) return x.im < y.im;
        if (!xz) {
            const bool xp = (x.re > 0), yp = (y.re > 0);
            if (xp != yp) return xp;
        }
        if (x.half_size != y.half_size) return x.half_size > y.half_size;
        return a < b;
    });

    JordanSpec out;
    out.real_blocks.reserve(s.real_blocks.size());
    out.complex_blocks.reserve(s.complex_blocks.size());
    for (std::size_t i : ridx) out.real_blocks.push_back(s.real_blocks[i]);
    for (std::size_t i : cidx) out.complex_blocks.push_back(s.complex_blocks[i]);

    if (user_to_canonical) {
        // Map scalar row positions in the user order to positions in the
        // canonical order, block by block.
        std::vector<std::size_t> user_off(spec.block_count());
        std::size_t acc = 0, k = 0;
        for (const auto& b : spec.real_blocks) { user_off[k++] = acc; acc += b.size; }
        for (const auto& b : spec.complex_blocks) { user_off[k++] = acc; acc += 2 * b.half_size; }

        std::vector<std::size_t> images(acc);
        std::size_t canon_pos = 0;
        for (std::size_t i : ridx) {
            for (std::size_t r = 0; r < spec.real_blocks[i].size; ++r)
                images[user_off[i] + r] = canon_pos++;
        }
        const std::size_t nr = spec.real_blocks.size();
        for (std::size_t i : cidx) {
            for (std::size_t r = 0; r < 2 * spec.complex_blocks[i].half_size; ++r)
                images[user_off[nr + i] + r] = canon_pos++;
        }
        *user_to_canonical = Permutation(images);
    }
    return out;
}

JordanSpec parse_spec(const std::string& json_text, Permutation* user_to_canonical) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("spec JSON parse error: ") + e.what());
    }
    if (!doc.is_object())
        throw std::invalid_argument("spec JSON must be an object");

    JordanSpec spec;
    if (doc.contains("real_blocks")) {
        for (const auto& jb : doc.at("real_blocks")) {
            RealBlock b;
            const auto sz = jb.at("size").get<long long>();
            if (sz < 1) throw std::invalid_argument("real block size must be >= 1");
            b.size = static_cast<std::size_t>(sz);
            b.eig = parse_rational(jb.at("eig").get<std::string>());
            spec.real_blocks.push_back(b);
        }
    }
    if (doc.contains("complex_blocks")) {
        for (const auto& jb : doc.at("complex_blocks")) {
            ComplexBlock b;
            const auto hs = jb.at("half_size").get<long long>();
            if (hs < 1) throw std::invalid_argument("complex block half_size must be >= 1");
            b.half_size = static_cast<std::size_t>(hs);
            b.re = parse_rational(jb.at("re").get<std::string>());
            b.im = parse_rational(jb.at("im").get<std::string>());
            spec.complex_blocks.push_back(b);
        }
    }
    return canonical_order(spec, user_to_canonical);
}

BlockPartition block_partition(const JordanSpec& spec) {
    BlockPartition part;
    for (const auto& b : spec.real_blocks) {
        part.block_sizes.push_back(b.size);
        part.cell_sizes.push_back(1);
    }
    for (const auto& b : spec.complex_blocks) {
        part.block_sizes.push_back(2 * b.half_size);
        part.cell_sizes.push_back(2);
    }
    std::size_t acc = 0;
    for (std::size_t s : part.block_sizes) {
        part.offsets.push_back(acc);
        acc += s;
    }
    return part;
}

RationalMatrix build_jordan(const JordanSpec& spec) {
    const std::size_t n = spec.n_total();
    RationalMatrix j(n, n);
    std::size_t off = 0;
    for (const auto& b : spec.real_blocks) {
        for (std::size_t r = 0; r < b.size; ++r) {
            j(off + r, off + r) = b.eig;
            if (r + 1 < b.size) j(off + r, off + r + 1) = Rational(1);
        }
        off += b.size;
    }
    for (const auto& b : spec.complex_blocks) {
        for (std::size_t c = 0; c < b.half_size; ++c) {
            const std::size_t p = off + 2 * c;
            j(p, p) = b.re;
            j(p, p + 1) = b.im;
            j(p + 1, p) = -b.im;
            j(p + 1, p + 1) = b.re;
            if (c + 1 < b.half_size) {
                j(p, p + 2) = Rational(1);
                j(p + 1, p + 3) = Rational(1);
            }
        }
        off += 2 * b.half_size;
    }
    return j;
}

RationalMatrix reversal_block(std::size_t n, std::size_t cell) {
    if (cell == 0 || n % cell != 0)
        throw std::invalid_argument("reversal_block: cell size must divide n");
    RationalMatrix p(n, n);
    const std::size_t m = n / cell;
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t u = 0; u < cell; ++u)
            p(c * cell + u, (m - 1 - c) * cell + u) = Rational(1);
    return p;
}

RationalMatrix alternating_block(std::size_t n, std::size_t cell) {
    if (cell == 0 || n % cell != 0)
        throw std::invalid_argument("alternating_block: cell size must divide n");
    RationalMatrix p(n, n);
    const std::size_t m = n / cell;
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t u = 0; u < cell; ++u)
            p(c * cell + u, c * cell + u) = (c % 2 == 0) ? Rational(1) : Rational(-1);
    return p;
}

RationalMatrix reversal_matrix(const BlockPartition& part) {
    RationalMatrix p(part.total(), part.total());
    for (std::size_t b = 0; b < part.count(); ++b)
        p.set_block(part.offsets[b], part.offsets[b],
                    reversal_block(part.block_sizes[b], part.cell_sizes[b]));
    return p;
}

RationalMatrix alternating_sign_matrix(const BlockPartition& part) {
    RationalMatrix p(part.total(), part.total());
    for (std::size_t b = 0; b < part.count(); ++b)
        p.set_block(part.offsets[b], part.offsets[b],
                    alternating_block(part.block_sizes[b], part.cell_sizes[b]));
    return p;
}

RationalMatrix canonical_form_matrix(std::size_t D, std::size_t R) {
    if (R % 2 != 0)
        throw std::invalid_argument("canonical form rank must be even");
    if (R > D)
        throw std::invalid_argument("canonical form rank exceeds dimension");
    RationalMatrix j(D, D);
    const std::size_t r = R / 2;
    for (std::size_t i = 0; i < r; ++i) {
        j(i, r + i) = Rational(1);
        j(r + i, i) = Rational(-1);
    }
    return j;
}

RationalMatrix shift_matrix(const BlockPartition& part, std::size_t block) {
    if (block >= part.count())
        throw std::invalid_argument("shift_matrix: block index out of range");
    RationalMatrix u = RationalMatrix::identity(part.total());
    const std::size_t off = part.offsets[block], n = part.block_sizes[block];
    for (std::size_t r = 0; r < n; ++r) {
        u(off + r, off + r) = Rational(0);
        if (r + 1 < n) u(off + r, off + r + 1) = Rational(1);
    }
    return u;
}

} // namespace presym
