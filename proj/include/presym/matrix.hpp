#ifndef PRESYM_MATRIX_HPP
#define PRESYM_MATRIX_HPP

#include <presym/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <type_traits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace presym {

/*
 * Dense row-major matrix over an exact (Rational) or floating (double) scalar.
 *
 * All operations are pure: they return new matrices and never mutate inputs
 * through shared state, so values are safe for concurrent reads.
 */
template <typename T>
class Matrix {
public:
    Matrix() : m_rows(0), m_cols(0) {}

    Matrix(std::size_t rows, std::size_t cols)
        : m_rows(rows), m_cols(cols), m_data(rows * cols, T(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return m_rows; }
    std::size_t cols() const { return m_cols; }

    T& operator()(std::size_t i, std::size_t j) {
        return m_data[i * m_cols + j];
    }
    const T& operator()(std::size_t i, std::size_t j) const {
        return m_data[i * m_cols + j];
    }

    bool operator==(const Matrix& o) const {
        return m_rows == o.m_rows && m_cols == o.m_cols && m_data == o.m_data;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix transpose() const {
        Matrix r(m_cols, m_rows);
        for (std::size_t i = 0; i < m_rows; ++i)
            for (std::size_t j = 0; j < m_cols; ++j)
                r(j, i) = (*this)(i, j);
        return r;
    }

    Matrix operator*(const Matrix& o) const {
        if (m_cols != o.m_rows)
            throw std::invalid_argument("matrix product: dimension mismatch");
        Matrix r(m_rows, o.m_cols);
        for (std::size_t i = 0; i < m_rows; ++i)
            for (std::size_t k = 0; k < m_cols; ++k) {
                const T& a = (*this)(i, k);
                if (a == T(0)) continue;
                for (std::size_t j = 0; j < o.m_cols; ++j)
                    r(i, j) += a * o(k, j);
            }
        return r;
    }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o, "sum");
        Matrix r(m_rows, m_cols);
        for (std::size_t i = 0; i < m_data.size(); ++i)
            r.m_data[i] = m_data[i] + o.m_data[i];
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        check_same_shape(o, "difference");
        Matrix r(m_rows, m_cols);
        for (std::size_t i = 0; i < m_data.size(); ++i)
            r.m_data[i] = m_data[i] - o.m_data[i];
        return r;
    }

    Matrix operator-() const {
        Matrix r(m_rows, m_cols);
        for (std::size_t i = 0; i < m_data.size(); ++i)
            r.m_data[i] = -m_data[i];
        return r;
    }

    Matrix scaled(const T& c) const {
        Matrix r(m_rows, m_cols);
        for (std::size_t i = 0; i < m_data.size(); ++i)
            r.m_data[i] = m_data[i] * c;
        return r;
    }

    bool is_zero() const {
        for (const T& v : m_data)
            if (v != T(0)) return false;
        return true;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < m_cols; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }

    // Copy of the contiguous submatrix starting at (r0, c0).
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > m_rows || c0 + nc > m_cols)
            throw std::invalid_argument("block: out of range");
        Matrix r(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j)
                r(i, j) = (*this)(r0 + i, c0 + j);
        return r;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        if (r0 + b.rows() > m_rows || c0 + b.cols() > m_cols)
            throw std::invalid_argument("set_block: out of range");
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                (*this)(r0 + i, c0 + j) = b(i, j);
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < m_rows; ++i) {
            os << (i == 0 ? "[" : " ");
            for (std::size_t j = 0; j < m_cols; ++j) {
                if constexpr (std::is_same_v<T, Rational>)
                    os << format_rational((*this)(i, j));
                else
                    os << (*this)(i, j);
                if (j + 1 < m_cols) os << " ";
            }
            os << (i + 1 == m_rows ? "]" : "\n");
        }
        return os.str();
    }

private:
    void check_same_shape(const Matrix& o, const char* what) const {
        if (m_rows != o.m_rows || m_cols != o.m_cols)
            throw std::invalid_argument(std::string("matrix ") + what + ": dimension mismatch");
    }

    std::size_t m_rows, m_cols;
    std::vector<T> m_data;
};

using RationalMatrix = Matrix<Rational>;
using FloatMatrix = Matrix<double>;

/*
 * Permutation on {0..n-1}; images[i] is where index i is sent.
 * matrix() returns P with P(images[i], i) = 1, so for column vectors
 * (P x)[images[i]] = x[i].
 */
struct Permutation {
    std::vector<std::size_t> images;

    Permutation() = default;
    explicit Permutation(std::vector<std::size_t> im) : images(std::move(im)) {
        std::vector<bool> seen(images.size(), false);
        for (std::size_t v : images) {
            if (v >= images.size() || seen[v])
                throw std::invalid_argument("permutation: images not a bijection");
            seen[v] = true;
        }
    }

    static Permutation identity(std::size_t n) {
        std::vector<std::size_t> im(n);
        std::iota(im.begin(), im.end(), std::size_t{0});
        return Permutation(im);
    }

    std::size_t size() const { return images.size(); }

    template <typename T>
    Matrix<T> matrix() const {
        Matrix<T> p(size(), size());
        for (std::size_t i = 0; i < size(); ++i) p(images[i], i) = T(1);
        return p;
    }

    bool operator==(const Permutation& o) const { return images == o.images; }
};

// -------- rank --------

/*
 * Exact rank by Bareiss fraction-free elimination.  Pivoting takes the first
 * nonzero entry in the current column (deterministic column order); columns
 * without a pivot are skipped.  Fraction-free updates keep intermediate
 * entries as quotients of minors, which bounds coefficient growth.
 */
inline std::size_t rank(const RationalMatrix& m) {
    RationalMatrix a = m;
    const std::size_t nr = a.rows(), nc = a.cols();
    Rational div_prev(1);
    std::size_t r = 0; // current pivot row
    for (std::size_t c = 0; c < nc && r < nr; ++c) {
        std::size_t piv = r;
        while (piv < nr && a(piv, c) == Rational(0)) ++piv;
        if (piv == nr) continue;
        a.swap_rows(r, piv);
        const Rational pivot = a(r, c);
        for (std::size_t i = r + 1; i < nr; ++i) {
            for (std::size_t j = c + 1; j < nc; ++j)
                a(i, j) = (a(i, j) * pivot - a(i, c) * a(r, j)) / div_prev;
            a(i, c) = Rational(0);
        }
        div_prev = pivot;
        ++r;
    }
    return r;
}

// Float-side rank by pivoted Gaussian elimination (partial pivoting by
// magnitude); used only as a mirror check against the exact path.
inline std::size_t rank(const FloatMatrix& m, double tol = 1e-9) {
    FloatMatrix a = m;
    const std::size_t nr = a.rows(), nc = a.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc && r < nr; ++c) {
        std::size_t piv = r;
        for (std::size_t i = r + 1; i < nr; ++i)
            if (std::fabs(a(i, c)) > std::fabs(a(piv, c))) piv = i;
        if (std::fabs(a(piv, c)) <= tol) continue;
        a.swap_rows(r, piv);
        for (std::size_t i = r + 1; i < nr; ++i) {
            const double f = a(i, c) / a(r, c);
            for (std::size_t j = c; j < nc; ++j) a(i, j) -= f * a(r, j);
        }
        ++r;
    }
    return r;
}

// -------- congruence, skewness --------

// s^t * b * s (change of basis for a bilinear form).
template <typename T>
Matrix<T> congruence(const Matrix<T>& s, const Matrix<T>& b) {
    if (b.rows() != b.cols() || s.rows() != b.rows())
        throw std::invalid_argument("congruence: dimension mismatch");
    return s.transpose() * b * s;
}

inline bool skew_check(const RationalMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("skew_check: matrix not square");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (m(i, j) != -m(j, i)) return false;
    return true;
}

// -------- exact <-> float bridges --------

inline FloatMatrix float_of(const RationalMatrix& m) {
    FloatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(i, j) = to_double(m(i, j));
    return r;
}

/*
 * Snap each float entry to the nearest grid value; every entry must lie
 * within zero_tol of its nearest grid value or the snap is rejected with the
 * offending entry named.
 */
inline RationalMatrix rational_snap(const FloatMatrix& m,
                                    const std::vector<Rational>& grid,
                                    double zero_tol = 1e-9) {
    if (grid.empty()) throw std::invalid_argument("rational_snap: empty grid");
    RationalMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            double best_dist = std::numeric_limits<double>::infinity();
            const Rational* best = nullptr;
            for (const Rational& g : grid) {
                double d = std::fabs(m(i, j) - to_double(g));
                if (d < best_dist) { best_dist = d; best = &g; }
            }
            if (best_dist > zero_tol) {
                std::ostringstream os;
                os << "entry off-grid at (" << i << "," << j << "): value "
                   << m(i, j) << ", distance " << best_dist;
                throw std::domain_error(os.str());
            }
            r(i, j) = *best;
        }
    return r;
}

inline double max_abs(const FloatMatrix& m) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r = std::max(r, std::fabs(m(i, j)));
    return r;
}

} // namespace presym

#endif // PRESYM_MATRIX_HPP
