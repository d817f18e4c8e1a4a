#include "risloc/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace risloc {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    ComplexMatrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Complex v = (*this)(i, k);
            for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += v * o(k, j);
        }
    }
    return out;
}

std::vector<Complex> ComplexMatrix::operator*(const std::vector<Complex>& v) const {
    if (cols_ != v.size()) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    std::vector<Complex> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

double ComplexMatrix::inf_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) row += std::abs((*this)(i, j));
        best = std::max(best, row);
    }
    return best;
}

ComplexMatrix invert_lu(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("invert_lu: matrix not square");
    const std::size_t n = a.rows();

    double max_entry = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) max_entry = std::max(max_entry, std::abs(a(i, j)));
    const double pivot_floor = 1e-12 * max_entry;

    // Augmented [LU | inverse] in place: factorize, then solve for each
    // unit column. perm tracks the row exchanges.
    ComplexMatrix lu = a;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot_row = col;
        double pivot_mag = std::abs(lu(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double mag = std::abs(lu(r, col));
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if (pivot_mag < pivot_floor || pivot_mag == 0.0) {
            throw SingularMatrixError("invert_lu: numerically singular matrix");
        }
        if (pivot_row != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(pivot_row, j));
            std::swap(perm[col], perm[pivot_row]);
        }
        const Complex pivot = lu(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex factor = lu(r, col) / pivot;
            lu(r, col) = factor;
            for (std::size_t j = col + 1; j < n; ++j) lu(r, j) -= factor * lu(col, j);
        }
    }

    ComplexMatrix inv(n, n);
    std::vector<Complex> y(n);
    for (std::size_t rhs = 0; rhs < n; ++rhs) {
        for (std::size_t i = 0; i < n; ++i) {
            Complex acc = (perm[i] == rhs) ? Complex(1.0) : Complex(0.0);
            for (std::size_t j = 0; j < i; ++j) acc -= lu(i, j) * y[j];
            y[i] = acc;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            Complex acc = y[ii];
            for (std::size_t j = ii + 1; j < n; ++j) acc -= lu(ii, j) * inv(j, rhs);
            inv(ii, rhs) = acc / lu(ii, ii);
        }
    }
    return inv;
}

}  // namespace risloc
