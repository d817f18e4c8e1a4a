#ifndef RISLOC_LINALG_HPP
#define RISLOC_LINALG_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace risloc {

using Complex = std::complex<double>;

class SingularMatrixError : public std::runtime_error {
  public:
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Dense row-major complex matrix, sized for the N x N RIS coupling problem.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    static ComplexMatrix identity(std::size_t n);

    ComplexMatrix operator*(const ComplexMatrix& o) const;
    std::vector<Complex> operator*(const std::vector<Complex>& v) const;

    /// max row-sum norm
    double inf_norm() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Inverse by LU decomposition with partial pivoting. Throws
/// SingularMatrixError when a pivot falls below 1e-12 times the largest
/// input entry magnitude.
ComplexMatrix invert_lu(const ComplexMatrix& a);

}  // namespace risloc

#endif
