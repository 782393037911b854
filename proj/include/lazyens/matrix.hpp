#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "lazyens/errors.hpp"

namespace lazyens {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major. Small fixed-size workhorse for
/// everything in this library; no sparsity, no views.
class ComplexMatrix {
public:
    explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {
        if (n == 0) throw Error(ErrorCode::bad_input, "matrix dimension must be >= 1");
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> d) {
        ComplexMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t dim() const noexcept { return n_; }

    Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
        return data_[i * n_ + j];
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const Complex& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_dim(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_dim(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    ComplexMatrix& operator*=(Complex c) {
        for (Complex& z : data_) z *= c;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(Complex c, ComplexMatrix a) { return a *= c; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        a.check_same_dim(b);
        const std::size_t n = a.n_;
        ComplexMatrix c(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const Complex aik = a(i, k);
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    std::vector<Complex> operator*(std::span<const Complex> v) const {
        if (v.size() != n_) throw Error(ErrorCode::bad_input, "matrix/vector dimension mismatch");
        std::vector<Complex> out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            Complex s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
            out[i] = s;
        }
        return out;
    }

    /// max_{i,j} |a_ij - conj(a_ji)|
    double hermiticity_defect() const {
        double d = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i; j < n_; ++j)
                d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return d;
    }

    /// ||U†U - I||_F
    double unitarity_defect() const {
        ComplexMatrix g = adjoint() * (*this);
        g -= identity(n_);
        return g.frobenius_norm();
    }

    bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }
    bool is_unitary(double tol = 1e-10) const { return unitarity_defect() <= tol; }

private:
    void check_same_dim(const ComplexMatrix& o) const {
        if (o.n_ != n_) throw Error(ErrorCode::bad_input, "matrix dimension mismatch");
    }

    std::size_t n_;
    std::vector<Complex> data_;
};

/// Hermitian matrix: checked against a construction tolerance, then
/// symmetrized so entries[i][j] == conj(entries[j][i]) holds exactly.
class HermitianMatrix {
public:
    explicit HermitianMatrix(ComplexMatrix m, double tol = 1e-12) : matrix_(std::move(m)) {
        const double defect = matrix_.hermiticity_defect();
        if (defect > tol)
            throw Error(ErrorCode::not_hermitian,
                        "hermiticity defect " + std::to_string(defect) + " exceeds tolerance");
        symmetrize();
    }

    static HermitianMatrix zero(std::size_t n) { return HermitianMatrix(ComplexMatrix(n)); }

    static HermitianMatrix diagonal(std::span<const double> d) {
        return HermitianMatrix(ComplexMatrix::diagonal(d));
    }

    std::size_t dim() const noexcept { return matrix_.dim(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
        return matrix_(i, j);
    }

    double trace_real() const { return matrix_.trace().real(); }
    double frobenius_norm() const { return matrix_.frobenius_norm(); }

    /// this + c*I, still Hermitian by construction
    HermitianMatrix add_scaled_identity(double c) const {
        ComplexMatrix m = matrix_;
        for (std::size_t i = 0; i < m.dim(); ++i) m(i, i) += c;
        return HermitianMatrix(std::move(m));
    }

    /// Re Tr(this * other); the trace of a product of Hermitian matrices is
    /// real, the Re strips roundoff in the imaginary part.
    double trace_product(const HermitianMatrix& other) const {
        if (other.dim() != dim()) throw Error(ErrorCode::bad_input, "dimension mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j)
                s += ((*this)(i, j) * other(j, i)).real();
        return s;
    }

private:
    void symmetrize() {
        const std::size_t n = matrix_.dim();
        for (std::size_t i = 0; i < n; ++i) {
            matrix_(i, i) = Complex(matrix_(i, i).real(), 0.0);
            for (std::size_t j = i + 1; j < n; ++j) {
                const Complex avg = 0.5 * (matrix_(i, j) + std::conj(matrix_(j, i)));
                matrix_(i, j) = avg;
                matrix_(j, i) = std::conj(avg);
            }
        }
    }

    ComplexMatrix matrix_;
};

/// u * m * u† for unitary u. Eigenvalues are preserved; Hermiticity is
/// restored exactly by the HermitianMatrix constructor.
inline HermitianMatrix conjugate(const HermitianMatrix& m, const ComplexMatrix& u,
                                 double unitary_tol = 1e-10) {
    if (u.dim() != m.dim()) throw Error(ErrorCode::bad_input, "dimension mismatch");
    const double defect = u.unitarity_defect();
    if (defect > unitary_tol)
        throw Error(ErrorCode::not_unitary,
                    "unitarity defect " + std::to_string(defect) + " exceeds tolerance");
    ComplexMatrix out = u * m.matrix() * u.adjoint();
    // roundoff from the two products; loosen the construction check accordingly
    return HermitianMatrix(std::move(out), 1e-10 * std::max(1.0, m.frobenius_norm()));
}

}  // namespace lazyens
