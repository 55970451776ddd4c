#pragma once

#include <cstddef>
#include <vector>

namespace dilated {

/// Symmetric positive-semidefinite matrix. Symmetry is enforced on
/// construction; PSD-ness (eigenvalues >= -1e-10) is checked by validate().
class PsdMatrix {
public:
    PsdMatrix() = default;
    explicit PsdMatrix(std::size_t order);  // zero matrix
    /// Row-major entries; the matrix is symmetrized as (A + A^T)/2.
    PsdMatrix(std::size_t order, std::vector<double> entries);

    static PsdMatrix identity(std::size_t order);
    static PsdMatrix diagonal(std::vector<double> diag);
    static PsdMatrix scalar(double x) { return diagonal({x}); }

    std::size_t order() const { return order_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * order_ + j]; }
    double& at(std::size_t i, std::size_t j) { return entries_[i * order_ + j]; }
    const std::vector<double>& entries() const { return entries_; }

    double trace() const;
    /// Throws NotPsd if some eigenvalue is below -1e-10.
    void validate() const;

    PsdMatrix operator+(const PsdMatrix& other) const;
    PsdMatrix scaled(double s) const;
    double max_abs_diff(const PsdMatrix& other) const;

private:
    std::size_t order_ = 0;
    std::vector<double> entries_;
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations
/// (off-diagonal threshold 1e-12). eigenvectors are stored column-wise:
/// A = V diag(w) V^T with V = eigenvectors.
struct SymmetricEigen {
    std::vector<double> eigenvalues;
    std::vector<double> eigenvectors;  // row-major, column j = eigenvector j
};
SymmetricEigen jacobi_eigen(const PsdMatrix& a);

/// Unique PSD square root; negative eigenvalues are clamped to zero.
PsdMatrix sqrt_psd(const PsdMatrix& a);

/// (tr A + tr B - 2 tr((A^{1/2} B A^{1/2})^{1/2}))^{1/2}, radicand clamped at 0.
double bures_wasserstein(const PsdMatrix& a, const PsdMatrix& b);

/// f * m * f^T for a row-major (rows x m.order()) matrix f.
PsdMatrix psd_pushforward(const std::vector<double>& f, std::size_t rows, const PsdMatrix& m);

/// r^2 * m.
PsdMatrix psd_dilate(double r, const PsdMatrix& m);

PsdMatrix block_diag(const PsdMatrix& m, const PsdMatrix& n);

/// Number of times a Bures-Wasserstein radicand was clamped from below zero.
long psd_clamp_count();

}  // namespace dilated
