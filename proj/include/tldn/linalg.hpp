#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tldn {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Dense complex matrix. Every entry is finite; constructors reject NaN/Inf.
///
/// The Eigen storage is reachable through eigen() for kernels that need it,
/// but all mutation goes through checked entry points.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(Index rows, Index cols);
    explicit ComplexMatrix(Eigen::MatrixXcd m);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix zeros(Index rows, Index cols) { return {rows, cols}; }
    static ComplexMatrix identity(Index n);
    static ComplexMatrix diagonal(std::span<const double> values);
    static ComplexMatrix diagonal(std::span<const Complex> values);

    Index rows() const noexcept { return m_.rows(); }
    Index cols() const noexcept { return m_.cols(); }
    bool is_square() const noexcept { return m_.rows() == m_.cols(); }

    Complex operator()(Index i, Index j) const { return m_(i, j); }
    void set(Index i, Index j, Complex value);

    const Eigen::MatrixXcd& eigen() const noexcept { return m_; }

    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    ComplexMatrix adjoint() const;
    ComplexMatrix block(Index row, Index col, Index rows, Index cols) const;

    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a);
    friend ComplexMatrix operator-(const ComplexMatrix& a);

private:
    Eigen::MatrixXcd m_;
};

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);

/// 1-norm condition estimate; +inf for an exactly singular matrix.
double condition_estimate(const ComplexMatrix& a);

/// Throws SingularityError (carrying the condition estimate) when
/// condition_estimate(a) >= tol::kConditionLimit.
ComplexMatrix inverse(const ComplexMatrix& a);

/// Solves a·x = b under the same singularity policy as inverse().
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs(const ComplexMatrix& a);
double max_abs_real(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |a_ij - a_ji|
double symmetry_defect(const ComplexMatrix& a);
/// max |(aᴴa - I)_ij|
double unitarity_defect(const ComplexMatrix& a);

struct SvdResult {
    ComplexMatrix u;
    std::vector<double> sigma;  // descending
    ComplexMatrix v;            // m = u·diag(sigma)·vᴴ
};

SvdResult svd(const ComplexMatrix& m);

struct TakagiFactors {
    ComplexMatrix u;            // unitary
    std::vector<double> lambda; // descending, nonnegative; s = u·diag(lambda)·uᵀ
};

/// Takagi factorization of a complex symmetric matrix.
///
/// Built from the SVD s = P·Σ·Qᴴ. Symmetry of s forces D = Pᴴ·conj(Q) to be
/// block diagonal over groups of equal singular values, each block symmetric
/// and unitary, and u = P·D^{1/2}. Singular values closer than
/// tol::kDegeneracy are grouped into one block.
TakagiFactors takagi(const ComplexMatrix& s);

}  // namespace tldn
