#include "tldn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "tldn/errors.hpp"
#include "tldn/tolerances.hpp"

namespace tldn {

namespace {

void require_finite(const Eigen::MatrixXcd& m) {
    if (!m.allFinite()) {
        throw ValidationError("non_finite", "matrix contains NaN or Inf entries");
    }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream os;
        os << op << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
           << "x" << b.cols();
        throw DimensionError(os.str());
    }
}

void require_square(const ComplexMatrix& a, const char* op) {
    if (!a.is_square()) {
        std::ostringstream os;
        os << op << ": expected a square matrix, got " << a.rows() << "x" << a.cols();
        throw DimensionError(os.str());
    }
}

double one_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

// Square root of a (numerically) unitary matrix. The branch cut sits at -1
// unless an eigenvalue is close to it, in which case it moves to the middle
// of the widest gap between eigen-phases so that coincident eigenvalues stay
// on one branch and the result remains a primary matrix function.
Eigen::MatrixXcd unitary_sqrt(const Eigen::MatrixXcd& d) {
    const Index n = d.rows();
    if (n == 1) {
        const double mag = std::abs(d(0, 0));
        const Complex phase = mag > 0.0 ? d(0, 0) / mag : Complex{1.0};
        return Eigen::MatrixXcd::Constant(1, 1, std::sqrt(phase));
    }

    // Nearest unitary (polar factor) first, so the Schur form is diagonal.
    Eigen::JacobiSVD<Eigen::MatrixXcd> polar(d, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXcd w = polar.matrixU() * polar.matrixV().adjoint();

    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(w);
    const Eigen::MatrixXcd& t = schur.matrixT();
    const Eigen::MatrixXcd& z = schur.matrixU();

    std::vector<double> phase(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) phase[static_cast<std::size_t>(k)] = std::arg(t(k, k));

    constexpr double pi = std::numbers::pi;
    double cut = pi;
    const bool near_cut = std::any_of(phase.begin(), phase.end(),
                                      [](double p) { return pi - std::abs(p) < 1e-6; });
    if (near_cut) {
        std::vector<double> sorted = phase;
        std::sort(sorted.begin(), sorted.end());
        double best_gap = sorted.front() + 2 * pi - sorted.back();
        cut = sorted.back() + best_gap / 2;
        for (std::size_t k = 1; k < sorted.size(); ++k) {
            const double gap = sorted[k] - sorted[k - 1];
            if (gap > best_gap) {
                best_gap = gap;
                cut = sorted[k - 1] + gap / 2;
            }
        }
    }

    Eigen::VectorXcd root(n);
    for (Index k = 0; k < n; ++k) {
        double p = phase[static_cast<std::size_t>(k)];
        while (p > cut) p -= 2 * pi;
        while (p <= cut - 2 * pi) p += 2 * pi;
        root(k) = std::polar(1.0, p / 2);
    }
    return z * root.asDiagonal() * z.adjoint();
}

}  // namespace

ComplexMatrix::ComplexMatrix(Index rows, Index cols) : m_(Eigen::MatrixXcd::Zero(rows, cols)) {}

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) { require_finite(m_); }

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    const auto r = static_cast<Index>(rows.size());
    const auto c = r == 0 ? Index{0} : static_cast<Index>(rows.begin()->size());
    m_.resize(r, c);
    Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Index>(row.size()) != c) {
            throw DimensionError("ragged initializer list");
        }
        Index j = 0;
        for (const auto& v : row) m_(i, j++) = v;
        ++i;
    }
    require_finite(m_);
}

ComplexMatrix ComplexMatrix::identity(Index n) {
    return ComplexMatrix(Eigen::MatrixXcd::Identity(n, n));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    const auto n = static_cast<Index>(values.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Index k = 0; k < n; ++k) m(k, k) = values[static_cast<std::size_t>(k)];
    return ComplexMatrix(std::move(m));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
    const auto n = static_cast<Index>(values.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Index k = 0; k < n; ++k) m(k, k) = values[static_cast<std::size_t>(k)];
    return ComplexMatrix(std::move(m));
}

void ComplexMatrix::set(Index i, Index j, Complex value) {
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw ValidationError("non_finite", "attempt to store a non-finite entry");
    }
    m_(i, j) = value;
}

ComplexMatrix ComplexMatrix::transpose() const { return ComplexMatrix(m_.transpose()); }
ComplexMatrix ComplexMatrix::conjugate() const { return ComplexMatrix(m_.conjugate()); }
ComplexMatrix ComplexMatrix::adjoint() const { return ComplexMatrix(m_.adjoint()); }

ComplexMatrix ComplexMatrix::block(Index row, Index col, Index rows, Index cols) const {
    if (row < 0 || col < 0 || row + rows > m_.rows() || col + cols > m_.cols()) {
        throw DimensionError("block out of range");
    }
    return ComplexMatrix(Eigen::MatrixXcd(m_.block(row, col, rows, cols)));
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "add");
    return ComplexMatrix(Eigen::MatrixXcd(a.m_ + b.m_));
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "subtract");
    return ComplexMatrix(Eigen::MatrixXcd(a.m_ - b.m_));
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        std::ostringstream os;
        os << "multiply: inner dimensions differ (" << a.cols() << " vs " << b.rows() << ")";
        throw DimensionError(os.str());
    }
    return ComplexMatrix(Eigen::MatrixXcd(a.m_ * b.m_));
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
    return ComplexMatrix(Eigen::MatrixXcd(s * a.m_));
}

ComplexMatrix operator-(const ComplexMatrix& a) { return ComplexMatrix(Eigen::MatrixXcd(-a.m_)); }

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b; }

double condition_estimate(const ComplexMatrix& a) {
    require_square(a, "condition_estimate");
    if (a.rows() == 0) return 1.0;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(a.eigen());
    if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
    const double c = one_norm(a.eigen()) * one_norm(lu.inverse());
    return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

ComplexMatrix inverse(const ComplexMatrix& a) {
    require_square(a, "inverse");
    const double cond = condition_estimate(a);
    if (!(cond < tol::kConditionLimit)) {
        std::ostringstream os;
        os << "inverse: matrix is singular (condition estimate " << cond << ")";
        throw SingularityError(os.str(), cond);
    }
    return ComplexMatrix(Eigen::MatrixXcd(a.eigen().fullPivLu().inverse()));
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square(a, "solve");
    if (a.rows() != b.rows()) throw DimensionError("solve: right-hand side row count differs");
    const double cond = condition_estimate(a);
    if (!(cond < tol::kConditionLimit)) {
        std::ostringstream os;
        os << "solve: matrix is singular (condition estimate " << cond << ")";
        throw SingularityError(os.str(), cond);
    }
    return ComplexMatrix(Eigen::MatrixXcd(a.eigen().fullPivLu().solve(b.eigen())));
}

double max_abs(const ComplexMatrix& a) {
    return a.eigen().size() == 0 ? 0.0 : a.eigen().cwiseAbs().maxCoeff();
}

double max_abs_real(const ComplexMatrix& a) {
    return a.eigen().size() == 0 ? 0.0 : a.eigen().real().cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    return a.eigen().size() == 0 ? 0.0 : (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

double symmetry_defect(const ComplexMatrix& a) {
    require_square(a, "symmetry_defect");
    return a.eigen().size() == 0 ? 0.0
                                 : (a.eigen() - a.eigen().transpose()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& a) {
    require_square(a, "unitarity_defect");
    if (a.eigen().size() == 0) return 0.0;
    const Eigen::MatrixXcd g = a.eigen().adjoint() * a.eigen();
    return (g - Eigen::MatrixXcd::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff();
}

SvdResult svd(const ComplexMatrix& m) {
    require_square(m, "svd");
    Eigen::JacobiSVD<Eigen::MatrixXcd> dec(m.eigen(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& s = dec.singularValues();
    return SvdResult{ComplexMatrix(Eigen::MatrixXcd(dec.matrixU())),
                     std::vector<double>(s.data(), s.data() + s.size()),
                     ComplexMatrix(Eigen::MatrixXcd(dec.matrixV()))};
}

TakagiFactors takagi(const ComplexMatrix& s) {
    require_square(s, "takagi");
    const double asym = symmetry_defect(s);
    if (asym > tol::kInputSymmetry) {
        std::ostringstream os;
        os << "takagi: matrix is not symmetric (max |s_ij - s_ji| = " << asym << ")";
        throw SymmetryError(os.str(), asym);
    }

    const Index n = s.rows();
    // Exact symmetrization removes the sub-tolerance asymmetry before factoring.
    const Eigen::MatrixXcd sym = (s.eigen() + s.eigen().transpose()) / 2.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> dec(sym, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXcd& p = dec.matrixU();
    const Eigen::MatrixXcd& q = dec.matrixV();
    const Eigen::VectorXd& sigma = dec.singularValues();

    const Eigen::MatrixXcd d = p.adjoint() * q.conjugate();
    Eigen::MatrixXcd u(n, n);

    Index start = 0;
    while (start < n) {
        Index end = start + 1;
        while (end < n && sigma(end - 1) - sigma(end) <= tol::kDegeneracy) ++end;
        const Index len = end - start;
        const Eigen::MatrixXcd root = unitary_sqrt(d.block(start, start, len, len));
        u.middleCols(start, len) = p.middleCols(start, len) * root;
        start = end;
    }

    return TakagiFactors{ComplexMatrix(std::move(u)),
                         std::vector<double>(sigma.data(), sigma.data() + sigma.size())};
}

}  // namespace tldn
