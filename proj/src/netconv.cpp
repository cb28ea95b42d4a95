#include "tldn/netconv.hpp"

#include <cmath>
#include <sstream>

#include "tldn/errors.hpp"
#include "tldn/tolerances.hpp"

namespace tldn {

namespace {

// (lhs)·(rhs)⁻¹ with conversion-specific error reporting.
ComplexMatrix right_divide(const ComplexMatrix& lhs, const ComplexMatrix& rhs, const char* what) {
    const double cond = condition_estimate(rhs);
    if (!(cond < tol::kConditionLimit)) {
        std::ostringstream os;
        os << what << ": conversion is singular (condition estimate " << cond << ")";
        throw SingularityError("conversion_singularity", os.str(), cond);
    }
    // x·rhs = lhs  <=>  rhsᵀ·xᵀ = lhsᵀ
    return solve(rhs.transpose(), lhs.transpose()).transpose();
}

void require_square(const ComplexMatrix& m, const char* what) {
    if (!m.is_square()) {
        std::ostringstream os;
        os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
        throw DimensionError(os.str());
    }
}

}  // namespace

PortReference::PortReference(double z_ref_ohm) : z_ref_(z_ref_ohm) {
    if (!(z_ref_ohm > 0.0) || !std::isfinite(z_ref_ohm)) {
        std::ostringstream os;
        os << "reference impedance must be positive and finite, got " << z_ref_ohm;
        throw ValidationError("invalid_reference", os.str());
    }
}

ComplexMatrix s_to_y(const ComplexMatrix& s, const PortReference& ref) {
    require_square(s, "s_to_y");
    const auto eye = ComplexMatrix::identity(s.rows());
    return Complex{1.0 / ref.z_ref()} * right_divide(eye - s, eye + s, "s_to_y");
}

ComplexMatrix y_to_s(const ComplexMatrix& y, const PortReference& ref) {
    require_square(y, "y_to_s");
    const auto eye = ComplexMatrix::identity(y.rows());
    const ComplexMatrix zy = Complex{ref.z_ref()} * y;
    return right_divide(eye - zy, eye + zy, "y_to_s");
}

ComplexMatrix abcd_to_y2(const TwoPortABCD& m) {
    if (std::abs(m.b) <= tol::kDegenerateB) {
        std::ostringstream os;
        os << "abcd_to_y2: |B| = " << std::abs(m.b)
           << " ohm, a through connection has no admittance representation";
        throw NumericError("degenerate_branch", os.str());
    }
    return ComplexMatrix{{m.d / m.b, (m.b * m.c - m.a * m.d) / m.b},
                         {Complex{-1.0} / m.b, m.a / m.b}};
}

}  // namespace tldn
