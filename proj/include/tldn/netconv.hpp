#pragma once

#include "tldn/linalg.hpp"

namespace tldn {

/// Uniform real reference impedance shared by all ports.
class PortReference {
public:
    PortReference() = default;
    explicit PortReference(double z_ref_ohm);

    double z_ref() const noexcept { return z_ref_; }

private:
    double z_ref_ = 50.0;
};

/// Chain (ABCD) parameters of a two-port. a, d dimensionless; b ohms; c siemens.
struct TwoPortABCD {
    Complex a;
    Complex b;
    Complex c;
    Complex d;

    Complex determinant() const { return a * d - b * c; }
};

/// y = (1/z_ref)·(I − s)·(I + s)⁻¹. Throws a `conversion_singularity`
/// SingularityError when I + s is ill-conditioned.
ComplexMatrix s_to_y(const ComplexMatrix& s, const PortReference& ref);

/// s = (I − z_ref·y)·(I + z_ref·y)⁻¹, same singularity policy.
ComplexMatrix y_to_s(const ComplexMatrix& y, const PortReference& ref);

/// Admittance matrix of a two-port from its chain parameters.
/// Throws `degenerate_branch` when |b| <= tol::kDegenerateB.
ComplexMatrix abcd_to_y2(const TwoPortABCD& m);

}  // namespace tldn
