#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support/oracles.hpp"
#include "tldn/errors.hpp"
#include "tldn/netconv.hpp"
#include "tldn/tolerances.hpp"

using namespace tldn;
using tldn::testing::Rng;

TEST(PortReference, RejectsNonPositive) {
    EXPECT_THROW(PortReference(0.0), ValidationError);
    EXPECT_THROW(PortReference(-50.0), ValidationError);
    EXPECT_DOUBLE_EQ(PortReference().z_ref(), 50.0);
}

TEST(SToY, MatchedNetwork) {
    const PortReference ref(50.0);
    const ComplexMatrix y = s_to_y(ComplexMatrix(3, 3), ref);
    EXPECT_LE(max_abs_diff(y, Complex{1.0 / 50.0} * ComplexMatrix::identity(3)), 1e-17);
}

TEST(SToY, ShortCircuitIsSingular) {
    const ComplexMatrix s{{-1.0}};
    try {
        (void)s_to_y(s, PortReference(50.0));
        FAIL() << "expected conversion singularity";
    } catch (const SingularityError& e) {
        EXPECT_EQ(e.kind(), "conversion_singularity");
    }
}

TEST(SToY, LosslessReciprocalGivesImaginaryY) {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        // unitary and symmetric: W·Wᵀ
        const Eigen::MatrixXcd w = tldn::testing::random_unitary(4, rng);
        const ComplexMatrix s(Eigen::MatrixXcd(w * w.transpose()));
        const ComplexMatrix y = s_to_y(s, PortReference(50.0));
        EXPECT_LE(max_abs_real(y), 1e-9 * max_abs(y));
        EXPECT_LE(symmetry_defect(y), 1e-9 * max_abs(y));
    }
}

TEST(SToY, AgreesWithLeftDivisionForm) {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const ComplexMatrix s = tldn::testing::random_symmetric_passive(3, 0.7, rng);
        const Eigen::MatrixXcd ref = tldn::testing::s_to_y_reference(s.eigen(), 75.0);
        EXPECT_LE(tldn::testing::max_abs(s_to_y(s, PortReference(75.0)).eigen() - ref), 1e-13);
    }
}

TEST(YToS, MatchedAndOpen) {
    const PortReference ref(50.0);
    EXPECT_LE(max_abs(y_to_s(Complex{0.02} * ComplexMatrix::identity(2), ref)), 1e-16);
    EXPECT_LE(max_abs_diff(y_to_s(ComplexMatrix(2, 2), ref), ComplexMatrix::identity(2)), 0.0);
}

TEST(YToS, RoundTripOnPassiveNetworks) {
    Rng rng(10);
    const PortReference ref(50.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = 1 + trial % 6;
        Eigen::MatrixXcd g = tldn::testing::gaussian(n, n, rng);
        Eigen::JacobiSVD<Eigen::MatrixXcd> sv(g);
        const ComplexMatrix s(Eigen::MatrixXcd(0.95 * g / sv.singularValues()(0)));
        EXPECT_LE(max_abs_diff(y_to_s(s_to_y(s, ref), ref), s), 1e-10);
    }
}

TEST(AbcdToY2, QuarterWaveLine) {
    const TwoPortABCD m{0.0, Complex{0.0, 50.0}, Complex{0.0, 0.02}, 0.0};
    const ComplexMatrix y = abcd_to_y2(m);
    const ComplexMatrix expected{{0.0, Complex{0.0, 0.02}}, {Complex{0.0, 0.02}, 0.0}};
    EXPECT_LE(max_abs_diff(y, expected), 1e-17);
}

TEST(AbcdToY2, HalfWaveLineIsDegenerate) {
    const double th = std::numbers::pi;
    const TwoPortABCD m{std::cos(th), Complex{0.0, 50.0 * 0.0}, Complex{0.0, 0.0}, std::cos(th)};
    try {
        (void)abcd_to_y2(m);
        FAIL() << "expected degenerate branch";
    } catch (const NumericError& e) {
        EXPECT_EQ(e.kind(), "degenerate_branch");
    }
}

TEST(AbcdToY2, MatchesBranchAdmittanceAt135Degrees) {
    // a = −1/√2, b̃ = 109.71·sin 135°; values from an independent evaluation.
    const double th = 3.0 * std::numbers::pi / 4.0;
    const double z0 = 109.71;
    const TwoPortABCD m{std::cos(th), Complex{0.0, z0 * std::sin(th)}, Complex{0.0, std::sin(th) / z0},
                        std::cos(th)};
    const ComplexMatrix y = abcd_to_y2(m);
    EXPECT_NEAR(y(0, 0).real(), 0.0, 1e-18);
    EXPECT_NEAR(y(0, 0).imag(), 0.009114939385653085, 1e-15);
    EXPECT_NEAR(y(1, 1).imag(), 0.009114939385653085, 1e-15);
    EXPECT_NEAR(y(0, 1).imag(), 0.01289047089939928, 1e-15);
    EXPECT_NEAR(y(1, 0).imag(), 0.01289047089939928, 1e-15);
}

TEST(AbcdToY2, SymmetricForReciprocalInputs) {
    Rng rng(12);
    std::uniform_real_distribution<double> th(0.1, 3.0);
    std::uniform_real_distribution<double> z(10.0, 300.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double t = th(rng);
        const double z0 = z(rng);
        const TwoPortABCD m{std::cos(t), Complex{0.0, z0 * std::sin(t)}, Complex{0.0, std::sin(t) / z0},
                            std::cos(t)};
        EXPECT_NEAR(std::abs(m.determinant() - 1.0), 0.0, 1e-12);
        EXPECT_LE(symmetry_defect(abcd_to_y2(m)), 1e-15);
    }
}
