#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "support/oracles.hpp"
#include "tldn/cascade.hpp"
#include "tldn/loadgen.hpp"
#include "tldn/synth.hpp"

using namespace tldn;
using tldn::testing::Rng;

namespace {

SynthesisConfig unpruned_cfg(VChoice v) {
    SynthesisConfig cfg;
    cfg.v = std::move(v);
    cfg.z0_max = std::numeric_limits<double>::infinity();
    return cfg;
}

NetworkData single_point(const ComplexMatrix& s, double f) {
    NetworkData net;
    net.n_ports = static_cast<std::size_t>(s.rows());
    net.frequencies = {f};
    net.matrices = {s};
    return net;
}

}  // namespace

TEST(Terminate, MatchedLoadLeavesS11) {
    Rng rng(1);
    const ComplexMatrix s = tldn::testing::random_symmetric_passive(4, 0.8, rng);
    const ComplexMatrix out = terminate(s, ComplexMatrix(2, 2));
    EXPECT_EQ(max_abs_diff(out, s.block(0, 0, 2, 2)), 0.0);
}

TEST(Terminate, ThroughPassesTheLoad) {
    Eigen::MatrixXcd through = Eigen::MatrixXcd::Zero(4, 4);
    through.topRightCorner(2, 2).setIdentity();
    through.bottomLeftCorner(2, 2).setIdentity();
    const ComplexMatrix load{{0.3, 0.1}, {0.1, Complex{0.0, 0.2}}};
    EXPECT_LE(max_abs_diff(terminate(ComplexMatrix(through), load), load), 1e-16);
}

TEST(Terminate, ShapeChecks) {
    EXPECT_THROW((void)terminate(ComplexMatrix(3, 3), ComplexMatrix(1, 1)), DimensionError);
    EXPECT_THROW((void)terminate(ComplexMatrix(4, 4), ComplexMatrix(1, 1)), DimensionError);
}

TEST(Terminate, ResonanceIsReported) {
    // Open at the load side reflected back by a short: I − S22·S_L = 0.
    const ComplexMatrix s{{0.0, 0.0}, {0.0, 1.0}};
    try {
        (void)terminate(s, ComplexMatrix{{1.0}});
        FAIL() << "expected termination singularity";
    } catch (const SingularityError& e) {
        EXPECT_EQ(e.kind(), "termination_singularity");
    }
}

// Independent oracle: a full nodal solve of network plus load admittance.
TEST(Terminate, AgreesWithNodalSolve) {
    Rng rng(2);
    std::uniform_real_distribution<double> f(0.8, 1.2);
    for (int trial = 0; trial < 60; ++trial) {
        const Index n = 1 + trial % 5;
        const PiNetwork pi = tldn::testing::random_pi(static_cast<std::size_t>(2 * n), 1e9, rng);
        const ComplexMatrix load = tldn::testing::random_symmetric_passive(n, 0.7, rng);
        const double freq = f(rng) * 1e9;
        if (!singular_branches(pi, freq).empty()) continue;
        const ComplexMatrix got = terminate(pi_network_s(pi, freq, PortReference(50.0)), load);
        const Eigen::MatrixXcd oracle =
            tldn::testing::nodal_composite(tldn::testing::nodal_pi_y(pi, freq), load.eigen(), 50.0);
        EXPECT_LE(tldn::testing::max_abs(got.eigen() - oracle), 1e-9) << "trial " << trial;
    }
}

TEST(PiNetworkS, LosslessNetworkIsUnitary) {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const PiNetwork pi = tldn::testing::random_pi(4, 1e9, rng);
        const ComplexMatrix s = pi_network_s(pi, 1e9, PortReference(50.0));
        EXPECT_LE(unitarity_defect(s), 1e-10);
        EXPECT_LE(symmetry_defect(s), 1e-12);
    }
}

TEST(Sweep, SinglePointAtDesignFrequency) {
    Rng rng(4);
    const LoadNetwork load{tldn::testing::random_symmetric_passive(2, 0.6, rng), 1e9, PortReference(50.0)};
    const SynthesisResult r = synthesize(load, unpruned_cfg(VChoice::identity()));
    const CompositeResponse resp = sweep(r.unpruned, single_point(load.s, 1e9), load.ref);
    ASSERT_EQ(resp.frequencies.size(), 1u);
    EXPECT_LE(max_abs(resp.s_matrices[0]), 1e-8);
    EXPECT_TRUE(resp.annotations[0].empty());
}

TEST(Sweep, DecouplingPeaksAtDesignFrequency) {
    LoadgenParams p;
    p.n = 2;
    p.f0_hz = 1e9;
    p.span_hz = 0.4e9;
    p.points = 201;
    p.seed = 11;
    p.coupling_level = 0.6;
    const NetworkData data = generate_load(p);
    const auto i0 = static_cast<std::size_t>(find_frequency(data, 1e9));
    const LoadNetwork load{data.matrices[i0], 1e9, data.ref};
    const SynthesisResult r = synthesize(load, unpruned_cfg(VChoice::random(5)));
    const CompositeResponse resp = sweep(r.unpruned, data, data.ref);
    ASSERT_EQ(resp.frequencies.size(), 201u);

    std::size_t best = 0;
    for (std::size_t k = 0; k < resp.frequencies.size(); ++k) {
        const ComplexMatrix& s = resp.s_matrices[k];
        if (std::abs(s(0, 1)) < std::abs(resp.s_matrices[best](0, 1))) best = k;
        EXPECT_LE(svd(s).sigma.front(), 1.0 + 1e-9) << resp.frequencies[k];
        EXPECT_LE(symmetry_defect(s), 1e-9);
    }
    EXPECT_EQ(best, i0);
    EXPECT_LE(std::abs(resp.s_matrices[i0](0, 1)), 1e-8);
}

TEST(Sweep, NearestPointIsFlaggedWhenDesignFrequencyIsOffGrid) {
    Rng rng(6);
    const LoadNetwork load{tldn::testing::random_symmetric_passive(1, 0.5, rng), 1e9, PortReference(50.0)};
    const SynthesisResult r = synthesize(load, unpruned_cfg(VChoice::random(1)));
    NetworkData data;
    data.n_ports = 1;
    data.frequencies = {0.9e9, 0.99e9, 1.05e9};
    data.matrices = {load.s, load.s, load.s};
    const CompositeResponse resp = sweep(r.unpruned, data, load.ref);
    EXPECT_TRUE(resp.annotations[0].empty());
    ASSERT_EQ(resp.annotations[1].size(), 1u);
    EXPECT_EQ(resp.annotations[1][0], kFlagNearestF0);
    EXPECT_TRUE(resp.annotations[2].empty());
}

TEST(Sweep, BranchResonanceIsNudgedAndFlagged) {
    // A 225° line hits θ = π at 0.8·f0.
    PiNetwork pi(2, 1e9);
    pi.set(TLBranch({0, 1}, 70.0, 5 * std::numbers::pi / 4));
    pi.set(TLBranch({0, 0}, 70.0, 3 * std::numbers::pi / 4));
    pi.set(TLBranch({1, 1}, 70.0, 3 * std::numbers::pi / 4));
    NetworkData data;
    data.n_ports = 1;
    data.frequencies = {0.8e9, 1e9};
    data.matrices = {ComplexMatrix{{0.2}}, ComplexMatrix{{0.2}}};
    const CompositeResponse resp = sweep(pi, data, PortReference(50.0));
    ASSERT_EQ(resp.annotations[0].size(), 1u);
    EXPECT_EQ(resp.annotations[0][0].rfind(kFlagPerturbed, 0), 0u);
    EXPECT_TRUE(resp.annotations[1].empty());
    EXPECT_LE(svd(resp.s_matrices[0]).sigma.front(), 1.0 + 1e-9);
    EXPECT_THROW((void)sweep(pi, single_point(ComplexMatrix{{0.2}}, 0.8e9), PortReference(50.0)), InputError);
}

TEST(Sweep, ThreadedMatchesSerial) {
    LoadgenParams p;
    p.n = 3;
    p.span_hz = 0.4e9;
    p.points = 41;
    p.seed = 3;
    const NetworkData data = generate_load(p);
    const auto i0 = static_cast<std::size_t>(find_frequency(data, p.f0_hz));
    const LoadNetwork load{data.matrices[i0], p.f0_hz, data.ref};
    const SynthesisResult r = synthesize(load, unpruned_cfg(VChoice::random(2)));
    const CompositeResponse a = sweep(r.pi, data, data.ref, {1});
    const CompositeResponse b = sweep(r.pi, data, data.ref, {4});
    ASSERT_EQ(a.s_matrices.size(), b.s_matrices.size());
    for (std::size_t k = 0; k < a.s_matrices.size(); ++k) {
        EXPECT_EQ(max_abs_diff(a.s_matrices[k], b.s_matrices[k]), 0.0);
        EXPECT_EQ(a.annotations[k], b.annotations[k]);
    }
}

TEST(Sweep, RejectsMismatchedPortCount) {
    PiNetwork pi(4, 1e9);
    pi.set(TLBranch({0, 1}, 70.0, 3 * std::numbers::pi / 4));
    EXPECT_THROW((void)sweep(pi, single_point(ComplexMatrix{{0.2}}, 1e9), PortReference(50.0)), DimensionError);
}
