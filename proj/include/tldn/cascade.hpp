#pragma once

#include <string>
#include <vector>

#include "tldn/errors.hpp"
#include "tldn/linalg.hpp"
#include "tldn/netconv.hpp"
#include "tldn/network_data.hpp"
#include "tldn/tlmodel.hpp"

namespace tldn {

/// Composite N-port response of a decoupler terminated in its load.
struct CompositeResponse {
    std::vector<double> frequencies;                 // ascending, Hz
    std::vector<ComplexMatrix> s_matrices;           // N×N
    std::vector<std::vector<std::string>> annotations;  // per-point flags
};

/// Annotation flags attached to sweep points.
inline constexpr const char* kFlagPerturbed = "perturbed";
inline constexpr const char* kFlagNearestF0 = "nearest_f0";

/// S_comp = S₁₁ + S₁₂·S_L·(I − S₂₂·S_L)⁻¹·S₂₁ where the 2N-port s_dn has its
/// decoupled ports first and its load ports N…2N−1 last.
/// Throws a `termination_singularity` SingularityError on resonance.
ComplexMatrix terminate(const ComplexMatrix& s_dn, const ComplexMatrix& s_load);

/// S-matrix of a π-network at f.
ComplexMatrix pi_network_s(const PiNetwork& pi, double f_hz, const PortReference& ref);

struct SweepOptions {
    unsigned threads = 1;
};

/// Evaluates the π-network at each load grid point and terminates it with the
/// load there. Points where a branch passes sin θ = 0 are evaluated at a
/// frequency nudged by tol::kFrequencyNudge and flagged `perturbed`. If f0 is
/// not on the grid the nearest point is flagged `nearest_f0`.
CompositeResponse sweep(const PiNetwork& pi, const NetworkData& load, const PortReference& ref,
                        const SweepOptions& opts = {});

}  // namespace tldn
