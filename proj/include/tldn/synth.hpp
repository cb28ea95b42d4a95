#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tldn/linalg.hpp"
#include "tldn/netconv.hpp"
#include "tldn/tlmodel.hpp"

namespace tldn {

/// N-port reciprocal, passive load at the design frequency.
struct LoadNetwork {
    ComplexMatrix s;
    double f0_hz = 0.0;
    PortReference ref;
};

/// Throws SymmetryError / ValidationError("passivity_error") on an invalid load.
void validate_load(const LoadNetwork& load);

enum class SynthesisMode { standard, custom };

/// The free unitary V of the decoupler.
struct VChoice {
    enum class Kind { identity, random_seeded, explicit_matrix };

    Kind kind = Kind::identity;
    std::uint64_t seed = 0;
    ComplexMatrix matrix;

    static VChoice identity() { return {}; }
    static VChoice random(std::uint64_t seed) { return {Kind::random_seeded, seed, {}}; }
    static VChoice explicit_matrix(ComplexMatrix v) { return {Kind::explicit_matrix, 0, std::move(v)}; }
};

struct SynthesisConfig {
    SynthesisMode mode = SynthesisMode::standard;
    VChoice v;
    /// custom mode: symmetric 2N×2N grid of cos(theta) values, each in (−1, 1) \ {0}.
    std::optional<Eigen::MatrixXd> a_values;
    /// Branches with a larger Z0 are left out (open circuit).
    double z0_max = 5000.0;
    /// Realizable window; branches outside it only produce warnings.
    double z0_advisory_min = 10.0;
    double z0_advisory_max = 300.0;
};

/// cos(theta) fixed in standard mode (3λ/8 or 5λ/8 lines).
inline constexpr double kStandardA = -0.70710678118654752440;

/// Throws ValidationError when cfg is unusable for a 2N-port network.
void validate_config(const SynthesisConfig& cfg, std::size_t n_ports);

struct PrunedBranch {
    PortPair ends;
    double b_ohm;   // signed b̃ = Z0·sin(theta)
    double z0_ohm;
};

struct BranchSolution {
    PiNetwork pi;        // after pruning
    PiNetwork unpruned;  // every solvable branch kept
    std::vector<PrunedBranch> pruned;
    std::vector<std::string> warnings;
};

class LosslessViolationError : public NumericError {
public:
    explicit LosslessViolationError(const std::string& message)
        : NumericError("lossless_violation", message) {}
};

class DegenerateShuntError : public NumericError {
public:
    DegenerateShuntError(const std::string& message, std::size_t port)
        : NumericError("degenerate_shunt", message), port_(port) {}
    std::size_t port() const noexcept { return port_; }

private:
    std::size_t port_;
};

/// Haar-distributed n×n unitary from a seeded Gaussian matrix; column phases
/// are fixed so the result depends on the generator state only.
template <class Rng>
ComplexMatrix haar_unitary(Index n, Rng& rng);

/// Decoupler scattering matrix for a load and a choice of the free unitary v.
/// Ports 0…N−1 are the decoupled side, N…2N−1 the load side.
ComplexMatrix build_sdn(const LoadNetwork& load, const ComplexMatrix& v);

/// Extracts branch (Z0, theta) values by equating the π-network admittance
/// with y_dn: series branches first, then shunts.
BranchSolution solve_branches(const ComplexMatrix& y_dn, const SynthesisConfig& cfg, double f0_hz);

struct SynthesisDiagnostics {
    double unitarity_defect = 0.0;   // max |S_DNᴴS_DN − I|
    double symmetry_defect = 0.0;    // max |S_DN − S_DNᵀ|
    double conjugate_match_defect = 0.0;  // max |S22 − conj(S_L)|
    double y_residual = 0.0;         // max |Y_pi − Y_DN| / max |Y_DN|, after pruning
    double y_residual_unpruned = 0.0;
    std::size_t pruned_count = 0;
    std::size_t v_attempts = 1;
    std::vector<std::string> warnings;
    std::vector<std::string> retries;
};

struct SynthesisResult {
    PiNetwork pi;
    PiNetwork unpruned;
    ComplexMatrix v;
    ComplexMatrix s_dn;
    ComplexMatrix y_dn;
    std::vector<PrunedBranch> pruned;
    SynthesisDiagnostics diagnostics;
};

/// takagi → build_sdn → s_to_y → solve_branches.
///
/// A random V is redrawn up to 8 times when S → Y conversion is singular.
SynthesisResult synthesize(const LoadNetwork& load, const SynthesisConfig& cfg);

inline constexpr int kMaxVRetries = 8;

}  // namespace tldn

#include "tldn/detail/haar.ipp"
