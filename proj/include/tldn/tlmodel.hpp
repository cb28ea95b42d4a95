#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tldn/errors.hpp"
#include "tldn/linalg.hpp"
#include "tldn/netconv.hpp"

namespace tldn {

/// Zero-based port pair with first <= second. first == second is a shunt
/// branch (a short-circuited stub from that port to ground).
struct PortPair {
    std::size_t i = 0;
    std::size_t j = 0;

    static PortPair ordered(std::size_t a, std::size_t b) { return a <= b ? PortPair{a, b} : PortPair{b, a}; }
    bool is_shunt() const noexcept { return i == j; }
    auto operator<=>(const PortPair&) const = default;
};

/// One ideal, lossless TEM transmission line.
class TLBranch {
public:
    /// z0 in ohms (> 0), theta0 in radians at the design frequency, 0 < theta0 < 2π.
    TLBranch(PortPair ends, double z0_ohm, double theta0_rad);

    PortPair ends() const noexcept { return ends_; }
    double z0() const noexcept { return z0_; }
    double theta0() const noexcept { return theta0_; }

    /// Electrical length at f, scaled linearly from f0.
    double theta_at(double f_hz, double f0_hz) const { return theta0_ * f_hz / f0_hz; }

    friend bool operator==(const TLBranch&, const TLBranch&) = default;

private:
    PortPair ends_;
    double z0_;
    double theta0_;
};

/// Generalized π-network over n_ports nodes plus ground: at most one branch per
/// unordered port pair, plus at most one shunt per port. Absent = open circuit.
class PiNetwork {
public:
    PiNetwork(std::size_t n_ports, double f0_hz);

    std::size_t n_ports() const noexcept { return n_ports_; }
    double f0() const noexcept { return f0_; }

    /// Inserts or replaces the branch on br.ends().
    void set(const TLBranch& br);
    void remove(PortPair p);
    std::optional<TLBranch> branch(std::size_t i, std::size_t j) const;
    std::size_t size() const noexcept { return branches_.size(); }

    /// Branches sorted by (i, j).
    std::vector<TLBranch> branches() const;

private:
    std::size_t n_ports_;
    double f0_;
    std::map<PortPair, TLBranch> branches_;
};

class FrequencySingularityError : public NumericError {
public:
    FrequencySingularityError(const std::string& message, std::vector<PortPair> offending)
        : NumericError("frequency_singularity", message), offending_(std::move(offending)) {}
    const std::vector<PortPair>& offending() const noexcept { return offending_; }

private:
    std::vector<PortPair> offending_;
};

/// a = d = cos θ(f), b = j·z0·sin θ(f), c = j·sin θ(f)/z0.
TwoPortABCD branch_abcd(const TLBranch& br, double f_hz, double f0_hz);

/// Branches whose |sin θ(f)| <= tol::kSinEpsilon.
std::vector<PortPair> singular_branches(const PiNetwork& net, double f_hz);

/// Nodal admittance matrix of the π-network at f. Purely imaginary and symmetric.
/// Throws FrequencySingularityError if any branch is singular at f.
ComplexMatrix assemble_pi_y(const PiNetwork& net, double f_hz);

/// Every pair of the full π grid over n ports, ordered by (i, j):
/// n(n−1)/2 series pairs and n shunts.
std::vector<PortPair> pi_topology(std::size_t n_ports);

}  // namespace tldn
