#include "tldn/tlmodel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tldn/tolerances.hpp"

namespace tldn {

TLBranch::TLBranch(PortPair ends, double z0_ohm, double theta0_rad)
    : ends_(PortPair::ordered(ends.i, ends.j)), z0_(z0_ohm), theta0_(theta0_rad) {
    if (!(z0_ohm > 0.0) || !std::isfinite(z0_ohm)) {
        std::ostringstream os;
        os << "branch (" << ends_.i + 1 << "," << ends_.j + 1 << "): Z0 must be positive and finite, got "
           << z0_ohm;
        throw ValidationError("invalid_branch", os.str());
    }
    if (!(theta0_rad > 0.0 && theta0_rad < 2 * std::numbers::pi)) {
        std::ostringstream os;
        os << "branch (" << ends_.i + 1 << "," << ends_.j + 1 << "): theta must lie in (0, 2pi), got "
           << theta0_rad;
        throw ValidationError("invalid_branch", os.str());
    }
}

PiNetwork::PiNetwork(std::size_t n_ports, double f0_hz) : n_ports_(n_ports), f0_(f0_hz) {
    if (n_ports == 0) throw ValidationError("invalid_network", "pi network needs at least one port");
    if (!(f0_hz > 0.0) || !std::isfinite(f0_hz)) {
        throw ValidationError("invalid_network", "design frequency must be positive and finite");
    }
}

void PiNetwork::set(const TLBranch& br) {
    const PortPair p = br.ends();
    if (p.j >= n_ports_) {
        std::ostringstream os;
        os << "branch (" << p.i + 1 << "," << p.j + 1 << ") outside a " << n_ports_ << "-port network";
        throw DimensionError(os.str());
    }
    branches_.insert_or_assign(p, br);
}

void PiNetwork::remove(PortPair p) { branches_.erase(PortPair::ordered(p.i, p.j)); }

std::optional<TLBranch> PiNetwork::branch(std::size_t i, std::size_t j) const {
    const auto it = branches_.find(PortPair::ordered(i, j));
    if (it == branches_.end()) return std::nullopt;
    return it->second;
}

std::vector<TLBranch> PiNetwork::branches() const {
    std::vector<TLBranch> out;
    out.reserve(branches_.size());
    for (const auto& [pair, br] : branches_) out.push_back(br);
    return out;
}

TwoPortABCD branch_abcd(const TLBranch& br, double f_hz, double f0_hz) {
    if (!(f_hz > 0.0)) throw ValidationError("invalid_frequency", "frequency must be positive");
    const double theta = br.theta_at(f_hz, f0_hz);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return TwoPortABCD{c, Complex{0.0, br.z0() * s}, Complex{0.0, s / br.z0()}, c};
}

std::vector<PortPair> singular_branches(const PiNetwork& net, double f_hz) {
    std::vector<PortPair> bad;
    for (const auto& br : net.branches()) {
        if (std::abs(std::sin(br.theta_at(f_hz, net.f0()))) <= tol::kSinEpsilon) bad.push_back(br.ends());
    }
    return bad;
}

ComplexMatrix assemble_pi_y(const PiNetwork& net, double f_hz) {
    if (!(f_hz > 0.0)) throw ValidationError("invalid_frequency", "frequency must be positive");
    if (auto bad = singular_branches(net, f_hz); !bad.empty()) {
        std::ostringstream os;
        os << "at f = " << f_hz << " Hz, sin(theta) vanishes on branch";
        for (const auto& p : bad) os << " TL" << p.i + 1 << (p.j + 1 >= 10 ? "," : "") << p.j + 1;
        throw FrequencySingularityError(os.str(), std::move(bad));
    }

    const auto n = static_cast<Index>(net.n_ports());
    // Imaginary parts only: every term is real/(j·real).
    Eigen::MatrixXd im = Eigen::MatrixXd::Zero(n, n);
    for (const auto& br : net.branches()) {
        const double theta = br.theta_at(f_hz, net.f0());
        const double a = std::cos(theta);
        const double b = br.z0() * std::sin(theta);
        const auto i = static_cast<Index>(br.ends().i);
        const auto j = static_cast<Index>(br.ends().j);
        // a/(j·b) = −j·a/b ; −1/(j·b) = j/b
        im(i, i) -= a / b;
        if (i != j) {
            im(j, j) -= a / b;
            im(i, j) += 1.0 / b;
            im(j, i) += 1.0 / b;
        }
    }
    Eigen::MatrixXcd y(n, n);
    y.real().setZero();
    y.imag() = im;
    return ComplexMatrix(std::move(y));
}

std::vector<PortPair> pi_topology(std::size_t n_ports) {
    std::vector<PortPair> out;
    out.reserve(n_ports * (n_ports + 1) / 2);
    for (std::size_t i = 0; i < n_ports; ++i) {
        for (std::size_t j = i; j < n_ports; ++j) out.push_back({i, j});
    }
    return out;
}

}  // namespace tldn
