#include "tldn/loadgen.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "tldn/errors.hpp"

namespace tldn {

NetworkData generate_load(const LoadgenParams& p) {
    if (p.n < 1) throw ValidationError("invalid_argument", "loadgen: n must be at least 1");
    if (p.points < 1) throw ValidationError("invalid_argument", "loadgen: points must be at least 1");
    if (!(p.coupling_level >= 0.0 && p.coupling_level < 1.0)) {
        throw ValidationError("invalid_argument", "loadgen: coupling level must lie in [0, 1)");
    }
    if (!(p.f0_hz > 0.0) || !(p.span_hz >= 0.0)) {
        throw ValidationError("invalid_argument", "loadgen: f0 must be positive and span non-negative");
    }

    const auto n = static_cast<Index>(p.n);
    std::mt19937_64 rng(p.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    Eigen::MatrixXcd g(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex{re, im};
        }
    }
    Eigen::MatrixXcd s0 = (g + g.transpose()) / 2.0;
    const double smax = svd(ComplexMatrix(s0)).sigma.front();
    s0 *= smax > 0.0 ? p.coupling_level / smax : 0.0;

    std::vector<double> delay(p.n);  // cycles of phase per unit relative detuning
    for (auto& d : delay) d = 0.5 + uni(rng);
    const double q = 1.0 + 2.0 * uni(rng);

    NetworkData out;
    out.n_ports = p.n;
    out.ref = PortReference(p.z_ref_ohm);
    out.source_format = DataFormat::RI;
    out.source_funit = FrequencyUnit::Hz;

    const std::size_t centre = (p.points - 1) / 2;
    const double step = p.points > 1 ? p.span_hz / static_cast<double>(p.points - 1) : 0.0;
    for (std::size_t k = 0; k < p.points; ++k) {
        const double f = p.f0_hz + (static_cast<double>(k) - static_cast<double>(centre)) * step;
        if (!(f > 0.0)) {
            std::ostringstream os;
            os << "loadgen: span reaches a non-positive frequency (" << f << " Hz)";
            throw ValidationError("invalid_argument", os.str());
        }
        const double x = k == centre ? 0.0 : (f - p.f0_hz) / p.f0_hz;
        Eigen::VectorXcd d(n);
        for (Index i = 0; i < n; ++i) {
            d(i) = std::polar(1.0, -2.0 * std::numbers::pi * delay[static_cast<std::size_t>(i)] * x);
        }
        const Complex h = 1.0 / Complex{1.0, q * x};
        Eigen::MatrixXcd s = h * (d.asDiagonal() * s0 * d.asDiagonal());
        out.frequencies.push_back(f);
        out.matrices.emplace_back(std::move(s));
    }
    return out;
}

}  // namespace tldn
