#include "tldn/network_data.hpp"

#include <cmath>
#include <sstream>

#include "tldn/errors.hpp"

namespace tldn {

double unit_scale(FrequencyUnit u) {
    switch (u) {
        case FrequencyUnit::Hz: return 1.0;
        case FrequencyUnit::kHz: return 1e3;
        case FrequencyUnit::MHz: return 1e6;
        case FrequencyUnit::GHz: return 1e9;
    }
    return 1.0;
}

void validate(const NetworkData& net) {
    if (net.frequencies.size() != net.matrices.size()) {
        throw ValidationError("invalid_network_data", "frequency and matrix counts differ");
    }
    const auto n = static_cast<Index>(net.n_ports);
    for (std::size_t k = 0; k < net.matrices.size(); ++k) {
        if (net.matrices[k].rows() != n || net.matrices[k].cols() != n) {
            std::ostringstream os;
            os << "matrix " << k << " is not " << n << "x" << n;
            throw DimensionError(os.str());
        }
        if (!std::isfinite(net.frequencies[k])) {
            throw ValidationError("invalid_network_data", "non-finite frequency");
        }
        if (k > 0 && !(net.frequencies[k] > net.frequencies[k - 1])) {
            std::ostringstream os;
            os << "frequencies not strictly ascending at index " << k;
            throw ValidationError("invalid_network_data", os.str());
        }
    }
}

std::ptrdiff_t find_frequency(const NetworkData& net, double f_hz, double rel_tol) {
    for (std::size_t k = 0; k < net.frequencies.size(); ++k) {
        if (std::abs(net.frequencies[k] - f_hz) <= rel_tol * std::abs(f_hz)) {
            return static_cast<std::ptrdiff_t>(k);
        }
    }
    return -1;
}

std::size_t nearest_frequency(const NetworkData& net, double f_hz) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < net.frequencies.size(); ++k) {
        if (std::abs(net.frequencies[k] - f_hz) < std::abs(net.frequencies[best] - f_hz)) best = k;
    }
    return best;
}

}  // namespace tldn
