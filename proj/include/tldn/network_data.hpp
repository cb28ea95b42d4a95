#pragma once

#include <cstddef>
#include <vector>

#include "tldn/linalg.hpp"
#include "tldn/netconv.hpp"

namespace tldn {

enum class DataFormat { RI, MA, DB };
enum class FrequencyUnit { Hz, kHz, MHz, GHz };

double unit_scale(FrequencyUnit u);

/// Frequency-indexed S-parameters of an N-port at a uniform reference impedance.
struct NetworkData {
    std::size_t n_ports = 0;
    std::vector<double> frequencies;        // Hz, strictly ascending
    std::vector<ComplexMatrix> matrices;    // one N×N matrix per frequency
    PortReference ref;
    DataFormat source_format = DataFormat::RI;
    FrequencyUnit source_funit = FrequencyUnit::Hz;
};

/// Throws ValidationError if sizes disagree or frequencies are not strictly ascending.
void validate(const NetworkData& net);

/// Index of the grid point within rel_tol of f, if any.
std::ptrdiff_t find_frequency(const NetworkData& net, double f_hz, double rel_tol = 1e-9);

/// Index of the grid point closest to f.
std::size_t nearest_frequency(const NetworkData& net, double f_hz);

}  // namespace tldn
