#pragma once

#include <cstddef>
#include <cstdint>

#include "tldn/network_data.hpp"

namespace tldn {

struct LoadgenParams {
    std::size_t n = 2;
    double f0_hz = 1e9;
    double span_hz = 0.0;      // full width of the grid, centred on f0
    std::size_t points = 1;
    std::uint64_t seed = 1;
    double coupling_level = 0.5;  // largest singular value at f0, in [0, 1)
    double z_ref_ohm = 50.0;
};

/// Synthetic reciprocal, strictly passive N-port sweep.
///
/// At f0 the load is a seeded random complex symmetric matrix S0 scaled so
/// that its largest singular value equals coupling_level. Away from f0,
/// S(f) = h(x)·D(x)·S0·D(x) with x = (f − f0)/f0, D a diagonal of per-port
/// phase delays and h(x) = 1/(1 + j·q·x). D is unitary and |h| <= 1, so the
/// singular values never exceed coupling_level and symmetry is preserved.
/// f0 is always a grid point.
NetworkData generate_load(const LoadgenParams& p);

}  // namespace tldn
