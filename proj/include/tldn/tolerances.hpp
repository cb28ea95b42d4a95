#pragma once

// Numerical thresholds shared by the library, its tests and its docs.

namespace tldn::tol {

/// Input checks: symmetry of loads and of matrices handed to takagi().
inline constexpr double kInputSymmetry = 1e-8;
/// Algebraic defects: reconstruction, unitarity of factor matrices.
inline constexpr double kAlgebraic = 1e-10;
/// Singular values closer than this (absolute) form one Takagi block.
inline constexpr double kDegeneracy = 1e-8;
/// Condition estimate at or above which a matrix counts as singular.
inline constexpr double kConditionLimit = 1e12;
/// A branch with |sin(theta)| at or below this has no Y representation.
inline constexpr double kSinEpsilon = 1e-9;
/// Relative frequency nudge applied when a sweep point hits kSinEpsilon.
inline constexpr double kFrequencyNudge = 1e-9;
/// |b| at or below this (ohms) is a through connection.
inline constexpr double kDegenerateB = 1e-12;
/// Real parts of Y below this fraction of max|Y| are treated as round-off.
inline constexpr double kLosslessRealPart = 1e-9;
/// Unitarity / symmetry acceptance for synthesized S_DN.
inline constexpr double kNetworkDefect = 1e-9;
/// Passivity slack on the largest singular value of a load.
inline constexpr double kPassivity = 1e-9;
/// Singular value treated as total reflection.
inline constexpr double kTotalReflection = 1e-12;

}  // namespace tldn::tol
