#include "tldn/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "tldn/errors.hpp"
#include "tldn/tolerances.hpp"

namespace tldn {

namespace {

constexpr double kPi = std::numbers::pi;

std::string pair_name(PortPair p) {
    std::ostringstream os;
    os << "TL" << p.i + 1 << (p.j + 1 >= 10 ? "," : "") << p.j + 1;
    return os.str();
}

// cos(theta) assigned to a pair.
double a_for(const SynthesisConfig& cfg, PortPair p) {
    if (cfg.mode == SynthesisMode::standard) return kStandardA;
    return (*cfg.a_values)(static_cast<Index>(p.i), static_cast<Index>(p.j));
}

// Maps a signed b̃ = Z0·sin(theta) onto a physical line with cos(theta) = a.
TLBranch branch_from_b(PortPair p, double a, double b, SynthesisMode mode) {
    if (mode == SynthesisMode::standard) {
        // 3λ/8 when b̃ > 0, 5λ/8 when b̃ < 0; |sin| = 1/√2 either way.
        const double theta = b > 0.0 ? 3.0 * kPi / 4.0 : 5.0 * kPi / 4.0;
        return TLBranch(p, std::numbers::sqrt2 * std::abs(b), theta);
    }
    double theta = std::acos(a);
    if (b < 0.0) theta = 2.0 * kPi - theta;
    return TLBranch(p, b / std::sin(theta), theta);
}

struct SeriesValue {
    PortPair ends;
    double b;
    double z0;
    bool kept;
};

}  // namespace

void validate_load(const LoadNetwork& load) {
    if (!load.s.is_square() || load.s.rows() == 0) throw DimensionError("load S-matrix must be square and non-empty");
    if (!(load.f0_hz > 0.0) || !std::isfinite(load.f0_hz)) {
        throw ValidationError("invalid_frequency", "design frequency must be positive and finite");
    }
    const double asym = symmetry_defect(load.s);
    if (asym > tol::kInputSymmetry) {
        std::ostringstream os;
        os << "load is not reciprocal: max |s_ij - s_ji| = " << asym;
        throw SymmetryError(os.str(), asym);
    }
    const double smax = svd(load.s).sigma.front();
    if (smax > 1.0 + tol::kPassivity) {
        std::ostringstream os;
        os << "load is not passive: largest singular value " << smax;
        throw ValidationError("passivity_error", os.str());
    }
}

void validate_config(const SynthesisConfig& cfg, std::size_t n_ports) {
    if (!(cfg.z0_max > 0.0)) throw ValidationError("invalid_config", "z0_max must be positive");
    if (cfg.mode == SynthesisMode::standard) return;
    if (!cfg.a_values) throw ValidationError("invalid_config", "custom mode requires a value for every branch");
    const Eigen::MatrixXd& a = *cfg.a_values;
    const auto n = static_cast<Index>(n_ports);
    if (a.rows() != n || a.cols() != n) {
        std::ostringstream os;
        os << "custom a grid must be " << n << "x" << n << ", got " << a.rows() << "x" << a.cols();
        throw ValidationError("invalid_config", os.str());
    }
    for (Index i = 0; i < n; ++i) {
        for (Index j = i; j < n; ++j) {
            const double v = a(i, j);
            if (!std::isfinite(v) || !(std::abs(v) < 1.0) || v == 0.0) {
                std::ostringstream os;
                os << "a(" << i + 1 << "," << j + 1 << ") = " << v << " is outside (-1, 1) \\ {0}";
                throw ValidationError("invalid_config", os.str());
            }
            if (a(j, i) != v) {
                std::ostringstream os;
                os << "custom a grid is not symmetric at (" << i + 1 << "," << j + 1 << ")";
                throw ValidationError("invalid_config", os.str());
            }
        }
    }
}

ComplexMatrix build_sdn(const LoadNetwork& load, const ComplexMatrix& v) {
    validate_load(load);
    const Index n = load.s.rows();
    if (v.rows() != n || v.cols() != n) throw DimensionError("V must match the load port count");
    if (const double d = unitarity_defect(v); d > tol::kAlgebraic) {
        std::ostringstream os;
        os << "V is not unitary (defect " << d << ")";
        throw ValidationError("non_unitary_v", os.str());
    }

    // S_L = U_L·Λ·U_Lᵀ from the Takagi factorization, with V_L = conj(U_L).
    // This assignment makes the load-side block the conjugate of S_L.
    const TakagiFactors tk = takagi(load.s);
    const ComplexMatrix& u_l = tk.u;
    const ComplexMatrix v_l = u_l.conjugate();
    const ComplexMatrix lambda = ComplexMatrix::diagonal(std::span<const double>(tk.lambda));
    std::vector<double> root(tk.lambda.size());
    for (std::size_t k = 0; k < root.size(); ++k) {
        root[k] = std::sqrt(std::max(0.0, 1.0 - tk.lambda[k] * tk.lambda[k]));
    }
    const ComplexMatrix r = ComplexMatrix::diagonal(std::span<const double>(root));
    const ComplexMatrix vt = v.transpose();

    const ComplexMatrix s11 = -(v * v_l.adjoint() * u_l.conjugate() * lambda * vt);
    const ComplexMatrix s12 = v * r * u_l.adjoint();
    const ComplexMatrix s21 = u_l.conjugate() * r * vt;
    const ComplexMatrix s22 = v_l * lambda * u_l.adjoint();

    Eigen::MatrixXcd s(2 * n, 2 * n);
    s << s11.eigen(), s12.eigen(), s21.eigen(), s22.eigen();
    return ComplexMatrix(std::move(s));
}

BranchSolution solve_branches(const ComplexMatrix& y_dn, const SynthesisConfig& cfg, double f0_hz) {
    if (!y_dn.is_square()) throw DimensionError("Y_DN must be square");
    const std::size_t n = static_cast<std::size_t>(y_dn.rows());
    validate_config(cfg, n);

    const double scale = max_abs(y_dn);
    if (const double re = max_abs_real(y_dn); re > tol::kLosslessRealPart * scale) {
        std::ostringstream os;
        os << "Y_DN has a real part of " << re << " S (max |Y| = " << scale
           << " S); a lossless line network cannot realize it";
        throw LosslessViolationError(os.str());
    }
    if (const double asym = symmetry_defect(y_dn); asym > tol::kLosslessRealPart * scale) {
        std::ostringstream os;
        os << "Y_DN is not symmetric (max |y_ij - y_ji| = " << asym << ")";
        throw SymmetryError(os.str(), asym);
    }
    const Eigen::MatrixXd im = (y_dn.eigen().imag() + y_dn.eigen().imag().transpose()) / 2.0;

    BranchSolution out{PiNetwork(n, f0_hz), PiNetwork(n, f0_hz), {}, {}};

    // Off-diagonal: Y_nk = −1/(j·b̃) = j/b̃.
    std::vector<SeriesValue> series;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double y = im(static_cast<Index>(i), static_cast<Index>(j));
            if (y == 0.0) continue;  // no coupling: the branch is an open circuit
            const PortPair p{i, j};
            const double b = 1.0 / y;
            const TLBranch br = branch_from_b(p, a_for(cfg, p), b, cfg.mode);
            const bool kept = br.z0() <= cfg.z0_max;
            series.push_back({p, b, br.z0(), kept});
            out.unpruned.set(br);
            if (kept) {
                out.pi.set(br);
            } else {
                out.pruned.push_back({p, b, br.z0()});
            }
        }
    }

    // Diagonal: Im(Y_nn) = −Σ_k a_nk/b̃_nk, the shunt term included. Solved
    // once with every series branch and once with the kept ones only, so the
    // pruned network absorbs dropped series terms into its shunts.
    auto shunt_b = [&](std::size_t port, bool kept_only) {
        double sum = 0.0;
        for (const auto& s : series) {
            if (s.ends.i != port && s.ends.j != port) continue;
            if (kept_only && !s.kept) continue;
            sum += a_for(cfg, s.ends) / s.b;
        }
        const double denom = -im(static_cast<Index>(port), static_cast<Index>(port)) - sum;
        if (denom == 0.0 || !std::isfinite(denom)) {
            std::ostringstream os;
            os << "shunt branch at port " << port + 1
               << " has zero admittance to solve for; its impedance is unbounded";
            throw DegenerateShuntError(os.str(), port);
        }
        return a_for(cfg, PortPair{port, port}) / denom;
    };

    for (std::size_t k = 0; k < n; ++k) {
        const PortPair p{k, k};
        const double a = a_for(cfg, p);
        out.unpruned.set(branch_from_b(p, a, shunt_b(k, false), cfg.mode));

        const double b = shunt_b(k, true);
        const TLBranch br = branch_from_b(p, a, b, cfg.mode);
        if (br.z0() <= cfg.z0_max) {
            out.pi.set(br);
        } else {
            out.pruned.push_back({p, b, br.z0()});
        }
    }

    for (const auto& br : out.pi.branches()) {
        if (br.z0() < cfg.z0_advisory_min || br.z0() > cfg.z0_advisory_max) {
            std::ostringstream os;
            os << pair_name(br.ends()) << ": Z0 = " << br.z0() << " ohm is outside the realizable window ["
               << cfg.z0_advisory_min << ", " << cfg.z0_advisory_max << "] ohm";
            out.warnings.push_back(os.str());
        }
    }
    return out;
}

SynthesisResult synthesize(const LoadNetwork& load, const SynthesisConfig& cfg) {
    validate_load(load);
    const Index n = load.s.rows();
    validate_config(cfg, static_cast<std::size_t>(2 * n));

    SynthesisDiagnostics diag;
    for (double l : takagi(load.s).lambda) {
        if (l > 1.0 - tol::kTotalReflection) {
            std::ostringstream os;
            os << "singular value " << l << " is a total reflection; the matching block vanishes";
            diag.warnings.push_back(os.str());
        }
    }

    std::mt19937_64 rng(cfg.v.seed);
    ComplexMatrix v;
    switch (cfg.v.kind) {
        case VChoice::Kind::identity: v = ComplexMatrix::identity(n); break;
        case VChoice::Kind::random_seeded: v = haar_unitary(n, rng); break;
        case VChoice::Kind::explicit_matrix: v = cfg.v.matrix; break;
    }

    ComplexMatrix s_dn;
    ComplexMatrix y_dn;
    for (int attempt = 0;; ++attempt) {
        s_dn = build_sdn(load, v);
        try {
            y_dn = s_to_y(s_dn, load.ref);
            diag.v_attempts = static_cast<std::size_t>(attempt) + 1;
            break;
        } catch (const SingularityError& e) {
            if (cfg.v.kind != VChoice::Kind::random_seeded) {
                throw SingularityError(
                    "conversion_singularity",
                    std::string(e.what()) +
                        "; this V gives a decoupler without an admittance matrix. V is the free "
                        "design parameter: choose another unitary V or a seeded random one",
                    e.condition());
            }
            if (attempt >= kMaxVRetries) {
                throw SingularityError(
                    "conversion_singularity",
                    std::string(e.what()) + "; gave up after " + std::to_string(kMaxVRetries) +
                        " re-randomizations of V",
                    e.condition());
            }
            std::ostringstream os;
            os << "attempt " << attempt + 1 << ": " << e.what() << "; redrawing V";
            diag.retries.push_back(os.str());
            v = haar_unitary(n, rng);
        }
    }

    BranchSolution sol = solve_branches(y_dn, cfg, load.f0_hz);

    const ComplexMatrix s22 = s_dn.block(n, n, n, n);
    diag.unitarity_defect = unitarity_defect(s_dn);
    diag.symmetry_defect = symmetry_defect(s_dn);
    diag.conjugate_match_defect = max_abs_diff(s22, load.s.conjugate());
    const double yscale = max_abs(y_dn);
    diag.y_residual = max_abs_diff(assemble_pi_y(sol.pi, load.f0_hz), y_dn) / yscale;
    diag.y_residual_unpruned = max_abs_diff(assemble_pi_y(sol.unpruned, load.f0_hz), y_dn) / yscale;
    diag.pruned_count = sol.pruned.size();
    diag.warnings.insert(diag.warnings.end(), sol.warnings.begin(), sol.warnings.end());

    return SynthesisResult{std::move(sol.pi), std::move(sol.unpruned), std::move(v), std::move(s_dn),
                           std::move(y_dn),   std::move(sol.pruned),   std::move(diag)};
}

}  // namespace tldn
