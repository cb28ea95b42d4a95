#include "tldn/cascade.hpp"

#include <algorithm>
#include <exception>
#include <sstream>
#include <thread>

#include "tldn/tolerances.hpp"

namespace tldn {

namespace {

struct PointResult {
    ComplexMatrix s;
    std::vector<std::string> flags;
    std::exception_ptr error;
};

PointResult evaluate_point(const PiNetwork& pi, double f, const ComplexMatrix& s_load,
                           const PortReference& ref) {
    PointResult out;
    double f_eval = f;
    if (!singular_branches(pi, f).empty()) {
        f_eval = f * (1.0 + tol::kFrequencyNudge);
        if (!singular_branches(pi, f_eval).empty()) f_eval = f * (1.0 - tol::kFrequencyNudge);
        std::ostringstream os;
        os << kFlagPerturbed << "@" << f_eval;
        out.flags.push_back(os.str());
    }
    try {
        out.s = terminate(pi_network_s(pi, f_eval, ref), s_load);
    } catch (const Error& e) {
        std::ostringstream os;
        os << "at f = " << f << " Hz: " << e.what();
        if (dynamic_cast<const ValidationError*>(&e)) {
            out.error = std::make_exception_ptr(ValidationError(e.kind(), os.str()));
        } else if (dynamic_cast<const InputError*>(&e)) {
            out.error = std::make_exception_ptr(InputError(e.kind(), os.str()));
        } else {
            out.error = std::make_exception_ptr(NumericError(e.kind(), os.str()));
        }
    }
    return out;
}

}  // namespace

ComplexMatrix terminate(const ComplexMatrix& s_dn, const ComplexMatrix& s_load) {
    const Index n = s_load.rows();
    if (!s_load.is_square() || s_dn.rows() != 2 * n || s_dn.cols() != 2 * n) {
        std::ostringstream os;
        os << "terminate: a " << s_dn.rows() << "x" << s_dn.cols() << " decoupler cannot take a "
           << s_load.rows() << "x" << s_load.cols() << " load";
        throw DimensionError(os.str());
    }
    const ComplexMatrix s11 = s_dn.block(0, 0, n, n);
    const ComplexMatrix s12 = s_dn.block(0, n, n, n);
    const ComplexMatrix s21 = s_dn.block(n, 0, n, n);
    const ComplexMatrix s22 = s_dn.block(n, n, n, n);

    const ComplexMatrix loop = ComplexMatrix::identity(n) - s22 * s_load;
    const double cond = condition_estimate(loop);
    if (!(cond < tol::kConditionLimit)) {
        std::ostringstream os;
        os << "terminate: I - S22*S_L is singular (condition estimate " << cond << ")";
        throw SingularityError("termination_singularity", os.str(), cond);
    }
    return s11 + s12 * s_load * solve(loop, s21);
}

ComplexMatrix pi_network_s(const PiNetwork& pi, double f_hz, const PortReference& ref) {
    return y_to_s(assemble_pi_y(pi, f_hz), ref);
}

CompositeResponse sweep(const PiNetwork& pi, const NetworkData& load, const PortReference& ref,
                        const SweepOptions& opts) {
    validate(load);
    if (pi.n_ports() != 2 * load.n_ports) {
        std::ostringstream os;
        os << "sweep: a " << pi.n_ports() << "-port decoupler does not fit a " << load.n_ports
           << "-port load";
        throw DimensionError(os.str());
    }
    if (load.frequencies.empty()) throw InputError("empty_load", "load has no frequency points");
    const double f0 = pi.f0();
    const double lo = load.frequencies.front();
    const double hi = load.frequencies.back();
    if (f0 < lo * (1 - 1e-9) || f0 > hi * (1 + 1e-9)) {
        std::ostringstream os;
        os << "design frequency " << f0 << " Hz lies outside the load range [" << lo << ", " << hi << "] Hz";
        throw InputError("f0_out_of_range", os.str());
    }
    const std::ptrdiff_t design_index = find_frequency(load, f0);

    const std::size_t count = load.frequencies.size();
    std::vector<PointResult> points(count);
    const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(count)));
    auto work = [&](unsigned tid) {
        for (std::size_t k = tid; k < count; k += threads) {
            points[k] = evaluate_point(pi, load.frequencies[k], load.matrices[k], ref);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }

    CompositeResponse out;
    out.frequencies = load.frequencies;
    out.s_matrices.reserve(count);
    out.annotations.reserve(count);
    for (auto& p : points) {
        if (p.error) std::rethrow_exception(p.error);
        out.s_matrices.push_back(std::move(p.s));
        out.annotations.push_back(std::move(p.flags));
    }
    if (design_index < 0) out.annotations[nearest_frequency(load, f0)].push_back(kFlagNearestF0);
    return out;
}

}  // namespace tldn
