#include "tldn/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "tldn/cascade.hpp"
#include "tldn/dn_document.hpp"
#include "tldn/errors.hpp"
#include "tldn/synth.hpp"
#include "tldn/touchstone.hpp"

namespace tldn::cli {

namespace {

using nlohmann::json;

void report(std::ostream& err, const std::string& kind, const std::string& message) {
    err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ValidationError& e) {
        report(err, e.kind(), e.what());
        return kValidationError;
    } catch (const NumericError& e) {
        report(err, e.kind(), e.what());
        return kSynthesisError;
    } catch (const InputError& e) {
        report(err, e.kind(), e.what());
        return kInputError;
    } catch (const Error& e) {
        report(err, e.kind(), e.what());
        return kSynthesisError;
    } catch (const std::exception& e) {
        report(err, "internal_error", e.what());
        return kSynthesisError;
    }
}

std::string g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double to_db(double mag) { return mag > 0.0 ? std::max(20.0 * std::log10(mag), -400.0) : -400.0; }

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("io_error", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("io_error", "cannot write '" + path + "'");
    out << text;
    if (!out) throw InputError("io_error", "write to '" + path + "' failed");
}

json parse_json_file(const std::string& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw InputError("json_error", path + ": " + e.what());
    }
}

DataFormat format_arg(const std::string& s) {
    const auto f = touchstone::parse_format_name(s);
    if (!f) throw InputError("invalid_argument", "unknown data format '" + s + "' (RI, MA or DB)");
    return *f;
}

// Index of f0 on the load grid; otherwise an input error naming the neighbours.
std::size_t grid_index(const NetworkData& load, double f0) {
    const std::ptrdiff_t k = find_frequency(load, f0);
    if (k >= 0) return static_cast<std::size_t>(k);
    std::ostringstream os;
    os << "design frequency " << g9(f0) << " Hz is not on the load grid; nearest points:";
    const auto& fs = load.frequencies;
    const auto it = std::lower_bound(fs.begin(), fs.end(), f0);
    if (it != fs.begin()) os << " " << g9(*(it - 1)) << " Hz";
    if (it != fs.end()) os << " " << g9(*it) << " Hz";
    throw InputError("f0_not_on_grid", os.str());
}

VChoice parse_v(const std::string& spec, std::size_t n) {
    if (spec == "identity") return VChoice::identity();
    if (spec.rfind("random:", 0) == 0) {
        try {
            std::size_t used = 0;
            const unsigned long long seed = std::stoull(spec.substr(7), &used);
            if (used != spec.size() - 7) throw std::invalid_argument("trailing characters");
            return VChoice::random(seed);
        } catch (const std::exception&) {
            throw InputError("invalid_argument", "bad V seed in '" + spec + "'");
        }
    }
    if (spec.rfind("file:", 0) == 0) {
        const json j = parse_json_file(spec.substr(5));
        const json& rows = j.is_object() ? j.at("matrix") : j;
        Eigen::MatrixXcd m(static_cast<Index>(n), static_cast<Index>(n));
        try {
            if (rows.size() != n) throw InputError("invalid_argument", "V matrix must be n x n");
            for (std::size_t i = 0; i < n; ++i) {
                if (rows.at(i).size() != n) throw InputError("invalid_argument", "V matrix must be n x n");
                for (std::size_t k = 0; k < n; ++k) {
                    const json& e = rows.at(i).at(k);
                    m(static_cast<Index>(i), static_cast<Index>(k)) =
                        e.is_array() ? Complex{e.at(0).get<double>(), e.at(1).get<double>()}
                                     : Complex{e.get<double>(), 0.0};
                }
            }
        } catch (const json::exception& e) {
            throw InputError("json_error", std::string("V matrix: ") + e.what());
        }
        return VChoice::explicit_matrix(ComplexMatrix(std::move(m)));
    }
    throw InputError("invalid_argument", "V must be identity, random:<seed> or file:<path>");
}

Eigen::MatrixXd parse_a_file(const std::string& path) {
    const json j = parse_json_file(path);
    try {
        const json& rows = j.is_object() ? j.at("a") : j;
        const auto r = static_cast<Index>(rows.size());
        Eigen::MatrixXd a(r, r);
        for (Index i = 0; i < r; ++i) {
            const json& row = rows.at(static_cast<std::size_t>(i));
            if (static_cast<Index>(row.size()) != r) throw InputError("invalid_argument", "a grid must be square");
            for (Index k = 0; k < r; ++k) a(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
        }
        return a;
    } catch (const json::exception& e) {
        throw InputError("json_error", path + ": " + e.what());
    }
}

double composite_max(const PiNetwork& pi, const ComplexMatrix& s_load, const PortReference& ref) {
    return max_abs(terminate(pi_network_s(pi, pi.f0(), ref), s_load));
}

std::string branch_label(std::size_t i, std::size_t j) {
    std::ostringstream os;
    os << "TL" << i << (i >= 10 || j >= 10 ? "," : "") << j;
    return os.str();
}

void print_branch_table(std::ostream& out, const SynthesisResult& r, double z0_max) {
    out << std::left << std::setw(12) << "TL Branch" << std::right << std::setw(14) << "Z0 (ohm)"
        << std::setw(16) << "theta (degree)" << "\n";
    constexpr double deg = 180.0 / std::numbers::pi;
    for (const auto& br : r.unpruned.branches()) {
        const auto p = br.ends();
        // Rows mirror the full grid; shunt values differ slightly after pruning.
        const auto kept = r.pi.branch(p.i, p.j);
        const TLBranch& shown = kept ? *kept : br;
        char z0[32];
        char th[32];
        std::snprintf(z0, sizeof z0, "%.2f", shown.z0());
        std::snprintf(th, sizeof th, "%.6g", shown.theta0() * deg);
        out << std::left << std::setw(12) << branch_label(p.i + 1, p.j + 1) << std::right << std::setw(14) << z0
            << std::setw(16) << th;
        if (!kept) out << "  (pruned, Z0 > " << g9(z0_max) << " ohm)";
        out << "\n";
    }
}

}  // namespace

int cmd_synthesize(const SynthesizeArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::vector<std::string> parse_warnings;
        const NetworkData data = touchstone::parse_file(args.load, &parse_warnings);
        const std::size_t k = grid_index(data, args.f0_hz);

        SynthesisConfig cfg;
        if (args.mode == "standard") {
            cfg.mode = SynthesisMode::standard;
        } else if (args.mode == "custom") {
            cfg.mode = SynthesisMode::custom;
            if (!args.a_file) throw InputError("invalid_argument", "custom mode needs --a-file");
            cfg.a_values = parse_a_file(*args.a_file);
        } else {
            throw InputError("invalid_argument", "mode must be standard or custom");
        }
        cfg.v = parse_v(args.v, data.n_ports);
        cfg.z0_max = args.z0_max;

        const LoadNetwork load{data.matrices[k], data.frequencies[k], data.ref};
        const SynthesisResult result = synthesize(load, cfg);

        DNDocument doc = make_document(result, cfg, data.ref.z_ref());
        doc.f0_hz = load.f0_hz;
        doc.diagnostics.composite_max_pruned = composite_max(result.pi, load.s, load.ref);
        doc.diagnostics.composite_max_unpruned = composite_max(result.unpruned, load.s, load.ref);
        doc.diagnostics.warnings.insert(doc.diagnostics.warnings.begin(), parse_warnings.begin(),
                                        parse_warnings.end());
        write_document(args.out, doc);

        print_branch_table(out, result, cfg.z0_max);
        out << "pruned branches: " << result.pruned.size() << "\n"
            << "max |S_comp(f0)|: " << g9(*doc.diagnostics.composite_max_pruned) << " (pruned), "
            << g9(*doc.diagnostics.composite_max_unpruned) << " (unpruned)\n";
        for (const auto& w : doc.diagnostics.warnings) err << "warning: " << w << "\n";
        return kOk;
    });
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const NetworkData data = touchstone::parse_file(args.load);
        const DNDocument doc = read_document(args.dn);
        if (doc.n != data.n_ports) {
            std::ostringstream os;
            os << "DN is for a " << doc.n << "-port load but the load file has " << data.n_ports << " ports";
            throw DimensionError(os.str());
        }
        if (std::abs(doc.z_ref_ohm - data.ref.z_ref()) > 1e-9 * doc.z_ref_ohm) {
            throw ValidationError("reference_mismatch", "DN and load use different reference impedances");
        }
        const std::size_t k = grid_index(data, doc.f0_hz);
        const PiNetwork pi = to_pi_network(doc);
        const ComplexMatrix s = terminate(pi_network_s(pi, doc.f0_hz, data.ref), data.matrices[k]);
        const double worst = max_abs(s);

        out << "f0_hz: " << g9(doc.f0_hz) << "\n" << "max_abs_s: " << g9(worst) << "\n";
        for (Index i = 0; i < s.rows(); ++i) {
            for (Index j = 0; j < s.cols(); ++j) {
                out << "S" << i + 1 << (s.rows() >= 10 ? "," : "") << j + 1 << ": " << std::fixed
                    << std::setprecision(2) << to_db(std::abs(s(i, j))) << " dB\n"
                    << std::defaultfloat;
            }
        }
        const bool pass = worst < args.threshold;
        out << "status: " << (pass ? "PASS" : "FAIL") << " (threshold " << g9(args.threshold) << ")\n";
        return pass ? kOk : kAboveThreshold;
    });
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const DataFormat fmt = format_arg(args.format);
        const NetworkData data = touchstone::parse_file(args.load);
        const DNDocument doc = read_document(args.dn);
        if (doc.n != data.n_ports) {
            std::ostringstream os;
            os << "DN is for a " << doc.n << "-port load but the load file has " << data.n_ports << " ports";
            throw DimensionError(os.str());
        }
        const PiNetwork pi = to_pi_network(doc);
        const CompositeResponse resp = sweep(pi, data, data.ref, SweepOptions{args.threads});

        NetworkData composite;
        composite.n_ports = data.n_ports;
        composite.frequencies = resp.frequencies;
        composite.matrices = resp.s_matrices;
        composite.ref = data.ref;
        composite.source_format = fmt;
        composite.source_funit = data.source_funit;
        touchstone::WriteOptions wopt;
        wopt.design_frequency_hz = doc.f0_hz;
        wopt.comments.push_back("composite response of decoupler '" + args.dn + "' on load '" + args.load + "'");
        touchstone::write_file(args.out_snp, composite, fmt, wopt);

        bool any_flag = false;
        for (const auto& a : resp.annotations) any_flag = any_flag || !a.empty();

        if (args.out_csv) {
            std::ostringstream csv;
            const std::size_t n = data.n_ports;
            csv << "freq_hz";
            for (std::size_t i = 1; i <= n; ++i) {
                for (std::size_t j = 1; j <= n; ++j) csv << ",S" << i << (n >= 10 ? "_" : "") << j << "_db";
            }
            if (any_flag) csv << ",flags";
            csv << "\n";
            for (std::size_t k = 0; k < resp.frequencies.size(); ++k) {
                csv << g9(resp.frequencies[k]);
                const ComplexMatrix& s = resp.s_matrices[k];
                for (Index i = 0; i < s.rows(); ++i) {
                    for (Index j = 0; j < s.cols(); ++j) csv << "," << g9(to_db(std::abs(s(i, j))));
                }
                if (any_flag) {
                    csv << ",";
                    for (std::size_t f = 0; f < resp.annotations[k].size(); ++f) {
                        csv << (f ? ";" : "") << resp.annotations[k][f];
                    }
                }
                csv << "\n";
            }
            write_text(*args.out_csv, csv.str());
        }

        std::size_t flagged = 0;
        for (const auto& a : resp.annotations) flagged += a.empty() ? 0 : 1;
        out << "points: " << resp.frequencies.size() << "\n" << "annotated points: " << flagged << "\n";
        return kOk;
    });
}

int cmd_loadgen(const LoadgenArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const DataFormat fmt = format_arg(args.format);
        NetworkData net = generate_load(args.params);
        net.source_format = fmt;
        touchstone::WriteOptions wopt;
        wopt.design_frequency_hz = args.params.f0_hz;
        std::ostringstream c;
        c << "synthetic load: n=" << args.params.n << " seed=" << args.params.seed
          << " coupling=" << g9(args.params.coupling_level);
        wopt.comments.push_back(c.str());
        touchstone::write_file(args.out, net, fmt, wopt);
        out << "wrote " << net.frequencies.size() << " points to " << args.out << "\n";
        return kOk;
    });
}

int cmd_export(const ExportArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::string text;
        if (args.format == "csv") {
            text = to_csv(read_document(args.dn));
        } else if (args.format == "netlist") {
            text = to_netlist(read_document(args.dn));
        } else {
            throw InputError("invalid_argument", "unknown export format '" + args.format + "' (csv, netlist)");
        }
        if (args.out) {
            write_text(*args.out, text);
        } else {
            out << text;
        }
        return kOk;
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Transmission-line decoupling network synthesis and verification", "tldn"};
    app.require_subcommand(1);

    SynthesizeArgs syn;
    auto* s = app.add_subcommand("synthesize", "Synthesize a decoupling network for a load at f0");
    s->add_option("--load", syn.load, "Load Touchstone file (.sNp)")->required();
    s->add_option("--f0", syn.f0_hz, "Design frequency in Hz (must be a grid point)")->required();
    s->add_option("--mode", syn.mode, "standard | custom")->capture_default_str();
    s->add_option("--v", syn.v, "identity | random:<seed> | file:<json>")->capture_default_str();
    s->add_option("--a-file", syn.a_file, "JSON grid of cos(theta) values for custom mode");
    s->add_option("--z0-max", syn.z0_max, "Prune branches above this Z0 (ohm)")->capture_default_str();
    s->add_option("--out", syn.out, "Output DN document (JSON)")->required();

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Check decoupling and matching at f0");
    v->add_option("--load", ver.load, "Load Touchstone file")->required();
    v->add_option("--dn", ver.dn, "DN document")->required();
    v->add_option("--threshold", ver.threshold, "Pass if max |S_comp| is below this")->capture_default_str();

    SweepArgs swp;
    auto* w = app.add_subcommand("sweep", "Composite response over the load's frequency grid");
    w->add_option("--load", swp.load, "Load Touchstone file")->required();
    w->add_option("--dn", swp.dn, "DN document")->required();
    w->add_option("--out", swp.out_snp, "Composite Touchstone output")->required();
    w->add_option("--csv", swp.out_csv, "Optional CSV of |S_ij| in dB");
    w->add_option("--format", swp.format, "RI | MA | DB")->capture_default_str();
    w->add_option("--threads", swp.threads, "Worker threads")->capture_default_str();

    LoadgenArgs gen;
    auto* g = app.add_subcommand("loadgen", "Generate a synthetic reciprocal passive load");
    g->add_option("--n", gen.params.n, "Port count")->required();
    g->add_option("--f0", gen.params.f0_hz, "Design frequency in Hz")->required();
    g->add_option("--span", gen.params.span_hz, "Full frequency span in Hz")->capture_default_str();
    g->add_option("--points", gen.params.points, "Grid points")->capture_default_str();
    g->add_option("--seed", gen.params.seed, "Random seed")->capture_default_str();
    g->add_option("--coupling", gen.params.coupling_level, "Largest singular value at f0, in [0, 1)")
        ->capture_default_str();
    g->add_option("--z-ref", gen.params.z_ref_ohm, "Reference impedance (ohm)")->capture_default_str();
    g->add_option("--format", gen.format, "RI | MA | DB")->capture_default_str();
    g->add_option("--out", gen.out, "Output Touchstone file")->required();

    ExportArgs exp;
    auto* e = app.add_subcommand("export", "Export a DN document as CSV or a netlist");
    e->add_option("--dn", exp.dn, "DN document")->required();
    e->add_option("--format", exp.format, "csv | netlist")->required();
    e->add_option("--out", exp.out, "Output file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        if (ex.get_exit_code() == 0) return app.exit(ex, out, err);  // --help
        report(err, "usage_error", ex.what());
        return kInputError;
    }

    if (s->parsed()) return cmd_synthesize(syn, out, err);
    if (v->parsed()) return cmd_verify(ver, out, err);
    if (w->parsed()) return cmd_sweep(swp, out, err);
    if (g->parsed()) return cmd_loadgen(gen, out, err);
    return cmd_export(exp, out, err);
}

}  // namespace tldn::cli
