#include "tldn/dn_document.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "tldn/errors.hpp"

namespace tldn {

using nlohmann::json;

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string element_name(std::size_t i, std::size_t j) {
    std::ostringstream os;
    os << "TL_" << i;
    if (i >= 10 || j >= 10) os << "_";
    os << j;
    return os.str();
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json& rows) {
    const auto r = static_cast<Index>(rows.size());
    const auto c = r == 0 ? Index{0} : static_cast<Index>(rows.at(0).size());
    Eigen::MatrixXcd m(r, c);
    for (Index i = 0; i < r; ++i) {
        const json& row = rows.at(static_cast<std::size_t>(i));
        if (static_cast<Index>(row.size()) != c) throw InputError("dn_format_error", "ragged matrix in v_spec");
        for (Index j = 0; j < c; ++j) {
            const json& e = row.at(static_cast<std::size_t>(j));
            m(i, j) = Complex{e.at(0).get<double>(), e.at(1).get<double>()};
        }
    }
    return ComplexMatrix(std::move(m));
}

}  // namespace

DNDocument make_document(const SynthesisResult& result, const SynthesisConfig& cfg, double z_ref_ohm) {
    DNDocument doc;
    doc.n = result.pi.n_ports() / 2;
    doc.f0_hz = result.pi.f0();
    doc.z_ref_ohm = z_ref_ohm;
    doc.mode = cfg.mode == SynthesisMode::standard ? "standard" : "custom";
    switch (cfg.v.kind) {
        case VChoice::Kind::identity: doc.v_spec.kind = "identity"; break;
        case VChoice::Kind::random_seeded:
            doc.v_spec.kind = "random";
            doc.v_spec.seed = cfg.v.seed;
            // The drawn matrix is recorded so the document is self-contained.
            doc.v_spec.matrix = result.v;
            break;
        case VChoice::Kind::explicit_matrix:
            doc.v_spec.kind = "explicit";
            doc.v_spec.matrix = result.v;
            break;
    }
    for (const auto& br : result.pi.branches()) {
        doc.branches.push_back({br.ends().i + 1, br.ends().j + 1, br.z0(), br.theta0() * kDegPerRad});
    }
    for (const auto& p : result.pruned) doc.pruned.push_back({p.ends.i + 1, p.ends.j + 1, p.b_ohm});
    doc.diagnostics.unitarity_defect = result.diagnostics.unitarity_defect;
    doc.diagnostics.y_residual = result.diagnostics.y_residual;
    doc.diagnostics.warnings = result.diagnostics.warnings;
    doc.diagnostics.warnings.insert(doc.diagnostics.warnings.end(), result.diagnostics.retries.begin(),
                                    result.diagnostics.retries.end());
    return doc;
}

void validate(const DNDocument& doc) {
    auto bad = [](const std::string& msg) { throw ValidationError("dn_invalid", msg); };
    if (doc.schema_version.empty()) bad("schema_version missing");
    if (doc.n == 0) bad("n must be at least 1");
    if (!(doc.f0_hz > 0.0) || !std::isfinite(doc.f0_hz)) bad("f0_hz must be positive");
    if (!(doc.z_ref_ohm > 0.0) || !std::isfinite(doc.z_ref_ohm)) bad("z_ref_ohm must be positive");
    const std::size_t ports = 2 * doc.n;
    std::vector<bool> seen(ports * ports, false);
    for (const auto& b : doc.branches) {
        const std::string name = "branch (" + std::to_string(b.i) + "," + std::to_string(b.j) + ")";
        if (b.i < 1 || b.j < 1 || b.i > ports || b.j > ports) bad(name + " is outside the 2n-port grid");
        if (b.i > b.j) bad(name + " must have i <= j");
        if (seen[(b.i - 1) * ports + (b.j - 1)]) bad(name + " appears twice");
        seen[(b.i - 1) * ports + (b.j - 1)] = true;
        if (!(b.theta_deg > 0.0 && b.theta_deg < 360.0)) bad(name + ": theta_deg must lie in (0, 360)");
        if (!(b.z0_ohm > 0.0) || !std::isfinite(b.z0_ohm)) bad(name + ": z0_ohm must be positive");
    }
    if (doc.v_spec.matrix) {
        const auto n = static_cast<Index>(doc.n);
        if (doc.v_spec.matrix->rows() != n || doc.v_spec.matrix->cols() != n) bad("v_spec matrix must be n x n");
    }
}

PiNetwork to_pi_network(const DNDocument& doc) {
    validate(doc);
    PiNetwork pi(2 * doc.n, doc.f0_hz);
    for (const auto& b : doc.branches) {
        pi.set(TLBranch(PortPair{b.i - 1, b.j - 1}, b.z0_ohm, b.theta_deg / kDegPerRad));
    }
    return pi;
}

std::string to_json(const DNDocument& doc) {
    json j;
    j["schema_version"] = doc.schema_version;
    j["n"] = doc.n;
    j["f0_hz"] = doc.f0_hz;
    j["z_ref_ohm"] = doc.z_ref_ohm;
    j["mode"] = doc.mode;
    json v = {{"kind", doc.v_spec.kind}};
    if (doc.v_spec.seed) v["seed"] = *doc.v_spec.seed;
    if (doc.v_spec.matrix) v["matrix"] = matrix_to_json(*doc.v_spec.matrix);
    j["v_spec"] = std::move(v);
    j["branches"] = json::array();
    for (const auto& b : doc.branches) {
        j["branches"].push_back({{"i", b.i}, {"j", b.j}, {"z0_ohm", b.z0_ohm}, {"theta_deg", b.theta_deg}});
    }
    j["pruned"] = json::array();
    for (const auto& p : doc.pruned) j["pruned"].push_back({{"i", p.i}, {"j", p.j}, {"b_ohm", p.b_ohm}});
    json d = {{"unitarity_defect", doc.diagnostics.unitarity_defect}, {"y_residual", doc.diagnostics.y_residual}};
    if (doc.diagnostics.composite_max_pruned) d["composite_max_pruned"] = *doc.diagnostics.composite_max_pruned;
    if (doc.diagnostics.composite_max_unpruned) {
        d["composite_max_unpruned"] = *doc.diagnostics.composite_max_unpruned;
    }
    d["warnings"] = doc.diagnostics.warnings;
    j["diagnostics"] = std::move(d);
    return j.dump(2) + "\n";
}

DNDocument from_json(const std::string& text) {
    DNDocument doc;
    try {
        const json j = json::parse(text);
        doc.schema_version = j.at("schema_version").get<std::string>();
        doc.n = j.at("n").get<std::size_t>();
        doc.f0_hz = j.at("f0_hz").get<double>();
        doc.z_ref_ohm = j.at("z_ref_ohm").get<double>();
        doc.mode = j.at("mode").get<std::string>();
        const json& v = j.at("v_spec");
        doc.v_spec.kind = v.at("kind").get<std::string>();
        if (v.contains("seed")) doc.v_spec.seed = v.at("seed").get<std::uint64_t>();
        if (v.contains("matrix")) doc.v_spec.matrix = matrix_from_json(v.at("matrix"));
        for (const auto& b : j.at("branches")) {
            doc.branches.push_back({b.at("i").get<std::size_t>(), b.at("j").get<std::size_t>(),
                                    b.at("z0_ohm").get<double>(), b.at("theta_deg").get<double>()});
        }
        if (j.contains("pruned")) {
            for (const auto& p : j.at("pruned")) {
                doc.pruned.push_back(
                    {p.at("i").get<std::size_t>(), p.at("j").get<std::size_t>(), p.at("b_ohm").get<double>()});
            }
        }
        if (j.contains("diagnostics")) {
            const json& d = j.at("diagnostics");
            doc.diagnostics.unitarity_defect = d.value("unitarity_defect", 0.0);
            doc.diagnostics.y_residual = d.value("y_residual", 0.0);
            if (d.contains("composite_max_pruned")) {
                doc.diagnostics.composite_max_pruned = d.at("composite_max_pruned").get<double>();
            }
            if (d.contains("composite_max_unpruned")) {
                doc.diagnostics.composite_max_unpruned = d.at("composite_max_unpruned").get<double>();
            }
            if (d.contains("warnings")) doc.diagnostics.warnings = d.at("warnings").get<std::vector<std::string>>();
        }
    } catch (const json::exception& e) {
        throw InputError("dn_format_error", std::string("DN document: ") + e.what());
    }
    validate(doc);
    return doc;
}

DNDocument read_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("io_error", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void write_document(const std::string& path, const DNDocument& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("io_error", "cannot write '" + path + "'");
    out << to_json(doc);
}

std::string to_csv(const DNDocument& doc) {
    std::ostringstream os;
    os << "branch,i,j,z0_ohm,theta_deg\n";
    for (const auto& b : doc.branches) {
        os << "TL" << b.i << (b.i >= 10 || b.j >= 10 ? "_" : "") << b.j << "," << b.i << "," << b.j << ","
           << full(b.z0_ohm) << "," << full(b.theta_deg) << "\n";
    }
    return os.str();
}

std::string to_netlist(const DNDocument& doc) {
    std::ostringstream os;
    os << "* tldn ideal transmission-line netlist, schema " << doc.schema_version << "\n"
       << "* element: TL_<i><j> <node> <node> Z0=<ohm> EL=<degrees at F0> F0=<Hz>\n"
       << "* nodes 1.." << 2 * doc.n << " are decoupler ports (1.." << doc.n << " decoupled side, " << doc.n + 1
       << ".." << 2 * doc.n << " load side); node 0 is ground\n"
       << "* an element to node 0 is a stub short-circuited at its far end\n"
       << ".param f0_hz=" << full(doc.f0_hz) << " z_ref_ohm=" << full(doc.z_ref_ohm) << "\n";
    for (const auto& b : doc.branches) {
        os << element_name(b.i, b.j) << " " << b.i << " " << (b.i == b.j ? std::size_t{0} : b.j)
           << " Z0=" << full(b.z0_ohm) << " EL=" << full(b.theta_deg) << " F0=" << full(doc.f0_hz) << "\n";
    }
    for (const auto& p : doc.pruned) {
        os << "* pruned " << element_name(p.i, p.j) << " " << p.i << " " << (p.i == p.j ? std::size_t{0} : p.j)
           << " b_ohm=" << full(p.b_ohm) << "\n";
    }
    os << ".end\n";
    return os.str();
}

}  // namespace tldn
