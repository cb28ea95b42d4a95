#include "tldn/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace tldn::touchstone {

namespace {

constexpr const char* kGenerator = "tldn";

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

[[noreturn]] void fail(const char* kind, std::size_t line, const std::string& msg) {
    std::ostringstream os;
    os << "line " << line << ": " << msg;
    throw TouchstoneError(kind, os.str(), line);
}

double to_double(std::string_view tok, std::size_t line) {
    // from_chars rejects a leading '+', which some exporters emit.
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        fail("format_error", line, "'" + std::string(tok) + "' is not a number");
    }
    if (!std::isfinite(v)) fail("format_error", line, "non-finite value '" + std::string(tok) + "'");
    return v;
}

struct Options {
    FrequencyUnit funit = FrequencyUnit::GHz;
    DataFormat format = DataFormat::MA;
    double r = 50.0;
};

Options parse_option_line(std::string_view body, std::size_t line) {
    Options opt;
    const auto toks = split_ws(body);
    for (std::size_t k = 0; k < toks.size(); ++k) {
        const std::string t = upper(toks[k]);
        if (t == "HZ") opt.funit = FrequencyUnit::Hz;
        else if (t == "KHZ") opt.funit = FrequencyUnit::kHz;
        else if (t == "MHZ") opt.funit = FrequencyUnit::MHz;
        else if (t == "GHZ") opt.funit = FrequencyUnit::GHz;
        else if (t == "S") {}
        else if (t == "Y" || t == "Z" || t == "H" || t == "G") {
            fail("unsupported_parameter", line, "only S-parameter files are supported, got " + t);
        } else if (t == "RI") opt.format = DataFormat::RI;
        else if (t == "MA") opt.format = DataFormat::MA;
        else if (t == "DB") opt.format = DataFormat::DB;
        else if (t == "R") {
            if (k + 1 >= toks.size()) fail("format_error", line, "option line: R needs a value");
            opt.r = to_double(toks[++k], line);
            if (!(opt.r > 0.0)) fail("format_error", line, "option line: reference resistance must be positive");
        } else {
            fail("format_error", line, "option line: unrecognized token '" + std::string(toks[k]) + "'");
        }
    }
    return opt;
}

Complex to_complex(double x, double y, DataFormat f) {
    constexpr double deg = std::numbers::pi / 180.0;
    switch (f) {
        case DataFormat::RI: return {x, y};
        case DataFormat::MA: return std::polar(x, y * deg);
        case DataFormat::DB: return std::polar(std::pow(10.0, x / 20.0), y * deg);
    }
    return {};
}

// Position of the k-th value pair inside the matrix.
std::pair<Index, Index> pair_position(std::size_t k, std::size_t n) {
    const auto i = static_cast<Index>(k / n);
    const auto j = static_cast<Index>(k % n);
    // Two-port data is column-major: S11 S21 S12 S22.
    return n == 2 ? std::pair{j, i} : std::pair{i, j};
}

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string_view funit_name(FrequencyUnit u) {
    switch (u) {
        case FrequencyUnit::Hz: return "HZ";
        case FrequencyUnit::kHz: return "KHZ";
        case FrequencyUnit::MHz: return "MHZ";
        case FrequencyUnit::GHz: return "GHZ";
    }
    return "HZ";
}

}  // namespace

std::string_view format_name(DataFormat f) {
    switch (f) {
        case DataFormat::RI: return "RI";
        case DataFormat::MA: return "MA";
        case DataFormat::DB: return "DB";
    }
    return "RI";
}

std::optional<DataFormat> parse_format_name(std::string_view s) {
    const std::string u = upper(s);
    if (u == "RI") return DataFormat::RI;
    if (u == "MA") return DataFormat::MA;
    if (u == "DB") return DataFormat::DB;
    return std::nullopt;
}

NetworkData parse(std::string_view text, std::size_t n_ports, std::vector<std::string>* warnings) {
    if (n_ports == 0) throw TouchstoneError("format_error", "port count must be at least 1", 0);

    const std::size_t per_record = 1 + 2 * n_ports * n_ports;
    std::optional<Options> opt;
    NetworkData out;
    out.n_ports = n_ports;

    std::vector<double> record;
    std::size_t record_line = 0;
    bool noise = false;

    auto finish_record = [&]() {
        const double f = record[0] * unit_scale(opt->funit);
        if (f < 0.0) fail("format_error", record_line, "negative frequency");
        if (!out.frequencies.empty() && !(f > out.frequencies.back())) {
            fail("ordering_error", record_line, "frequency " + fmt9(f) + " Hz does not exceed the previous point");
        }
        Eigen::MatrixXcd m(static_cast<Index>(n_ports), static_cast<Index>(n_ports));
        for (std::size_t k = 0; k < n_ports * n_ports; ++k) {
            const auto [i, j] = pair_position(k, n_ports);
            m(i, j) = to_complex(record[1 + 2 * k], record[2 + 2 * k], opt->format);
        }
        if (!m.allFinite()) fail("format_error", record_line, "value overflows to a non-finite number");
        out.frequencies.push_back(f);
        out.matrices.emplace_back(std::move(m));
        record.clear();
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (const auto bang = line.find('!'); bang != std::string_view::npos) line = line.substr(0, bang);
        const auto first = line.find_first_not_of(" \t\r\f\v");
        if (first == std::string_view::npos) {
            if (eol == text.size()) break;
            continue;
        }
        line = line.substr(first);

        if (line.front() == '[') {
            fail("unsupported_version", line_no, "Touchstone v2 keyword lines are not supported");
        }
        if (line.front() == '#') {
            // Only the first option line counts.
            if (!opt) opt = parse_option_line(line.substr(1), line_no);
            if (eol == text.size()) break;
            continue;
        }
        if (!opt) fail("format_error", line_no, "data before the option line ('# <unit> S <format> R <ohms>')");
        if (noise) {
            if (eol == text.size()) break;
            continue;
        }

        const auto toks = split_ws(line);
        std::vector<double> values;
        values.reserve(toks.size());
        for (auto t : toks) values.push_back(to_double(t, line_no));

        if (record.empty()) {
            record_line = line_no;
            const double f = values.front() * unit_scale(opt->funit);
            if (n_ports == 2 && !out.frequencies.empty() && f <= out.frequencies.back()) {
                noise = true;
                if (warnings) {
                    warnings->push_back("line " + std::to_string(line_no) +
                                        ": noise parameter block skipped");
                }
                if (eol == text.size()) break;
                continue;
            }
        }
        record.insert(record.end(), values.begin(), values.end());
        if (record.size() > per_record) {
            fail("truncation_error", record_line,
                 "frequency point has " + std::to_string(record.size()) + " values, expected " +
                     std::to_string(per_record));
        }
        if (record.size() == per_record) finish_record();
        if (eol == text.size()) break;
    }

    if (!opt) throw TouchstoneError("format_error", "missing option line", 0);
    if (!record.empty()) {
        fail("truncation_error", record_line,
             "frequency point has " + std::to_string(record.size()) + " values, expected " +
                 std::to_string(per_record));
    }
    if (out.frequencies.empty()) throw TouchstoneError("truncation_error", "file contains no data points", line_no);

    out.ref = PortReference(opt->r);
    out.source_format = opt->format;
    out.source_funit = opt->funit;
    return out;
}

std::optional<std::size_t> ports_from_extension(const std::filesystem::path& path) {
    const std::string ext = upper(path.extension().string());
    if (ext.size() < 4 || ext[1] != 'S' || ext.back() != 'P') return std::nullopt;
    const std::string_view digits(ext.data() + 2, ext.size() - 3);
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || n == 0) return std::nullopt;
    return n;
}

NetworkData parse_file(const std::filesystem::path& path, std::vector<std::string>* warnings) {
    const auto n = ports_from_extension(path);
    if (!n) {
        throw TouchstoneError("format_error",
                              "cannot infer the port count from '" + path.string() + "' (expected .sNp)", 0);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TouchstoneError("io_error", "cannot open '" + path.string() + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), *n, warnings);
}

std::string write(const NetworkData& net, DataFormat format, const WriteOptions& opts) {
    validate(net);
    const std::size_t n = net.n_ports;
    const double scale = unit_scale(net.source_funit);
    std::ostringstream os;
    os << "! Generated by " << kGenerator << "\n";
    if (opts.design_frequency_hz) os << "! Design frequency: " << fmt9(*opts.design_frequency_hz) << " Hz\n";
    for (const auto& c : opts.comments) os << "! " << c << "\n";
    os << "# " << funit_name(net.source_funit) << " S " << format_name(format) << " R "
       << fmt9(net.ref.z_ref()) << "\n";

    constexpr double deg = 180.0 / std::numbers::pi;
    auto pair_text = [&](Complex v) {
        switch (format) {
            case DataFormat::RI: return fmt9(v.real()) + " " + fmt9(v.imag());
            case DataFormat::MA: return fmt9(std::abs(v)) + " " + fmt9(std::arg(v) * deg);
            case DataFormat::DB: {
                const double db = std::max(20.0 * std::log10(std::abs(v)), -400.0);
                return fmt9(db) + " " + fmt9(std::arg(v) * deg);
            }
        }
        return std::string{};
    };

    for (std::size_t k = 0; k < net.frequencies.size(); ++k) {
        const ComplexMatrix& m = net.matrices[k];
        os << fmt9(net.frequencies[k] / scale);
        if (n <= 2) {
            for (std::size_t p = 0; p < n * n; ++p) {
                const auto [i, j] = pair_position(p, n);
                os << " " << pair_text(m(i, j));
            }
            os << "\n";
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j > 0 && j % 4 == 0) os << "\n";
                os << " " << pair_text(m(static_cast<Index>(i), static_cast<Index>(j)));
            }
            os << "\n";
        }
    }
    return os.str();
}

void write_file(const std::filesystem::path& path, const NetworkData& net, DataFormat format,
                const WriteOptions& opts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw TouchstoneError("io_error", "cannot write '" + path.string() + "'", 0);
    out << write(net, format, opts);
    if (!out) throw TouchstoneError("io_error", "write to '" + path.string() + "' failed", 0);
}

}  // namespace tldn::touchstone
