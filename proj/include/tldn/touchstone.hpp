#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tldn/errors.hpp"
#include "tldn/network_data.hpp"

namespace tldn::touchstone {

/// Every parse failure. kind() is one of: format_error, ordering_error,
/// truncation_error, unsupported_parameter, unsupported_version, io_error.
class TouchstoneError : public InputError {
public:
    TouchstoneError(std::string kind, const std::string& message, std::size_t line)
        : InputError(std::move(kind), message), line_(line) {}
    /// 1-based line number, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Parses Touchstone v1 text for an n_ports network. Non-fatal findings
/// (e.g. a skipped noise-parameter block) are appended to warnings.
NetworkData parse(std::string_view text, std::size_t n_ports,
                  std::vector<std::string>* warnings = nullptr);

/// Port count from a `.sNp` extension (case-insensitive), or nullopt.
std::optional<std::size_t> ports_from_extension(const std::filesystem::path& path);

NetworkData parse_file(const std::filesystem::path& path,
                       std::vector<std::string>* warnings = nullptr);

struct WriteOptions {
    std::optional<double> design_frequency_hz;
    std::vector<std::string> comments;
};

/// Serializes with 9 significant digits. Two-port data uses the
/// S11 S21 S12 S22 column order; 3+ ports write one matrix row per line
/// with at most four pairs per line.
std::string write(const NetworkData& net, DataFormat format, const WriteOptions& opts = {});

void write_file(const std::filesystem::path& path, const NetworkData& net, DataFormat format,
                const WriteOptions& opts = {});

std::string_view format_name(DataFormat f);
std::optional<DataFormat> parse_format_name(std::string_view s);

}  // namespace tldn::touchstone
