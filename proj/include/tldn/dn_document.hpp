#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tldn/linalg.hpp"
#include "tldn/synth.hpp"
#include "tldn/tlmodel.hpp"

namespace tldn {

inline constexpr const char* kDnSchemaVersion = "1.0";

/// One row of the branch table. Port indices are 1-based here.
struct DNBranch {
    std::size_t i = 0;
    std::size_t j = 0;
    double z0_ohm = 0.0;
    double theta_deg = 0.0;
};

struct DNPruned {
    std::size_t i = 0;
    std::size_t j = 0;
    double b_ohm = 0.0;
};

struct DNVSpec {
    std::string kind = "identity";   // identity | random | explicit
    std::optional<std::uint64_t> seed;
    std::optional<ComplexMatrix> matrix;
};

struct DNDiagnostics {
    double unitarity_defect = 0.0;
    double y_residual = 0.0;
    /// max |S_comp(f0)| with and without the pruned branches.
    std::optional<double> composite_max_pruned;
    std::optional<double> composite_max_unpruned;
    std::vector<std::string> warnings;
};

/// Serialized decoupling network (JSON, units in the field names).
struct DNDocument {
    std::string schema_version = kDnSchemaVersion;
    std::size_t n = 0;
    double f0_hz = 0.0;
    double z_ref_ohm = 50.0;
    std::string mode = "standard";
    DNVSpec v_spec;
    std::vector<DNBranch> branches;
    std::vector<DNPruned> pruned;
    DNDiagnostics diagnostics;
};

DNDocument make_document(const SynthesisResult& result, const SynthesisConfig& cfg, double z_ref_ohm);

/// Throws ValidationError("dn_invalid") when an invariant is broken.
void validate(const DNDocument& doc);

PiNetwork to_pi_network(const DNDocument& doc);

std::string to_json(const DNDocument& doc);
/// Throws InputError("dn_format_error") on malformed JSON or missing fields,
/// then validate().
DNDocument from_json(const std::string& text);

DNDocument read_document(const std::string& path);
void write_document(const std::string& path, const DNDocument& doc);

std::string to_csv(const DNDocument& doc);
std::string to_netlist(const DNDocument& doc);

}  // namespace tldn
