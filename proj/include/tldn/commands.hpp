#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "tldn/loadgen.hpp"

namespace tldn::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kSynthesisError = 3,
    kValidationError = 4,
    kAboveThreshold = 5,
};

struct SynthesizeArgs {
    std::string load;
    double f0_hz = 0.0;
    std::string mode = "standard";
    std::string v = "identity";  // identity | random:<seed> | file:<json>
    std::optional<std::string> a_file;
    double z0_max = 5000.0;
    std::string out;
};

struct VerifyArgs {
    std::string load;
    std::string dn;
    double threshold = 1e-6;
};

struct SweepArgs {
    std::string load;
    std::string dn;
    std::string out_snp;
    std::optional<std::string> out_csv;
    std::string format = "RI";
    unsigned threads = 1;
};

struct LoadgenArgs {
    LoadgenParams params;
    std::string out;
    std::string format = "RI";
};

struct ExportArgs {
    std::string dn;
    std::string format;
    std::optional<std::string> out;  // standard output when absent
};

// Each command reports failures as one JSON line on err and returns the exit code.
int cmd_synthesize(const SynthesizeArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);
int cmd_loadgen(const LoadgenArgs& args, std::ostream& out, std::ostream& err);
int cmd_export(const ExportArgs& args, std::ostream& out, std::ostream& err);

/// Full command-line entry point (argument parsing + dispatch).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tldn::cli
