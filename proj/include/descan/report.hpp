// Simulation sweep rows, CSV emission, JSON metadata sidecar.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "descan/types.hpp"

namespace descan {

struct SimulationRow {
    double snr_db_in = 0.0;
    Weighting weighting = Weighting::Zero;
    double alpha = 0.0;
    double theta_rms = 0.0;
    std::uint64_t offset_samples = 0;
    std::uint64_t seed = 0;
    double isnr_db = 0.0;
    double ns_db = 0.0;
    double runtime_s = 0.0;
};

extern const char* const kVersion;

/// RFC 4180 CSV with a header row.
void write_report_csv(const std::string& path, const std::vector<SimulationRow>& rows);

/// Read-back of write_report_csv output. Throws ParseError.
std::vector<SimulationRow> read_report_csv(const std::string& path);

/// JSON sidecar: parameter snapshot, code version, timestamp.
void write_report_meta(const std::string& path, const SuppressionParams& params,
                       const std::string& invocation);

std::string csv_escape(const std::string& field);

}  // namespace descan
