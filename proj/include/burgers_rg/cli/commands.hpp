#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "burgers_rg/cli/config.hpp"
#include "burgers_rg/errors.hpp"

namespace burgers_rg::cli {

/// 2 for configuration errors, 3 for hypothesis violations, 4 for solver and
/// truncation failures.
int exit_code(ErrorKind kind);

struct RunSummary {
    double f0_norm = 0.0;
    double A_limit = 0.0;
    double final_residual = 0.0;
    int iterations = 0;
    double alpha = 0.0;  // NaN when fewer than four profiles are available
    double beta = 0.0;
    double rate_slope = 0.0;
    double rate_slope_bound = 0.0;
    std::size_t rate_violations = 0;
    bool contracting = true;
    double eps_bar = 0.0;
    double max_mass = 0.0;
    double max_parity_defect = 0.0;
};

/// Runs the RG iteration on f0 and writes run_records.csv, profile_final.csv,
/// resolved_config.json and summary.csv into out.
RunSummary execute_run(const RunConfig& cfg, const SpectralField& f0, const std::filesystem::path& out);

struct CommandOptions {
    std::optional<std::filesystem::path> config;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
};

int cmd_run(const CommandOptions& opt);
int cmd_constants(const CommandOptions& opt, std::optional<double> L, std::optional<double> q,
                  std::optional<double> delta);
int cmd_oracle(const CommandOptions& opt, const std::string& which);
int cmd_halfline(const CommandOptions& opt);
/// Sweep file: {"base": config, "runs": [{"name": ..., "overrides": {...}}], "threads": n}.
int cmd_sweep(const CommandOptions& opt);

} // namespace burgers_rg::cli
