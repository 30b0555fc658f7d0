#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "burgers_rg/oracles.hpp"
#include "burgers_rg/profiles.hpp"
#include "burgers_rg/rg.hpp"

namespace burgers_rg::cli {

struct InitialData {
    ProfileId profile{};
    /// Rescale the profile so that ||f_0||_q equals this (unset keeps the amplitude).
    std::optional<double> normalize_to;
    /// Two-column CSV (x, f) on the full grid.
    std::string samples_file;
    /// Two-column CSV (x, f) at the grid points x >= 0, for the half-line command.
    std::string halfline_file;
};

struct ContractionSettings {
    std::vector<double> L_values{2.0, 4.0, 8.0};
    double probe_X = 128.0;
    std::size_t probe_N = 4096;
    std::size_t random_probes = 8;
};

struct RunConfig {
    double X = 40.0;
    std::size_t N = 2048;
    RGConfig rg{};
    InitialData initial{};
    std::string output_directory = "out";
    /// Write profile_<n>.csv every this many iterations (0 disables).
    int dump_every = 0;
    OracleConfig oracle{};
    ContractionSettings contraction{};
    /// Profiles used by the exponent fit.
    std::size_t fit_first = 5;
    std::size_t fit_last = 8;

    GridSpec grid() const { return GridSpec(X, N); }
};

/// Parses and validates; unknown keys and out-of-range values throw invalid_argument.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Every field, defaults included. Infinite radii are written as null.
nlohmann::json to_json(const RunConfig& cfg);

/// Initial data for a full-line run; throws hypothesis for bad data.
SpectralField build_initial_data(const RunConfig& cfg);

/// Half-line samples at x_{N/2}, ..., x_{N-1}, from the file or the profile.
std::vector<double> build_halfline_samples(const RunConfig& cfg);

} // namespace burgers_rg::cli
