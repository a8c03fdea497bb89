#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mapoi/level_system.hpp"
#include "mapoi/oi_loop.hpp"

namespace mapoi::cli {

/// Everything one CLI invocation needs, parsed from a key-value run file.
/// Schema (all keys optional unless noted):
///
///   [run]          seed, output, workers (0 = all cores), budget = desk | paper
///   [system]       file (required; relative paths resolve against the run file),
///                  truth (system file for the simulated truth; default = file)
///   [pulse]        duration, width, carriers (rad/ps list; default = nominal resonances),
///                  amplitude_min, amplitude_max, phase_min, phase_max,
///                  amplitudes, phases (the stated pulse for map-validate)
///   [noise]        eps_obs, eps_fld, replicates
///   [measurement]  samples (Q for oi, default 1), initial_level (1-based, default 1)
///   [conventional] samples (Q for conventional, default 25)
///   [propagation]  dt_max (ps or "auto" = 2 pi / (20 omega_max)), scheme
///   [map]          samples (S), domain_fraction, zero_halfwidth_h, zero_halfwidth_mu,
///                  rms_threshold, validation_points, spline = natural | not-a-knot | linear
///   [inversion]    family_size, pop_size, crossover_rate, mutation_rate, tournament_size,
///                  max_generations, immigrant_fraction, lambda_reg, dedup_dist
///   [oi]           pop_size, crossover_rate, mutation_rate, tournament_size, max_generations,
///                  batch_size, alpha_start, alpha_end, beta_start, beta_end
///   [validate]     points (random test points), speed_evaluations
///
/// Budget-dependent sizes (outer GA, N_s, S, inner generations) come from
/// `budget` first; explicit keys then override them.
struct RunConfig {
    std::filesystem::path source;  // the run file
    std::string text;              // verbatim run file contents

    std::uint64_t seed = 1;
    std::filesystem::path output = "mapoi-out";
    unsigned workers = 0;
    Budget budget = Budget::Desk;

    std::filesystem::path system_file;
    std::filesystem::path truth_file;
    HamiltonianParams nominal;
    HamiltonianParams truth;

    OIConfig oi;                    // Q from [measurement]
    int conventional_samples = 25;  // Q from [conventional]
    std::optional<std::vector<double>> stated_knobs;

    std::size_t validate_points = 100;
    std::size_t speed_evaluations = 10000;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::filesystem::path> output;
    bool paper_scale = false;
};

/// Parses and validates; ConfigError messages carry "file:line: key: ...".
/// Throws ConfigError naming the path when the file cannot be read.
RunConfig load_run_config(const std::filesystem::path& path, const Overrides& overrides = {});
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& source,
                           const Overrides& overrides = {});

}  // namespace mapoi::cli
