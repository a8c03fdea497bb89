#pragma once

#include <iosfwd>

#include "run_config.hpp"

namespace mapoi::cli {

// Each command writes its artifacts under rc.output and a short report to
// `log`. Exceptions propagate; main() maps them to exit codes.

/// manifest.json, h_uncertainty.csv, mu_uncertainty.csv, spectrum.csv,
/// family.json, trace.csv, dataset.json
void cmd_oi(const RunConfig& rc, std::ostream& log);

/// Same artifacts for one random field at Q = conventional.samples.
void cmd_conventional(const RunConfig& rc, std::ostream& log);

/// map.json (with diagnostics) and map_report.json for the stated pulse.
void cmd_map_validate(const RunConfig& rc, std::ostream& log);

}  // namespace mapoi::cli
