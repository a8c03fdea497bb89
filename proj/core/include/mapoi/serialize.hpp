#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mapoi/ga.hpp"
#include "mapoi/hdmr_map.hpp"
#include "mapoi/inversion.hpp"
#include "mapoi/lab_data.hpp"
#include "mapoi/oi_loop.hpp"
#include "mapoi/pulse.hpp"

// JSON and CSV forms of every artifact. Doubles are written with
// round-trip precision, so parse(write(x)) reproduces x bit for bit.
namespace mapoi {

std::string pulse_to_json(const PulseShape& pulse);
PulseShape pulse_from_json(const std::string& text);

std::string dataset_to_json(const LabDataset& dataset);
LabDataset dataset_from_json(const std::string& text);

std::string map_to_json(const CutHdmrMap& map, const MapDiagnostics* diagnostics = nullptr);
CutHdmrMap map_from_json(const std::string& text);
std::optional<MapDiagnostics> map_diagnostics_from_json(const std::string& text);

std::string diagnostics_to_json(const MapDiagnostics& diagnostics);

std::string family_to_json(const InversionFamily& family, const std::vector<VariableBounds>& bounds,
                           const std::string& dataset_ref = {});
InversionFamily family_from_json(const std::string& text);
std::vector<VariableBounds> family_bounds_from_json(const std::string& text);

/// Run manifest. `config_text` is the verbatim configuration the run used;
/// wall-clock values live under "timing" so runs can be compared without them.
/// `truth_ref` names where the simulated truth came from (a file path or a label).
std::string manifest_to_json(const OIResult& result, const std::string& config_text, int measurements,
                             const std::string& truth_ref = {});
OIResult manifest_from_json(const std::string& text);

/// Comma separated N x N grid, no header.
std::string grid_to_csv(const Eigen::MatrixXd& grid);
Eigen::MatrixXd grid_from_csv(const std::string& text);

/// Header `freq_rad_per_ps,power`.
std::string spectrum_to_csv(const std::vector<SpectrumPoint>& spectrum);
std::vector<SpectrumPoint> spectrum_from_csv(const std::string& text);

/// Header `generation,best_fitness,mean_fitness,evals`.
std::string trace_to_csv(const std::vector<GenerationStats>& trace);
std::vector<GenerationStats> trace_from_csv(const std::string& text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mapoi
