#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mapoi/ga.hpp"
#include "mapoi/hdmr_map.hpp"
#include "mapoi/lab_data.hpp"

namespace mapoi {

/// Fills `out` (size M) with predicted observables for h. Must be thread safe.
using Predictor = std::function<void(std::span<const double>, std::span<double>)>;

Predictor map_predictor(const CutHdmrMap& map);
Predictor solver_predictor(Solver solver);

struct InversionConfig {
    std::size_t family_size = 500;  // N_s
    GAParams ga = default_ga();
    double lambda_reg = 0.0;
    double dedup_dist = 1e-3;  // normalized L-infinity distance between archived members
    double alpha = 1e-2;

    static GAParams default_ga();
    void validate() const;
};

/// Split of the inversion cost into the dead-zone data misfit and the
/// deviation-from-nominal penalty.
struct CostTerms {
    double misfit = 0.0;
    double penalty = 0.0;
    double total() const { return misfit + penalty; }
};

/// Inversion cost for one dataset:
///   J = (1/M) sum_m [ 0                               if |lab_m - pred_m| <= eps_m
///                     ((lab_m - pred_m) / lab_m)^2     otherwise ]
///       + lambda * sum_i ((h_i - nominal_i) / scale_i)^2
/// where scale_i = nominal_i, or the domain half-width for zero nominal values.
class InversionProblem {
public:
    InversionProblem(const LabDataset& dataset, Predictor predictor, const MapDomain& domain, double lambda_reg);

    CostTerms terms(std::span<const double> h) const;
    double cost(std::span<const double> h) const { return terms(h).total(); }

    const LabDataset& dataset() const { return dataset_; }
    const MapDomain& domain() const { return domain_; }
    std::uint64_t predictor_calls() const { return calls_; }

private:
    const LabDataset& dataset_;
    Predictor predictor_;
    const MapDomain& domain_;
    double lambda_;
    std::vector<double> bars_;
    std::vector<double> denom_;
    std::vector<double> scale_;
    mutable std::atomic<std::uint64_t> calls_{0};
};

/// Free-function form of the cost for a single evaluation.
double inversion_cost(std::span<const double> h, const LabDataset& dataset, const Predictor& predictor,
                      double lambda_reg, std::span<const double> nominal);

struct InversionFamily {
    std::vector<std::vector<double>> members;  // h*_s
    std::vector<double> residuals;             // J_inv of each member
    bool converged = false;                    // false: no zero-misfit point found, members = {best}
    std::uint64_t evaluations = 0;
    std::size_t generations = 0;
};

/// Runs the GA on the inversion cost and archives every evaluated point with
/// zero data misfit that lies at least dedup_dist (L-infinity, normalized by
/// the domain width) from all archived members. Stops at family_size members
/// or the generation cap.
InversionFamily extract_family(const LabDataset& dataset, const Predictor& predictor, const MapDomain& domain,
                               const InversionConfig& config);

struct VariableBounds {
    double lo = 0.0;
    double hi = 0.0;
    double width = 0.0;
    double rel_width = 0.0;  // |2 width / (lo + hi)|
    bool fallback = false;   // rel_width normalized by the domain half-width instead
};

/// Per-variable min/max/width over the members. A variable whose family
/// midpoint |lo + hi| / 2 does not exceed its domain half-width (always the
/// case for zero nominal values) reports width / half-width instead, flagged.
/// Without a domain the fallback triggers only for lo + hi == 0 and reports
/// the raw width.
std::vector<VariableBounds> family_bounds(const InversionFamily& family, const MapDomain* domain = nullptr);

/// (1/N_s) sum_s J_inv(h*_s) + alpha (1/N_h) sum_i |rel_width_i|.
double family_uncertainty(const InversionFamily& family, std::span<const VariableBounds> bounds, double alpha);

/// Average relative widths split by matrix.
struct UncertaintySummary {
    double hamiltonian = 0.0;
    double dipole = 0.0;
    double overall = 0.0;
    std::size_t fallback_count = 0;
};

UncertaintySummary summarize(std::span<const VariableBounds> bounds, int dimension);

/// rel_width laid out on N x N grids for H and mu (mirrored; mu diagonal zero).
struct UncertaintyGrids {
    Eigen::MatrixXd hamiltonian;
    Eigen::MatrixXd dipole;
};

UncertaintyGrids uncertainty_grids(std::span<const VariableBounds> bounds, int dimension);

}  // namespace mapoi
