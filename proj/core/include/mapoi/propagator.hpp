#pragma once

#include <functional>
#include <string>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mapoi/level_system.hpp"

namespace mapoi {

using FieldFn = std::function<double(double)>;

/// Wavefunction amplitudes in the measurement basis |p>.
struct QuantumState {
    Eigen::VectorXcd amplitudes;

    /// |level> with 0-based level index.
    static QuantumState basis(int dimension, int level);

    double norm() const { return amplitudes.norm(); }
    Eigen::VectorXd populations() const { return amplitudes.cwiseAbs2(); }
};

enum class PropagationScheme {
    /// exp(-i H(t + dt/2) dt) per step from the eigendecomposition of the
    /// real symmetric total Hamiltonian; unitary to rounding, second order.
    MidpointExponential,
    /// Fourth-order commutator-free Magnus: two real symmetric exponentials
    /// per step with the field sampled at the Gauss-Legendre points.
    Magnus4,
    /// Classic fourth-order Runge-Kutta; cross-check only, not norm preserving.
    RungeKutta4,
};

const char* to_string(PropagationScheme scheme);
PropagationScheme scheme_from_string(const std::string& name);

struct PropagationSettings {
    double duration = 1.0;  // T, ps
    double dt_max = 1.0e-3;  // ps
    PropagationScheme scheme = PropagationScheme::MidpointExponential;

    /// Largest step that still resolves a carrier of angular frequency
    /// `omega_max` with 20 points per period.
    static double dt_bound(double omega_max);
};

/// Called after every step with the current time and state.
using StepObserver = std::function<void(double, const Eigen::VectorXcd&)>;

/// Solves i d/dt psi = (H - mu E(t)) psi for one fixed parameter vector.
///
/// Construction assembles the matrices once; the object is immutable after
/// that and can be shared between threads.
class Propagator {
public:
    Propagator(const HamiltonianParams& params, PropagationSettings settings);

    int dimension() const { return static_cast<int>(matrices_.hamiltonian.rows()); }
    const SystemMatrices& matrices() const { return matrices_; }
    const PropagationSettings& settings() const { return settings_; }

    /// Populations at each observation time: a Q x N matrix, one row per time.
    /// obs_times must be strictly increasing and lie in [0, T]; the initial
    /// state must be normalized to 1e-10.
    Eigen::MatrixXd populations(const FieldFn& field, const QuantumState& initial,
                                std::span<const double> obs_times,
                                const StepObserver& observer = {}) const;

    /// Evolves from t0 to t1 using ceil((t1 - t0) / dt_max) equal steps.
    Eigen::VectorXcd evolve(const FieldFn& field, Eigen::VectorXcd psi, double t0, double t1,
                            const StepObserver& observer = {}) const;

private:
    struct Workspace;

    void apply_exponential(double field, double h_scale, double dt, Eigen::VectorXcd& psi, Workspace& w) const;
    void step(const FieldFn& field, double t, double dt, Eigen::VectorXcd& psi, Workspace& w) const;

    SystemMatrices matrices_;
    PropagationSettings settings_;
};

/// Convenience wrapper around Propagator::populations.
Eigen::MatrixXd propagate(const HamiltonianParams& params, const FieldFn& field, const QuantumState& initial,
                          std::span<const double> obs_times, const PropagationSettings& settings);

struct ResonanceSpectrum {
    std::vector<double> frequencies;  // N-1 adjacent eigenvalue gaps, ascending energy order
    bool degenerate = false;          // some gap below 1e-9
};

/// Adjacent gaps between the sorted eigenvalues of the internal Hamiltonian.
ResonanceSpectrum resonance_frequencies(const HamiltonianParams& params);

}  // namespace mapoi
