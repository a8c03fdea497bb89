#include "mapoi/propagator.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "mapoi/errors.hpp"

namespace mapoi {

namespace {
constexpr double kNormTolerance = 1e-10;
}

QuantumState QuantumState::basis(int dimension, int level) {
    if (level < 0 || level >= dimension) throw InputError("basis level " + std::to_string(level) + " out of range");
    QuantumState s{Eigen::VectorXcd::Zero(dimension)};
    s.amplitudes(level) = 1.0;
    return s;
}

double PropagationSettings::dt_bound(double omega_max) {
    if (omega_max <= 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::numbers::pi / (20.0 * omega_max);
}

Propagator::Propagator(const HamiltonianParams& params, PropagationSettings settings)
    : matrices_(assemble(params)), settings_(settings) {
    if (!(settings_.dt_max > 0.0)) throw ConfigError("dt_max must be positive");
    if (!(settings_.duration > 0.0)) throw ConfigError("propagation duration must be positive");
}

struct Propagator::Workspace {
    explicit Workspace(int n) : eig(n), total(n, n), re(n), im(n) {}

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    Eigen::MatrixXd total;
    Eigen::VectorXd re;
    Eigen::VectorXd im;
};

const char* to_string(PropagationScheme scheme) {
    switch (scheme) {
        case PropagationScheme::MidpointExponential: return "midpoint-exponential";
        case PropagationScheme::Magnus4: return "magnus4";
        case PropagationScheme::RungeKutta4: return "rk4";
    }
    return "?";
}

PropagationScheme scheme_from_string(const std::string& name) {
    if (name == "midpoint-exponential" || name == "piecewise-constant-exponential")
        return PropagationScheme::MidpointExponential;
    if (name == "magnus4") return PropagationScheme::Magnus4;
    if (name == "rk4") return PropagationScheme::RungeKutta4;
    throw ConfigError("unknown propagation scheme '" + name + "'");
}

// psi <- exp(-i (h_scale H - field mu) dt) psi
void Propagator::apply_exponential(double field, double h_scale, double dt, Eigen::VectorXcd& psi,
                                   Workspace& w) const {
    w.total = h_scale * matrices_.hamiltonian - field * matrices_.dipole;
    w.eig.compute(w.total);
    const Eigen::MatrixXd& v = w.eig.eigenvectors();
    const Eigen::VectorXd& lambda = w.eig.eigenvalues();
    w.re.noalias() = v.transpose() * psi.real();
    w.im.noalias() = v.transpose() * psi.imag();
    for (Eigen::Index k = 0; k < w.re.size(); ++k) {
        const double c = std::cos(lambda(k) * dt);
        const double s = std::sin(lambda(k) * dt);
        // (re + i im)(c - i s)
        const double re = w.re(k) * c + w.im(k) * s;
        const double im = w.im(k) * c - w.re(k) * s;
        w.re(k) = re;
        w.im(k) = im;
    }
    psi.real().noalias() = v * w.re;
    psi.imag().noalias() = v * w.im;
}

void Propagator::step(const FieldFn& field, double t, double dt, Eigen::VectorXcd& psi, Workspace& w) const {
    switch (settings_.scheme) {
        case PropagationScheme::MidpointExponential:
            apply_exponential(field(t + 0.5 * dt), 1.0, dt, psi, w);
            return;
        case PropagationScheme::Magnus4: {
            // exp(-i dt (a2 H1 + a1 H2)) exp(-i dt (a1 H1 + a2 H2)) psi, H_k = H - mu E(t_k)
            static const double r3 = std::sqrt(3.0);
            const double a1 = 0.25 + r3 / 6.0;
            const double a2 = 0.25 - r3 / 6.0;
            const double e1 = field(t + (0.5 - r3 / 6.0) * dt);
            const double e2 = field(t + (0.5 + r3 / 6.0) * dt);
            apply_exponential(a1 * e1 + a2 * e2, 0.5, dt, psi, w);
            apply_exponential(a2 * e1 + a1 * e2, 0.5, dt, psi, w);
            return;
        }
        case PropagationScheme::RungeKutta4: {
            const std::complex<double> minus_i(0.0, -1.0);
            auto rhs = [&](double time, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
                w.total = matrices_.hamiltonian - field(time) * matrices_.dipole;
                return minus_i * (w.total.cast<std::complex<double>>() * y);
            };
            const Eigen::VectorXcd k1 = rhs(t, psi);
            const Eigen::VectorXcd k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1);
            const Eigen::VectorXcd k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2);
            const Eigen::VectorXcd k4 = rhs(t + dt, psi + dt * k3);
            psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            return;
        }
    }
}

Eigen::VectorXcd Propagator::evolve(const FieldFn& field, Eigen::VectorXcd psi, double t0, double t1,
                                    const StepObserver& observer) const {
    if (t1 <= t0) return psi;
    Workspace w(dimension());
    const auto steps = static_cast<long>(std::ceil((t1 - t0) / settings_.dt_max - 1e-9));
    const double dt = (t1 - t0) / static_cast<double>(steps);
    for (long k = 0; k < steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        step(field, t, dt, psi, w);
        if (observer) observer(t + dt, psi);
    }
    return psi;
}

Eigen::MatrixXd Propagator::populations(const FieldFn& field, const QuantumState& initial,
                                        std::span<const double> obs_times, const StepObserver& observer) const {
    const int n = dimension();
    if (initial.amplitudes.size() != n) throw InputError("initial state has wrong dimension");
    if (std::abs(initial.norm() - 1.0) > kNormTolerance) throw InputError("initial state is not normalized");
    for (std::size_t q = 0; q < obs_times.size(); ++q) {
        const double t = obs_times[q];
        if (!(t >= 0.0 && t <= settings_.duration))
            throw InputError("observation time " + std::to_string(t) + " outside [0, T]");
        if (q > 0 && !(t > obs_times[q - 1])) throw InputError("observation times must be strictly increasing");
    }
    Eigen::MatrixXd out(static_cast<Eigen::Index>(obs_times.size()), n);
    Eigen::VectorXcd psi = initial.amplitudes;
    double t = 0.0;
    for (std::size_t q = 0; q < obs_times.size(); ++q) {
        psi = evolve(field, std::move(psi), t, obs_times[q], observer);
        t = obs_times[q];
        out.row(static_cast<Eigen::Index>(q)) = psi.cwiseAbs2().transpose();
    }
    return out;
}

Eigen::MatrixXd propagate(const HamiltonianParams& params, const FieldFn& field, const QuantumState& initial,
                          std::span<const double> obs_times, const PropagationSettings& settings) {
    return Propagator(params, settings).populations(field, initial, obs_times);
}

ResonanceSpectrum resonance_frequencies(const HamiltonianParams& params) {
    const SystemMatrices m = assemble(params);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.hamiltonian, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending
    ResonanceSpectrum out;
    for (Eigen::Index l = 0; l + 1 < lambda.size(); ++l) {
        const double gap = lambda(l + 1) - lambda(l);
        if (gap < 1e-9) out.degenerate = true;
        out.frequencies.push_back(gap);
    }
    return out;
}

}  // namespace mapoi
