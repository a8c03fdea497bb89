#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mapoi/rng.hpp"

namespace mapoi {

/// Closed interval for one optimization variable.
struct Bounds {
    double lo = 0.0;
    double hi = 1.0;

    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

struct PulseComponent {
    double omega = 0.0;      // carrier, rad/ps
    double amplitude = 0.0;  // scaled field units
    double phase = 0.0;      // rad
};

/// Gaussian-enveloped sum of cosines:
///   E(t) = exp(-(t - T/2)^2 / (2 s^2)) * sum_l A_l cos(omega_l t + theta_l)
///
/// The control knobs are the amplitudes followed by the phases, so a pulse
/// with L components has 2L knobs.
struct PulseShape {
    double duration = 1.0;  // T, ps
    double width = 0.2;     // s, ps
    std::vector<PulseComponent> components;
    Bounds amplitude_bounds{0.0, 1.0};
    Bounds phase_bounds{0.0, 2.0 * std::numbers::pi};

    /// Components at the given carriers with zero amplitude and phase.
    static PulseShape with_carriers(std::span<const double> omegas, double duration = 1.0, double width = 0.2);

    std::size_t knob_count() const { return 2 * components.size(); }
    std::vector<double> knobs() const;
    std::vector<Bounds> knob_bounds() const;

    /// Copy with knobs replaced. Throws InputError on a size mismatch or a
    /// knob outside its bounds.
    PulseShape with_knobs(std::span<const double> knobs) const;

    /// Throws ConfigError on T <= 0, s <= 0 or an amplitude outside bounds.
    void validate() const;

    double max_frequency() const;
};

/// Short stable identifier derived from the exact parameter bits.
std::string pulse_id(const PulseShape& pulse);

double field_value(const PulseShape& pulse, double t);

/// Parametric shaper noise: A -> (1 + g_A) A, theta -> (1 + g_theta) theta,
/// with every g uniform on [-eps_fld, eps_fld].
struct FieldNoiseModel {
    double eps_fld = 0.01;
    int replicates = 100;  // D

    void validate() const;
};

/// Draws a fresh noisy realization; envelope parameters are untouched.
PulseShape realize_noisy(const PulseShape& pulse, const FieldNoiseModel& noise, Rng& rng);

struct SpectrumPoint {
    double frequency;  // rad/ps
    double power;
};

/// |int_0^T E(t) exp(-i w t) dt|^2 on each grid frequency, trapezoidal rule
/// with at least 40 samples per period of the fastest of the carriers and
/// the grid frequencies.
std::vector<SpectrumPoint> power_spectrum(const PulseShape& pulse, std::span<const double> freq_grid);

/// Evenly spaced grid on [lo, hi] with `count` points.
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

}  // namespace mapoi
