#include "mapoi/pulse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#include "mapoi/errors.hpp"

namespace mapoi {

PulseShape PulseShape::with_carriers(std::span<const double> omegas, double duration, double width) {
    PulseShape p;
    p.duration = duration;
    p.width = width;
    for (double w : omegas) p.components.push_back({w, 0.0, 0.0});
    return p;
}

std::vector<double> PulseShape::knobs() const {
    std::vector<double> out;
    out.reserve(knob_count());
    for (const auto& c : components) out.push_back(c.amplitude);
    for (const auto& c : components) out.push_back(c.phase);
    return out;
}

std::vector<Bounds> PulseShape::knob_bounds() const {
    std::vector<Bounds> out(components.size(), amplitude_bounds);
    out.insert(out.end(), components.size(), phase_bounds);
    return out;
}

PulseShape PulseShape::with_knobs(std::span<const double> knobs) const {
    if (knobs.size() != knob_count())
        throw InputError("expected " + std::to_string(knob_count()) + " knobs, got " + std::to_string(knobs.size()));
    PulseShape out = *this;
    const std::size_t l = components.size();
    for (std::size_t i = 0; i < l; ++i) {
        if (!amplitude_bounds.contains(knobs[i]) || !phase_bounds.contains(knobs[l + i]))
            throw InputError("knob outside bounds for component " + std::to_string(i));
        out.components[i].amplitude = knobs[i];
        out.components[i].phase = knobs[l + i];
    }
    return out;
}

void PulseShape::validate() const {
    if (!(duration > 0.0)) throw ConfigError("pulse duration T must be positive");
    if (!(width > 0.0)) throw ConfigError("pulse envelope width s must be positive");
    if (!(amplitude_bounds.lo <= amplitude_bounds.hi) || !(phase_bounds.lo <= phase_bounds.hi))
        throw ConfigError("pulse knob bounds are inverted");
    for (std::size_t i = 0; i < components.size(); ++i)
        if (!amplitude_bounds.contains(components[i].amplitude))
            throw ConfigError("amplitude of component " + std::to_string(i) + " outside its bounds");
}

double PulseShape::max_frequency() const {
    double w = 0.0;
    for (const auto& c : components) w = std::max(w, std::abs(c.omega));
    return w;
}

std::string pulse_id(const PulseShape& pulse) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](double v) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
        for (int k = 0; k < 8; ++k) {
            h ^= (bits >> (8 * k)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    feed(pulse.duration);
    feed(pulse.width);
    for (const auto& c : pulse.components) {
        feed(c.omega);
        feed(c.amplitude);
        feed(c.phase);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double field_value(const PulseShape& pulse, double t) {
    const double d = t - 0.5 * pulse.duration;
    const double envelope = std::exp(-d * d / (2.0 * pulse.width * pulse.width));
    double sum = 0.0;
    for (const auto& c : pulse.components) sum += c.amplitude * std::cos(c.omega * t + c.phase);
    return envelope * sum;
}

void FieldNoiseModel::validate() const {
    if (!(eps_fld >= 0.0)) throw ConfigError("eps_fld must be >= 0");
    if (replicates < 1) throw ConfigError("replicate count D must be >= 1");
}

PulseShape realize_noisy(const PulseShape& pulse, const FieldNoiseModel& noise, Rng& rng) {
    PulseShape out = pulse;
    for (auto& c : out.components) {
        const double g_amp = rng.uniform(-noise.eps_fld, noise.eps_fld);
        const double g_phase = rng.uniform(-noise.eps_fld, noise.eps_fld);
        c.amplitude = (1.0 + g_amp) * c.amplitude;
        c.phase = (1.0 + g_phase) * c.phase;
    }
    return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

std::vector<SpectrumPoint> power_spectrum(const PulseShape& pulse, std::span<const double> freq_grid) {
    if (freq_grid.empty()) throw InputError("frequency grid is empty");
    double w_fast = pulse.max_frequency();
    for (double w : freq_grid) {
        if (w < 0.0) throw InputError("frequency grid must be nonnegative");
        w_fast = std::max(w_fast, w);
    }
    // both the field carrier and the transform kernel must be resolved
    const double period = w_fast > 0.0 ? 2.0 * std::numbers::pi / w_fast : pulse.duration;
    const auto intervals = static_cast<std::size_t>(std::max(200.0, std::ceil(40.0 * pulse.duration / period)));
    const double dt = pulse.duration / static_cast<double>(intervals);

    std::vector<double> field(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) field[k] = field_value(pulse, static_cast<double>(k) * dt);

    std::vector<SpectrumPoint> out;
    out.reserve(freq_grid.size());
    for (double w : freq_grid) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t k = 0; k <= intervals; ++k) {
            const double weight = (k == 0 || k == intervals) ? 0.5 : 1.0;
            const double t = static_cast<double>(k) * dt;
            re += weight * field[k] * std::cos(w * t);
            im -= weight * field[k] * std::sin(w * t);
        }
        re *= dt;
        im *= dt;
        out.push_back({w, re * re + im * im});
    }
    return out;
}

}  // namespace mapoi
