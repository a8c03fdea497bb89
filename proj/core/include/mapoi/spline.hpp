#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mapoi {

/// Piecewise interpolant of a vector-valued function of one variable.
///
/// All M outputs share the same strictly increasing knots, so a lookup costs
/// one interval search plus M cubic evaluations. Cubic kinds need at least
/// four knots and fall back to piecewise linear below that. Natural splines
/// pin the end second derivatives to zero, which costs O(h^2) accuracy near
/// the ends for functions that curve there; not-a-knot stays O(h^4).
class VectorSpline {
public:
    enum class Kind { Linear, NaturalCubic, NotAKnot };

    VectorSpline() = default;

    /// `values` is knot-major: values[k * outputs + m].
    VectorSpline(std::vector<double> knots, std::span<const double> values, std::size_t outputs, Kind kind);

    std::size_t outputs() const { return outputs_; }
    Kind kind() const { return kind_; }
    const std::vector<double>& knots() const { return knots_; }

    /// out[m] += s_m(x). x outside the knot range is extrapolated from the end piece.
    void accumulate(double x, std::span<double> out) const;

    double value(double x, std::size_t output = 0) const;

    static const char* name(Kind kind);
    /// "linear", "natural" or "not-a-knot"; throws ConfigError otherwise.
    static Kind kind_from_string(const std::string& name);

private:
    std::size_t interval(double x) const;

    std::vector<double> knots_;
    std::size_t outputs_ = 0;
    Kind kind_ = Kind::Linear;
    // per interval, per output: a, b, c, d for a + b dx + c dx^2 + d dx^3
    std::vector<double> coeffs_;
    std::vector<double> last_;  // exact values at the final knot
};

}  // namespace mapoi
