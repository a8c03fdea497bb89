#include "mapoi/spline.hpp"

#include <algorithm>

#include <Eigen/Dense>

#include "mapoi/errors.hpp"

namespace mapoi {

VectorSpline::VectorSpline(std::vector<double> knots, std::span<const double> values, std::size_t outputs, Kind kind)
    : knots_(std::move(knots)), outputs_(outputs), kind_(kind) {
    const std::size_t n = knots_.size();
    if (n < 2) throw InputError("spline needs at least two knots");
    if (values.size() != n * outputs) throw InputError("spline value array has the wrong size");
    for (std::size_t k = 1; k < n; ++k)
        if (!(knots_[k] > knots_[k - 1])) throw InputError("spline knots must be strictly increasing");
    if (n < 4) kind_ = Kind::Linear;

    const std::size_t pieces = n - 1;
    coeffs_.assign(pieces * outputs * 4, 0.0);
    last_.assign(values.end() - static_cast<std::ptrdiff_t>(outputs), values.end());

    std::vector<double> h(pieces);
    for (std::size_t k = 0; k < pieces; ++k) h[k] = knots_[k + 1] - knots_[k];

    // Second derivatives at the knots, one column per output. Interior rows
    // are the usual C2 conditions; the end rows set M = 0 (natural) or make
    // the third derivative continuous across the second and second-to-last
    // knots (not-a-knot). All outputs share the matrix, so it is factored once.
    Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(outputs));
    if (kind_ != Kind::Linear) {
        const auto N = static_cast<Eigen::Index>(n);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(N, static_cast<Eigen::Index>(outputs));
        for (std::size_t k = 1; k + 1 < n; ++k) {
            const auto r = static_cast<Eigen::Index>(k);
            a(r, r - 1) = h[k - 1];
            a(r, r) = 2.0 * (h[k - 1] + h[k]);
            a(r, r + 1) = h[k];
            for (std::size_t m = 0; m < outputs; ++m) {
                const double y0 = values[(k - 1) * outputs + m];
                const double y1 = values[k * outputs + m];
                const double y2 = values[(k + 1) * outputs + m];
                rhs(r, static_cast<Eigen::Index>(m)) = 6.0 * ((y2 - y1) / h[k] - (y1 - y0) / h[k - 1]);
            }
        }
        if (kind_ == Kind::NaturalCubic) {
            a(0, 0) = 1.0;
            a(N - 1, N - 1) = 1.0;
        } else {
            a(0, 0) = h[1];
            a(0, 1) = -(h[0] + h[1]);
            a(0, 2) = h[0];
            a(N - 1, N - 3) = h[n - 2];
            a(N - 1, N - 2) = -(h[n - 3] + h[n - 2]);
            a(N - 1, N - 1) = h[n - 3];
        }
        m2 = a.partialPivLu().solve(rhs);
    }
    for (std::size_t m = 0; m < outputs; ++m) {
        auto y = [&](std::size_t k) { return values[k * outputs + m]; };
        auto M = [&](std::size_t k) { return m2(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)); };
        for (std::size_t k = 0; k < pieces; ++k) {
            double* c = &coeffs_[(k * outputs + m) * 4];
            c[0] = y(k);
            c[1] = (y(k + 1) - y(k)) / h[k] - h[k] * (2.0 * M(k) + M(k + 1)) / 6.0;
            c[2] = 0.5 * M(k);
            c[3] = (M(k + 1) - M(k)) / (6.0 * h[k]);
        }
    }
}

const char* VectorSpline::name(Kind kind) {
    switch (kind) {
        case Kind::Linear: return "linear";
        case Kind::NaturalCubic: return "natural";
        case Kind::NotAKnot: return "not-a-knot";
    }
    return "?";
}

VectorSpline::Kind VectorSpline::kind_from_string(const std::string& name) {
    for (Kind k : {Kind::Linear, Kind::NaturalCubic, Kind::NotAKnot})
        if (name == VectorSpline::name(k)) return k;
    throw ConfigError("unknown spline kind '" + name + "' (expected linear, natural or not-a-knot)");
}

std::size_t VectorSpline::interval(double x) const {
    const auto it = std::upper_bound(knots_.begin() + 1, knots_.end() - 1, x);
    return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

void VectorSpline::accumulate(double x, std::span<double> out) const {
    if (x == knots_.back()) {
        for (std::size_t m = 0; m < outputs_; ++m) out[m] += last_[m];
        return;
    }
    const std::size_t k = interval(x);
    const double dx = x - knots_[k];
    const double* c = &coeffs_[k * outputs_ * 4];
    for (std::size_t m = 0; m < outputs_; ++m, c += 4) out[m] += c[0] + dx * (c[1] + dx * (c[2] + dx * c[3]));
}

double VectorSpline::value(double x, std::size_t output) const {
    std::vector<double> out(outputs_, 0.0);
    accumulate(x, out);
    return out.at(output);
}

}  // namespace mapoi
