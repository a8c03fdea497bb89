#pragma once

// Reference computations written without the library, so tests compare two
// independent implementations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

// Cyclic Jacobi rotations on a dense symmetric matrix; eigenvalues ascending.
inline std::vector<double> jacobi_eigenvalues(Matrix a, double tol = 1e-14, int max_sweeps = 100) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        double scale = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                if (p != q) off += a[p][q] * a[p][q];
                scale += a[p][q] * a[p][q];
            }
        if (off <= tol * tol * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

struct Carrier {
    double omega;
    double amplitude;
    double phase;
};

// Gaussian-windowed cosine sum evaluated term by term.
inline double shaped_field(double T, double s, const std::vector<Carrier>& carriers, double t) {
    const double u = t - 0.5 * T;
    const double envelope = std::exp(-(u * u) / (2.0 * s * s));
    double sum = 0.0;
    for (const Carrier& c : carriers) sum += c.amplitude * std::cos(c.omega * t + c.phase);
    return envelope * sum;
}

// Resonant two-level excitation in the rotating-wave limit.
inline double rabi_excited(double mu, double amplitude, double t) {
    const double x = std::sin(0.5 * mu * amplitude * t);
    return x * x;
}

// Index of (p, q), p <= q, in the upper-triangle-with-diagonal layout, then
// the strict upper triangle for the dipole; counted by walking, not by formula.
inline std::size_t walk_index(int n, bool dipole, int p, int q) {
    std::size_t k = 0;
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c, ++k)
            if (!dipole && r == p && c == q) return k;
    for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c, ++k)
            if (dipole && r == p && c == q) return k;
    return static_cast<std::size_t>(-1);
}

}  // namespace oracle
