#pragma once

#include <array>
#include <concepts>
#include <cstddef>

namespace carleman::quad {

// 16-point Gauss-Legendre rule on [-1, 1]; the building block of every
// composite rule in the project. Nodes are symmetric, only stored once.
struct GaussLegendre16 {
    static constexpr int size = 16;
    static const std::array<double, 16> nodes;   // ascending on [-1, 1]
    static const std::array<double, 16> weights;
};

// Composite 16-point Gauss-Legendre integral of f over [a, b] split into
// `panels` equal panels. f is any callable double -> double.
template <typename F>
    requires std::invocable<F, double>
double composite_gl16(F&& f, double a, double b, int panels) {
    if (panels < 1) panels = 1;
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width;
        const double half = 0.5 * width;
        double acc = 0.0;
        for (int q = 0; q < GaussLegendre16::size; ++q) {
            acc += GaussLegendre16::weights[q] * f(mid + half * GaussLegendre16::nodes[q]);
        }
        total += acc * half;
    }
    return total;
}

// Trapezoid rule over n equally spaced samples covering [a, b];
// values[i] = f(a + i*h), h = (b-a)/(n-1).
double trapezoid(const double* values, std::size_t n, double step);

} // namespace carleman::quad
