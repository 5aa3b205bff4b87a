#include "carleman/quadrature.hpp"

namespace carleman::quad {

const std::array<double, 16> GaussLegendre16::nodes = {
    -0.9894009349916499325961542, -0.9445750230732325760779884,
    -0.8656312023878317438804679, -0.7554044083550030338951012,
    -0.6178762444026437484466718, -0.4580167776572273863424194,
    -0.2816035507792589132304605, -0.0950125098376374401853193,
    0.0950125098376374401853193,  0.2816035507792589132304605,
    0.4580167776572273863424194,  0.6178762444026437484466718,
    0.7554044083550030338951012,  0.8656312023878317438804679,
    0.9445750230732325760779884,  0.9894009349916499325961542,
};

const std::array<double, 16> GaussLegendre16::weights = {
    0.0271524594117540948517806, 0.0622535239386478928628438,
    0.0951585116824927848099251, 0.1246289712555338720524763,
    0.1495959888165767320815017, 0.1691565193950025381893121,
    0.1826034150449235888667637, 0.1894506104550684962853967,
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806,
};

double trapezoid(const double* values, std::size_t n, double step) {
    if (n < 2) return 0.0;
    double acc = 0.5 * (values[0] + values[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) acc += values[i];
    return acc * step;
}

} // namespace carleman::quad
