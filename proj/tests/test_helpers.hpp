#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>

namespace test_helpers {

inline double unit_double(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline std::complex<double> random_complex(std::mt19937_64& gen) {
    return {2.0 * unit_double(gen) - 1.0, 2.0 * unit_double(gen) - 1.0};
}

inline Eigen::MatrixXcd random_matrix(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = random_complex(gen);
    return m;
}

inline Eigen::VectorXcd random_unit_vector(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = random_complex(gen);
    v.normalize();
    return v;
}

} // namespace test_helpers
