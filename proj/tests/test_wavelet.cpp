#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "carleman/bell.hpp"
#include "carleman/enumeration.hpp"
#include "carleman/errors.hpp"
#include "carleman/quadrature.hpp"
#include "carleman/verification.hpp"
#include "carleman/wavelet.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace carleman;

namespace {
constexpr double kPi = std::numbers::pi;

const MotherWavelet& shared_mother() {
    static MotherWavelet mother(BellFunction(), 256, 4);
    return mother;
}
} // namespace

TEST_CASE("bell window values and support") {
    BellFunction bell;
    CHECK(bell.eval(2.0 * kPi / 3.0) == doctest::Approx(0.0));
    CHECK(bell.eval(4.0 * kPi / 3.0) == doctest::Approx(1.0));
    // nu(1/2) = 1/2 by the symmetry of theta(x)/(theta(x)+theta(1-x))
    CHECK(bell.eval(kPi) == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(bell.eval(0.5) == 0.0);
    CHECK(bell.eval(9.0) == 0.0);
    CHECK(bell.eval(-3.0) == 0.0);

    for (double xi = 0.1; xi < 10.0; xi += 0.0517) {
        const double b = bell.eval(xi);
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
    }
}

TEST_CASE("bell admissibility on the overlap") {
    // b(xi)^2 + b(2 xi)^2 = 1 on [2 pi/3, 4 pi/3], for several sharpness values
    for (double sharp : {0.5, 1.0, 2.0}) {
        BellFunction bell(sharp);
        for (int i = 0; i <= 200; ++i) {
            const double xi = 2.0 * kPi / 3.0 + i * (2.0 * kPi / 3.0) / 200.0;
            const double one = bell.eval(xi) * bell.eval(xi) + bell.eval(2 * xi) * bell.eval(2 * xi);
            CHECK(one == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("zero integrand outside the bell support") {
    BellFunction bell;
    const double integral =
        quad::composite_gl16([&](double xi) { return bell.eval(xi) * std::sin(3.0 * xi); },
                             8.5, 20.0, 32);
    CHECK(integral == 0.0);
}

TEST_CASE("mother wavelet is purely imaginary: full complex integral oracle") {
    const MotherWavelet& u = shared_mother();
    const BellFunction bell;
    for (double s : {-3.2, -0.5, 0.0, 0.7, 1.9, 4.4}) {
        // direct quadrature of (1/2pi) Int exp(i xi (1/2+s)) sgn(xi) b(|xi|) dxi
        // over both halves of the real line
        const double tau = 0.5 + s;
        auto re_part = [&](double xi) { return std::cos(xi * tau) * ((xi > 0) - (xi < 0)) * bell.eval(std::abs(xi)); };
        auto im_part = [&](double xi) { return std::sin(xi * tau) * ((xi > 0) - (xi < 0)) * bell.eval(std::abs(xi)); };
        double re = 0.0, im = 0.0;
        for (auto [a, b] : {std::pair{-8.0 * kPi / 3.0, -2.0 * kPi / 3.0},
                            std::pair{2.0 * kPi / 3.0, 8.0 * kPi / 3.0}}) {
            re += quad::composite_gl16(re_part, a, b, 64);
            im += quad::composite_gl16(im_part, a, b, 64);
        }
        re /= 2.0 * kPi;
        im /= 2.0 * kPi;
        const std::complex<double> value = u.eval(s);
        CHECK(std::abs(re) < 1e-12);          // the real part cancels identically
        CHECK(value.real() == 0.0);           // and the evaluator exploits that
        CHECK(value.imag() == doctest::Approx(im).epsilon(1e-10));
    }
}

TEST_CASE("unit L2 norm by trapezoid oracle on [-40, 40]") {
    const MotherWavelet& u = shared_mother();
    const double step = 0.01;
    const int n = static_cast<int>(80.0 / step) + 1;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = std::norm(u.eval(-40.0 + i * step));
    CHECK(quad::trapezoid(vals.data(), vals.size(), step) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("derivative order budget") {
    const MotherWavelet& u = shared_mother();
    CHECK_NOTHROW(u.eval(0.3, 4));
    CHECK_THROWS_AS(u.eval(0.3, 5), Error);
    CHECK_THROWS_AS(u.eval_child({1, 2}, 0.3, 5), Error);
    CHECK_THROWS_AS(u.sup_norm(5), Error);
}

TEST_CASE("children are scaled translates") {
    const MotherWavelet& u = shared_mother();
    for (double s : {-1.3, 0.0, 0.6, 2.2}) {
        CHECK(u.eval_child({0, 0}, s) == u.eval(s));
        CHECK(u.eval_child({1, 0}, 0.0).imag() ==
              doctest::Approx((std::sqrt(2.0) * u.eval(0.0)).imag()));
        CHECK(u.eval_child({0, 3}, s, 1) == u.eval(s - 3.0, 1));
        // (j,k) = (1, 0) at order 1 carries the chain-rule factor 2
        CHECK(u.eval_child({1, 0}, s, 1).imag() ==
              doctest::Approx((std::sqrt(2.0) * 2.0 * u.eval(2.0 * s, 1)).imag()));
    }
}

TEST_CASE("finite differences reproduce the next derivative order") {
    const MotherWavelet& u = shared_mother();
    const double h = 1e-4;
    for (int order = 0; order <= 2; ++order) {
        for (double s : {-2.1, -0.4, 0.8, 1.7}) {
            const std::complex<double> fd = (u.eval(s + h, order) - u.eval(s - h, order)) / (2 * h);
            const std::complex<double> exact = u.eval(s, order + 1);
            CHECK(std::abs(fd - exact) <= 1e-5 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("scale and order bounds") {
    const MotherWavelet& u = shared_mother();
    CHECK(MotherWavelet::scale_bound(2) == 16.0);
    CHECK(MotherWavelet::scale_bound(-3) == doctest::Approx(std::pow(0.5, 1.5)).epsilon(1e-15));
    CHECK(MotherWavelet::log2_scale_bound(2) == 4.0);
    CHECK(MotherWavelet::log2_scale_bound(-3) == -1.5);

    // A_0 against an independent dense-sampling oracle refined to 1e-8
    double sup = 0.0, arg = 0.0;
    for (double s = -12.0; s <= 12.0; s += 1e-3) {
        const double v = std::abs(u.eval(s));
        if (v > sup) {
            sup = v;
            arg = s;
        }
    }
    for (double h = 5e-4; h > 1e-9; h *= 0.5) {
        for (int i = -3; i <= 3; ++i) {
            const double v = std::abs(u.eval(arg + i * h));
            if (v > sup) {
                sup = v;
                arg = arg + i * h;
            }
        }
    }
    CHECK(u.order_bound(0) == doctest::Approx(std::pow(2.0, 0.25) * sup).epsilon(1e-7));
}

TEST_CASE("sampled child sup never exceeds the D*A ceiling") {
    const MotherWavelet& u = shared_mother();
    for (int j = -2; j <= 2; ++j) {
        for (int k = -2; k <= 2; ++k) {
            for (int order = 0; order <= 3; ++order) {
                const auto [d, a] = u.bounds({j, k}, order);
                const double width = u.decay_radius(1e-6) / std::exp2(static_cast<double>(j));
                const double center = k / std::exp2(static_cast<double>(j));
                double sampled = 0.0;
                for (int i = 0; i <= 400; ++i) {
                    const double s = center - width + i * (2.0 * width / 400.0);
                    sampled = std::max(sampled, std::abs(u.eval_child({j, k}, s, order)));
                }
                CHECK(sampled <= d * a * (1.0 + 1e-12));
                CHECK(sampled <= u.child_sup_norm({j, k}, order) * (1.0 + 1e-9));
            }
        }
    }
}

TEST_CASE("Schwartz-type decay beyond radius 40") {
    const MotherWavelet& u = shared_mother();
    for (double s = 40.5; s <= 90.0; s += 3.7) {
        CHECK(std::abs(u.eval(s)) < 1e-6);
        CHECK(std::abs(u.eval(-s)) < 1e-6);
    }
    CHECK(u.decay_radius(1e-6) < 40.0);
    CHECK(u.decay_radius(1e-10) > u.decay_radius(1e-6));
}

TEST_CASE("small Gram matrix of enumerated children") {
    const MotherWavelet& u = shared_mother();
    Enumeration enumeration(4);
    const Eigen::MatrixXcd gram = wavelet_gram_matrix(u, enumeration, 9);
    for (Eigen::Index a = 0; a < gram.rows(); ++a) {
        for (Eigen::Index b = 0; b < gram.cols(); ++b) {
            const double expected = a == b ? 1.0 : 0.0;
            CHECK(std::abs(gram(a, b) - expected) < 1e-7);
        }
    }
}

TEST_CASE("evaluations are deterministic") {
    MotherWavelet a(BellFunction(), 256, 3), b(BellFunction(), 256, 3);
    for (double s : {-5.0, 0.3, 11.0}) {
        CHECK(a.eval(s, 2) == b.eval(s, 2));
    }
    CHECK(a.sup_norm(3) == b.sup_norm(3));
}
