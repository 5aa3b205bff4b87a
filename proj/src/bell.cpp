#include "carleman/bell.hpp"

#include "carleman/errors.hpp"

#include <cmath>
#include <numbers>

namespace carleman {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSupportMin = 2.0 * kPi / 3.0;
constexpr double kSupportMid = 4.0 * kPi / 3.0;
constexpr double kSupportMax = 8.0 * kPi / 3.0;
} // namespace

BellFunction::BellFunction(double transition_sharpness) : sharpness_(transition_sharpness) {
    if (!(transition_sharpness > 0.0))
        raise(ErrorCode::MalformedConfig, "bell transition sharpness must be positive");
}

double BellFunction::transition(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double up = std::exp(-sharpness_ / x);
    const double down = std::exp(-sharpness_ / (1.0 - x));
    return up / (up + down);
}

double BellFunction::eval(double xi) const {
    if (xi <= kSupportMin || xi >= kSupportMax) return 0.0;
    if (xi <= kSupportMid) {
        // rising edge: sin(pi/2 * nu(3 xi / 2 pi - 1))
        return std::sin(0.5 * kPi * transition(3.0 * xi / (2.0 * kPi) - 1.0));
    }
    // falling edge: cos(pi/2 * nu(3 xi / 4 pi - 1))
    return std::cos(0.5 * kPi * transition(3.0 * xi / (4.0 * kPi) - 1.0));
}

double BellFunction::support_min() { return kSupportMin; }
double BellFunction::support_max() { return kSupportMax; }

} // namespace carleman
