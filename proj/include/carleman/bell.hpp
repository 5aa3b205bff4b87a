#pragma once

namespace carleman {

/**
 * Meyer-type bell: the smooth frequency window supported on
 * [2*pi/3, 8*pi/3] that defines the mother wavelet.
 *
 * The transition profile is nu(x) = theta(x) / (theta(x) + theta(1-x)) with
 * theta(x) = exp(-a/x) for x > 0 and 0 otherwise, so the window is genuinely
 * C-infinity (a polynomial ramp would cap the attainable derivative order).
 * `a` is the transition sharpness; a = 1 is the classical choice.
 *
 * Invariants, valid for every sharpness:
 *   - b(xi) = 0 outside [2*pi/3, 8*pi/3] and 0 <= b <= 1 everywhere,
 *   - b(xi)^2 + b(2*xi)^2 = 1 on [2*pi/3, 4*pi/3],
 * which is exactly what dyadic orthonormality of the wavelet children needs.
 */
class BellFunction {
public:
    explicit BellFunction(double transition_sharpness = 1.0);

    double operator()(double xi) const { return eval(xi); }
    double eval(double xi) const;

    // nu(x): smooth 0 -> 1 ramp on [0, 1], nu(x) + nu(1-x) = 1.
    double transition(double x) const;

    double sharpness() const { return sharpness_; }

    static double support_min(); // 2*pi/3
    static double support_max(); // 8*pi/3

private:
    double sharpness_;
};

} // namespace carleman
