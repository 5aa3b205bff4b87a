#pragma once

#include "carleman/bell.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace carleman {

// Dyadic child u_{jk}(s) = 2^{j/2} u(2^j s - k): j is the scale, k the translation.
struct ChildIndex {
    int j = 0;
    int k = 0;

    friend bool operator==(const ChildIndex&, const ChildIndex&) = default;
};

/**
 * Lemarie-Meyer mother wavelet
 *
 *   u(s) = (1/2pi) Int_R exp(i xi (1/2 + s)) sgn(xi) b(|xi|) dxi,
 *
 * evaluated together with derivatives of any order up to a configured budget.
 * Folding the negative frequencies onto the positive axis reduces every
 * derivative to one real integral over the bell support,
 *
 *   u^(m)(s) = (i/pi) Int b(xi) xi^m trig_m(xi (s + 1/2)) dxi,
 *
 * with trig_m cycling sin, cos, -sin, -cos; so u^(m) is purely imaginary for
 * every m. Quadrature is composite 16-point Gauss-Legendre over the support
 * with a node count that grows with the oscillation rate |s + 1/2|, keeping
 * far-tail evaluations resolved instead of returning aliasing noise.
 *
 * Instances are immutable after construction (all caches, including the
 * C(R)-norms of the derivatives and the measured decay radii, are populated
 * in the constructor), so concurrent read-only use is safe.
 */
class MotherWavelet {
public:
    explicit MotherWavelet(BellFunction bell = BellFunction(),
                           int quadrature_nodes = 256,
                           int max_order = 4);

    // u^(order)(s); throws OrderBudgetExceeded beyond the configured budget.
    std::complex<double> eval(double s, int order = 0) const;

    // 2^{j/2} 2^{j*order} u^(order)(2^j s - k).
    std::complex<double> eval_child(const ChildIndex& idx, double s, int order = 0) const;

    // ||u^(order)||_{C(R)}, estimated once at construction by grid refinement
    // (resolution doubles until the value moves by less than 1e-9).
    double sup_norm(int order) const;

    // ||u_{jk}^(order)||_{C(R)} = 2^{j(order + 1/2)} ||u^(order)||_{C(R)}; the
    // affine argument map makes this scaling exact, no re-sampling needed.
    double child_sup_norm(const ChildIndex& idx, int order) const;

    // Scale factor D_j of the sup-norm ceiling: 2^{j^2} for j > 0, 2^{-|j|/2}
    // for j <= 0. Overflows to +inf for very large positive j; use the log2
    // variant wherever schedules compare magnitudes.
    static double scale_bound(int j);
    static double log2_scale_bound(int j);

    // Order factor A_i = 2^{(i+1/2)^2} ||u^(i)||_{C(R)}.
    double order_bound(int order) const;

    // (D, A) with the guarantee ||u_{jk}^(order)||_C <= D * A.
    std::pair<double, double> bounds(const ChildIndex& idx, int order) const;

    // Smallest radius r (measured at construction) with |u(s)| below
    // relative_eps * ||u||_C for every sampled |s| >= r.
    double decay_radius(double relative_eps) const;

    int max_order() const { return max_order_; }
    int quadrature_nodes() const { return 16 * base_panels_; }
    const BellFunction& bell() const { return bell_; }

private:
    struct PanelTable {
        int panels = 0;
        std::vector<double> xi; // nodes over the bell support
        std::vector<double> wb; // weight * b(node)
    };

    PanelTable build_table(int panels) const;
    int needed_panels(double tau) const;
    double w_value(double tau, int order) const;                 // Im u^(order)
    double w_value_on(const PanelTable& t, double tau, int order) const;
    void w_all_orders(double tau, double* out) const;            // orders 0..max_order_
    double refine_sup(int order, double start) const;

    BellFunction bell_;
    int base_panels_;
    int max_order_;
    std::vector<PanelTable> ladder_;
    std::vector<double> sup_norms_;
    std::vector<std::pair<double, double>> decay_radii_; // (relative eps, radius)
};

} // namespace carleman
