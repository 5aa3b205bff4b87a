#include "carleman/wavelet.hpp"

#include "carleman/errors.hpp"
#include "carleman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace carleman {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxLadderPanels = 2048;

// trig_m(theta) for m mod 4 = 0,1,2,3: sin, cos, -sin, -cos.
inline double trig_pick(int m, double sin_t, double cos_t) {
    switch (m & 3) {
        case 0: return sin_t;
        case 1: return cos_t;
        case 2: return -sin_t;
        default: return -cos_t;
    }
}

} // namespace

MotherWavelet::MotherWavelet(BellFunction bell, int quadrature_nodes, int max_order)
    : bell_(bell),
      base_panels_(std::max(1, quadrature_nodes / 16)),
      max_order_(max_order) {
    if (max_order_ < 0) raise(ErrorCode::MalformedConfig, "derivative budget must be >= 0");

    for (int panels = base_panels_; panels <= kMaxLadderPanels; panels *= 2)
        ladder_.push_back(build_table(panels));

    // C(R)-norms of u^(i): coarse scan sharing one sin/cos pass per node,
    // then local refinement around the best point of each order.
    const double scan_min = -16.0, scan_max = 16.0, scan_step = 1.0 / 256.0;
    const int scan_count = static_cast<int>((scan_max - scan_min) / scan_step) + 1;
    std::vector<double> best_val(max_order_ + 1, 0.0), best_arg(max_order_ + 1, 0.0);
    std::vector<double> w(max_order_ + 1);
    for (int i = 0; i < scan_count; ++i) {
        const double s = scan_min + i * scan_step;
        w_all_orders(s + 0.5, w.data());
        for (int m = 0; m <= max_order_; ++m) {
            if (std::abs(w[m]) > best_val[m]) {
                best_val[m] = std::abs(w[m]);
                best_arg[m] = s;
            }
        }
    }
    sup_norms_.resize(max_order_ + 1);
    for (int m = 0; m <= max_order_; ++m) sup_norms_[m] = refine_sup(m, best_arg[m]);

    // Decay radii of |u| relative to its sup, for window sizing downstream.
    const double thresholds[] = {1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
    const double far_end = 256.0, far_step = 0.25;
    std::vector<double> last_above(std::size(thresholds), 0.0);
    for (double s = 0.0; s <= far_end; s += far_step) {
        const double mag = std::max(std::abs(w_value(s + 0.5, 0)),
                                    std::abs(w_value(-s + 0.5, 0)));
        for (std::size_t t = 0; t < std::size(thresholds); ++t)
            if (mag >= thresholds[t] * sup_norms_[0]) last_above[t] = s;
    }
    for (std::size_t t = 0; t < std::size(thresholds); ++t)
        decay_radii_.emplace_back(thresholds[t], std::min(last_above[t] + far_step, far_end));
}

MotherWavelet::PanelTable MotherWavelet::build_table(int panels) const {
    PanelTable t;
    t.panels = panels;
    const double a = BellFunction::support_min();
    const double width = (BellFunction::support_max() - a) / panels;
    t.xi.reserve(static_cast<std::size_t>(panels) * quad::GaussLegendre16::size);
    t.wb.reserve(t.xi.capacity());
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width;
        const double half = 0.5 * width;
        for (int q = 0; q < quad::GaussLegendre16::size; ++q) {
            const double xi = mid + half * quad::GaussLegendre16::nodes[q];
            t.xi.push_back(xi);
            t.wb.push_back(half * quad::GaussLegendre16::weights[q] * bell_.eval(xi));
        }
    }
    return t;
}

int MotherWavelet::needed_panels(double tau) const {
    // The integrand oscillates |tau| times over the support; keep at least
    // ~7 nodes per oscillation so the composite rule stays resolved.
    const double p = 0.45 * std::abs(tau) + 1.0;
    return std::max(base_panels_, static_cast<int>(p) + 1);
}

double MotherWavelet::w_value_on(const PanelTable& t, double tau, int order) const {
    double acc = 0.0;
    const std::size_t n = t.xi.size();
    for (std::size_t q = 0; q < n; ++q) {
        const double xi = t.xi[q];
        double p = 1.0;
        for (int m = 0; m < order; ++m) p *= xi;
        acc += t.wb[q] * p * trig_pick(order, std::sin(xi * tau), std::cos(xi * tau));
    }
    return acc / kPi;
}

double MotherWavelet::w_value(double tau, int order) const {
    const int need = needed_panels(tau);
    for (const auto& t : ladder_)
        if (t.panels >= need) return w_value_on(t, tau, order);
    return w_value_on(build_table(need), tau, order);
}

void MotherWavelet::w_all_orders(double tau, double* out) const {
    const int need = needed_panels(tau);
    const PanelTable* table = nullptr;
    for (const auto& t : ladder_) {
        if (t.panels >= need) {
            table = &t;
            break;
        }
    }
    PanelTable local;
    if (!table) {
        local = build_table(need);
        table = &local;
    }
    for (int m = 0; m <= max_order_; ++m) out[m] = 0.0;
    const std::size_t n = table->xi.size();
    for (std::size_t q = 0; q < n; ++q) {
        const double xi = table->xi[q];
        const double st = std::sin(xi * tau), ct = std::cos(xi * tau);
        double p = table->wb[q];
        for (int m = 0; m <= max_order_; ++m) {
            out[m] += p * trig_pick(m, st, ct);
            p *= xi;
        }
    }
    for (int m = 0; m <= max_order_; ++m) out[m] /= kPi;
}

double MotherWavelet::refine_sup(int order, double start) const {
    double center = start;
    double value = std::abs(w_value(center + 0.5, order));
    double h = 1.0 / 256.0;
    while (h > 1e-9) {
        double best_c = center, best_v = value;
        for (int i = -4; i <= 4; ++i) {
            if (i == 0) continue;
            const double s = center + i * h;
            const double v = std::abs(w_value(s + 0.5, order));
            if (v > best_v) {
                best_v = v;
                best_c = s;
            }
        }
        if (best_v - value < 1e-9 && best_c == center) h *= 0.5;
        center = best_c;
        value = best_v;
    }
    return value;
}

std::complex<double> MotherWavelet::eval(double s, int order) const {
    if (order < 0 || order > max_order_)
        raise(ErrorCode::OrderBudgetExceeded,
              "derivative order " + std::to_string(order) + " exceeds budget " +
                  std::to_string(max_order_));
    return {0.0, w_value(s + 0.5, order)};
}

std::complex<double> MotherWavelet::eval_child(const ChildIndex& idx, double s, int order) const {
    const double amp = std::exp2(idx.j * (0.5 + order));
    const double arg = std::exp2(static_cast<double>(idx.j)) * s - idx.k;
    return amp * eval(arg, order);
}

double MotherWavelet::sup_norm(int order) const {
    if (order < 0 || order > max_order_)
        raise(ErrorCode::OrderBudgetExceeded, "sup norm order beyond budget");
    return sup_norms_[order];
}

double MotherWavelet::child_sup_norm(const ChildIndex& idx, int order) const {
    return std::exp2(idx.j * (0.5 + order)) * sup_norm(order);
}

double MotherWavelet::scale_bound(int j) {
    if (j > 0) return std::exp2(static_cast<double>(j) * j);
    return std::exp2(-0.5 * std::abs(j));
}

double MotherWavelet::log2_scale_bound(int j) {
    if (j > 0) return static_cast<double>(j) * j;
    return -0.5 * std::abs(j);
}

double MotherWavelet::order_bound(int order) const {
    const double e = order + 0.5;
    return std::exp2(e * e) * sup_norm(order);
}

std::pair<double, double> MotherWavelet::bounds(const ChildIndex& idx, int order) const {
    return {scale_bound(idx.j), order_bound(order)};
}

double MotherWavelet::decay_radius(double relative_eps) const {
    for (const auto& [eps, radius] : decay_radii_)
        if (eps <= relative_eps) return radius;
    return decay_radii_.back().second;
}

} // namespace carleman
