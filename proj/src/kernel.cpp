#include "carleman/kernel.hpp"

#include "carleman/errors.hpp"

#include <cmath>

namespace carleman {

KernelGrid KernelGrid::make(double extent, double step) {
    if (!(extent > 0.0) || !(step > 0.0) || step > extent)
        raise(ErrorCode::MalformedConfig, "grid needs 0 < step <= extent");
    KernelGrid grid;
    grid.extent = extent;
    grid.step = step;
    const int count = static_cast<int>(std::lround(2.0 * extent / step)) + 1;
    grid.points.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) grid.points.push_back(-extent + i * step);
    return grid;
}

DerivOrders DerivOrders::up_to(int budget) {
    DerivOrders orders;
    orders.budget = budget;
    for (int i = 0; i <= budget; ++i)
        for (int j = 0; i + j <= budget; ++j) orders.pairs.emplace_back(i, j);
    return orders;
}

int DerivOrders::index(int i, int j) const {
    for (std::size_t p = 0; p < pairs.size(); ++p)
        if (pairs[p].first == i && pairs[p].second == j) return static_cast<int>(p);
    raise(ErrorCode::OrderBudgetExceeded,
          "derivative pair (" + std::to_string(i) + ", " + std::to_string(j) +
              ") outside the stored budget");
}

FieldSet FieldSet::zeros(const KernelGrid& grid, const DerivOrders& orders) {
    FieldSet fs;
    fs.grid = grid;
    fs.orders = orders;
    const int n = grid.count();
    fs.data.assign(static_cast<std::size_t>(orders.count()), Eigen::MatrixXcd::Zero(n, n));
    return fs;
}

WaveletTable build_wavelet_table(const MotherWavelet& mother, const UnitaryPairing& pairing,
                                 const KernelGrid& grid, int budget) {
    WaveletTable table;
    const int m_count = pairing.size();
    const int p_count = grid.count();
    for (int i = 0; i <= budget; ++i) {
        Eigen::MatrixXcd values(m_count, p_count);
        for (int m = 0; m < m_count; ++m) {
            const ChildIndex child = pairing.child_of(m);
            for (int p = 0; p < p_count; ++p)
                values(m, p) = mother.eval_child(child, grid.points[static_cast<std::size_t>(p)], i);
        }
        table.values.push_back(std::move(values));
    }
    return table;
}

CoefficientVector conjugated_h_image(int k, int r, const UnitaryPairing& pairing,
                                     const SplitOperators& split, const FrameSet& frames,
                                     const MotherWavelet& mother, int budget) {
    if (k < 1 || k > frames.perp_count())
        raise(ErrorCode::ScheduleExceeded, "no e_perp vector with index " + std::to_string(k));
    const int pos = frames.f_position(FrameKind::EPerp, k);

    CoefficientVector cv;
    cv.coeffs = split.s(r).adjoint().col(pos); // <S^* e_perp_k, f_m>

    const Eigen::VectorXcd alt = static_cast<double>(k) * split.gamma(r).adjoint().col(pos);
    cv.cross_check_error = (cv.coeffs - alt).cwiseAbs().maxCoeff();
    if (cv.cross_check_error > 1e-10)
        raise(ErrorCode::ReconstructionFailure,
              "dual formulas for the conjugated image disagree by " +
                  std::to_string(cv.cross_check_error));

    for (int i = 0; i <= budget; ++i) {
        double bound = 0.0;
        for (int m = 0; m < pairing.size(); ++m)
            bound += std::abs(cv.coeffs(m)) * mother.child_sup_norm(pairing.child_of(m), i);
        cv.sup_estimates.push_back(bound);
    }
    return cv;
}

FieldSet assemble_P(int r, const UnitaryPairing& pairing, const SplitOperators& split,
                    const FrameSet& frames, const BasisPartition& part,
                    const MotherWavelet& mother, const KernelGrid& grid,
                    const DerivOrders& orders, const WaveletTable& table,
                    std::vector<PTerm>& terms_out) {
    if (orders.budget > mother.max_order())
        raise(ErrorCode::OrderBudgetExceeded, "derivative budget exceeds the wavelet engine's");

    FieldSet fields = FieldSet::zeros(grid, orders);
    terms_out.clear();

    const int p_count = grid.count();
    for (int k = 1; k <= frames.perp_count(); ++k) {
        PTerm term;
        term.k = k;
        term.s_child = part.scheduled_child(k);
        term.image = conjugated_h_image(k, r, pairing, split, frames, mother, orders.budget);
        for (int i = 0; i <= orders.budget; ++i) {
            Eigen::VectorXcd profile(p_count);
            for (int p = 0; p < p_count; ++p)
                profile(p) =
                    mother.eval_child(term.s_child, grid.points[static_cast<std::size_t>(p)], i);
            term.s_profile.push_back(std::move(profile));
        }
        terms_out.push_back(std::move(term));
    }

    for (const auto& term : terms_out) {
        for (int idx = 0; idx < orders.count(); ++idx) {
            const auto [i, j] = orders.pairs[static_cast<std::size_t>(idx)];
            // t-side values of (T^* h_{n(k)})^(j) on the grid
            const Eigen::RowVectorXcd t_values =
                term.image.coeffs.transpose() * table.order(j);
            fields.data[static_cast<std::size_t>(idx)].noalias() +=
                term.s_profile[static_cast<std::size_t>(i)] * t_values.conjugate();
        }
    }
    return fields;
}

FieldSet assemble_F(int r, const UnitaryPairing& pairing, const SchmidtData& schmidt,
                    const MotherWavelet& mother, const KernelGrid& grid,
                    const DerivOrders& orders, const WaveletTable& table,
                    std::vector<FTerm>& terms_out) {
    (void)r;
    (void)pairing;
    if (orders.budget > mother.max_order())
        raise(ErrorCode::OrderBudgetExceeded, "derivative budget exceeds the wavelet engine's");

    FieldSet fields = FieldSet::zeros(grid, orders);
    terms_out.clear();

    for (int n = 0; n < schmidt.rank; ++n) {
        FTerm term;
        term.s_n = schmidt.singulars(n);
        const double root = std::pow(term.s_n, 0.25);
        term.s_coeffs = root * schmidt.right.col(n); // U A^* q_n = s^(1/4) U p_n
        term.t_coeffs = root * schmidt.left.col(n);  // U A p_n  = s^(1/4) U q_n
        for (int i = 0; i <= orders.budget; ++i) {
            term.s_profile.push_back(
                (term.s_coeffs.transpose() * table.order(i)).transpose());
        }
        terms_out.push_back(std::move(term));
    }

    for (const auto& term : terms_out) {
        const double weight = std::sqrt(term.s_n);
        for (int idx = 0; idx < orders.count(); ++idx) {
            const auto [i, j] = orders.pairs[static_cast<std::size_t>(idx)];
            const Eigen::RowVectorXcd t_values = term.t_coeffs.transpose() * table.order(j);
            fields.data[static_cast<std::size_t>(idx)].noalias() +=
                weight * term.s_profile[static_cast<std::size_t>(i)] * t_values.conjugate();
        }
    }
    return fields;
}

FieldSet assemble_K(const FieldSet& p, const FieldSet& f) {
    if (!(p.grid == f.grid) || p.orders.budget != f.orders.budget)
        raise(ErrorCode::GridMismatch, "P and F parts live on different grids or budgets");
    FieldSet k = FieldSet::zeros(p.grid, p.orders);
    for (std::size_t idx = 0; idx < k.data.size(); ++idx) k.data[idx] = p.data[idx] + f.data[idx];
    return k;
}

AssembledKernel assemble_kernel(int r, const UnitaryPairing& pairing, const SplitOperators& split,
                                const SchmidtData& schmidt, const FrameSet& frames,
                                const BasisPartition& part, const MotherWavelet& mother,
                                const KernelGrid& grid, int budget) {
    AssembledKernel kernel;
    kernel.r = r;
    kernel.grid = grid;
    kernel.orders = DerivOrders::up_to(budget);
    kernel.targets = pairing.target_child;
    kernel.table = build_wavelet_table(mother, pairing, grid, budget);
    kernel.P = assemble_P(r, pairing, split, frames, part, mother, grid, kernel.orders,
                          kernel.table, kernel.p_terms);
    kernel.F = assemble_F(r, pairing, schmidt, mother, grid, kernel.orders, kernel.table,
                          kernel.f_terms);
    kernel.K = assemble_K(kernel.P, kernel.F);

    // Majorant ledger: per (i, j), sum over k of H_{n(k),i} * (C-norm bound of
    // the image's j-th derivative), plus the geometric continuation of the
    // schedule certificate for the unmaterialized tail.
    const double q = part.geometric_target();
    for (int idx = 0; idx < kernel.orders.count(); ++idx) {
        const auto [i, j] = kernel.orders.pairs[static_cast<std::size_t>(idx)];
        double sum = 0.0, max_cj = 0.0;
        for (const auto& term : kernel.p_terms) {
            const double h_sup = mother.child_sup_norm(term.s_child, i);
            const double c_j = term.image.sup_estimates[static_cast<std::size_t>(j)];
            sum += h_sup * c_j;
            max_cj = std::max(max_cj, c_j / term.k);
        }
        const int materialized = static_cast<int>(kernel.p_terms.size());
        const double tail = mother.order_bound(i) * max_cj *
                            std::pow(q, materialized + 1) / (1.0 - q);
        kernel.p_majorant.push_back(sum);
        kernel.p_tail_estimate.push_back(tail);
    }
    kernel.f_tail_bound = nuclearity_report(schmidt).tail_bound;
    return kernel;
}

Eigen::VectorXd carleman_norm_grid(const AssembledKernel& kernel, int order) {
    const int p_count = kernel.grid.count();
    const int m_count = kernel.table.order(0).rows();
    Eigen::VectorXd out(p_count);
    Eigen::VectorXcd acc(m_count);
    for (int p = 0; p < p_count; ++p) {
        acc.setZero();
        for (const auto& term : kernel.p_terms)
            acc += std::conj(term.s_profile[static_cast<std::size_t>(order)](p)) *
                   term.image.coeffs;
        for (const auto& term : kernel.f_terms)
            acc += std::sqrt(term.s_n) *
                   std::conj(term.s_profile[static_cast<std::size_t>(order)](p)) * term.t_coeffs;
        out(p) = acc.norm();
    }
    return out;
}

double carleman_norm_at(const AssembledKernel& kernel, const MotherWavelet& mother, double s,
                        int order) {
    const int m_count = static_cast<int>(kernel.targets.size());
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(m_count);
    for (const auto& term : kernel.p_terms) {
        const std::complex<double> value = mother.eval_child(term.s_child, s, order);
        acc += std::conj(value) * term.image.coeffs;
    }
    if (!kernel.f_terms.empty()) {
        Eigen::VectorXcd child_values(m_count);
        for (int m = 0; m < m_count; ++m)
            child_values(m) = mother.eval_child(kernel.targets[static_cast<std::size_t>(m)], s, order);
        for (const auto& term : kernel.f_terms) {
            const std::complex<double> value = term.s_coeffs.transpose() * child_values;
            acc += std::sqrt(term.s_n) * std::conj(value) * term.t_coeffs;
        }
    }
    return acc.norm();
}

FieldSet scale_field(const FieldSet& fields, double factor) {
    FieldSet out;
    out.grid = fields.grid;
    out.orders = fields.orders;
    out.data.reserve(fields.data.size());
    for (const auto& m : fields.data) out.data.push_back(factor * m);
    return out;
}

} // namespace carleman
