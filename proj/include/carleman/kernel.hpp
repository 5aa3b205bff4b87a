#pragma once

#include "carleman/pairing.hpp"
#include "carleman/schmidt.hpp"

#include <Eigen/Dense>

#include <vector>

namespace carleman {

struct KernelGrid {
    double extent = 0.0;
    double step = 0.0;
    std::vector<double> points;

    static KernelGrid make(double extent, double step);
    int count() const { return static_cast<int>(points.size()); }

    friend bool operator==(const KernelGrid& a, const KernelGrid& b) {
        return a.extent == b.extent && a.step == b.step;
    }
};

// Derivative pairs (i, j) with i + j <= budget, lexicographic order; (0, 0)
// is always index 0.
struct DerivOrders {
    int budget = 0;
    std::vector<std::pair<int, int>> pairs;

    static DerivOrders up_to(int budget);
    int count() const { return static_cast<int>(pairs.size()); }
    int index(int i, int j) const;
};

struct FieldSet {
    KernelGrid grid;
    DerivOrders orders;
    std::vector<Eigen::MatrixXcd> data; // per pair, rows = s, cols = t

    const Eigen::MatrixXcd& field(int i, int j) const {
        return data.at(static_cast<std::size_t>(orders.index(i, j)));
    }
    Eigen::MatrixXcd& field(int i, int j) {
        return data.at(static_cast<std::size_t>(orders.index(i, j)));
    }

    static FieldSet zeros(const KernelGrid& grid, const DerivOrders& orders);
};

// values[order](m, p) = u_{pi(m)}^(order)(points[p]) for every f-position m.
struct WaveletTable {
    std::vector<Eigen::MatrixXcd> values;

    const Eigen::MatrixXcd& order(int i) const { return values.at(static_cast<std::size_t>(i)); }
};

WaveletTable build_wavelet_table(const MotherWavelet& mother, const UnitaryPairing& pairing,
                                 const KernelGrid& grid, int budget);

/**
 * Coefficients of the conjugated image of the k-th scheduled tail wavelet:
 * c_m = <S_r^* e_perp_k, f_m>, cross-checked against the equivalent
 * k <e_perp_k, Gamma_r f_m> route. sup_estimates[i] majorizes the C(R)-norm
 * of the i-th derivative of the represented function (the paper-side bound
 * C_i * k).
 */
struct CoefficientVector {
    Eigen::VectorXcd coeffs;     // per f-position
    double cross_check_error = 0.0;
    std::vector<double> sup_estimates;
};

CoefficientVector conjugated_h_image(int k, int r, const UnitaryPairing& pairing,
                                     const SplitOperators& split, const FrameSet& frames,
                                     const MotherWavelet& mother, int budget);

struct PTerm {
    int k = 0;                  // e_perp index
    ChildIndex s_child;         // h_{n(k)}
    CoefficientVector image;    // T^* h_{n(k)}
    std::vector<Eigen::VectorXcd> s_profile; // per order, values of h_{n(k)}^(i) on the grid
};

struct FTerm {
    double s_n = 0.0;
    Eigen::VectorXcd s_coeffs;  // expansion of U A^* q_n over f-positions
    Eigen::VectorXcd t_coeffs;  // expansion of U A p_n
    std::vector<Eigen::VectorXcd> s_profile; // per order, values of (U A^* q_n)^(i) on the grid
};

struct AssembledKernel {
    int r = 0;
    KernelGrid grid;
    DerivOrders orders;
    FieldSet P, F, K;
    std::vector<PTerm> p_terms;
    std::vector<FTerm> f_terms;
    WaveletTable table;
    std::vector<ChildIndex> targets; // pairing image per f-position
    // Majorant ledger: per derivative pair, the sum of per-term C-norm bounds
    // plus a geometric estimate of the unmaterialized tail.
    std::vector<double> p_majorant;
    std::vector<double> p_tail_estimate;
    double f_tail_bound = 0.0;
};

FieldSet assemble_P(int r, const UnitaryPairing& pairing, const SplitOperators& split,
                    const FrameSet& frames, const BasisPartition& part,
                    const MotherWavelet& mother, const KernelGrid& grid,
                    const DerivOrders& orders, const WaveletTable& table,
                    std::vector<PTerm>& terms_out);

FieldSet assemble_F(int r, const UnitaryPairing& pairing, const SchmidtData& schmidt,
                    const MotherWavelet& mother, const KernelGrid& grid,
                    const DerivOrders& orders, const WaveletTable& table,
                    std::vector<FTerm>& terms_out);

FieldSet assemble_K(const FieldSet& p, const FieldSet& f);

// Full kernel for one operator of the family.
AssembledKernel assemble_kernel(int r, const UnitaryPairing& pairing, const SplitOperators& split,
                                const SchmidtData& schmidt, const FrameSet& frames,
                                const BasisPartition& part, const MotherWavelet& mother,
                                const KernelGrid& grid, int budget);

// ||d^i/ds^i k(s)||_{L2} for every grid s, evaluated in coefficient space
// (Parseval over the paired wavelets), no quadrature involved.
Eigen::VectorXd carleman_norm_grid(const AssembledKernel& kernel, int order = 0);

// Same quantity at an arbitrary point.
double carleman_norm_at(const AssembledKernel& kernel, const MotherWavelet& mother, double s,
                        int order = 0);

// B_r field from the S_r field: every sample multiplied by r.
FieldSet scale_field(const FieldSet& fields, double factor);

} // namespace carleman
