#pragma once

#include "carleman/operator_family.hpp"
#include "carleman/partition.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace carleman {

enum class FrameKind { E, EPerp };

struct FrameRef {
    FrameKind kind = FrameKind::E;
    int index = 0; // 1-based within its family
};

/**
 * Orthonormal frames of the truncated space: the selected {e_k}, the
 * Gram-Schmidt completion {e_k^perp} of the canonical basis against them,
 * and the interleaved basis {f_n} = e_1, e_1^perp, e_2, e_2^perp, ...
 * The x-subsequence of the e's is attached after the d-ledger exists.
 */
struct FrameSet {
    Eigen::MatrixXcd e;           // N x K_e columns
    Eigen::MatrixXcd e_perp;      // N x (N - K_e) columns
    Eigen::MatrixXcd f;           // N x N interleaved columns
    std::vector<FrameRef> f_order;
    std::vector<int> x_of;        // strictly increasing 1-based e-indices

    int dim() const { return static_cast<int>(f.cols()); }
    int e_count() const { return static_cast<int>(e.cols()); }
    int perp_count() const { return static_cast<int>(e_perp.cols()); }
    int x_count() const { return static_cast<int>(x_of.size()); }

    // 0-based column of f holding the requested frame vector.
    int f_position(FrameKind kind, int index) const;

    bool is_x(int e_index) const;

    void set_x(std::vector<int> x);

    // Joint Gram deviation from identity (orthonormality witness).
    double gram_deviation() const;
};

FrameSet complete_frame(const ESelection& sel, const WitnessSequence& witness);

/**
 * Per-operator splitting data, everything expressed in the f-frame:
 * S_r = B_r / r, Q_r = (1 - E) S_r, J_r = S_r^* E, Gamma_r = Lambda S_r,
 * Lambda = sum_k (1/k) <., e_k^perp> e_k^perp. Construction asserts the
 * reconstruction S_r = Q_r + J_r^* and the rank-one form of Q_r in the
 * original coordinates before rotating into the f-frame.
 */
struct SplitOperators {
    int R = 0;
    std::vector<Eigen::MatrixXcd> S, Q, J, Gamma; // index r-1
    Eigen::MatrixXcd Lambda;
    double lambda_hs_norm = 0.0; // sqrt(sum_k 1/k^2) over materialized k
    double max_reconstruction_error = 0.0;
    double max_rank_form_error = 0.0;

    const Eigen::MatrixXcd& s(int r) const { return S.at(static_cast<std::size_t>(r - 1)); }
    const Eigen::MatrixXcd& q(int r) const { return Q.at(static_cast<std::size_t>(r - 1)); }
    const Eigen::MatrixXcd& j(int r) const { return J.at(static_cast<std::size_t>(r - 1)); }
    const Eigen::MatrixXcd& gamma(int r) const { return Gamma.at(static_cast<std::size_t>(r - 1)); }
};

// Single-operator splitting in the coordinates of S itself; checks the
// reconstruction identity and the rank form, raising ReconstructionFailure
// past `tol`. Exposed separately so degenerate frames can be exercised.
struct SplitPair {
    Eigen::MatrixXcd Q, J;
    double reconstruction_error = 0.0;
    double rank_form_error = 0.0;
};
SplitPair split_operator(const Eigen::MatrixXcd& S, const FrameSet& frames, double tol = 1e-12);

Eigen::MatrixXcd gamma_operator(const Eigen::MatrixXcd& S, const FrameSet& frames);

SplitOperators split_family(const OperatorFamily& fam, const FrameSet& frames);

struct DEntry {
    int e_index = 0; // 1-based k
    double j_term = 0.0;     // sup_r ||J_r h||^(1/4)
    double jstar_term = 0.0; // sup_r ||J_r^* h||^(1/4)
    double gamma_term = 0.0; // sup_r ||Gamma_r h||
    double total() const { return j_term + jstar_term + gamma_term; }
};

struct DLedger {
    std::vector<DEntry> entries;

    double value(int k) const { return entries.at(static_cast<std::size_t>(k - 1)).total(); }
    int count() const { return static_cast<int>(entries.size()); }
    bool decay_confirmed() const; // final entry below the first
};

// d(h) over the materialized family; h in f-frame coordinates, unit norm.
double d_functional(const Eigen::VectorXcd& h, const SplitOperators& split,
                    DEntry* breakdown = nullptr);

DLedger d_ledger_over_e(const FrameSet& frames, const SplitOperators& split);

/**
 * Greedy x-subsequence: x_k is the first e past the previous pick with
 * d(e) * (max_{i<=i_max} G_{k,i} + 1) <= scale * 2^-k. The absolute 2^-k
 * target of the summability certificate is unreachable for families with a
 * genuine spectral part (d is bounded below by (1/N)^(1/4)-type quantities
 * at finite truncation), so `scale` is the smallest power of two that lets
 * at least min_count picks through; the certificate then reads
 * sum_k d(x_k)(G_{k,i}+1) <= scale. scale stays 1 whenever the unscaled
 * rule is feasible (e.g. the zero family).
 */
struct XSelection {
    std::vector<int> e_indices; // strictly increasing 1-based e-positions
    double scale = 1.0;
    std::vector<SummabilityLedger> per_order;
    bool trend_ok = true;

    int count() const { return static_cast<int>(e_indices.size()); }
};

XSelection select_x_sequence(const DLedger& ledger, const BasisPartition& part, int i_max,
                             int min_count = 4, double scale_cap = 1.0e12);

struct ChainLink {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    bool equality = false;
    bool holds = false;
};

struct SummabilityChains {
    std::vector<ChainLink> hs_chain;    // J-family Hilbert-Schmidt chain
    std::vector<ChainLink> gamma_chain; // Gamma-family chain

    bool all_hold() const;
};

SummabilityChains hs_summability_report(const OperatorFamily& fam, const FrameSet& frames,
                                        const SplitOperators& split, const ESelection& sel);

} // namespace carleman
