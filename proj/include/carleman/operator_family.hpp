#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace carleman {

/**
 * Truncated family {B_r}: R dense N x N complex matrices in the canonical
 * coordinate frame, normalized so every estimated operator norm is <= 1
 * (a matrix is rescaled by its norm only when the estimate exceeds 1).
 */
struct OperatorFamily {
    int N = 0;
    int R = 0;
    std::vector<Eigen::MatrixXcd> matrices; // normalized B_r, r = 1..R
    std::vector<double> pre_norms;          // estimates before normalization
    std::vector<double> norms;              // estimates after
    std::string source;

    const Eigen::MatrixXcd& matrix(int r) const { return matrices.at(static_cast<std::size_t>(r - 1)); }
    // S_r = B_r / r.
    Eigen::MatrixXcd scaled(int r) const { return matrix(r) / static_cast<double>(r); }
};

struct FamilySpec {
    std::string preset;      // one of: zero, diagonal-decay, weighted-shift, random-compact
    std::string matrix_file; // alternative to preset
    int N = 0;
    int R = 0;
    std::uint64_t seed = 1;
};

// Operator-norm estimate by power iteration on B^H B (fixed deterministic
// start vector, 50 iterations, tolerance 1e-10).
double operator_norm_estimate(const Eigen::MatrixXcd& m, int max_iters = 50, double tol = 1e-10);

OperatorFamily preset_family(const std::string& name, int N, int R, std::uint64_t seed);

// Normalizes an explicit matrix list into a family.
OperatorFamily family_from_matrices(std::vector<Eigen::MatrixXcd> matrices, std::string source);

// Dense complex text format: header "N R", then R row-major blocks of
// N rows x N "re im" pairs.
OperatorFamily load_family_file(const std::string& path);

OperatorFamily load_family(const FamilySpec& spec);

struct WitnessSequence {
    Eigen::MatrixXcd vectors; // columns v_n

    static WitnessSequence canonical(int n);
    // Gram-matrix orthonormality to 1e-10; DimensionMismatch/ConditionFails otherwise.
    void validate() const;
};

struct DecayProfile {
    std::vector<double> values;   // n -> sup_r ||B_r^* v_n||, exact on the truncation
    std::vector<double> envelope; // monotone non-increasing tail envelope
};

DecayProfile decay_profile(const OperatorFamily& fam, const WitnessSequence& witness);

/**
 * Greedy subsequence {e_k} of the witness vectors with the geometric decay
 * certificate sup_r ||B_r^* e_k||^(1/4) <= rule_target^k, summing to the
 * constant M. The r-weighted variant sup_r ||r S_r^* e_k|| coincides with
 * sup_r ||B_r^* e_k|| by construction (S_r = B_r / r).
 */
struct ESelection {
    std::vector<int> witness_indices; // 0-based witness positions of e_1, e_2, ...
    std::vector<double> decay_values; // sup_r ||B_r^* e_k||
    double M = 0.0;                   // actual partial sum of fourth roots
    double M_ceiling = 0.0;           // geometric ceiling sum rule_target^k
    double rule_target = 0.0;

    int count() const { return static_cast<int>(witness_indices.size()); }
};

// cap: number of e's to select (defaults to N/4 at call sites); raises
// ConditionFails with the offending floor when the profile decays too
// slowly inside the truncation to reach it.
ESelection select_e_sequence(const DecayProfile& profile, double rule_target, int cap);

} // namespace carleman
