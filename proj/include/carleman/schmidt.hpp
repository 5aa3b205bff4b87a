#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace carleman {

/**
 * Schmidt decomposition J = sum_n s_n <., p_n> q_n of a finite matrix:
 * singular values in non-increasing order with left vectors q_n and right
 * vectors p_n. Triples with s_n below drop_tol (relative to s_1) are
 * discarded; their mass is kept as tail metadata.
 */
struct SchmidtData {
    Eigen::VectorXd singulars;  // kept triples, non-increasing
    Eigen::MatrixXcd left;      // q_n columns
    Eigen::MatrixXcd right;     // p_n columns
    int rank = 0;
    double dropped_mass = 0.0;  // sum of discarded singular values
    double dropped_top = 0.0;   // largest discarded singular value
    Eigen::Index rows = 0, cols = 0;

    Eigen::MatrixXcd reconstruct() const;
};

SchmidtData schmidt_decompose(const Eigen::MatrixXcd& J, double drop_tol = 1e-12);

// A = sum_n s_n^(1/4) <., p_n> q_n; the singular values of A are exactly the
// fourth roots of the kept s_n.
struct QuarterPowerA {
    Eigen::MatrixXcd A;
    const SchmidtData* source = nullptr;
};

QuarterPowerA quarter_power(const SchmidtData& sd);

/**
 * Randomized certificate of ||A f|| <= ||J f||^(1/4) and
 * ||A* f|| <= ||J* f||^(1/4) on seeded unit vectors. Violations beyond
 * 1e-9 slack raise CertificateViolation.
 */
struct SchwarzReport {
    int samples = 0;
    int violations = 0;
    double min_slack = 0.0;     // min over samples of rhs - lhs (both sides)
    double max_violation = 0.0; // largest positive lhs - rhs seen
};

SchwarzReport schwarz_certify(const QuarterPowerA& a, const Eigen::MatrixXcd& J, int sample_count,
                              std::uint64_t seed);

// sum_n s_n^(1/2) over kept triples plus the discarded-tail bound; flagged
// when the tail bound exceeds 1% of the kept sum.
struct NuclearityReport {
    double kept_sum = 0.0;
    double tail_bound = 0.0;
    bool tail_flagged = false;

    double total() const { return kept_sum + tail_bound; }
};

NuclearityReport nuclearity_report(const SchmidtData& sd);

} // namespace carleman
