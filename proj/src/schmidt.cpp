#include "carleman/schmidt.hpp"

#include "carleman/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <random>

namespace carleman {

Eigen::MatrixXcd SchmidtData::reconstruct() const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, cols);
    for (int n = 0; n < rank; ++n)
        out += singulars(n) * left.col(n) * right.col(n).adjoint();
    return out;
}

SchmidtData schmidt_decompose(const Eigen::MatrixXcd& J, double drop_tol) {
    if (!J.allFinite())
        raise(ErrorCode::ConvergenceFailure, "decomposition input has non-finite entries");

    // Two-sided Jacobi keeps small singular values accurate on these dense
    // desk-scale blocks.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& all = svd.singularValues();

    SchmidtData sd;
    sd.rows = J.rows();
    sd.cols = J.cols();
    const double cutoff = all.size() > 0 ? drop_tol * all(0) : 0.0;
    int keep = 0;
    while (keep < all.size() && all(keep) > cutoff && all(keep) > 0.0) ++keep;
    sd.rank = keep;
    sd.singulars = all.head(keep);
    sd.left = svd.matrixU().leftCols(keep);
    sd.right = svd.matrixV().leftCols(keep);
    for (Eigen::Index n = keep; n < all.size(); ++n) {
        sd.dropped_mass += all(n);
        sd.dropped_top = std::max(sd.dropped_top, all(n));
    }
    return sd;
}

QuarterPowerA quarter_power(const SchmidtData& sd) {
    QuarterPowerA qp;
    qp.source = &sd;
    qp.A = Eigen::MatrixXcd::Zero(sd.rows, sd.cols);
    for (int n = 0; n < sd.rank; ++n)
        qp.A += std::pow(sd.singulars(n), 0.25) * sd.left.col(n) * sd.right.col(n).adjoint();
    return qp;
}

SchwarzReport schwarz_certify(const QuarterPowerA& a, const Eigen::MatrixXcd& J, int sample_count,
                              std::uint64_t seed) {
    if (a.A.rows() != J.rows() || a.A.cols() != J.cols())
        raise(ErrorCode::DimensionMismatch, "quarter-power block and J disagree on shape");

    SchwarzReport report;
    report.samples = sample_count;
    report.min_slack = std::numeric_limits<double>::infinity();

    std::mt19937_64 gen(seed);
    auto unit_double = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    const auto n = J.cols();

    for (int s = 0; s < sample_count; ++s) {
        Eigen::VectorXcd f(n);
        for (Eigen::Index i = 0; i < n; ++i)
            f(i) = std::complex<double>(2.0 * unit_double() - 1.0, 2.0 * unit_double() - 1.0);
        const double norm = f.norm();
        if (norm == 0.0) continue;
        f /= norm;

        const double slack_a = std::pow((J * f).norm(), 0.25) - (a.A * f).norm();
        const double slack_astar = std::pow((J.adjoint() * f).norm(), 0.25) - (a.A.adjoint() * f).norm();
        for (double slack : {slack_a, slack_astar}) {
            report.min_slack = std::min(report.min_slack, slack);
            if (slack < -1e-9) {
                ++report.violations;
                report.max_violation = std::max(report.max_violation, -slack);
            }
        }
    }
    if (report.violations > 0)
        raise(ErrorCode::CertificateViolation,
              "Schwarz inequality violated on " + std::to_string(report.violations) +
                  " samples, worst by " + std::to_string(report.max_violation));
    return report;
}

NuclearityReport nuclearity_report(const SchmidtData& sd) {
    NuclearityReport report;
    for (int n = 0; n < sd.rank; ++n) report.kept_sum += std::sqrt(sd.singulars(n));
    const auto dropped = std::min(sd.rows, sd.cols) - sd.rank;
    report.tail_bound = static_cast<double>(dropped) * std::sqrt(sd.dropped_top);
    report.tail_flagged = report.tail_bound > 0.01 * report.kept_sum && report.kept_sum > 0.0;
    return report;
}

} // namespace carleman
