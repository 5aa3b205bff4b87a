#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "carleman/errors.hpp"
#include "carleman/operator_family.hpp"
#include "carleman/schmidt.hpp"
#include "test_helpers.hpp"

#include <Eigen/SVD>

#include <cmath>

using namespace carleman;

TEST_CASE("zero block has rank zero") {
    const SchmidtData sd = schmidt_decompose(Eigen::MatrixXcd::Zero(6, 6));
    CHECK(sd.rank == 0);
    CHECK(nuclearity_report(sd).total() == 0.0);
}

TEST_CASE("rank-one block keeps its tiny singular value") {
    const Eigen::VectorXcd p = test_helpers::random_unit_vector(6, 1);
    const Eigen::VectorXcd q = test_helpers::random_unit_vector(6, 2);
    const Eigen::MatrixXcd j = 1e-4 * q * p.adjoint();
    const SchmidtData sd = schmidt_decompose(j);
    REQUIRE(sd.rank == 1);
    CHECK(sd.singulars(0) == doctest::Approx(1e-4).epsilon(1e-10));

    // quarter power: (1e-4)^(1/4) = 0.1
    const QuarterPowerA qp = quarter_power(sd);
    CHECK((qp.A.cwiseAbs().maxCoeff()) == doctest::Approx(0.1 * (q * p.adjoint()).cwiseAbs().maxCoeff()));
    CHECK((qp.A - 0.1 * sd.left.col(0) * sd.right.col(0).adjoint()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("random blocks reconstruct to 1e-10") {
    for (std::uint64_t seed : {3, 4, 5}) {
        const Eigen::MatrixXcd j = test_helpers::random_matrix(8, 8, seed);
        const SchmidtData sd = schmidt_decompose(j);
        CHECK((sd.reconstruct() - j).cwiseAbs().maxCoeff() <= 1e-10);
        // kept triples satisfy J p_n = s_n q_n
        for (int n = 0; n < sd.rank; ++n)
            CHECK((j * sd.right.col(n) - sd.singulars(n) * sd.left.col(n)).norm() <= 1e-10);
        // left/right frames orthonormal
        CHECK((sd.left.adjoint() * sd.left - Eigen::MatrixXcd::Identity(sd.rank, sd.rank))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-10);
        CHECK((sd.right.adjoint() * sd.right - Eigen::MatrixXcd::Identity(sd.rank, sd.rank))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-10);
        for (int n = 1; n < sd.rank; ++n) CHECK(sd.singulars(n) <= sd.singulars(n - 1));
    }
}

TEST_CASE("quarter power singulars are exact fourth roots") {
    // unit singular values are fixed points
    Eigen::MatrixXcd two = Eigen::MatrixXcd::Zero(4, 4);
    two(0, 0) = 1.0;
    two(1, 1) = 1.0;
    const SchmidtData sd_two = schmidt_decompose(two);
    const QuarterPowerA qp_two = quarter_power(sd_two);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd_two(qp_two.A);
    CHECK(svd_two.singularValues()(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(svd_two.singularValues()(1) == doctest::Approx(1.0).epsilon(1e-12));

    // SVD-of-A oracle on a random block
    const Eigen::MatrixXcd j = test_helpers::random_matrix(8, 8, 17);
    const SchmidtData sd = schmidt_decompose(j);
    const QuarterPowerA qp = quarter_power(sd);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(qp.A);
    for (int n = 0; n < sd.rank; ++n) {
        const double fourth = std::pow(svd.singularValues()(n), 4.0);
        CHECK(std::abs(fourth - sd.singulars(n)) <= 1e-9);
    }

    // ||A f|| = ||(J^* J)^(1/8) f|| by construction, spot-checked
    const Eigen::VectorXcd f = test_helpers::random_unit_vector(8, 23);
    double via_triples = 0.0;
    for (int n = 0; n < sd.rank; ++n)
        via_triples += std::sqrt(sd.singulars(n)) * std::norm(sd.right.col(n).dot(f));
    CHECK((qp.A * f).norm() == doctest::Approx(std::sqrt(via_triples)).epsilon(1e-10));
}

TEST_CASE("Schwarz certificates") {
    const Eigen::MatrixXcd j = test_helpers::random_matrix(8, 8, 31);
    const SchmidtData sd = schmidt_decompose(j);
    const QuarterPowerA qp = quarter_power(sd);

    const SchwarzReport report = schwarz_certify(qp, j, 100, 99);
    CHECK(report.violations == 0);
    CHECK(report.min_slack >= -1e-9);

    // equality case at the top right-singular vector
    const Eigen::VectorXcd p1 = sd.right.col(0);
    CHECK((qp.A * p1).norm() == doctest::Approx(std::pow((j * p1).norm(), 0.25)).epsilon(1e-10));

    // zero block: both sides vanish
    const SchmidtData sd0 = schmidt_decompose(Eigen::MatrixXcd::Zero(8, 8));
    const QuarterPowerA qp0 = quarter_power(sd0);
    const SchwarzReport zero_report = schwarz_certify(qp0, Eigen::MatrixXcd::Zero(8, 8), 10, 7);
    CHECK(zero_report.violations == 0);
}

TEST_CASE("nuclearity sums") {
    // s = [1e-4, 1e-8] -> 0.01 + 1e-4
    Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(4, 4);
    j(0, 0) = 1e-4;
    j(1, 1) = 1e-8;
    const SchmidtData sd = schmidt_decompose(j);
    REQUIRE(sd.rank == 2);
    CHECK(nuclearity_report(sd).kept_sum == doctest::Approx(0.0101).epsilon(1e-10));

    // truncation stability on the diagonal preset: doubling N moves the sum
    // only through the selected tail
    auto j_of = [](int n) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 0; i < std::min(n, 12); ++i) m(i, i) = 1.0 / (i + 1.0);
        return m;
    };
    const double small = nuclearity_report(schmidt_decompose(j_of(24))).total();
    const double large = nuclearity_report(schmidt_decompose(j_of(48))).total();
    CHECK(std::abs(large - small) / small < 0.01);
}

TEST_CASE("non-finite input is rejected") {
    Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(3, 3);
    j(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(schmidt_decompose(j), Error);
}
