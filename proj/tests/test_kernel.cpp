#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "carleman/errors.hpp"
#include "carleman/pipeline.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace carleman;

namespace {

RunConfig small_config(const std::string& preset, int n, int r) {
    RunConfig cfg;
    cfg.family.preset = preset;
    cfg.family.N = n;
    cfg.family.R = r;
    cfg.family.seed = 1;
    cfg.rule_target = 0.93;
    cfg.orders = 2;
    cfg.grid_extent = 6.0;
    cfg.grid_step = 0.1;
    cfg.representation_samples = 3;
    cfg.schwarz_samples = 40;
    return cfg;
}

} // namespace

TEST_CASE("pairing honors all three constraint families") {
    const RunConfig cfg = small_config("diagonal-decay", 24, 2);
    const ConstructResult st = run_construct(cfg);
    const auto& part = *st.partition;

    // e_perp_k lands exactly on the scheduled h_{n(k)}
    for (int k = 1; k <= st.frames.perp_count(); ++k) {
        const int pos = st.frames.f_position(FrameKind::EPerp, k);
        const int expected = part.h_enum_indices()[part.n_of_k()[k - 1] - 1];
        CHECK(st.pairing.target_enum[pos] == expected);
    }
    // x_k lands on g_k
    for (int k = 1; k <= st.frames.x_count(); ++k) {
        const int pos = st.frames.f_position(FrameKind::E, st.frames.x_of[k - 1]);
        CHECK(st.pairing.target_enum[pos] == part.g_enum_indices()[k - 1]);
    }
    // bijectivity: the inverse map recovers every position
    std::vector<int> seen;
    for (int t : st.pairing.target_enum) seen.push_back(t);
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());

    // unitarity on coordinates: permuting a coefficient vector preserves norms
    const Eigen::VectorXcd v = test_helpers::random_unit_vector(24, 5);
    const Eigen::VectorXcd coeffs = st.frames.f.adjoint() * v;
    CHECK(std::abs(coeffs.norm() - 1.0) < 1e-12);
}

TEST_CASE("pairing fills thinned-schedule gaps with unselected e's") {
    const RunConfig cfg = small_config("zero", 8, 1);
    const ConstructResult st = run_construct(cfg);
    const auto& base = *st.partition;
    REQUIRE(st.frames.perp_count() == 6);
    REQUIRE(base.h_count() >= 8);

    // hand-thinned schedule: gaps at positions 5 and 7 for the two e's
    BasisPartition thinned(base.enumeration(), base.mother(), base.geometric_target(),
                           base.h_enum_indices(), base.g_enum_indices(), {1, 2, 3, 4, 6, 8});
    FrameSet frames = st.frames;
    frames.set_x({}); // both e's stay unselected
    const UnitaryPairing pairing = build_pairing(frames, thinned);

    for (int k = 1; k <= 6; ++k) {
        const int pos = frames.f_position(FrameKind::EPerp, k);
        CHECK(pairing.target_enum[pos] ==
              thinned.h_enum_indices()[thinned.n_of_k()[k - 1] - 1]);
    }
    CHECK(pairing.target_enum[frames.f_position(FrameKind::E, 1)] ==
          thinned.h_enum_indices()[4]); // slot 5
    CHECK(pairing.target_enum[frames.f_position(FrameKind::E, 2)] ==
          thinned.h_enum_indices()[6]); // slot 7

    // a schedule needing more fillers than e's exist is inconsistent
    BasisPartition hungry(base.enumeration(), base.mother(), base.geometric_target(),
                          base.h_enum_indices(), base.g_enum_indices(), {1, 2, 3, 4, 6, 10});
    CHECK_THROWS_AS(build_pairing(frames, hungry), Error);
}

TEST_CASE("x trimming leaves enough slack for the schedule gaps") {
    const RunConfig cfg = small_config("diagonal-decay", 24, 2);
    const ConstructResult st = run_construct(cfg);
    const int perp = st.frames.perp_count();
    const int n_last = st.partition->n_of_k()[perp - 1];
    CHECK(n_last - perp <= st.frames.e_count() - st.frames.x_count());
    CHECK(st.x_count_before_trim >= st.frames.x_count());
}

TEST_CASE("conjugated image: dual forms, Parseval and sup estimates") {
    const RunConfig cfg = small_config("random-compact", 16, 2);
    const ConstructResult st = run_construct(cfg);
    for (int k = 1; k <= 3; ++k) {
        const CoefficientVector cv = conjugated_h_image(k, 1, st.pairing, st.split, st.frames,
                                                        *st.mother, cfg.orders);
        CHECK(cv.cross_check_error <= 1e-10);

        // Parseval: coefficient norm equals ||S^* e_perp_k||
        const int pos = st.frames.f_position(FrameKind::EPerp, k);
        const double direct = (st.split.s(1).adjoint() * Eigen::VectorXcd::Unit(16, pos)).norm();
        CHECK(cv.coeffs.norm() == doctest::Approx(direct).epsilon(1e-12));

        // sampled values of the represented function stay under the estimate
        for (int order = 0; order <= 2; ++order) {
            double sampled = 0.0;
            for (double t = -6.0; t <= 6.0; t += 0.37) {
                std::complex<double> value = 0.0;
                for (int m = 0; m < st.pairing.size(); ++m)
                    value += cv.coeffs(m) * st.mother->eval_child(st.pairing.child_of(m), t, order);
                sampled = std::max(sampled, std::abs(value));
            }
            CHECK(sampled <= cv.sup_estimates[order] * (1.0 + 1e-9));
        }
    }
    CHECK_THROWS_AS(
        conjugated_h_image(99, 1, st.pairing, st.split, st.frames, *st.mother, cfg.orders), Error);
}

TEST_CASE("zero family assembles the zero kernel") {
    const RunConfig cfg = small_config("zero", 12, 2);
    const ConstructResult st = run_construct(cfg);
    for (const auto& kernel : st.kernels) {
        for (const auto& field : kernel.K.data) CHECK(field.cwiseAbs().maxCoeff() == 0.0);
        CHECK(kernel.f_terms.empty()); // J = 0 has rank zero
        // K = P + F exactly
        for (std::size_t idx = 0; idx < kernel.K.data.size(); ++idx)
            CHECK((kernel.K.data[idx] - kernel.P.data[idx] - kernel.F.data[idx])
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
    }
}

TEST_CASE("single-term P matches the direct product of its factors") {
    // one perp vector and no J at all: B has a single nonzero row hitting
    // only the unselected coordinate, so F vanishes and P is one term
    const auto dir = std::filesystem::temp_directory_path() / "carleman_single_term";
    std::filesystem::create_directories(dir);
    {
        std::ofstream m(dir / "m.txt");
        m << "4 1\n";
        m << "0 0 0.3 0 0.2 0 0.1 0\n";
        m << "0 0 0 0 0 0 0 0\n";
        m << "0 0 0 0 0 0 0 0\n";
        m << "0 0 0 0 0 0 0 0\n";
    }
    RunConfig cfg = small_config("", 0, 0);
    cfg.family.matrix_file = (dir / "m.txt").string();
    cfg.rule_target = 0.5;
    cfg.e_cap_fraction = 0.8;
    cfg.grid_step = 0.01;
    const ConstructResult st = run_construct(cfg);
    REQUIRE(st.frames.perp_count() == 1);
    const AssembledKernel& kernel = st.kernels[0];
    REQUIRE(kernel.p_terms.size() == 1);
    REQUIRE(kernel.f_terms.empty());

    const PTerm& term = kernel.p_terms[0];
    const int count = kernel.grid.count();
    for (int p = 0; p < count; p += 37) {
        for (int q = 0; q < count; q += 41) {
            const std::complex<double> s_factor =
                st.mother->eval_child(term.s_child, kernel.grid.points[p]);
            std::complex<double> t_factor = 0.0;
            for (int m = 0; m < st.pairing.size(); ++m)
                t_factor += term.image.coeffs(m) *
                            st.mother->eval_child(st.pairing.child_of(m), kernel.grid.points[q]);
            CHECK(std::abs(kernel.P.field(0, 0)(p, q) - s_factor * std::conj(t_factor)) < 1e-12);
        }
    }

    // finite-difference oracle: d/ds of the (0,0) field against the (1,0) field
    const double h = kernel.grid.step;
    double worst = 0.0;
    const double scale = kernel.P.field(1, 0).cwiseAbs().maxCoeff();
    for (int p = 1; p + 1 < count; ++p)
        for (int q = 0; q < count; q += 19) {
            const std::complex<double> fd =
                (kernel.P.field(0, 0)(p + 1, q) - kernel.P.field(0, 0)(p - 1, q)) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - kernel.P.field(1, 0)(p, q)) / scale);
        }
    CHECK(worst < 1e-4);

    // one-term Carleman norm: ||k(s)|| = |h(s)| * ||T^* h||
    const Eigen::VectorXd profile = carleman_norm_grid(kernel, 0);
    for (int p = 0; p < count; p += 53) {
        const double expected =
            std::abs(st.mother->eval_child(term.s_child, kernel.grid.points[p])) *
            term.image.coeffs.norm();
        CHECK(profile(p) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("rank-one F term is a weighted outer product") {
    const RunConfig cfg = small_config("diagonal-decay", 16, 1);
    const ConstructResult st = run_construct(cfg);

    SchmidtData rank_one;
    rank_one.rows = rank_one.cols = 16;
    rank_one.rank = 1;
    rank_one.singulars = Eigen::VectorXd::Constant(1, 1e-4);
    rank_one.left = Eigen::MatrixXcd::Zero(16, 1);
    rank_one.right = Eigen::MatrixXcd::Zero(16, 1);
    rank_one.left(3, 0) = 1.0;
    rank_one.right(5, 0) = 1.0;

    const KernelGrid grid = KernelGrid::make(4.0, 0.1);
    const DerivOrders orders = DerivOrders::up_to(1);
    const WaveletTable table = build_wavelet_table(*st.mother, st.pairing, grid, 1);
    std::vector<FTerm> terms;
    const FieldSet f = assemble_F(1, st.pairing, rank_one, *st.mother, grid, orders, table, terms);
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].t_coeffs.norm() == doctest::Approx(std::pow(1e-4, 0.25)).epsilon(1e-12));
    CHECK(terms[0].s_coeffs.norm() == doctest::Approx(std::pow(1e-4, 0.25)).epsilon(1e-12));

    const ChildIndex s_child = st.pairing.child_of(3);
    const ChildIndex t_child = st.pairing.child_of(5);
    for (int p = 0; p < grid.count(); p += 7) {
        for (int q = 0; q < grid.count(); q += 11) {
            // sigma^(1/2) (U A^* q)(s) conj((U A p)(t)) with both factors rank one
            const std::complex<double> expected =
                std::sqrt(1e-4) * 0.1 * st.mother->eval_child(s_child, grid.points[p]) *
                std::conj(0.1 * st.mother->eval_child(t_child, grid.points[q]));
            CHECK(std::abs(f.field(0, 0)(p, q) - expected) < 1e-12);
        }
    }
}

TEST_CASE("F coefficient norms follow the quarter powers") {
    const RunConfig cfg = small_config("weighted-shift", 20, 2);
    const ConstructResult st = run_construct(cfg);
    const AssembledKernel& kernel = st.kernels[0];
    for (const auto& term : kernel.f_terms) {
        CHECK(term.t_coeffs.norm() ==
              doctest::Approx(std::pow(term.s_n, 0.25)).epsilon(1e-10));
        CHECK(term.s_coeffs.norm() ==
              doctest::Approx(std::pow(term.s_n, 0.25)).epsilon(1e-10));
    }
}

TEST_CASE("kernel sum and scaling") {
    const RunConfig cfg = small_config("diagonal-decay", 16, 2);
    const ConstructResult st = run_construct(cfg);
    const AssembledKernel& kernel = st.kernels[1]; // r = 2
    for (std::size_t idx = 0; idx < kernel.K.data.size(); ++idx) {
        // pointwise sum, bitwise: the same addition reproduces every sample
        for (int p = 0; p < kernel.grid.count(); p += 7)
            for (int q = 0; q < kernel.grid.count(); q += 5)
                CHECK(kernel.K.data[idx](p, q) ==
                      kernel.P.data[idx](p, q) + kernel.F.data[idx](p, q));
    }
    // B_r field: every sample is bitwise r * sample
    const FieldSet scaled = scale_field(kernel.K, 2.0);
    for (std::size_t idx = 0; idx < scaled.data.size(); ++idx)
        for (int p = 0; p < kernel.grid.count(); p += 13)
            for (int q = 0; q < kernel.grid.count(); q += 17) {
                const std::complex<double> expected = 2.0 * kernel.K.data[idx](p, q);
                CHECK(scaled.data[idx](p, q) == expected);
            }

    // grids must agree when adding parts
    const KernelGrid other = KernelGrid::make(5.0, 0.1);
    const FieldSet wrong = FieldSet::zeros(other, kernel.orders);
    CHECK_THROWS_AS(assemble_K(kernel.P, wrong), Error);
}

TEST_CASE("Carleman norms agree with a t-quadrature oracle") {
    RunConfig cfg = small_config("diagonal-decay", 4, 1);
    cfg.e_cap_fraction = 0.8;
    cfg.grid_extent = 20.0; // wide window so the t-profile mass is inside
    cfg.grid_step = 0.05;
    const ConstructResult st = run_construct(cfg);
    const AssembledKernel& kernel = st.kernels[0];
    const Eigen::VectorXd profile = carleman_norm_grid(kernel, 0);
    const int count = kernel.grid.count();
    Eigen::VectorXd trap = Eigen::VectorXd::Constant(count, kernel.grid.step);
    trap(0) *= 0.5;
    trap(count - 1) *= 0.5;
    int checked = 0;
    for (int p = count / 6; p < count && checked < 5; p += count / 6, ++checked) {
        double quad = 0.0;
        for (int q = 0; q < count; ++q) quad += std::norm(kernel.K.field(0, 0)(p, q)) * trap(q);
        if (profile(p) < 1e-9) continue;
        CHECK(std::sqrt(quad) == doctest::Approx(profile(p)).epsilon(1e-3));
    }
    CHECK(checked >= 4);

    // arbitrary-point evaluation matches the grid route on grid points
    for (int p : {10, 200, 400})
        CHECK(carleman_norm_at(kernel, *st.mother, kernel.grid.points[p], 0) ==
              doctest::Approx(profile(p)).epsilon(1e-10));
}

TEST_CASE("majorant ledger dominates the sampled fields") {
    const RunConfig cfg = small_config("diagonal-decay", 16, 1);
    const ConstructResult st = run_construct(cfg);
    const AssembledKernel& kernel = st.kernels[0];
    for (int idx = 0; idx < kernel.orders.count(); ++idx) {
        const double observed = kernel.P.data[idx].cwiseAbs().maxCoeff();
        CHECK(observed <= kernel.p_majorant[idx] * (1.0 + 1e-9));
    }
}
