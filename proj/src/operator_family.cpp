#include "carleman/operator_family.hpp"

#include "carleman/errors.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace carleman {

namespace {

double next_unit_double(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53; // uniform [0, 1)
}

std::complex<double> next_unit_disc(std::mt19937_64& gen) {
    // rejection from the square keeps the draw platform-independent
    for (;;) {
        const double re = 2.0 * next_unit_double(gen) - 1.0;
        const double im = 2.0 * next_unit_double(gen) - 1.0;
        if (re * re + im * im <= 1.0) return {re, im};
    }
}

} // namespace

double operator_norm_estimate(const Eigen::MatrixXcd& m, int max_iters, double tol) {
    if (m.rows() != m.cols()) raise(ErrorCode::NonSquareMatrix, "norm estimate needs square input");
    const auto n = m.rows();
    if (n == 0) return 0.0;
    Eigen::VectorXcd v = Eigen::VectorXcd::Constant(n, std::complex<double>(1.0, 0.0));
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXcd w = m.adjoint() * (m * v);
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        w /= norm;
        const double next = norm; // Rayleigh estimate of ||B^H B||
        if (std::abs(next - lambda) <= tol * std::max(1.0, next)) {
            lambda = next;
            break;
        }
        lambda = next;
        v = w;
    }
    return std::sqrt(lambda);
}

OperatorFamily family_from_matrices(std::vector<Eigen::MatrixXcd> matrices, std::string source) {
    if (matrices.empty()) raise(ErrorCode::MalformedConfig, "family needs at least one operator");
    OperatorFamily fam;
    fam.R = static_cast<int>(matrices.size());
    fam.N = static_cast<int>(matrices.front().rows());
    fam.source = std::move(source);
    for (const auto& m : matrices) {
        if (m.rows() != m.cols()) raise(ErrorCode::NonSquareMatrix, "operator block is not square");
        if (m.rows() != fam.N)
            raise(ErrorCode::DimensionMismatch, "operator blocks disagree on dimension");
        if (!m.allFinite()) raise(ErrorCode::MalformedConfig, "operator entries must be finite");
    }
    fam.matrices = std::move(matrices);
    for (auto& m : fam.matrices) {
        const double norm = operator_norm_estimate(m);
        fam.pre_norms.push_back(norm);
        if (norm > 1.0) m /= norm;
        fam.norms.push_back(operator_norm_estimate(m));
    }
    return fam;
}

OperatorFamily preset_family(const std::string& name, int N, int R, std::uint64_t seed) {
    if (N < 2) raise(ErrorCode::MalformedConfig, "preset families need N >= 2");
    if (R < 1) raise(ErrorCode::MalformedConfig, "preset families need R >= 1");

    std::vector<Eigen::MatrixXcd> mats;
    mats.reserve(static_cast<std::size_t>(R));
    if (name == "zero") {
        for (int r = 0; r < R; ++r) mats.push_back(Eigen::MatrixXcd::Zero(N, N));
    } else if (name == "diagonal-decay") {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N, N);
        for (int i = 0; i < N; ++i) m(i, i) = 1.0 / (i + 1.0);
        for (int r = 0; r < R; ++r) mats.push_back(m);
    } else if (name == "weighted-shift") {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N, N);
        for (int i = 0; i + 1 < N; ++i) m(i + 1, i) = 1.0 / (i + 2.0); // B v_m = v_{m+1}/(m+1)
        for (int r = 0; r < R; ++r) mats.push_back(m);
    } else if (name == "random-compact") {
        for (int r = 1; r <= R; ++r) {
            std::mt19937_64 gen(seed * 1000003ULL + static_cast<std::uint64_t>(r));
            Eigen::MatrixXcd m(N, N);
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    m(i, j) = next_unit_disc(gen) / ((i + 1.0) * (j + 1.0));
            mats.push_back(std::move(m));
        }
    } else {
        raise(ErrorCode::UnknownPreset, "no preset named '" + name + "'");
    }
    return family_from_matrices(std::move(mats), "preset:" + name);
}

OperatorFamily load_family_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::MalformedConfig, "cannot open matrix file '" + path + "'");
    int N = 0, R = 0;
    if (!(in >> N >> R) || N < 1 || R < 1)
        raise(ErrorCode::MalformedConfig, "matrix file '" + path + "' has a bad header");
    std::vector<Eigen::MatrixXcd> mats;
    mats.reserve(static_cast<std::size_t>(R));
    for (int r = 0; r < R; ++r) {
        Eigen::MatrixXcd m(N, N);
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                double re = 0.0, im = 0.0;
                if (!(in >> re >> im))
                    raise(ErrorCode::MalformedConfig,
                          "matrix file '" + path + "' ends inside block " + std::to_string(r + 1));
                m(i, j) = {re, im};
            }
        }
        mats.push_back(std::move(m));
    }
    return family_from_matrices(std::move(mats), "file:" + path);
}

OperatorFamily load_family(const FamilySpec& spec) {
    if (!spec.matrix_file.empty()) {
        OperatorFamily fam = load_family_file(spec.matrix_file);
        if (spec.N > 0 && spec.N != fam.N)
            raise(ErrorCode::DimensionMismatch, "config N disagrees with matrix file");
        if (spec.R > 0 && spec.R != fam.R)
            raise(ErrorCode::DimensionMismatch, "config R disagrees with matrix file");
        return fam;
    }
    if (spec.preset.empty())
        raise(ErrorCode::MalformedConfig, "family config names neither a preset nor a matrix file");
    return preset_family(spec.preset, spec.N, spec.R, spec.seed);
}

WitnessSequence WitnessSequence::canonical(int n) {
    WitnessSequence w;
    w.vectors = Eigen::MatrixXcd::Identity(n, n);
    return w;
}

void WitnessSequence::validate() const {
    const Eigen::MatrixXcd gram = vectors.adjoint() * vectors;
    const double dev = (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols()))
                           .cwiseAbs()
                           .maxCoeff();
    if (dev > 1e-10)
        raise(ErrorCode::ConditionFails,
              "witness sequence is not orthonormal (Gram deviation " + std::to_string(dev) + ")");
}

DecayProfile decay_profile(const OperatorFamily& fam, const WitnessSequence& witness) {
    if (witness.vectors.rows() != fam.N)
        raise(ErrorCode::DimensionMismatch, "witness dimension disagrees with family");
    DecayProfile profile;
    const int count = static_cast<int>(witness.vectors.cols());
    profile.values.resize(static_cast<std::size_t>(count), 0.0);
    for (int r = 1; r <= fam.R; ++r) {
        const Eigen::MatrixXcd adj = fam.matrix(r).adjoint();
        for (int n = 0; n < count; ++n) {
            const double v = (adj * witness.vectors.col(n)).norm();
            profile.values[static_cast<std::size_t>(n)] =
                std::max(profile.values[static_cast<std::size_t>(n)], v);
        }
    }
    profile.envelope.resize(profile.values.size());
    double running = 0.0;
    for (int n = count - 1; n >= 0; --n) {
        running = std::max(running, profile.values[static_cast<std::size_t>(n)]);
        profile.envelope[static_cast<std::size_t>(n)] = running;
    }
    return profile;
}

ESelection select_e_sequence(const DecayProfile& profile, double rule_target, int cap) {
    if (!(rule_target > 0.0 && rule_target < 1.0))
        raise(ErrorCode::MalformedConfig, "rule target must lie in (0, 1)");
    if (cap < 1) raise(ErrorCode::MalformedConfig, "selection cap must be >= 1");

    ESelection sel;
    sel.rule_target = rule_target;
    std::vector<bool> used(profile.values.size(), false);
    double floor = 1.0;
    for (int k = 1; k <= cap; ++k) {
        floor *= rule_target;
        int pick = -1;
        for (std::size_t n = 0; n < profile.values.size(); ++n) {
            if (used[n]) continue;
            if (std::pow(profile.values[n], 0.25) <= floor) {
                pick = static_cast<int>(n);
                break;
            }
        }
        if (pick < 0) {
            std::ostringstream msg;
            msg << "decay too slow within truncation: no witness vector has "
                << "sup_r ||B_r^* v||^(1/4) <= " << floor << " at step k = " << k;
            raise(ErrorCode::ConditionFails, msg.str());
        }
        used[static_cast<std::size_t>(pick)] = true;
        sel.witness_indices.push_back(pick);
        sel.decay_values.push_back(profile.values[static_cast<std::size_t>(pick)]);
        sel.M += std::pow(profile.values[static_cast<std::size_t>(pick)], 0.25);
        sel.M_ceiling += floor;
    }
    return sel;
}

} // namespace carleman
