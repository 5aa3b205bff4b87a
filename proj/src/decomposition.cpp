#include "carleman/decomposition.hpp"

#include "carleman/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace carleman {

namespace {

bool link_holds(const ChainLink& link) {
    if (link.equality) return std::abs(link.lhs - link.rhs) <= 1e-10 * std::max(1.0, std::abs(link.rhs));
    return link.lhs <= link.rhs + 1e-9 * std::max(1.0, std::abs(link.rhs));
}

ChainLink make_link(std::string label, double lhs, double rhs, bool equality) {
    ChainLink link{std::move(label), lhs, rhs, equality, false};
    link.holds = link_holds(link);
    return link;
}

} // namespace

int FrameSet::f_position(FrameKind kind, int index) const {
    for (std::size_t p = 0; p < f_order.size(); ++p)
        if (f_order[p].kind == kind && f_order[p].index == index) return static_cast<int>(p);
    raise(ErrorCode::DimensionMismatch, "frame vector not present in f-order");
}

bool FrameSet::is_x(int e_index) const {
    return std::find(x_of.begin(), x_of.end(), e_index) != x_of.end();
}

void FrameSet::set_x(std::vector<int> x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 1 || x[i] > e_count())
            raise(ErrorCode::DimensionMismatch, "x selection points outside the e-sequence");
        if (i > 0 && x[i] <= x[i - 1])
            raise(ErrorCode::DimensionMismatch, "x selection must be strictly increasing");
    }
    x_of = std::move(x);
}

double FrameSet::gram_deviation() const {
    const Eigen::MatrixXcd gram = f.adjoint() * f;
    return (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

FrameSet complete_frame(const ESelection& sel, const WitnessSequence& witness) {
    const int n = static_cast<int>(witness.vectors.rows());
    const int ke = sel.count();
    if (ke >= n)
        raise(ErrorCode::RankDeficiency,
              "selection uses every coordinate; nothing remains for the perp frame");

    FrameSet frames;
    frames.e.resize(n, ke);
    for (int k = 0; k < ke; ++k)
        frames.e.col(k) = witness.vectors.col(sel.witness_indices[static_cast<std::size_t>(k)]);

    // Modified Gram-Schmidt of the canonical basis against the e's, with one
    // re-orthogonalization pass; near-dependent candidates are dropped.
    const double drop_tol = 1e-8;
    std::vector<Eigen::VectorXcd> accepted;
    for (int c = 0; c < n && static_cast<int>(accepted.size()) < n - ke; ++c) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
        v(c) = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < ke; ++k) v -= frames.e.col(k) * (frames.e.col(k).dot(v));
            for (const auto& w : accepted) v -= w * (w.dot(v));
        }
        const double norm = v.norm();
        if (norm > drop_tol) accepted.push_back(v / norm);
    }
    if (static_cast<int>(accepted.size()) < n - ke)
        raise(ErrorCode::RankDeficiency,
              "completion produced " + std::to_string(accepted.size()) + " vectors, need " +
                  std::to_string(n - ke));

    frames.e_perp.resize(n, n - ke);
    for (int k = 0; k < n - ke; ++k) frames.e_perp.col(k) = accepted[static_cast<std::size_t>(k)];

    frames.f.resize(n, n);
    int col = 0, ie = 0, ip = 0;
    while (col < n) {
        if (ie < ke) {
            frames.f.col(col) = frames.e.col(ie);
            frames.f_order.push_back({FrameKind::E, ie + 1});
            ++ie, ++col;
        }
        if (col < n && ip < n - ke) {
            frames.f.col(col) = frames.e_perp.col(ip);
            frames.f_order.push_back({FrameKind::EPerp, ip + 1});
            ++ip, ++col;
        }
        if (ie >= ke && ip >= n - ke) break;
    }

    const double dev = frames.gram_deviation();
    if (dev > 1e-10)
        raise(ErrorCode::RankDeficiency,
              "joint frame drifted from orthonormality (deviation " + std::to_string(dev) + ")");
    return frames;
}

SplitPair split_operator(const Eigen::MatrixXcd& S, const FrameSet& frames, double tol) {
    const auto n = S.rows();
    if (S.cols() != n || frames.e.rows() != n)
        raise(ErrorCode::DimensionMismatch, "operator and frames disagree on dimension");

    const Eigen::MatrixXcd es = (frames.e * frames.e.adjoint()) * S; // E S
    SplitPair out;
    out.Q = S - es;
    out.J = es.adjoint(); // (E S)^H = S^* E

    out.reconstruction_error = (S - (out.Q + out.J.adjoint())).cwiseAbs().maxCoeff();
    const Eigen::MatrixXcd rank_form = (frames.e_perp * frames.e_perp.adjoint()) * S;
    out.rank_form_error = (out.Q - rank_form).cwiseAbs().maxCoeff();
    if (out.reconstruction_error > tol || out.rank_form_error > tol)
        raise(ErrorCode::ReconstructionFailure,
              "splitting identity violated: reconstruction " +
                  std::to_string(out.reconstruction_error) + ", rank form " +
                  std::to_string(out.rank_form_error));
    return out;
}

Eigen::MatrixXcd gamma_operator(const Eigen::MatrixXcd& S, const FrameSet& frames) {
    const auto n = S.rows();
    Eigen::MatrixXcd lambda = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < frames.perp_count(); ++k)
        lambda += (1.0 / (k + 1.0)) * frames.e_perp.col(k) * frames.e_perp.col(k).adjoint();
    return lambda * S;
}

SplitOperators split_family(const OperatorFamily& fam, const FrameSet& frames) {
    SplitOperators split;
    split.R = fam.R;
    const int n = fam.N;

    Eigen::MatrixXcd lambda = Eigen::MatrixXcd::Zero(n, n);
    double hs2 = 0.0;
    for (int k = 0; k < frames.perp_count(); ++k) {
        lambda += (1.0 / (k + 1.0)) * frames.e_perp.col(k) * frames.e_perp.col(k).adjoint();
        hs2 += 1.0 / ((k + 1.0) * (k + 1.0));
    }
    split.lambda_hs_norm = std::sqrt(hs2);

    const Eigen::MatrixXcd& f = frames.f;
    split.Lambda = f.adjoint() * lambda * f;

    for (int r = 1; r <= fam.R; ++r) {
        const Eigen::MatrixXcd s = fam.scaled(r);
        SplitPair pair = split_operator(s, frames);
        split.max_reconstruction_error =
            std::max(split.max_reconstruction_error, pair.reconstruction_error);
        split.max_rank_form_error = std::max(split.max_rank_form_error, pair.rank_form_error);
        const Eigen::MatrixXcd gamma = lambda * s;
        split.S.push_back(f.adjoint() * s * f);
        split.Q.push_back(f.adjoint() * pair.Q * f);
        split.J.push_back(f.adjoint() * pair.J * f);
        split.Gamma.push_back(f.adjoint() * gamma * f);
    }
    return split;
}

double d_functional(const Eigen::VectorXcd& h, const SplitOperators& split, DEntry* breakdown) {
    if (std::abs(h.norm() - 1.0) > 1e-10)
        raise(ErrorCode::NotUnitVector, "d(h) requires a unit vector");
    DEntry entry;
    double j_sup = 0.0, jstar_sup = 0.0, gamma_sup = 0.0;
    for (int r = 1; r <= split.R; ++r) {
        j_sup = std::max(j_sup, (split.j(r) * h).norm());
        jstar_sup = std::max(jstar_sup, (split.j(r).adjoint() * h).norm());
        gamma_sup = std::max(gamma_sup, (split.gamma(r) * h).norm());
    }
    entry.j_term = std::pow(j_sup, 0.25);
    entry.jstar_term = std::pow(jstar_sup, 0.25);
    entry.gamma_term = gamma_sup;
    if (breakdown) *breakdown = entry;
    return entry.total();
}

DLedger d_ledger_over_e(const FrameSet& frames, const SplitOperators& split) {
    DLedger ledger;
    for (int k = 1; k <= frames.e_count(); ++k) {
        Eigen::VectorXcd h = Eigen::VectorXcd::Zero(frames.dim());
        h(frames.f_position(FrameKind::E, k)) = 1.0;
        DEntry entry;
        d_functional(h, split, &entry);
        entry.e_index = k;
        ledger.entries.push_back(entry);
    }
    return ledger;
}

bool DLedger::decay_confirmed() const {
    if (entries.size() < 2) return true;
    return entries.back().total() < entries.front().total();
}

XSelection select_x_sequence(const DLedger& ledger, const BasisPartition& part, int i_max,
                             int min_count, double scale_cap) {
    XSelection sel;
    const int ke = ledger.count();
    const int want = std::min(min_count, ke);

    // sup over orders i <= i_max of the k-th g's C(R)-norm, cached lazily.
    std::vector<double> g_sup;
    auto max_g = [&](int k) {
        while (static_cast<int>(g_sup.size()) < k) {
            const int kk = static_cast<int>(g_sup.size()) + 1;
            double top = 0.0;
            for (int i = 0; i <= i_max; ++i) top = std::max(top, part.sup_norm_g(kk, i).value);
            g_sup.push_back(top);
        }
        return g_sup[static_cast<std::size_t>(k - 1)];
    };

    auto run = [&](double scale) {
        std::vector<int> picks;
        int cursor = 1;
        for (int k = 1; cursor <= ke && k <= ke; ++k) {
            if (k > part.g_count()) break;
            const double limit = scale * std::exp2(-k) / (max_g(k) + 1.0);
            int found = 0;
            for (int m = cursor; m <= ke; ++m) {
                if (ledger.value(m) <= limit) {
                    found = m;
                    break;
                }
            }
            if (!found) break;
            picks.push_back(found);
            cursor = found + 1;
        }
        return picks;
    };

    double scale = 1.0;
    std::vector<int> picks = run(scale);
    while (static_cast<int>(picks.size()) < want && scale < scale_cap) {
        scale *= 2.0;
        picks = run(scale);
    }
    if (picks.empty() && want > 0)
        raise(ErrorCode::ScheduleExhausted,
              "no e qualifies for the x-schedule even at scale " + std::to_string(scale) +
                  "; binding constraint: min d = " +
                  std::to_string(ledger.count() ? ledger.value(1) : 0.0));

    sel.e_indices = std::move(picks);
    sel.scale = scale;
    sel.trend_ok = ledger.decay_confirmed();
    for (int i = 0; i <= i_max; ++i) {
        SummabilityLedger order_ledger;
        order_ledger.ceiling = scale; // scale * sum_k 2^-k
        for (int k = 1; k <= sel.count(); ++k) {
            const double term =
                ledger.value(sel.e_indices[static_cast<std::size_t>(k - 1)]) *
                (part.sup_norm_g(k, i).value + 1.0);
            order_ledger.terms.push_back(term);
            order_ledger.partial_sum += term;
        }
        sel.per_order.push_back(std::move(order_ledger));
    }
    return sel;
}

bool SummabilityChains::all_hold() const {
    for (const auto& l : hs_chain)
        if (!l.holds) return false;
    for (const auto& l : gamma_chain)
        if (!l.holds) return false;
    return true;
}

SummabilityChains hs_summability_report(const OperatorFamily& fam, const FrameSet& frames,
                                        const SplitOperators& split, const ESelection& sel) {
    SummabilityChains chains;
    const double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
    const int ke = frames.e_count();

    // J-chain quantities; e_k in f-frame coordinates are unit columns.
    double sum_sup_jstar = 0.0, sum_rk_jstar = 0.0, sum_hs_j = 0.0, sum_hs_jstar = 0.0;
    double sum_rk_j = 0.0, sum_rk_s = 0.0, weighted = 0.0, sup_b2 = 0.0;
    for (int k = 1; k <= ke; ++k) {
        const int pos = frames.f_position(FrameKind::E, k);
        double sup_jstar = 0.0, sup_b = 0.0;
        for (int r = 1; r <= split.R; ++r) {
            const double jn = split.j(r).col(pos).norm();
            const double jsn = split.j(r).adjoint().col(pos).norm();
            const double sn = split.s(r).adjoint().col(pos).norm();
            sum_rk_j += jn * jn;
            sum_rk_jstar += jsn * jsn;
            sum_rk_s += sn * sn;
            sup_jstar = std::max(sup_jstar, jsn);
            sup_b = std::max(sup_b, static_cast<double>(r) * sn);
        }
        sum_sup_jstar += sup_jstar * sup_jstar;
        sup_b2 += sup_b * sup_b;
    }
    for (int r = 1; r <= split.R; ++r) {
        sum_hs_j += split.j(r).squaredNorm();
        sum_hs_jstar += split.j(r).adjoint().squaredNorm();
        weighted += sup_b2 / (static_cast<double>(r) * r);
    }
    const double m4 = std::pow(sel.M, 4.0);
    const double m8 = m4 * m4;

    chains.hs_chain.push_back(
        make_link("sum_k sup_r ||J* e_k||^2 <= sum_r sum_k ||J* e_k||^2", sum_sup_jstar,
                  sum_rk_jstar, false));
    chains.hs_chain.push_back(make_link("sum_r sum_k ||J* e_k||^2 <= sum_r |J*|_2^2",
                                        sum_rk_jstar, sum_hs_jstar, false));
    chains.hs_chain.push_back(
        make_link("sum_r |J*|_2^2 = sum_r |J|_2^2", sum_hs_jstar, sum_hs_j, true));
    chains.hs_chain.push_back(
        make_link("sum_r |J|_2^2 = sum_r sum_k ||J e_k||^2", sum_hs_j, sum_rk_j, true));
    chains.hs_chain.push_back(
        make_link("sum_r sum_k ||J e_k||^2 = sum_r sum_k ||S* e_k||^2", sum_rk_j, sum_rk_s, true));
    chains.hs_chain.push_back(
        make_link("sum_r sum_k ||S* e_k||^2 <= sum_r (1/r^2) sum_k sup_r ||B* e_k||^2", sum_rk_s,
                  weighted, false));
    chains.hs_chain.push_back(
        make_link("sum_k sup_r ||B* e_k||^2 <= M^8", sup_b2, m8, false));
    chains.hs_chain.push_back(
        make_link("sum_r (1/r^2) sum_k sup_r ||B* e_k||^2 <= M^8 pi^2/6", weighted, m8 * pi2_6,
                  false));

    // Gamma-chain quantities.
    double sum_sup_gamma = 0.0, sum_rk_gamma = 0.0, sum_hs_gamma = 0.0, sum_hs_gamma_star = 0.0;
    double sum_slambda = 0.0;
    for (int k = 1; k <= ke; ++k) {
        const int pos = frames.f_position(FrameKind::E, k);
        double sup_gamma = 0.0;
        for (int r = 1; r <= split.R; ++r) {
            const double gn = split.gamma(r).col(pos).norm();
            sum_rk_gamma += gn * gn;
            sup_gamma = std::max(sup_gamma, gn);
        }
        sum_sup_gamma += sup_gamma * sup_gamma;
    }
    for (int r = 1; r <= split.R; ++r) {
        sum_hs_gamma += split.gamma(r).squaredNorm();
        sum_hs_gamma_star += split.gamma(r).adjoint().squaredNorm();
        sum_slambda += (split.s(r).adjoint() * split.Lambda).squaredNorm();
    }
    double lambda_perp2 = 0.0;
    for (int k = 1; k <= frames.perp_count(); ++k) lambda_perp2 += 1.0 / (static_cast<double>(k) * k);
    double weighted_lambda = 0.0;
    for (int r = 1; r <= fam.R; ++r) weighted_lambda += lambda_perp2 / (static_cast<double>(r) * r);
    const double pi4_36 = pi2_6 * pi2_6;

    chains.gamma_chain.push_back(
        make_link("sum_k sup_r ||Gamma e_k||^2 <= sum_r sum_k ||Gamma e_k||^2", sum_sup_gamma,
                  sum_rk_gamma, false));
    chains.gamma_chain.push_back(make_link("sum_r sum_k ||Gamma e_k||^2 <= sum_r |Gamma|_2^2",
                                           sum_rk_gamma, sum_hs_gamma, false));
    chains.gamma_chain.push_back(make_link("sum_r |Gamma|_2^2 = sum_r |Gamma*|_2^2", sum_hs_gamma,
                                           sum_hs_gamma_star, true));
    chains.gamma_chain.push_back(make_link("sum_r |Gamma*|_2^2 = sum_r sum_n ||S* Lambda f_n||^2",
                                           sum_hs_gamma_star, sum_slambda, true));
    chains.gamma_chain.push_back(
        make_link("sum_r sum_n ||S* Lambda f_n||^2 <= sum_r (1/r^2) sum_k ||Lambda e_perp_k||^2",
                  sum_slambda, weighted_lambda, false));
    chains.gamma_chain.push_back(
        make_link("sum_r (1/r^2) sum_k 1/k^2 <= pi^4/36", weighted_lambda, pi4_36, false));

    return chains;
}

} // namespace carleman
