#pragma once

#include "carleman/enumeration.hpp"
#include "carleman/wavelet.hpp"

#include <vector>

namespace carleman {

struct NormWithCeiling {
    double value = 0.0;   // sampled C(R)-norm
    double ceiling = 0.0; // certified D*A ceiling
};

struct SummabilityLedger {
    std::vector<double> terms;
    double partial_sum = 0.0;
    double ceiling = 0.0; // closed-form geometric ceiling

    bool within_ceiling() const { return partial_sum <= ceiling * (1.0 + 1e-12); }
};

/**
 * Split of the enumerated children into the tail family {h_k} (scales pushed
 * to -infinity fast enough that sum_k D over the h's is geometric) and the
 * complement {g_k}, plus the strictly increasing schedule n(k) used to thin
 * the h's a second time. Index lists store 1-based enumeration positions.
 *
 * Selection rules, with q = geometric_target:
 *   - h_k is an unused child with D <= q^k / k (sharper than the q^k the
 *     scale ledger needs), taking the least |j| that qualifies;
 *   - n(k) is the first index past n(k-1) whose h satisfies D <= q^k / k,
 *     which makes sum_k k * H_{n(k),i} <= A_i * sum_k q^k for every order i;
 *     the sharpened h-rule turns this into the identity schedule.
 *
 * Non-owning views into the enumeration and mother wavelet; both must
 * outlive the partition.
 */
class BasisPartition {
public:
    BasisPartition(const Enumeration& enumeration, const MotherWavelet& mother,
                   double geometric_target, std::vector<int> h_enum,
                   std::vector<int> g_enum, std::vector<int> n_of_k);

    int h_count() const { return static_cast<int>(h_enum_.size()); }
    int g_count() const { return static_cast<int>(g_enum_.size()); }
    int schedule_count() const { return static_cast<int>(n_of_k_.size()); }

    const std::vector<int>& h_enum_indices() const { return h_enum_; }
    const std::vector<int>& g_enum_indices() const { return g_enum_; }
    const std::vector<int>& n_of_k() const { return n_of_k_; }

    ChildIndex h_child(int k) const; // k is 1-based
    ChildIndex g_child(int k) const;
    ChildIndex scheduled_child(int k) const; // h_{n(k)}

    NormWithCeiling sup_norm_h(int k, int order) const; // H_{k,order}
    NormWithCeiling sup_norm_g(int k, int order) const; // G_{k,order}

    // sum_k D_{h_k} against the geometric ceiling q/(1-q).
    SummabilityLedger h_scale_ledger() const;
    // sum_k k * H_{n(k),order} against A_order * q/(1-q).
    SummabilityLedger schedule_ledger(int order) const;

    double geometric_target() const { return target_; }
    const Enumeration& enumeration() const { return *enumeration_; }
    const MotherWavelet& mother() const { return *mother_; }

private:
    const Enumeration* enumeration_;
    const MotherWavelet* mother_;
    double target_;
    std::vector<int> h_enum_;
    std::vector<int> g_enum_;
    std::vector<int> n_of_k_;
};

// Builds the partition over the full enumerated range. min_h_count is the
// schedule length the caller needs; InsufficientNegativeScales when the
// shell budget cannot provide that many h's.
BasisPartition partition_gh(const Enumeration& enumeration, const MotherWavelet& mother,
                            double geometric_target, int min_h_count = 0);

enum class BasisSide { G, H };

NormWithCeiling sup_norm_GH(const BasisPartition& part, BasisSide side, int k, int order);

} // namespace carleman
