#pragma once

#include "carleman/decomposition.hpp"
#include "carleman/partition.hpp"

#include <vector>

namespace carleman {

/**
 * Index realization of the unitary between the f-basis and the enumerated
 * wavelets: x_k -> g_k, x_perp_k -> h_k, with the e_perp subsequence landing
 * exactly on the scheduled h_{n(k)}. The x_perp order is built by slotting
 * e_perp_k into position n(k) and filling the gaps with the unselected e's
 * in their selection order; feasibility of that filling is what limits how
 * many x's a finite truncation can afford.
 */
struct UnitaryPairing {
    std::vector<int> target_enum;        // f-position (0-based) -> 1-based enum index
    std::vector<ChildIndex> target_child; // cached (j, k) of each target
    int x_count = 0;
    int x_perp_count = 0;

    int size() const { return static_cast<int>(target_enum.size()); }
    const ChildIndex& child_of(int f_pos) const {
        return target_child.at(static_cast<std::size_t>(f_pos));
    }
};

// Largest admissible x-prefix: the n(k) slots ahead of the e_perp vectors
// must be fillable by unselected e's, i.e. n(P) - P <= K_e - x_count.
int feasible_x_count(int proposed, int e_count, int perp_count, const BasisPartition& part);

UnitaryPairing build_pairing(const FrameSet& frames, const BasisPartition& part);

} // namespace carleman
