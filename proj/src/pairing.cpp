#include "carleman/pairing.hpp"

#include "carleman/errors.hpp"

#include <algorithm>
#include <set>

namespace carleman {

int feasible_x_count(int proposed, int e_count, int perp_count, const BasisPartition& part) {
    if (perp_count > part.schedule_count())
        raise(ErrorCode::InconsistentPairing,
              "n(k) schedule has " + std::to_string(part.schedule_count()) +
                  " entries, need " + std::to_string(perp_count));
    const int n_last = perp_count > 0 ? part.n_of_k()[static_cast<std::size_t>(perp_count - 1)] : 0;
    const int gap = n_last - perp_count;
    const int cap = e_count - gap;
    if (cap < 0)
        raise(ErrorCode::InconsistentPairing,
              "schedule gaps need " + std::to_string(gap) + " filler vectors but only " +
                  std::to_string(e_count) + " e's exist");
    return std::min(proposed, cap);
}

UnitaryPairing build_pairing(const FrameSet& frames, const BasisPartition& part) {
    const int ke = frames.e_count();
    const int perp = frames.perp_count();
    const int x = frames.x_count();

    if (x > feasible_x_count(x, ke, perp, part))
        raise(ErrorCode::InconsistentPairing, "x selection leaves too few e's for schedule gaps");

    std::vector<int> unselected;
    for (int k = 1; k <= ke; ++k)
        if (!frames.is_x(k)) unselected.push_back(k);

    const int total = perp + static_cast<int>(unselected.size());
    if (x > part.g_count())
        raise(ErrorCode::InconsistentPairing, "not enough g's for the x targets");
    if (total > part.h_count())
        raise(ErrorCode::InconsistentPairing,
              "partition offers " + std::to_string(part.h_count()) + " h's, pairing needs " +
                  std::to_string(total));

    // x_perp order: e_perp_k at slot n(k), unselected e's into the gaps.
    std::vector<FrameRef> x_perp(static_cast<std::size_t>(total), FrameRef{});
    std::vector<bool> taken(static_cast<std::size_t>(total), false);
    for (int k = 1; k <= perp; ++k) {
        const int slot = part.n_of_k()[static_cast<std::size_t>(k - 1)];
        if (slot > total)
            raise(ErrorCode::InconsistentPairing, "schedule slot exceeds the x_perp range");
        x_perp[static_cast<std::size_t>(slot - 1)] = {FrameKind::EPerp, k};
        taken[static_cast<std::size_t>(slot - 1)] = true;
    }
    {
        std::size_t next = 0;
        for (int e_idx : unselected) {
            while (next < taken.size() && taken[next]) ++next;
            if (next >= taken.size())
                raise(ErrorCode::InconsistentPairing, "no free slot for an unselected e");
            x_perp[next] = {FrameKind::E, e_idx};
            taken[next] = true;
        }
    }

    UnitaryPairing pairing;
    pairing.x_count = x;
    pairing.x_perp_count = total;
    pairing.target_enum.assign(static_cast<std::size_t>(frames.dim()), 0);

    for (int k = 1; k <= x; ++k) {
        const int pos = frames.f_position(FrameKind::E, frames.x_of[static_cast<std::size_t>(k - 1)]);
        pairing.target_enum[static_cast<std::size_t>(pos)] =
            part.g_enum_indices()[static_cast<std::size_t>(k - 1)];
    }
    for (int m = 1; m <= total; ++m) {
        const FrameRef ref = x_perp[static_cast<std::size_t>(m - 1)];
        const int pos = frames.f_position(ref.kind, ref.index);
        pairing.target_enum[static_cast<std::size_t>(pos)] =
            part.h_enum_indices()[static_cast<std::size_t>(m - 1)];
    }

    // Constraint consistency: e_perp_k must land on h_{n(k)}.
    for (int k = 1; k <= perp; ++k) {
        const int pos = frames.f_position(FrameKind::EPerp, k);
        const int expected =
            part.h_enum_indices()[static_cast<std::size_t>(part.n_of_k()[static_cast<std::size_t>(k - 1)] - 1)];
        if (pairing.target_enum[static_cast<std::size_t>(pos)] != expected)
            raise(ErrorCode::InconsistentPairing, "e_perp target drifted off its scheduled h");
    }
    // Bijectivity on the materialized range.
    std::set<int> seen;
    for (int t : pairing.target_enum) {
        if (t == 0 || !seen.insert(t).second)
            raise(ErrorCode::InconsistentPairing, "pairing is not a bijection");
    }

    pairing.target_child.reserve(pairing.target_enum.size());
    for (int t : pairing.target_enum) pairing.target_child.push_back(part.enumeration().pair(t));
    return pairing;
}

} // namespace carleman
