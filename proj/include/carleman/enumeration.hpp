#pragma once

#include "carleman/wavelet.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace carleman {

/**
 * Bijective enumeration n <-> (j, k) of the dyadic index plane over a finite
 * shell budget. Shell m holds the pairs with max(|j|, |k|) = m, traversed
 * counterclockwise starting on the right edge: (m, -m+1) up to (m, m), then
 * the top edge right-to-left, the left edge top-to-bottom, and the bottom
 * edge left-to-right. n is 1-based; n = 1 is (0, 0).
 */
class Enumeration {
public:
    explicit Enumeration(int shell_budget);

    int size() const { return static_cast<int>(pairs_.size()); }
    int shell_budget() const { return shells_; }

    // n-th pair, 1-based; BudgetExceeded outside the materialized range.
    ChildIndex pair(int n) const;

    // Inverse lookup; empty when (j, k) is outside the shell budget.
    std::optional<int> index_of(const ChildIndex& idx) const;

private:
    int shells_;
    std::vector<ChildIndex> pairs_;
    std::unordered_map<long long, int> inverse_;
};

} // namespace carleman
