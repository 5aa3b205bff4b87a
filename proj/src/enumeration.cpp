#include "carleman/enumeration.hpp"

#include "carleman/errors.hpp"

namespace carleman {

namespace {
long long key_of(int j, int k) {
    return (static_cast<long long>(j) << 32) ^ static_cast<unsigned int>(k);
}
} // namespace

Enumeration::Enumeration(int shell_budget) : shells_(shell_budget) {
    if (shell_budget < 0) raise(ErrorCode::MalformedConfig, "shell budget must be >= 0");
    const long long side = 2LL * shell_budget + 1;
    pairs_.reserve(static_cast<std::size_t>(side * side));

    auto push = [this](int j, int k) {
        pairs_.push_back({j, k});
        inverse_.emplace(key_of(j, k), static_cast<int>(pairs_.size()));
    };

    push(0, 0);
    for (int m = 1; m <= shell_budget; ++m) {
        for (int k = -m + 1; k <= m; ++k) push(m, k);  // right edge, upward
        for (int j = m - 1; j >= -m; --j) push(j, m);  // top edge, leftward
        for (int k = m - 1; k >= -m; --k) push(-m, k); // left edge, downward
        for (int j = -m + 1; j <= m; ++j) push(j, -m); // bottom edge, rightward
    }
}

ChildIndex Enumeration::pair(int n) const {
    if (n < 1 || n > size())
        raise(ErrorCode::BudgetExceeded,
              "enumeration index " + std::to_string(n) + " outside budget of " +
                  std::to_string(size()) + " pairs");
    return pairs_[static_cast<std::size_t>(n - 1)];
}

std::optional<int> Enumeration::index_of(const ChildIndex& idx) const {
    auto it = inverse_.find(key_of(idx.j, idx.k));
    if (it == inverse_.end()) return std::nullopt;
    return it->second;
}

} // namespace carleman
