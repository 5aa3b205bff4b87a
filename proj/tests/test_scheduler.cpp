#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "carleman/enumeration.hpp"
#include "carleman/errors.hpp"
#include "carleman/partition.hpp"

#include <cmath>
#include <set>

using namespace carleman;

namespace {
const MotherWavelet& shared_mother() {
    static MotherWavelet mother(BellFunction(), 256, 4);
    return mother;
}
} // namespace

TEST_CASE("enumeration starts at the origin and is bijective") {
    Enumeration e(5);
    CHECK(e.pair(1) == ChildIndex{0, 0});
    CHECK(e.size() == 11 * 11);
    for (int n = 1; n <= e.size(); ++n) {
        auto back = e.index_of(e.pair(n));
        REQUIRE(back.has_value());
        CHECK(*back == n);
    }
    CHECK_THROWS_AS(e.pair(0), Error);
    CHECK_THROWS_AS(e.pair(e.size() + 1), Error);
    CHECK_FALSE(e.index_of({6, 0}).has_value());
}

TEST_CASE("first 25 entries exhaust the shells up to 2") {
    Enumeration e(4);
    std::set<std::pair<int, int>> seen;
    for (int n = 1; n <= 25; ++n) {
        const ChildIndex c = e.pair(n);
        CHECK(std::max(std::abs(c.j), std::abs(c.k)) <= 2);
        CHECK(seen.insert({c.j, c.k}).second);
    }
    CHECK(seen.size() == 25);
}

TEST_CASE("partition pushes the tail scales down geometrically") {
    Enumeration e(40);
    const BasisPartition part = partition_gh(e, shared_mother(), 0.5);

    REQUIRE(part.h_count() >= 10);
    int prev_j = 0;
    for (int k = 1; k <= part.h_count(); ++k) {
        const ChildIndex c = part.h_child(k);
        CHECK(c.j <= 0);                        // D > 1 would need j > 0
        CHECK(c.j <= prev_j);                   // non-increasing scales
        CHECK(MotherWavelet::scale_bound(c.j) <= std::pow(0.5, k) * (1 + 1e-12));
        prev_j = c.j;
    }

    const SummabilityLedger scale_ledger = part.h_scale_ledger();
    CHECK(scale_ledger.partial_sum <= 1.0); // geometric series at q = 1/2
    CHECK(scale_ledger.within_ceiling());

    // partition completeness over the enumerated range
    CHECK(part.g_count() + part.h_count() == e.size());
    std::set<int> g(part.g_enum_indices().begin(), part.g_enum_indices().end());
    for (int n : part.h_enum_indices()) CHECK_FALSE(g.count(n));
}

TEST_CASE("schedule n(k) is strictly increasing and summable") {
    Enumeration e(60);
    const BasisPartition part = partition_gh(e, shared_mother(), 0.5);

    REQUIRE(part.schedule_count() >= 20);
    for (int k = 1; k < part.schedule_count(); ++k)
        CHECK(part.n_of_k()[k] > part.n_of_k()[k - 1]);

    // Cauchy tails of sum_k k * H_{n(k),0}: successive tails below 1e-6
    const SummabilityLedger ledger = part.schedule_ledger(0);
    CHECK(ledger.within_ceiling());
    double tail = 0.0;
    for (std::size_t i = ledger.terms.size(); i-- > 20;) tail += ledger.terms[i];
    CHECK(tail < 1e-6);
}

TEST_CASE("schedule ledgers stay under the geometric ceiling for every order") {
    Enumeration e(40);
    const BasisPartition part = partition_gh(e, shared_mother(), 0.5);
    for (int order = 0; order <= 4; ++order) {
        const SummabilityLedger ledger = part.schedule_ledger(order);
        CHECK(ledger.partial_sum <= ledger.ceiling * (1 + 1e-12));
    }
}

TEST_CASE("sampled sup norms against certified ceilings") {
    Enumeration e(20);
    const BasisPartition part = partition_gh(e, shared_mother(), 0.5);
    for (int k = 1; k <= std::min(6, part.h_count()); ++k) {
        for (int order = 0; order <= 2; ++order) {
            const NormWithCeiling h = sup_norm_GH(part, BasisSide::H, k, order);
            CHECK(h.value <= h.ceiling * (1 + 1e-12));
        }
    }
    for (int k = 1; k <= 6; ++k) {
        const NormWithCeiling g = sup_norm_GH(part, BasisSide::G, k, 0);
        CHECK(g.value <= g.ceiling * (1 + 1e-12));
    }

    // a j = -1 child is bounded by (1/sqrt(2)) * A_0
    const double a0 = shared_mother().order_bound(0);
    CHECK(shared_mother().child_sup_norm({-1, 0}, 0) <= a0 / std::sqrt(2.0) * (1 + 1e-12));
}

TEST_CASE("mother sup norm is stable under grid refinement") {
    const MotherWavelet& u = shared_mother();
    // doubling the sampling grid moves the sampled sup by less than 1e-6
    auto sampled_sup = [&](double step) {
        double sup = 0.0;
        for (double s = -10.0; s <= 10.0; s += step) sup = std::max(sup, std::abs(u.eval(s)));
        return sup;
    };
    const double coarse = sampled_sup(1e-3);
    const double fine = sampled_sup(5e-4);
    CHECK(std::abs(fine - coarse) < 1e-6);
    CHECK(u.sup_norm(0) >= fine - 1e-9);
}

TEST_CASE("identical settings produce identical schedules") {
    Enumeration e1(30), e2(30);
    const BasisPartition p1 = partition_gh(e1, shared_mother(), 0.5);
    const BasisPartition p2 = partition_gh(e2, shared_mother(), 0.5);
    CHECK(p1.h_enum_indices() == p2.h_enum_indices());
    CHECK(p1.g_enum_indices() == p2.g_enum_indices());
    CHECK(p1.n_of_k() == p2.n_of_k());
}

TEST_CASE("insufficient negative scales is reported") {
    Enumeration e(3);
    CHECK_THROWS_AS(partition_gh(e, shared_mother(), 0.5, 10), Error);
}
