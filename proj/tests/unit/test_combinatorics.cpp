#include "doctest.h"

#include <chrono>
#include <set>

#include "chainnet/combinatorics.hpp"
#include "chainnet/sense.hpp"
#include "oracles.hpp"

using namespace chainnet;
using namespace chainnet::testing;

namespace {

// Metaphor = label 0, metonymy = label 1.
bool constructible(const LabelledForest& f) {
    for (std::size_t s = 0; s < f.parent.size(); ++s) {
        const int p = f.parent[s];
        if (p == -1) continue;
        const bool parent_is_prototype = f.parent[static_cast<std::size_t>(p)] == -1;
        const int parent_label = f.label[static_cast<std::size_t>(p)];
        if (f.label[s] == 1 && !parent_is_prototype) return false;
        if (f.label[s] == 0 && !parent_is_prototype && parent_label == 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("small counts are exact") {
    CHECK(count_total(1, 2) == 1);
    CHECK(count_total(2, 2) == 5);
    CHECK(count_total(3, 2) == 49);
    CHECK(count_total(4, 2) == 729);
    CHECK(count_single_root(2, 2) == 4);
    CHECK(count_single_root(3, 2) == 36);
}

TEST_CASE("rounded counts match the published table") {
    const std::vector<std::pair<int, RoundedCount>> table{
        {2, {5, 0}},     {3, {49, 0}},    {4, {729, 0}},   {5, {146, 2}},  {6, {371, 3}},
        {7, {114, 5}},   {8, {410, 6}},   {9, {170, 8}},   {10, {794, 9}},
    };
    for (const auto& [n, expected] : table) {
        CAPTURE(n);
        CHECK(round_to_three_figures(count_total(n, 2)) == expected);
    }
    CHECK(round_to_three_figures(count_total(5, 2)).to_string() == "146×10^2");
}

TEST_CASE("rounding is half-up on the fourth significant figure") {
    CHECK(round_to_three_figures(BigInt(999)) == RoundedCount{999, 0});
    CHECK(round_to_three_figures(BigInt(1234)) == RoundedCount{123, 1});
    CHECK(round_to_three_figures(BigInt(1235)) == RoundedCount{124, 1});
    CHECK(round_to_three_figures(BigInt(9995)) == RoundedCount{100, 2});
    CHECK(round_to_three_figures(BigInt(14641)) == RoundedCount{146, 2});
}

TEST_CASE("counts agree with brute force over parent arrays") {
    for (int k = 1; k <= 3; ++k) {
        for (int n = 1; n <= 6; ++n) {
            CAPTURE(n);
            CAPTURE(k);
            CHECK(count_total(n, k) == brute_force_total(n, k));
        }
    }
}

TEST_CASE("the enumerator yields every forest exactly once") {
    const auto start = std::chrono::steady_clock::now();
    for (int n = 1; n <= kMaxEnumerationSenses; ++n) {
        CAPTURE(n);
        ForestEnumerator e(n, 2);
        LabelledForest f;
        std::uint64_t count = 0;
        std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
        while (e.next(f)) {
            ++count;
            if (n <= 4) CHECK(seen.insert({f.parent, f.label}).second);
        }
        CHECK(BigInt(count) == count_total(n, 2));
    }
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(10));
}

TEST_CASE("constructible forests are counted separately and agree with enumeration") {
    for (int n = 1; n <= kMaxEnumerationSenses; ++n) {
        CAPTURE(n);
        ForestEnumerator e(n, 2);
        LabelledForest f;
        std::uint64_t count = 0;
        while (e.next(f)) count += constructible(f) ? 1 : 0;
        CHECK(BigInt(count) == count_constructible_total(n));
        CHECK(count_constructible_total(n) <= count_total(n, 2));
    }
}

TEST_CASE("counts increase in n and in the number of labels") {
    for (int n = 1; n < kDefaultCountCeiling; ++n) {
        CHECK(count_total(n + 1, 2) > count_total(n, 2));
        CHECK(count_total(n, 3) >= count_total(n, 2));
        if (n > 1) CHECK(count_total(n, 3) > count_total(n, 2));
    }
}

TEST_CASE("set partitions are enumerated once each (Bell numbers)") {
    const std::vector<int> bell{1, 2, 5, 15, 52, 203, 877, 4140};
    for (int n = 1; n <= 8; ++n) {
        int count = 0;
        std::set<std::vector<int>> seen;
        for_each_set_partition(n, [&](const std::vector<int>& rgs) {
            ++count;
            seen.insert(rgs);
        });
        CHECK(count == bell[static_cast<std::size_t>(n - 1)]);
        CHECK(seen.size() == static_cast<std::size_t>(count));
    }
}

TEST_CASE("bad arguments are usage errors") {
    CHECK_THROWS_AS(count_total(0, 2), UsageError);
    CHECK_THROWS_AS(count_total(13, 2), UsageError);
    CHECK_THROWS_AS(count_total(9, 2, 8), UsageError);
    CHECK_NOTHROW(count_total(8, 2, 8));
    CHECK_THROWS_AS(count_total(3, 0), UsageError);
    CHECK_THROWS_AS(ForestEnumerator(7, 2), UsageError);
}
