#include "chainnet/combinatorics.hpp"

#include <map>
#include <sstream>

#include "chainnet/sense.hpp"

namespace chainnet {

namespace {

BigInt power(const BigInt& base, int exponent) {
    BigInt out = 1;
    for (int i = 0; i < exponent; ++i) out *= base;
    return out;
}

void check_ceiling(int n, int ceiling) {
    if (n < 1) throw UsageError("number of senses must be at least 1");
    if (n > ceiling) {
        throw UsageError("n = " + std::to_string(n) + " exceeds the configured ceiling of " +
                         std::to_string(ceiling));
    }
}

// Sum over set partitions of {0..n-1} of the product of block weights.
BigInt partition_sum(int n, const std::vector<BigInt>& weight_by_size) {
    BigInt total = 0;
    std::vector<int> sizes;
    for_each_set_partition(n, [&](const std::vector<int>& rgs) {
        sizes.assign(static_cast<std::size_t>(n), 0);
        for (int b : rgs) ++sizes[static_cast<std::size_t>(b)];
        BigInt product = 1;
        for (int s : sizes) {
            if (s == 0) break;
            product *= weight_by_size[static_cast<std::size_t>(s)];
        }
        total += product;
    });
    return total;
}

}  // namespace

BigInt count_single_root(int n, int k_labels) {
    if (n < 1) throw UsageError("number of senses must be at least 1");
    if (k_labels < 1) throw UsageError("number of edge labels must be at least 1");
    if (n == 1) return 1;
    return power(n, n - 2) * power(k_labels, n - 1) * n;
}

BigInt count_total(int n, int k_labels, int ceiling) {
    check_ceiling(n, ceiling);
    if (k_labels < 1) throw UsageError("number of edge labels must be at least 1");
    std::vector<BigInt> by_size(static_cast<std::size_t>(n) + 1);
    for (int s = 1; s <= n; ++s) by_size[static_cast<std::size_t>(s)] = count_single_root(s, k_labels);
    return partition_sum(n, by_size);
}

BigInt count_constructible_total(int n, int ceiling) {
    check_ceiling(n, ceiling);
    // A prototype's subtrees are metaphor leaves or metonyms carrying only
    // metaphor leaves. A subtree on s senses: 2 shapes for s = 1 (metaphor
    // leaf or bare metonym), s for s >= 2 (choice of the metonym).
    std::vector<BigInt> subtree(static_cast<std::size_t>(n) + 1);
    for (int s = 1; s <= n; ++s) subtree[static_cast<std::size_t>(s)] = s == 1 ? 2 : s;
    std::vector<BigInt> trees(static_cast<std::size_t>(n) + 1);
    for (int m = 1; m <= n; ++m) {
        const BigInt children = m == 1 ? BigInt(1) : partition_sum(m - 1, subtree);
        trees[static_cast<std::size_t>(m)] = children * m;
    }
    return partition_sum(n, trees);
}

void for_each_set_partition(int n, const std::function<void(const std::vector<int>&)>& visit) {
    if (n < 1) return;
    const auto size = static_cast<std::size_t>(n);
    std::vector<int> rgs(size, 0);
    // prefix_max[i] = max(rgs[0..i])
    std::vector<int> prefix_max(size, 0);
    for (;;) {
        visit(rgs);
        std::size_t i = size - 1;
        while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
        if (i == 0) return;
        ++rgs[i];
        prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
        for (std::size_t j = i + 1; j < size; ++j) {
            rgs[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
}

std::string RoundedCount::to_string() const {
    if (exponent == 0) return std::to_string(mantissa);
    return std::to_string(mantissa) + "×10^" + std::to_string(exponent);
}

RoundedCount round_to_three_figures(const BigInt& value) {
    if (value < 0) throw UsageError("counts are non-negative");
    if (value < 1000) return {static_cast<int>(value), 0};
    int exponent = 0;
    BigInt divisor = 1;
    while (value / divisor >= 1000) {
        divisor *= 10;
        ++exponent;
    }
    BigInt mantissa = value / divisor;
    const BigInt remainder = value % divisor;
    if (remainder * 2 >= divisor) ++mantissa;
    if (mantissa == 1000) {
        mantissa = 100;
        ++exponent;
    }
    return {static_cast<int>(mantissa), exponent};
}

ForestEnumerator::ForestEnumerator(int n, int k_labels) : n_(n), k_(k_labels) {
    if (n < 1) throw UsageError("number of senses must be at least 1");
    if (k_labels < 1) throw UsageError("number of edge labels must be at least 1");
    if (n > kMaxEnumerationSenses) {
        throw UsageError("enumeration is limited to " + std::to_string(kMaxEnumerationSenses) + " senses");
    }
    parent_.assign(static_cast<std::size_t>(n), -1);
    label_.assign(static_cast<std::size_t>(n), -1);
}

bool ForestEnumerator::acyclic() const {
    for (int start = 0; start < n_; ++start) {
        int cur = start;
        for (int steps = 0; cur != -1; ++steps) {
            if (steps > n_) return false;
            cur = parent_[static_cast<std::size_t>(cur)];
        }
    }
    return true;
}

// Odometer over parent vectors with digits -1..n-1, skipping self-loops and cycles.
bool ForestEnumerator::advance_parents() {
    for (;;) {
        std::size_t i = 0;
        for (; i < parent_.size(); ++i) {
            int& p = parent_[i];
            ++p;
            if (p == static_cast<int>(i)) ++p;
            if (p < n_) break;
            p = -1;
        }
        if (i == parent_.size()) return false;
        if (acyclic()) return true;
    }
}

bool ForestEnumerator::advance_labels() {
    for (std::size_t i = 0; i < label_.size(); ++i) {
        if (parent_[i] == -1) continue;
        if (++label_[i] < k_) return true;
        label_[i] = 0;
    }
    return false;
}

bool ForestEnumerator::next(LabelledForest& out) {
    if (done_) return false;
    if (!started_) {
        started_ = true;
    } else if (!advance_labels()) {
        if (!advance_parents()) {
            done_ = true;
            return false;
        }
        for (std::size_t i = 0; i < label_.size(); ++i) label_[i] = parent_[i] == -1 ? -1 : 0;
    }
    out.parent = parent_;
    out.label = label_;
    return true;
}

}  // namespace chainnet
