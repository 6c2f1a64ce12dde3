#pragma once

#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace chainnet {

using BigInt = boost::multiprecision::cpp_int;

/// Largest n accepted by count_total: the sum runs over every set
/// partition of n senses (Bell(12) = 4,213,597).
inline constexpr int kDefaultCountCeiling = 12;

/// Largest n accepted by enumerate_annotations.
inline constexpr int kMaxEnumerationSenses = 6;

/// Single-prototype annotations of n senses with k_labels edge labels:
/// n^(n-2) undirected trees, k^(n-1) labellings, n choices of root.
BigInt count_single_root(int n, int k_labels);

/// All annotations of n senses: for each set partition of the senses into
/// homonym clusters, the product of the single-root counts of the blocks.
BigInt count_total(int n, int k_labels, int ceiling = kDefaultCountCeiling);

/// Forests that the annotation interface admits without any conduit:
/// metonyms extend only prototypes and metaphors never extend metaphors.
/// Edge labels are metaphor/metonymy, so there is no label-count parameter.
BigInt count_constructible_total(int n, int ceiling = kDefaultCountCeiling);

/// Calls visit with the restricted-growth string of every set partition of
/// {0..n-1}: rgs[i] is the block of element i, blocks numbered by first element.
void for_each_set_partition(int n, const std::function<void(const std::vector<int>&)>& visit);

/// Three-significant-figure form used in published count tables:
/// exact below 1000, otherwise "MMM×10^E" with the mantissa rounded half-up.
struct RoundedCount {
    int mantissa = 0;
    int exponent = 0;
    std::string to_string() const;
    bool operator==(const RoundedCount&) const = default;
};

RoundedCount round_to_three_figures(const BigInt& value);

/// A labelled rooted forest on senses 0..n-1. parent[i] == -1 marks a
/// prototype; label[i] in [0, k) is the edge label of a derived sense and -1
/// for prototypes.
struct LabelledForest {
    std::vector<int> parent;
    std::vector<int> label;
    bool operator==(const LabelledForest&) const = default;
};

/// Streams every labelled rooted forest on n senses exactly once.
class ForestEnumerator {
public:
    ForestEnumerator(int n, int k_labels);

    /// Writes the next forest into out; returns false when exhausted.
    bool next(LabelledForest& out);

private:
    bool advance_parents();
    bool acyclic() const;
    bool advance_labels();

    int n_;
    int k_;
    std::vector<int> parent_;
    std::vector<int> label_;
    bool started_ = false;
    bool done_ = false;
};

}  // namespace chainnet
