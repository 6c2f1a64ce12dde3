#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chainnet {

/// Raised for malformed input data (bad ids, broken files, schema violations).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an operation is called outside its documented domain.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Position of a sense within one word: a plain inventory ordinal ("3"), one
/// half of a split sense ("1A", "1B"), or an annotator-added virtual sense
/// ("V1").
class SenseIndex {
public:
    enum class Kind : std::uint8_t { Plain, SplitA, SplitB, Virtual };

    SenseIndex() = default;
    SenseIndex(Kind kind, int ordinal);

    static SenseIndex plain(int ordinal) { return {Kind::Plain, ordinal}; }
    static SenseIndex split_a(int ordinal) { return {Kind::SplitA, ordinal}; }
    static SenseIndex split_b(int ordinal) { return {Kind::SplitB, ordinal}; }
    static SenseIndex virtual_sense(int ordinal) { return {Kind::Virtual, ordinal}; }

    /// Parses "3", "1A", "1B" or "V2". Throws DataError otherwise.
    static SenseIndex parse(std::string_view text);

    Kind kind() const { return kind_; }
    int ordinal() const { return ordinal_; }
    bool is_plain() const { return kind_ == Kind::Plain; }
    bool is_split_half() const { return kind_ == Kind::SplitA || kind_ == Kind::SplitB; }
    bool is_virtual() const { return kind_ == Kind::Virtual; }

    /// The other half of a split pair. Only valid on split halves.
    SenseIndex sibling() const;

    std::string to_string() const;

    // Inventory order: ordinal first, with split halves at their ordinal and
    // virtual senses after every inventory sense.
    std::strong_ordering operator<=>(const SenseIndex& other) const;
    bool operator==(const SenseIndex& other) const = default;

private:
    Kind kind_ = Kind::Plain;
    int ordinal_ = 1;
};

/// A sense of a specific word. Canonical text form is "lemma#index", e.g. "twin#V1".
struct SenseId {
    std::string word;
    SenseIndex index;

    static SenseId parse(std::string_view text);
    std::string to_string() const;

    auto operator<=>(const SenseId&) const = default;
    bool operator==(const SenseId&) const = default;
};

enum class LabelKind : std::uint8_t { Prototype = 0, Metaphor = 1, Metonymy = 2 };

inline constexpr std::size_t kLabelCount = 3;

std::string_view to_string(LabelKind kind);
LabelKind parse_label_kind(std::string_view text);

enum class Verdict : std::uint8_t { Kept, Lost, Modified };

std::string_view to_string(Verdict verdict);
Verdict parse_verdict(std::string_view text);

struct SenseRecord {
    SenseIndex id;
    std::string definition;
    std::vector<std::string> synonyms;
    bool is_virtual = false;
    bool is_split_half = false;
    bool known = true;

    bool operator==(const SenseRecord&) const = default;
};

struct SenseLabel {
    LabelKind kind = LabelKind::Prototype;
    std::optional<SenseIndex> parent;

    static SenseLabel prototype() { return {}; }
    static SenseLabel metaphor_of(SenseIndex parent) { return {LabelKind::Metaphor, parent}; }
    static SenseLabel metonymy_of(SenseIndex parent) { return {LabelKind::Metonymy, parent}; }

    bool operator==(const SenseLabel&) const = default;
};

/// Fills the blank in "This thing ___".
struct Feature {
    int id = 0;
    std::string text;

    bool operator==(const Feature&) const = default;
};

struct FeatureJudgement {
    int feature_id = 0;
    Verdict verdict = Verdict::Kept;
    std::optional<std::string> modified_text;

    bool operator==(const FeatureJudgement&) const = default;
};

struct SenseAnnotation {
    SenseRecord sense;
    SenseLabel label;
    bool conduit = false;
    std::vector<Feature> features;
    std::vector<FeatureJudgement> judgements;

    const SenseIndex& id() const { return sense.id; }

    bool operator==(const SenseAnnotation&) const = default;
};

/// One annotator's forest over all senses of one word.
struct WordAnnotation {
    std::string word;
    std::string annotator;
    std::vector<SenseAnnotation> senses;
    bool word_known = true;

    const SenseAnnotation* find(const SenseIndex& id) const;
    SenseAnnotation* find(const SenseIndex& id);
    std::optional<std::size_t> position(const SenseIndex& id) const;

    bool operator==(const WordAnnotation&) const = default;
};

/// Senses grouped by the tree they belong to; one cluster per prototype.
struct HomonymyPartition {
    std::string word;
    std::vector<std::vector<SenseIndex>> clusters;

    bool operator==(const HomonymyPartition&) const = default;
};

}  // namespace chainnet
