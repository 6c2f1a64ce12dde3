#include "chainnet/sense.hpp"

#include <charconv>

namespace chainnet {

namespace {

int parse_ordinal(std::string_view digits, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || value < 1) {
        throw DataError("invalid sense index '" + std::string(whole) + "'");
    }
    return value;
}

int kind_rank(SenseIndex::Kind kind) {
    switch (kind) {
        case SenseIndex::Kind::Plain: return 0;
        case SenseIndex::Kind::SplitA: return 1;
        case SenseIndex::Kind::SplitB: return 2;
        case SenseIndex::Kind::Virtual: return 3;
    }
    return 0;
}

}  // namespace

SenseIndex::SenseIndex(Kind kind, int ordinal) : kind_(kind), ordinal_(ordinal) {
    if (ordinal < 1) {
        throw DataError("sense ordinals are positive, got " + std::to_string(ordinal));
    }
}

SenseIndex SenseIndex::parse(std::string_view text) {
    if (text.empty()) {
        throw DataError("empty sense index");
    }
    if (text.front() == 'V') {
        return virtual_sense(parse_ordinal(text.substr(1), text));
    }
    if (text.back() == 'A') {
        return split_a(parse_ordinal(text.substr(0, text.size() - 1), text));
    }
    if (text.back() == 'B') {
        return split_b(parse_ordinal(text.substr(0, text.size() - 1), text));
    }
    return plain(parse_ordinal(text, text));
}

SenseIndex SenseIndex::sibling() const {
    switch (kind_) {
        case Kind::SplitA: return split_b(ordinal_);
        case Kind::SplitB: return split_a(ordinal_);
        default: throw UsageError("sense " + to_string() + " is not a split half");
    }
}

std::string SenseIndex::to_string() const {
    switch (kind_) {
        case Kind::Plain: return std::to_string(ordinal_);
        case Kind::SplitA: return std::to_string(ordinal_) + "A";
        case Kind::SplitB: return std::to_string(ordinal_) + "B";
        case Kind::Virtual: return "V" + std::to_string(ordinal_);
    }
    return {};
}

std::strong_ordering SenseIndex::operator<=>(const SenseIndex& other) const {
    const bool this_virtual = is_virtual();
    const bool other_virtual = other.is_virtual();
    if (this_virtual != other_virtual) {
        return this_virtual ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (auto c = ordinal_ <=> other.ordinal_; c != 0) {
        return c;
    }
    return kind_rank(kind_) <=> kind_rank(other.kind_);
}

SenseId SenseId::parse(std::string_view text) {
    const auto hash = text.rfind('#');
    if (hash == std::string_view::npos || hash == 0) {
        throw DataError("sense id '" + std::string(text) + "' is not of the form lemma#index");
    }
    return {std::string(text.substr(0, hash)), SenseIndex::parse(text.substr(hash + 1))};
}

std::string SenseId::to_string() const { return word + "#" + index.to_string(); }

std::string_view to_string(LabelKind kind) {
    switch (kind) {
        case LabelKind::Prototype: return "prototype";
        case LabelKind::Metaphor: return "metaphor";
        case LabelKind::Metonymy: return "metonymy";
    }
    return "?";
}

LabelKind parse_label_kind(std::string_view text) {
    if (text == "prototype") return LabelKind::Prototype;
    if (text == "metaphor") return LabelKind::Metaphor;
    if (text == "metonymy") return LabelKind::Metonymy;
    throw DataError("unknown label '" + std::string(text) + "'");
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Kept: return "kept";
        case Verdict::Lost: return "lost";
        case Verdict::Modified: return "modified";
    }
    return "?";
}

Verdict parse_verdict(std::string_view text) {
    if (text == "kept") return Verdict::Kept;
    if (text == "lost") return Verdict::Lost;
    if (text == "modified") return Verdict::Modified;
    throw DataError("unknown verdict '" + std::string(text) + "'");
}

const SenseAnnotation* WordAnnotation::find(const SenseIndex& id) const {
    for (const auto& s : senses) {
        if (s.id() == id) return &s;
    }
    return nullptr;
}

SenseAnnotation* WordAnnotation::find(const SenseIndex& id) {
    for (auto& s : senses) {
        if (s.id() == id) return &s;
    }
    return nullptr;
}

std::optional<std::size_t> WordAnnotation::position(const SenseIndex& id) const {
    for (std::size_t i = 0; i < senses.size(); ++i) {
        if (senses[i].id() == id) return i;
    }
    return std::nullopt;
}

}  // namespace chainnet
