#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chainnet/annotation_json.hpp"
#include "chainnet/sense.hpp"

namespace chainnet {

/// A labelled forest over one word's senses with no features or slippage:
/// what parsers predict and what evaluation compares.
struct Parse {
    std::string word;
    std::vector<SenseIndex> senses;
    std::vector<LabelKind> labels;
    /// Position of each sense's parent in `senses`; empty for prototypes.
    std::vector<std::optional<std::size_t>> heads;

    std::size_t size() const { return senses.size(); }
    std::size_t prototype_count() const;
    std::optional<std::size_t> position(const SenseIndex& id) const;

    bool operator==(const Parse&) const = default;
};

/// Drops features, slippage and conduits. Parents missing from the word are
/// treated as prototype attachments.
Parse parse_from_annotation(const WordAnnotation& annotation);

/// Forest shape: heads in range, no self-loops or cycles, prototype iff no
/// head, at least one prototype.
bool is_well_formed(const Parse& parse);

Json to_json(const Parse& parse);
Parse parse_from_json(const Json& doc);

/// An undirected attachment: a sense joined to its parent, or to the word
/// root when it is a prototype. Normalised so that `low` < `high`.
struct Attachment {
    std::optional<SenseIndex> low;  // empty = root
    SenseIndex high;
    auto operator<=>(const Attachment&) const = default;
};

Attachment attachment_of(const Parse& parse, std::size_t position);

}  // namespace chainnet
