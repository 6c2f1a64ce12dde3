#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chainnet/sense.hpp"

namespace chainnet {

enum class ViolationKind {
    EmptyAnnotation,
    DuplicateSense,
    IdFlagMismatch,
    EmptyDefinition,
    PrototypeWithParent,
    MissingParent,
    UnknownParent,
    SelfParent,
    Cycle,
    NoPrototype,
    ConduitOnPrototype,
    MetonymyAttachment,
    MetaphorExtendsMetaphor,
    FeaturesWithoutMetaphor,
    EmptyFeatureText,
    DuplicateFeatureId,
    JudgementsOnNonMetaphor,
    SlippageIncomplete,
    SlippageMinimumUnmet,
    ModifiedTextMismatch,
    SplitIncomplete,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::vector<SenseIndex> senses;
    std::string message;

    bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

/// Checks every structural and slippage invariant of a word annotation.
/// Violations are returned as data; an empty report means the annotation is valid.
ValidationReport validate(const WordAnnotation& annotation);

bool is_valid(const WordAnnotation& annotation);

std::string describe(const Violation& violation);

/// Connected components of the forest, one per prototype. Members and clusters are sorted.
/// Throws DataError when the annotation is not valid.
HomonymyPartition partition(const WordAnnotation& annotation);

/// Partition computed from connectivity alone; does not require slippage to be valid.
HomonymyPartition partition_unchecked(const WordAnnotation& annotation);

}  // namespace chainnet
