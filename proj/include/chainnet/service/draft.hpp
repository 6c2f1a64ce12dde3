#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chainnet/annotation_json.hpp"
#include "chainnet/inventory.hpp"
#include "chainnet/sense.hpp"
#include "chainnet/validate.hpp"

namespace chainnet {

/// A sense row while it is being annotated: label and parent may be unset.
struct DraftSense {
    SenseRecord record;
    std::optional<LabelKind> label;
    std::optional<SenseIndex> parent;
    bool conduit = false;
    std::vector<Feature> features;
    std::vector<FeatureJudgement> judgements;

    bool operator==(const DraftSense&) const = default;
};

/// A partial WordAnnotation. Same JSON shape, with "label" and "parent"
/// allowed to be null or absent.
struct Draft {
    std::string word;
    std::string annotator;
    bool word_known = true;
    std::vector<DraftSense> senses;

    const DraftSense* find(const SenseIndex& id) const;
    DraftSense* find(const SenseIndex& id);

    bool operator==(const Draft&) const = default;
};

/// One row per inventory sense, nothing labelled yet.
Draft empty_draft(const std::string& word, const std::vector<InventorySense>& senses);
Draft draft_from_annotation(const WordAnnotation& annotation);

Json to_json(const Draft& draft);
/// Throws DataError when the document is not draft-shaped.
Draft draft_from_json(const Json& doc);

/// The full annotation when every sense has a label and every derived
/// sense a parent; nullopt otherwise.
std::optional<WordAnnotation> to_annotation(const Draft& draft);

struct SenseStatus {
    SenseIndex id;
    bool complete = false;
    /// What is still missing: "label", "parent", "features", "judgements".
    std::vector<std::string> missing;
    /// Senses this row may attach to under each derived label.
    std::vector<SenseIndex> metaphor_parents;
    std::vector<SenseIndex> metonymy_parents;
};

struct ValidationResponse {
    std::vector<SenseStatus> senses;
    ValidationReport violations;
    bool complete = false;
    bool submittable = false;
};

/// Completeness per row, structural violations and the attachment options
/// offered to each row. A metonym may attach to prototypes and conduits, a
/// metaphor to any non-metaphor and to conduits; a row never sees itself or
/// its own descendants.
ValidationResponse check_draft(const Draft& draft);

Json to_json(const ValidationResponse& response);

struct EditOp {
    enum class Kind { Split, Merge, AddVirtual, DeleteVirtual, MarkUnknown };
    Kind kind = Kind::Split;
    std::optional<SenseIndex> sense;
    std::string definition;    // add_virtual; split half A
    std::string definition_b;  // split half B
    bool known = false;        // mark_unknown: the new familiarity flag
};

/// {"op": "split", "sense": "1", "definition_a": "...", "definition_b": "..."},
/// {"op": "merge", "sense": "1"}, {"op": "add_virtual", "definition": "..."},
/// {"op": "delete_virtual", "sense": "V1"},
/// {"op": "mark_unknown", "sense": "3"} or {"op": "mark_unknown"} for the word,
/// with optional "known" (default false).
EditOp edit_op_from_json(const Json& doc);
Json to_json(const EditOp& op);

/// Applies an edit to the sense rows. Rows attached to removed senses lose
/// their parent and judgements. `inventory` supplies the original
/// definition when a split is merged back. Throws UsageError for an edit
/// that does not apply (merging a non-split sense, deleting a non-virtual
/// sense, unknown sense ids).
void apply_edit(Draft& draft, const EditOp& op, const std::vector<InventorySense>* inventory);

}  // namespace chainnet
