#pragma once

#include <string>
#include <vector>

#include "chainnet/sense.hpp"

namespace chainnet {

struct PreprocessResult {
    WordAnnotation annotation;
    std::vector<std::string> warnings;
};

/// Replaces every split pair iA/iB by a single sense i.
///
/// The merged sense carries the annotation of the non-metaphorical half (half
/// A when both or neither are metaphors). If that half sits below its sibling
/// in the tree, the merged sense takes the sibling's position instead so that
/// no cycle is created. Edges into either half are redirected to i, and the
/// features of both halves are pooled so redirected metaphors keep their
/// slippage; features a metaphor never judged are recorded as lost.
PreprocessResult merge_split(const WordAnnotation& annotation);

/// Removes virtual senses, re-parenting their children to the virtual
/// sense's parent with their own labels. Children of a virtual prototype
/// become prototypes. Parents that end up extended past the default
/// attachment rules are marked as conduits.
PreprocessResult strip_virtual(const WordAnnotation& annotation);

/// merge_split followed by strip_virtual: the training-data preparation.
PreprocessResult preprocess(const WordAnnotation& annotation);

}  // namespace chainnet
