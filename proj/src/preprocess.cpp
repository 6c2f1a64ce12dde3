#include "chainnet/preprocess.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace chainnet {

namespace {

struct FeatureOrigin {
    SenseIndex owner;
    int id;
    auto operator<=>(const FeatureOrigin&) const = default;
};

// A sense being restructured. Features remember which original sense they
// were written for, and judgements remember which original sense's features
// they judge, so both survive re-parenting.
struct WorkSense {
    SenseAnnotation ann;
    std::vector<FeatureOrigin> origins;
    std::optional<SenseIndex> judged_owner;
};

std::vector<WorkSense> load(const WordAnnotation& a) {
    std::vector<WorkSense> out;
    out.reserve(a.senses.size());
    for (const auto& s : a.senses) {
        WorkSense w{s, {}, std::nullopt};
        for (const auto& f : s.features) w.origins.push_back({s.id(), f.id});
        if (s.label.kind == LabelKind::Metaphor) w.judged_owner = s.label.parent;
        out.push_back(std::move(w));
    }
    return out;
}

WorkSense* find(std::vector<WorkSense>& senses, const SenseIndex& id) {
    for (auto& w : senses) {
        if (w.ann.id() == id) return &w;
    }
    return nullptr;
}

bool is_descendant(const std::vector<WorkSense>& senses, SenseIndex node, const SenseIndex& ancestor) {
    std::set<SenseIndex> seen;
    for (;;) {
        auto it = std::find_if(senses.begin(), senses.end(),
                               [&](const WorkSense& w) { return w.ann.id() == node; });
        if (it == senses.end() || !it->ann.label.parent || !seen.insert(node).second) return false;
        node = *it->ann.label.parent;
        if (node == ancestor) return true;
    }
}

void append_features(WorkSense& into, const WorkSense& from) {
    for (std::size_t i = 0; i < from.ann.features.size(); ++i) {
        into.ann.features.push_back(from.ann.features[i]);
        into.origins.push_back(from.origins[i]);
    }
}

void redirect_children(std::vector<WorkSense>& senses, const SenseIndex& from, const SenseIndex& to) {
    for (auto& w : senses) {
        if (w.ann.label.parent == from) w.ann.label.parent = to;
    }
}

WordAnnotation finalize(const WordAnnotation& original, std::vector<WorkSense> senses) {
    std::set<SenseIndex> metaphor_parents;
    for (const auto& w : senses) {
        if (w.ann.label.kind == LabelKind::Metaphor && w.ann.label.parent) {
            metaphor_parents.insert(*w.ann.label.parent);
        }
    }

    // Features: dropped where no metaphor needs them, ids made unique where
    // pooling brought two sets together.
    std::map<SenseIndex, std::map<FeatureOrigin, int>> feature_ids;
    for (auto& w : senses) {
        if (!metaphor_parents.contains(w.ann.id())) {
            w.ann.features.clear();
            w.origins.clear();
            continue;
        }
        std::set<int> used;
        std::vector<std::size_t> clashes;
        for (std::size_t i = 0; i < w.ann.features.size(); ++i) {
            if (!used.insert(w.ann.features[i].id).second) clashes.push_back(i);
        }
        int next = used.empty() ? 1 : *used.rbegin() + 1;
        for (auto i : clashes) w.ann.features[i].id = next++;
        auto& ids = feature_ids[w.ann.id()];
        for (std::size_t i = 0; i < w.ann.features.size(); ++i) {
            ids[w.origins[i]] = w.ann.features[i].id;
        }
    }

    for (auto& w : senses) {
        auto& ann = w.ann;
        if (ann.label.kind != LabelKind::Metaphor || !ann.label.parent) {
            ann.judgements.clear();
            continue;
        }
        const auto* parent = find(senses, *ann.label.parent);
        const auto& ids = feature_ids[*ann.label.parent];
        std::vector<FeatureJudgement> rebuilt;
        std::set<int> judged;
        for (const auto& j : ann.judgements) {
            if (!w.judged_owner) break;
            auto it = ids.find({*w.judged_owner, j.feature_id});
            if (it == ids.end() || judged.contains(it->second)) continue;
            auto copy = j;
            copy.feature_id = it->second;
            judged.insert(it->second);
            rebuilt.push_back(std::move(copy));
        }
        if (parent) {
            for (const auto& f : parent->ann.features) {
                if (!judged.contains(f.id)) rebuilt.push_back({f.id, Verdict::Lost, std::nullopt});
            }
        }
        ann.judgements = std::move(rebuilt);
    }

    for (auto& w : senses) {
        if (w.ann.label.kind == LabelKind::Prototype) w.ann.conduit = false;
    }
    for (const auto& w : senses) {
        if (w.ann.label.kind == LabelKind::Prototype || !w.ann.label.parent) continue;
        auto* p = find(senses, *w.ann.label.parent);
        if (!p || p->ann.label.kind == LabelKind::Prototype) continue;
        const bool needs_conduit = w.ann.label.kind == LabelKind::Metonymy ||
                                   p->ann.label.kind == LabelKind::Metaphor;
        if (needs_conduit) p->ann.conduit = true;
    }

    WordAnnotation out{original.word, original.annotator, {}, original.word_known};
    out.senses.reserve(senses.size());
    for (auto& w : senses) out.senses.push_back(std::move(w.ann));
    return out;
}

}  // namespace

PreprocessResult merge_split(const WordAnnotation& annotation) {
    PreprocessResult result;
    auto senses = load(annotation);

    std::set<int> ordinals;
    for (const auto& w : senses) {
        if (w.ann.id().is_split_half()) ordinals.insert(w.ann.id().ordinal());
    }
    if (ordinals.empty()) {
        result.annotation = annotation;
        return result;
    }

    for (int ordinal : ordinals) {
        const auto merged_id = SenseIndex::plain(ordinal);
        auto* a = find(senses, SenseIndex::split_a(ordinal));
        auto* b = find(senses, SenseIndex::split_b(ordinal));
        if (!a || !b) {
            auto* lone = a ? a : b;
            result.warnings.push_back(annotation.word + ": split half " + lone->ann.id().to_string() +
                                      " has no sibling; renamed to " + merged_id.to_string());
            const auto old_id = lone->ann.id();
            lone->ann.sense.id = merged_id;
            lone->ann.sense.is_split_half = false;
            redirect_children(senses, old_id, merged_id);
            continue;
        }

        const bool a_metaphor = a->ann.label.kind == LabelKind::Metaphor;
        const bool b_metaphor = b->ann.label.kind == LabelKind::Metaphor;
        WorkSense* kept = a;
        if (a_metaphor && b_metaphor) {
            result.warnings.push_back(annotation.word + ": both halves of " + merged_id.to_string() +
                                      " are metaphors; keeping half A");
        } else if (a_metaphor) {
            kept = b;
        }
        WorkSense* other = kept == a ? b : a;

        // The merged sense must not end up below one of its own descendants.
        WorkSense* position = kept;
        if (is_descendant(senses, kept->ann.id(), other->ann.id())) {
            position = other;
            result.warnings.push_back(annotation.word + ": half " + kept->ann.id().to_string() +
                                      " descends from " + other->ann.id().to_string() +
                                      "; merged sense " + merged_id.to_string() +
                                      " takes the upper half's attachment");
        }

        WorkSense merged;
        merged.ann.sense = kept->ann.sense;
        merged.ann.sense.id = merged_id;
        merged.ann.sense.is_split_half = false;
        merged.ann.label = position->ann.label;
        merged.ann.conduit = kept->ann.conduit || other->ann.conduit;
        merged.ann.judgements = position->ann.judgements;
        merged.judged_owner = position->judged_owner;
        append_features(merged, *kept);
        append_features(merged, *other);

        const auto a_id = a->ann.id();
        const auto b_id = b->ann.id();
        const auto insert_at = std::min(a - senses.data(), b - senses.data());
        std::erase_if(senses, [&](const WorkSense& w) { return w.ann.id() == a_id || w.ann.id() == b_id; });
        redirect_children(senses, a_id, merged_id);
        redirect_children(senses, b_id, merged_id);
        if (merged.ann.label.parent == a_id || merged.ann.label.parent == b_id) {
            // Only reachable when the halves form a cycle, which valid input excludes.
            merged.ann.label = SenseLabel::prototype();
        }
        senses.insert(senses.begin() + insert_at, std::move(merged));
    }

    result.annotation = finalize(annotation, std::move(senses));
    return result;
}

PreprocessResult strip_virtual(const WordAnnotation& annotation) {
    PreprocessResult result;
    const bool any_virtual = std::any_of(annotation.senses.begin(), annotation.senses.end(),
                                         [](const SenseAnnotation& s) { return s.id().is_virtual(); });
    if (!any_virtual) {
        result.annotation = annotation;
        return result;
    }

    auto senses = load(annotation);
    for (;;) {
        auto it = std::find_if(senses.begin(), senses.end(),
                               [](const WorkSense& w) { return w.ann.id().is_virtual(); });
        if (it == senses.end()) break;
        WorkSense removed = std::move(*it);
        senses.erase(it);
        const auto removed_id = removed.ann.id();

        if (removed.ann.label.kind == LabelKind::Prototype || !removed.ann.label.parent) {
            bool any_child = false;
            for (auto& w : senses) {
                if (w.ann.label.parent != removed_id) continue;
                any_child = true;
                w.ann.label = SenseLabel::prototype();
                w.judged_owner.reset();
            }
            if (any_child) {
                result.warnings.push_back(annotation.word + ": virtual prototype " +
                                          removed_id.to_string() +
                                          " removed; its children become prototypes");
            }
            continue;
        }

        const auto new_parent = *removed.ann.label.parent;
        redirect_children(senses, removed_id, new_parent);
        if (auto* p = find(senses, new_parent)) append_features(*p, removed);
    }

    result.annotation = finalize(annotation, std::move(senses));
    return result;
}

PreprocessResult preprocess(const WordAnnotation& annotation) {
    auto merged = merge_split(annotation);
    auto stripped = strip_virtual(merged.annotation);
    merged.warnings.insert(merged.warnings.end(), stripped.warnings.begin(), stripped.warnings.end());
    return {std::move(stripped.annotation), std::move(merged.warnings)};
}

}  // namespace chainnet
