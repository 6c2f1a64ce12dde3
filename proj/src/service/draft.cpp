#include "chainnet/service/draft.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace chainnet {

const DraftSense* Draft::find(const SenseIndex& id) const {
    for (const auto& s : senses) {
        if (s.record.id == id) return &s;
    }
    return nullptr;
}

DraftSense* Draft::find(const SenseIndex& id) {
    return const_cast<DraftSense*>(static_cast<const Draft*>(this)->find(id));
}

Draft empty_draft(const std::string& word, const std::vector<InventorySense>& senses) {
    Draft d;
    d.word = word;
    for (const auto& s : senses) d.senses.push_back({s.record, std::nullopt, std::nullopt, false, {}, {}});
    return d;
}

Draft draft_from_annotation(const WordAnnotation& annotation) {
    Draft d{annotation.word, annotation.annotator, annotation.word_known, {}};
    for (const auto& s : annotation.senses) {
        d.senses.push_back({s.sense, s.label.kind, s.label.parent, s.conduit, s.features, s.judgements});
    }
    return d;
}

Json to_json(const Draft& draft) {
    Json j;
    j["word"] = draft.word;
    j["annotator"] = draft.annotator;
    j["word_known"] = draft.word_known;
    Json senses = Json::array();
    for (const auto& s : draft.senses) {
        SenseAnnotation full{s.record, {s.label.value_or(LabelKind::Prototype), s.parent}, s.conduit, s.features,
                             s.judgements};
        Json row = to_json(full);
        if (!s.label) row["label"] = nullptr;
        senses.push_back(std::move(row));
    }
    j["senses"] = std::move(senses);
    return j;
}

Draft draft_from_json(const Json& doc) {
    if (!doc.is_object()) throw DataError("draft must be a JSON object");
    Json filled = doc;
    if (!filled.contains("senses") || !filled.at("senses").is_array()) throw DataError("draft needs a 'senses' array");
    std::vector<bool> labelled;
    for (auto& row : filled.at("senses")) {
        if (!row.is_object()) throw DataError("draft senses must be objects");
        const bool has = row.contains("label") && !row.at("label").is_null();
        labelled.push_back(has);
        if (!has) row["label"] = "prototype";
    }
    if (!filled.contains("word")) filled["word"] = "";
    const auto annotation = word_annotation_from_json(filled);
    Draft d = draft_from_annotation(annotation);
    for (std::size_t i = 0; i < d.senses.size(); ++i) {
        if (!labelled[i]) d.senses[i].label.reset();
    }
    return d;
}

std::optional<WordAnnotation> to_annotation(const Draft& draft) {
    WordAnnotation a{draft.word, draft.annotator, {}, draft.word_known};
    for (const auto& s : draft.senses) {
        if (!s.label) return std::nullopt;
        if (*s.label != LabelKind::Prototype && !s.parent) return std::nullopt;
        a.senses.push_back({s.record, {*s.label, *s.label == LabelKind::Prototype ? std::nullopt : s.parent}, s.conduit,
                            s.features, s.judgements});
    }
    return a;
}

namespace {

// Every sense reachable from `root` through parent links, root included.
std::set<SenseIndex> subtree(const Draft& draft, const SenseIndex& root) {
    std::map<SenseIndex, std::vector<SenseIndex>> children;
    for (const auto& s : draft.senses) {
        if (s.parent && s.label != LabelKind::Prototype) children[*s.parent].push_back(s.record.id);
    }
    std::set<SenseIndex> seen{root};
    std::deque<SenseIndex> queue{root};
    while (!queue.empty()) {
        const auto cur = queue.front();
        queue.pop_front();
        for (const auto& c : children[cur]) {
            if (seen.insert(c).second) queue.push_back(c);
        }
    }
    return seen;
}

bool is_conduit(const DraftSense& s) { return s.conduit && s.label && *s.label != LabelKind::Prototype; }

bool slippage_met(const std::vector<FeatureJudgement>& judgements) {
    bool modified = false, kept = false, lost = false;
    for (const auto& j : judgements) {
        modified |= j.verdict == Verdict::Modified;
        kept |= j.verdict == Verdict::Kept;
        lost |= j.verdict == Verdict::Lost;
    }
    return modified || (kept && lost);
}

std::vector<std::string> missing_parts(const Draft& draft, const DraftSense& s) {
    std::vector<std::string> missing;
    if (!s.label) {
        missing.push_back("label");
    } else if (*s.label != LabelKind::Prototype) {
        const auto* parent = s.parent ? draft.find(*s.parent) : nullptr;
        if (!parent || *s.parent == s.record.id) {
            missing.push_back("parent");
        } else if (*s.label == LabelKind::Metaphor) {
            bool judged = !parent->features.empty() && s.judgements.size() == parent->features.size();
            for (const auto& f : parent->features) {
                auto it = std::find_if(s.judgements.begin(), s.judgements.end(),
                                       [&](const FeatureJudgement& j) { return j.feature_id == f.id; });
                if (it == s.judgements.end() ||
                    (it->verdict == Verdict::Modified && (!it->modified_text || it->modified_text->empty()))) {
                    judged = false;
                }
            }
            if (!judged || !slippage_met(s.judgements)) missing.push_back("judgements");
        }
    }
    const bool extended_by_metaphor = std::any_of(draft.senses.begin(), draft.senses.end(), [&](const DraftSense& o) {
        return o.label == LabelKind::Metaphor && o.parent == s.record.id;
    });
    const bool features_ok = !s.features.empty() && std::all_of(s.features.begin(), s.features.end(),
                                                                 [](const Feature& f) { return !f.text.empty(); });
    if (extended_by_metaphor && !features_ok) missing.push_back("features");
    return missing;
}

}  // namespace

ValidationResponse check_draft(const Draft& draft) {
    ValidationResponse out;
    out.complete = true;
    for (const auto& s : draft.senses) {
        SenseStatus status;
        status.id = s.record.id;
        status.missing = missing_parts(draft, s);
        status.complete = status.missing.empty();
        out.complete &= status.complete;
        const auto own = subtree(draft, s.record.id);
        for (const auto& t : draft.senses) {
            if (own.contains(t.record.id) || !t.label) continue;
            const bool conduit = is_conduit(t);
            if (*t.label == LabelKind::Prototype || conduit) status.metonymy_parents.push_back(t.record.id);
            if (*t.label != LabelKind::Metaphor || conduit) status.metaphor_parents.push_back(t.record.id);
        }
        out.senses.push_back(std::move(status));
    }
    // Structural checks run on a stand-in where unfinished rows are bare prototypes.
    WordAnnotation standin{draft.word, draft.annotator, {}, draft.word_known};
    for (const auto& s : draft.senses) {
        const bool usable = s.label && (*s.label == LabelKind::Prototype || s.parent);
        if (usable) {
            standin.senses.push_back({s.record, {*s.label, *s.label == LabelKind::Prototype ? std::nullopt : s.parent},
                                      s.conduit, s.features, s.judgements});
        } else {
            standin.senses.push_back({s.record, SenseLabel::prototype(), false, s.features, {}});
        }
    }
    if (!standin.senses.empty()) {
        for (auto& v : validate(standin)) {
            // Rows that are merely unfinished are reported through completeness instead.
            if (!out.complete && (v.kind == ViolationKind::SlippageIncomplete ||
                                  v.kind == ViolationKind::SlippageMinimumUnmet ||
                                  v.kind == ViolationKind::FeaturesWithoutMetaphor)) {
                continue;
            }
            out.violations.push_back(std::move(v));
        }
    } else {
        out.complete = false;
    }
    out.submittable = out.complete && out.violations.empty();
    return out;
}

Json to_json(const ValidationResponse& r) {
    auto ids = [](const std::vector<SenseIndex>& v) {
        Json a = Json::array();
        for (const auto& id : v) a.push_back(id.to_string());
        return a;
    };
    Json senses = Json::array();
    for (const auto& s : r.senses) {
        senses.push_back(Json{{"id", s.id.to_string()},
                              {"complete", s.complete},
                              {"missing", s.missing},
                              {"allowed_parents", Json{{"metaphor", ids(s.metaphor_parents)},
                                                       {"metonymy", ids(s.metonymy_parents)}}}});
    }
    Json violations = Json::array();
    for (const auto& v : r.violations) {
        violations.push_back(Json{{"kind", std::string(to_string(v.kind))}, {"senses", ids(v.senses)},
                                  {"message", v.message}});
    }
    return Json{{"complete", r.complete},
                {"submittable", r.submittable},
                {"senses", std::move(senses)},
                {"violations", std::move(violations)}};
}

EditOp edit_op_from_json(const Json& doc) {
    if (!doc.is_object() || !doc.contains("op") || !doc.at("op").is_string()) {
        throw DataError("edit needs an 'op' string");
    }
    const auto name = doc.at("op").get<std::string>();
    EditOp op;
    auto text = [&](const char* key) {
        if (!doc.contains(key)) return std::string{};
        if (!doc.at(key).is_string()) throw DataError(std::string("field '") + key + "' must be a string");
        return doc.at(key).get<std::string>();
    };
    if (doc.contains("sense") && !doc.at("sense").is_null()) op.sense = SenseIndex::parse(text("sense"));
    if (name == "split") {
        op.kind = EditOp::Kind::Split;
        op.definition = text("definition_a");
        op.definition_b = text("definition_b");
    } else if (name == "merge") {
        op.kind = EditOp::Kind::Merge;
    } else if (name == "add_virtual") {
        op.kind = EditOp::Kind::AddVirtual;
        op.definition = text("definition");
    } else if (name == "delete_virtual") {
        op.kind = EditOp::Kind::DeleteVirtual;
    } else if (name == "mark_unknown") {
        op.kind = EditOp::Kind::MarkUnknown;
        if (doc.contains("known")) {
            if (!doc.at("known").is_boolean()) throw DataError("field 'known' must be a boolean");
            op.known = doc.at("known").get<bool>();
        }
    } else {
        throw DataError("unknown edit op '" + name + "'");
    }
    return op;
}

Json to_json(const EditOp& op) {
    Json j;
    switch (op.kind) {
        case EditOp::Kind::Split:
            j["op"] = "split";
            j["definition_a"] = op.definition;
            j["definition_b"] = op.definition_b;
            break;
        case EditOp::Kind::Merge: j["op"] = "merge"; break;
        case EditOp::Kind::AddVirtual:
            j["op"] = "add_virtual";
            j["definition"] = op.definition;
            break;
        case EditOp::Kind::DeleteVirtual: j["op"] = "delete_virtual"; break;
        case EditOp::Kind::MarkUnknown:
            j["op"] = "mark_unknown";
            j["known"] = op.known;
            break;
    }
    if (op.sense) j["sense"] = op.sense->to_string();
    return j;
}

namespace {

void detach(Draft& draft, const std::set<SenseIndex>& removed) {
    for (auto& s : draft.senses) {
        if (s.parent && removed.contains(*s.parent)) {
            s.parent.reset();
            s.judgements.clear();
        }
    }
}

std::vector<DraftSense>::iterator row(Draft& draft, const SenseIndex& id) {
    return std::find_if(draft.senses.begin(), draft.senses.end(), [&](const DraftSense& s) { return s.record.id == id; });
}

const SenseIndex& need_sense(const EditOp& op) {
    if (!op.sense) throw UsageError("this edit needs a 'sense'");
    return *op.sense;
}

}  // namespace

void apply_edit(Draft& draft, const EditOp& op, const std::vector<InventorySense>* inventory) {
    switch (op.kind) {
        case EditOp::Kind::Split: {
            const auto& id = need_sense(op);
            auto it = row(draft, id);
            if (it == draft.senses.end()) throw UsageError("no sense " + id.to_string() + " to split");
            if (!id.is_plain()) throw UsageError("only inventory senses can be split");
            const SenseRecord base = it->record;
            auto half = [&](SenseIndex half_id, const std::string& definition) {
                SenseRecord r = base;
                r.id = half_id;
                r.is_split_half = true;
                r.definition = definition.empty() ? base.definition : definition;
                return DraftSense{r, std::nullopt, std::nullopt, false, {}, {}};
            };
            const auto a = half(SenseIndex::split_a(id.ordinal()), op.definition);
            const auto b = half(SenseIndex::split_b(id.ordinal()), op.definition_b);
            it = draft.senses.erase(it);
            it = draft.senses.insert(it, b);
            draft.senses.insert(it, a);
            detach(draft, {id});
            return;
        }
        case EditOp::Kind::Merge: {
            const auto& id = need_sense(op);
            const int ordinal = id.ordinal();
            if (id.is_virtual()) throw UsageError("virtual senses cannot be merged");
            const auto a = SenseIndex::split_a(ordinal);
            const auto b = SenseIndex::split_b(ordinal);
            auto ia = row(draft, a);
            if (ia == draft.senses.end() || row(draft, b) == draft.senses.end()) {
                throw UsageError("sense " + id.to_string() + " is not split");
            }
            SenseRecord merged = ia->record;
            merged.id = SenseIndex::plain(ordinal);
            merged.is_split_half = false;
            if (inventory && ordinal >= 1 && static_cast<std::size_t>(ordinal) <= inventory->size()) {
                merged.definition = (*inventory)[static_cast<std::size_t>(ordinal) - 1].record.definition;
            }
            const auto position = std::min(ia - draft.senses.begin(), row(draft, b) - draft.senses.begin());
            std::erase_if(draft.senses, [&](const DraftSense& s) { return s.record.id == a || s.record.id == b; });
            draft.senses.insert(draft.senses.begin() + position, DraftSense{merged, std::nullopt, std::nullopt, false, {}, {}});
            detach(draft, {a, b});
            return;
        }
        case EditOp::Kind::AddVirtual: {
            if (op.definition.empty()) throw UsageError("a virtual sense needs a definition");
            int next = 1;
            for (const auto& s : draft.senses) {
                if (s.record.id.is_virtual()) next = std::max(next, s.record.id.ordinal() + 1);
            }
            SenseRecord r;
            r.id = SenseIndex::virtual_sense(next);
            r.definition = op.definition;
            r.is_virtual = true;
            draft.senses.push_back({r, std::nullopt, std::nullopt, false, {}, {}});
            return;
        }
        case EditOp::Kind::DeleteVirtual: {
            const auto& id = need_sense(op);
            if (!id.is_virtual()) throw UsageError("sense " + id.to_string() + " is not virtual");
            auto it = row(draft, id);
            if (it == draft.senses.end()) throw UsageError("no sense " + id.to_string());
            draft.senses.erase(it);
            detach(draft, {id});
            return;
        }
        case EditOp::Kind::MarkUnknown: {
            if (!op.sense) {
                draft.word_known = op.known;
                return;
            }
            auto* s = draft.find(*op.sense);
            if (!s) throw UsageError("no sense " + op.sense->to_string());
            s->record.known = op.known;
            return;
        }
    }
}

}  // namespace chainnet
