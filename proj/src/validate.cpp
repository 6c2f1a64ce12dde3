#include "chainnet/validate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace chainnet {

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::EmptyAnnotation: return "empty annotation";
        case ViolationKind::DuplicateSense: return "duplicate sense id";
        case ViolationKind::IdFlagMismatch: return "sense id does not match virtual/split flags";
        case ViolationKind::EmptyDefinition: return "empty definition";
        case ViolationKind::PrototypeWithParent: return "prototype has a parent";
        case ViolationKind::MissingParent: return "derived sense has no parent";
        case ViolationKind::UnknownParent: return "parent is not a sense of this word";
        case ViolationKind::SelfParent: return "sense extends itself";
        case ViolationKind::Cycle: return "parent links form a cycle";
        case ViolationKind::NoPrototype: return "no prototype";
        case ViolationKind::ConduitOnPrototype: return "conduit on a prototype";
        case ViolationKind::MetonymyAttachment: return "metonymy extends a non-prototype without conduit";
        case ViolationKind::MetaphorExtendsMetaphor: return "metaphor extends metaphor without conduit";
        case ViolationKind::FeaturesWithoutMetaphor: return "features on a sense no metaphor extends";
        case ViolationKind::EmptyFeatureText: return "empty feature text";
        case ViolationKind::DuplicateFeatureId: return "duplicate feature id";
        case ViolationKind::JudgementsOnNonMetaphor: return "judgements on a non-metaphor";
        case ViolationKind::SlippageIncomplete: return "slippage incomplete";
        case ViolationKind::SlippageMinimumUnmet: return "slippage minimum unmet";
        case ViolationKind::ModifiedTextMismatch: return "modified text present iff verdict is modified";
        case ViolationKind::SplitIncomplete: return "split sense incomplete";
    }
    return "unknown violation";
}

std::string describe(const Violation& violation) {
    std::string out(to_string(violation.kind));
    if (!violation.senses.empty()) {
        out += " [";
        for (std::size_t i = 0; i < violation.senses.size(); ++i) {
            if (i) out += ", ";
            out += violation.senses[i].to_string();
        }
        out += "]";
    }
    if (!violation.message.empty()) {
        out += ": " + violation.message;
    }
    return out;
}

namespace {

class Checker {
public:
    explicit Checker(const WordAnnotation& a) : a_(a) {}

    ValidationReport run() {
        if (a_.senses.empty()) {
            add(ViolationKind::EmptyAnnotation, {}, "word '" + a_.word + "' has no senses");
            return std::move(report_);
        }
        check_ids();
        check_labels();
        check_forest();
        check_attachment();
        check_features();
        check_judgements();
        check_splits();
        return std::move(report_);
    }

private:
    void add(ViolationKind kind, std::vector<SenseIndex> senses, std::string message = {}) {
        report_.push_back({kind, std::move(senses), std::move(message)});
    }

    const SenseAnnotation* parent_of(const SenseAnnotation& s) const {
        if (!s.label.parent || *s.label.parent == s.id()) return nullptr;
        return a_.find(*s.label.parent);
    }

    void check_ids() {
        std::set<SenseIndex> seen;
        for (const auto& s : a_.senses) {
            if (!seen.insert(s.id()).second) {
                add(ViolationKind::DuplicateSense, {s.id()});
            }
            if (s.sense.is_virtual != s.id().is_virtual() ||
                s.sense.is_split_half != s.id().is_split_half()) {
                add(ViolationKind::IdFlagMismatch, {s.id()});
            }
            if (s.sense.definition.empty()) {
                add(ViolationKind::EmptyDefinition, {s.id()});
            }
        }
    }

    void check_labels() {
        bool any_prototype = false;
        for (const auto& s : a_.senses) {
            if (s.label.kind == LabelKind::Prototype) {
                any_prototype = true;
                if (s.label.parent) add(ViolationKind::PrototypeWithParent, {s.id()});
                if (s.conduit) add(ViolationKind::ConduitOnPrototype, {s.id()});
                continue;
            }
            if (!s.label.parent) {
                add(ViolationKind::MissingParent, {s.id()});
            } else if (*s.label.parent == s.id()) {
                add(ViolationKind::SelfParent, {s.id()});
            } else if (!a_.find(*s.label.parent)) {
                add(ViolationKind::UnknownParent, {s.id(), *s.label.parent},
                    "parent " + s.label.parent->to_string() + " not found");
            }
        }
        if (!any_prototype) {
            add(ViolationKind::NoPrototype, {});
        }
    }

    void check_forest() {
        // Each sense has at most one parent, so following parent links from
        // any sense either reaches a root or enters a cycle.
        std::set<SenseIndex> reported;
        for (const auto& start : a_.senses) {
            std::vector<SenseIndex> path;
            std::set<SenseIndex> on_path;
            const SenseAnnotation* cur = &start;
            while (cur && cur->label.kind != LabelKind::Prototype) {
                if (!on_path.insert(cur->id()).second) {
                    auto first = std::find(path.begin(), path.end(), cur->id());
                    std::vector<SenseIndex> cycle(first, path.end());
                    std::sort(cycle.begin(), cycle.end());
                    if (!reported.contains(cycle.front())) {
                        for (const auto& id : cycle) reported.insert(id);
                        add(ViolationKind::Cycle, cycle);
                    }
                    break;
                }
                path.push_back(cur->id());
                cur = parent_of(*cur);
            }
        }
    }

    void check_attachment() {
        for (const auto& s : a_.senses) {
            if (s.label.kind == LabelKind::Prototype) continue;
            const auto* p = parent_of(s);
            if (!p || p->conduit) continue;
            if (s.label.kind == LabelKind::Metonymy && p->label.kind != LabelKind::Prototype) {
                add(ViolationKind::MetonymyAttachment, {s.id(), p->id()});
            }
            if (s.label.kind == LabelKind::Metaphor && p->label.kind == LabelKind::Metaphor) {
                add(ViolationKind::MetaphorExtendsMetaphor, {s.id(), p->id()});
            }
        }
    }

    bool has_metaphor_child(const SenseAnnotation& s) const {
        return std::any_of(a_.senses.begin(), a_.senses.end(), [&](const SenseAnnotation& c) {
            return c.label.kind == LabelKind::Metaphor && c.label.parent == s.id() && &c != &s;
        });
    }

    void check_features() {
        for (const auto& s : a_.senses) {
            if (s.features.empty()) continue;
            if (!has_metaphor_child(s)) {
                add(ViolationKind::FeaturesWithoutMetaphor, {s.id()});
            }
            std::set<int> ids;
            for (const auto& f : s.features) {
                if (!ids.insert(f.id).second) {
                    add(ViolationKind::DuplicateFeatureId, {s.id()}, "feature " + std::to_string(f.id));
                }
                if (f.text.empty()) {
                    add(ViolationKind::EmptyFeatureText, {s.id()}, "feature " + std::to_string(f.id));
                }
            }
        }
    }

    void check_judgements() {
        for (const auto& s : a_.senses) {
            for (const auto& j : s.judgements) {
                const bool modified = j.verdict == Verdict::Modified;
                const bool has_text = j.modified_text.has_value();
                if (modified != has_text || (has_text && j.modified_text->empty())) {
                    add(ViolationKind::ModifiedTextMismatch, {s.id()},
                        "feature " + std::to_string(j.feature_id));
                }
            }
            if (s.label.kind != LabelKind::Metaphor) {
                if (!s.judgements.empty()) add(ViolationKind::JudgementsOnNonMetaphor, {s.id()});
                continue;
            }
            const auto* p = parent_of(s);
            if (p) {
                std::multiset<int> judged;
                for (const auto& j : s.judgements) judged.insert(j.feature_id);
                std::multiset<int> expected;
                for (const auto& f : p->features) expected.insert(f.id);
                if (judged != expected) {
                    add(ViolationKind::SlippageIncomplete, {s.id(), p->id()},
                        std::to_string(s.judgements.size()) + " judgements for " +
                            std::to_string(p->features.size()) + " parent features");
                }
            }
            auto count = [&](Verdict v) {
                return std::count_if(s.judgements.begin(), s.judgements.end(),
                                     [v](const FeatureJudgement& j) { return j.verdict == v; });
            };
            const bool minimum = count(Verdict::Modified) >= 1 ||
                                 (count(Verdict::Kept) >= 1 && count(Verdict::Lost) >= 1);
            if (!minimum) {
                add(ViolationKind::SlippageMinimumUnmet, {s.id()});
            }
        }
    }

    void check_splits() {
        for (const auto& s : a_.senses) {
            if (!s.id().is_split_half()) continue;
            if (!a_.find(s.id().sibling())) {
                add(ViolationKind::SplitIncomplete, {s.id()},
                    "missing sibling " + s.id().sibling().to_string());
            }
            if (s.id().kind() == SenseIndex::Kind::SplitA &&
                a_.find(SenseIndex::plain(s.id().ordinal()))) {
                add(ViolationKind::SplitIncomplete, {s.id(), SenseIndex::plain(s.id().ordinal())},
                    "un-split sense still present");
            }
        }
    }

    const WordAnnotation& a_;
    ValidationReport report_;
};

}  // namespace

ValidationReport validate(const WordAnnotation& annotation) { return Checker(annotation).run(); }

bool is_valid(const WordAnnotation& annotation) { return validate(annotation).empty(); }

HomonymyPartition partition_unchecked(const WordAnnotation& annotation) {
    const auto n = annotation.senses.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = annotation.senses[i];
        if (s.label.kind == LabelKind::Prototype || !s.label.parent) continue;
        if (auto p = annotation.position(*s.label.parent)) {
            parent[find(i)] = find(*p);
        }
    }
    std::map<std::size_t, std::size_t> cluster_of_root;
    HomonymyPartition out{annotation.word, {}};
    for (std::size_t i = 0; i < n; ++i) {
        const auto root = find(i);
        auto [it, inserted] = cluster_of_root.try_emplace(root, out.clusters.size());
        if (inserted) out.clusters.emplace_back();
        out.clusters[it->second].push_back(annotation.senses[i].id());
    }
    for (auto& c : out.clusters) std::sort(c.begin(), c.end());
    std::sort(out.clusters.begin(), out.clusters.end());
    return out;
}

HomonymyPartition partition(const WordAnnotation& annotation) {
    if (auto report = validate(annotation); !report.empty()) {
        throw DataError("cannot partition invalid annotation of '" + annotation.word +
                        "': " + describe(report.front()));
    }
    return partition_unchecked(annotation);
}

}  // namespace chainnet
