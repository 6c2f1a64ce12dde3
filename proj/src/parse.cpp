#include "chainnet/parse.hpp"

#include <algorithm>

namespace chainnet {

std::size_t Parse::prototype_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), LabelKind::Prototype));
}

std::optional<std::size_t> Parse::position(const SenseIndex& id) const {
    for (std::size_t i = 0; i < senses.size(); ++i) {
        if (senses[i] == id) return i;
    }
    return std::nullopt;
}

Parse parse_from_annotation(const WordAnnotation& annotation) {
    Parse p;
    p.word = annotation.word;
    for (const auto& s : annotation.senses) p.senses.push_back(s.id());
    for (const auto& s : annotation.senses) {
        std::optional<std::size_t> head;
        if (s.label.kind != LabelKind::Prototype && s.label.parent) head = p.position(*s.label.parent);
        p.labels.push_back(head ? s.label.kind : LabelKind::Prototype);
        p.heads.push_back(head);
    }
    return p;
}

bool is_well_formed(const Parse& parse) {
    const auto n = parse.senses.size();
    if (n == 0 || parse.labels.size() != n || parse.heads.size() != n) return false;
    if (parse.prototype_count() == 0) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const bool proto = parse.labels[i] == LabelKind::Prototype;
        if (proto == parse.heads[i].has_value()) return false;
        if (parse.heads[i] && (*parse.heads[i] >= n || *parse.heads[i] == i)) return false;
    }
    for (std::size_t start = 0; start < n; ++start) {
        auto cur = parse.heads[start];
        for (std::size_t steps = 0; cur; ++steps) {
            if (steps > n) return false;
            cur = parse.heads[*cur];
        }
    }
    return true;
}

Json to_json(const Parse& parse) {
    Json j;
    j["word"] = parse.word;
    Json senses = Json::array();
    for (std::size_t i = 0; i < parse.size(); ++i) {
        Json s;
        s["id"] = parse.senses[i].to_string();
        s["label"] = std::string(to_string(parse.labels[i]));
        s["parent"] = parse.heads[i] ? Json(parse.senses[*parse.heads[i]].to_string()) : Json(nullptr);
        senses.push_back(std::move(s));
    }
    j["senses"] = std::move(senses);
    return j;
}

Parse parse_from_json(const Json& doc) {
    Parse p;
    p.word = doc.at("word").get<std::string>();
    std::vector<std::optional<SenseIndex>> parents;
    for (const auto& s : doc.at("senses")) {
        p.senses.push_back(SenseIndex::parse(s.at("id").get<std::string>()));
        p.labels.push_back(parse_label_kind(s.at("label").get<std::string>()));
        if (s.contains("parent") && !s.at("parent").is_null()) {
            parents.push_back(SenseIndex::parse(s.at("parent").get<std::string>()));
        } else {
            parents.push_back(std::nullopt);
        }
    }
    for (const auto& parent : parents) {
        if (!parent) {
            p.heads.push_back(std::nullopt);
            continue;
        }
        auto pos = p.position(*parent);
        if (!pos) throw DataError("parse of '" + p.word + "' references unknown sense " + parent->to_string());
        p.heads.push_back(pos);
    }
    return p;
}

Attachment attachment_of(const Parse& parse, std::size_t position) {
    const auto& self = parse.senses[position];
    if (!parse.heads[position]) return {std::nullopt, self};
    const auto& other = parse.senses[*parse.heads[position]];
    return other < self ? Attachment{other, self} : Attachment{self, other};
}

}  // namespace chainnet
