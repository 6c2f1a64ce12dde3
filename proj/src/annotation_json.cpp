#include "chainnet/annotation_json.hpp"

#include <fstream>
#include <sstream>

namespace chainnet {

namespace {

const Json& require(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) {
        throw DataError(std::string("missing field '") + key + "'");
    }
    return doc.at(key);
}

std::string require_string(const Json& doc, const char* key) {
    const auto& v = require(doc, key);
    if (!v.is_string()) throw DataError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

bool optional_bool(const Json& doc, const char* key, bool fallback) {
    if (!doc.contains(key) || doc.at(key).is_null()) return fallback;
    if (!doc.at(key).is_boolean()) throw DataError(std::string("field '") + key + "' must be a boolean");
    return doc.at(key).get<bool>();
}

int require_int(const Json& doc, const char* key) {
    const auto& v = require(doc, key);
    if (!v.is_number_integer()) throw DataError(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

}  // namespace

Json to_json(const SenseRecord& record) {
    Json j;
    j["id"] = record.id.to_string();
    j["definition"] = record.definition;
    j["synonyms"] = record.synonyms;
    j["virtual"] = record.is_virtual;
    j["split_half"] = record.is_split_half;
    j["known"] = record.known;
    return j;
}

SenseRecord sense_record_from_json(const Json& doc) {
    SenseRecord r;
    r.id = SenseIndex::parse(require_string(doc, "id"));
    r.definition = require_string(doc, "definition");
    if (doc.contains("synonyms")) {
        for (const auto& s : doc.at("synonyms")) {
            if (!s.is_string()) throw DataError("synonyms must be strings");
            r.synonyms.push_back(s.get<std::string>());
        }
    }
    r.is_virtual = optional_bool(doc, "virtual", r.id.is_virtual());
    r.is_split_half = optional_bool(doc, "split_half", r.id.is_split_half());
    r.known = optional_bool(doc, "known", true);
    return r;
}

Json to_json(const SenseAnnotation& sense) {
    Json j = to_json(sense.sense);
    j["label"] = std::string(to_string(sense.label.kind));
    j["parent"] = sense.label.parent ? Json(sense.label.parent->to_string()) : Json(nullptr);
    j["conduit"] = sense.conduit;
    Json features = Json::array();
    for (const auto& f : sense.features) {
        features.push_back({{"id", f.id}, {"text", f.text}});
    }
    j["features"] = std::move(features);
    Json judgements = Json::array();
    for (const auto& jd : sense.judgements) {
        Json e;
        e["feature"] = jd.feature_id;
        e["verdict"] = std::string(to_string(jd.verdict));
        if (jd.modified_text) e["modified_text"] = *jd.modified_text;
        judgements.push_back(std::move(e));
    }
    j["judgements"] = std::move(judgements);
    return j;
}

SenseAnnotation sense_annotation_from_json(const Json& doc) {
    SenseAnnotation s;
    s.sense = sense_record_from_json(doc);
    s.label.kind = parse_label_kind(require_string(doc, "label"));
    if (doc.contains("parent") && !doc.at("parent").is_null()) {
        if (!doc.at("parent").is_string()) throw DataError("field 'parent' must be a string or null");
        s.label.parent = SenseIndex::parse(doc.at("parent").get<std::string>());
    }
    s.conduit = optional_bool(doc, "conduit", false);
    if (doc.contains("features")) {
        for (const auto& f : doc.at("features")) {
            s.features.push_back({require_int(f, "id"), require_string(f, "text")});
        }
    }
    if (doc.contains("judgements")) {
        for (const auto& jd : doc.at("judgements")) {
            FeatureJudgement fj;
            fj.feature_id = require_int(jd, "feature");
            fj.verdict = parse_verdict(require_string(jd, "verdict"));
            if (jd.contains("modified_text") && !jd.at("modified_text").is_null()) {
                fj.modified_text = require_string(jd, "modified_text");
            }
            s.judgements.push_back(std::move(fj));
        }
    }
    return s;
}

Json to_json(const WordAnnotation& annotation) {
    Json j;
    j["word"] = annotation.word;
    j["annotator"] = annotation.annotator;
    j["word_known"] = annotation.word_known;
    Json senses = Json::array();
    for (const auto& s : annotation.senses) senses.push_back(to_json(s));
    j["senses"] = std::move(senses);
    return j;
}

WordAnnotation word_annotation_from_json(const Json& doc) {
    WordAnnotation a;
    a.word = require_string(doc, "word");
    a.annotator = doc.contains("annotator") && doc.at("annotator").is_string()
                      ? doc.at("annotator").get<std::string>()
                      : std::string{};
    a.word_known = optional_bool(doc, "word_known", true);
    const auto& senses = require(doc, "senses");
    if (!senses.is_array()) throw DataError("field 'senses' must be an array");
    for (std::size_t i = 0; i < senses.size(); ++i) {
        try {
            a.senses.push_back(sense_annotation_from_json(senses[i]));
        } catch (const DataError& e) {
            throw DataError("word '" + a.word + "', sense " + std::to_string(i) + ": " + e.what());
        }
    }
    return a;
}

std::vector<WordAnnotation> load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path.string() + ": cannot open");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    std::vector<WordAnnotation> out;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return out;

    // A whole-file document (object or array) parses in one go; otherwise
    // fall back to one document per line.
    Json whole = Json::parse(text, nullptr, false);
    if (!whole.is_discarded()) {
        try {
            if (whole.is_array()) {
                for (const auto& d : whole) out.push_back(word_annotation_from_json(d));
            } else {
                out.push_back(word_annotation_from_json(whole));
            }
        } catch (const std::exception& e) {
            throw DataError(path.string() + ": " + e.what());
        }
        return out;
    }

    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(word_annotation_from_json(Json::parse(line)));
        } catch (const std::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::string to_jsonl(const std::vector<WordAnnotation>& annotations) {
    std::string out;
    for (const auto& a : annotations) {
        out += to_json(a).dump();
        out += '\n';
    }
    return out;
}

void save_annotations(const std::filesystem::path& path, const std::vector<WordAnnotation>& annotations) {
    std::ofstream out(path);
    if (!out) throw DataError(path.string() + ": cannot write");
    out << to_jsonl(annotations);
}

}  // namespace chainnet
