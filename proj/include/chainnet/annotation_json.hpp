#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "chainnet/sense.hpp"

namespace chainnet {

using Json = nlohmann::ordered_json;

// Canonical interchange format; see schema/word_annotation.schema.json.
Json to_json(const WordAnnotation& annotation);
Json to_json(const SenseAnnotation& sense);
Json to_json(const SenseRecord& record);

WordAnnotation word_annotation_from_json(const Json& doc);
SenseAnnotation sense_annotation_from_json(const Json& doc);
SenseRecord sense_record_from_json(const Json& doc);

/// Reads annotations from a file holding a single document, a JSON array of
/// documents, or one document per line. Errors carry the file name and line.
std::vector<WordAnnotation> load_annotations(const std::filesystem::path& path);

/// Writes one document per line.
void save_annotations(const std::filesystem::path& path, const std::vector<WordAnnotation>& annotations);

std::string to_jsonl(const std::vector<WordAnnotation>& annotations);

}  // namespace chainnet
