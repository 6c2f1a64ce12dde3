#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "chainnet/parse.hpp"
#include "chainnet/rng.hpp"
#include "chainnet/sense.hpp"

namespace chainnet::testing {

std::filesystem::path data_path(const std::string& name);

/// Loads tests/data/<name>.json (one annotation).
WordAnnotation fixture(const std::string& name);

struct ForestOptions {
    bool splits = false;
    bool virtuals = false;
    bool features = true;
    double unknown_rate = 0.0;
};

/// A random annotation with n inventory senses that passes validate().
/// Structure is a uniform-ish random forest; conduits are set wherever the
/// attachment rules need them.
WordAnnotation random_forest(Rng& rng, int n, const std::string& word, const ForestOptions& options = {});

/// Parse from (label, head position) pairs; head -1 is the root.
Parse make_parse(const std::string& word, const std::vector<std::pair<LabelKind, int>>& nodes);

/// Valid annotation from (label, head position) pairs over plain senses
/// 1..n. Metaphor parents get one feature, judged "modified" by each child.
WordAnnotation make_annotation(const std::string& word, const std::string& annotator,
                               const std::vector<std::pair<LabelKind, int>>& nodes);

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace chainnet::testing
