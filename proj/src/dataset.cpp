#include "chainnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "chainnet/rng.hpp"
#include "chainnet/sense.hpp"

namespace chainnet {

DatasetSplit split_dataset(std::vector<std::string> words, std::uint64_t seed) {
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    if (words.size() < 10) {
        throw UsageError("split_dataset needs at least 10 distinct words, got " + std::to_string(words.size()));
    }
    Rng rng(seed);
    rng.shuffle(words);

    const auto n = words.size();
    const auto tenth = static_cast<std::size_t>(std::llround(static_cast<double>(n) / 10.0));
    const auto n_train = n - 2 * tenth;

    DatasetSplit s;
    s.train.assign(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.dev.assign(words.begin() + static_cast<std::ptrdiff_t>(n_train),
                 words.begin() + static_cast<std::ptrdiff_t>(n_train + tenth));
    s.test.assign(words.begin() + static_cast<std::ptrdiff_t>(n_train + tenth), words.end());
    return s;
}

void save_split(const std::filesystem::path& path, const DatasetSplit& split, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw DataError(path.string() + ": cannot write");
    nlohmann::ordered_json doc;
    doc["seed"] = seed;
    doc["train"] = split.train;
    doc["dev"] = split.dev;
    doc["test"] = split.test;
    out << doc.dump(2) << '\n';
}

DatasetSplit load_split(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path.string() + ": cannot open");
    try {
        auto doc = nlohmann::json::parse(in);
        DatasetSplit s;
        s.train = doc.at("train").get<std::vector<std::string>>();
        s.dev = doc.at("dev").get<std::vector<std::string>>();
        s.test = doc.at("test").get<std::vector<std::string>>();
        return s;
    } catch (const std::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace chainnet
