#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace chainnet {

struct DatasetSplit {
    std::vector<std::string> train;
    std::vector<std::string> dev;
    std::vector<std::string> test;

    bool operator==(const DatasetSplit&) const = default;
};

/// Unstratified 80:10:10 split of the distinct input words, deterministic in
/// the seed. Dev and test each get round(n/10) words. Throws UsageError for
/// fewer than 10 distinct words.
DatasetSplit split_dataset(std::vector<std::string> words, std::uint64_t seed);

void save_split(const std::filesystem::path& path, const DatasetSplit& split, std::uint64_t seed);
DatasetSplit load_split(const std::filesystem::path& path);

}  // namespace chainnet
