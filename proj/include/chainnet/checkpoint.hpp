#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "chainnet/annotation_json.hpp"
#include "chainnet/biaffine.hpp"
#include "chainnet/mpd.hpp"
#include "chainnet/nn.hpp"

namespace chainnet {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary layout: magic "CHNTCKPT", u32 version, kind string, config JSON,
/// u64 FNV-1a fingerprint of the config text, u32 tensor count, then per
/// tensor its name, u64 rows, u64 cols and column-major doubles. Integers
/// and doubles are little-endian.
void save_checkpoint(const std::filesystem::path& path, const std::string& kind, const Json& config,
                     const std::vector<ConstParameter>& tensors);

struct LoadedCheckpoint {
    std::string kind;
    Json config;
    std::vector<std::pair<std::string, Eigen::MatrixXd>> tensors;
};

/// Throws DataError on a bad magic, version, fingerprint or truncated file.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

void save_mpd(const std::filesystem::path& path, const MpdModel& model);
void save_biaffine(const std::filesystem::path& path, const BiaffineModel& model);

/// Rebuilds the parser stored in a checkpoint ("mpd" or "biaffine").
std::unique_ptr<PolysemyParser> load_parser(const std::filesystem::path& path, Distance metric = Distance::Euclidean);

MpdModel load_mpd(const std::filesystem::path& path);
BiaffineModel load_biaffine(const std::filesystem::path& path);

}  // namespace chainnet
