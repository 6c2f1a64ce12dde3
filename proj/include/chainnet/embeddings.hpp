#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chainnet/inventory.hpp"
#include "chainnet/sense.hpp"

namespace chainnet {

/// Sense id -> fixed-dimension real vector. The only model input.
class EmbeddingTable {
public:
    explicit EmbeddingTable(std::size_t dimension = 0) : dimension_(dimension) {}

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return vectors_.size(); }

    /// Throws DataError on a dimension mismatch or non-finite entry.
    void insert(const SenseId& id, Eigen::VectorXd vector);

    const Eigen::VectorXd* find(const SenseId& id) const;
    const Eigen::VectorXd& at(const SenseId& id) const;
    bool contains(const SenseId& id) const { return vectors_.contains(id); }

    const std::map<SenseId, Eigen::VectorXd>& entries() const { return vectors_; }

private:
    std::size_t dimension_;
    std::map<SenseId, Eigen::VectorXd> vectors_;
};

struct CoverageReport {
    std::vector<SenseId> missing;
    /// Words with at least one missing sense; excluded from parsing experiments.
    std::vector<std::string> excluded_words;
};

/// Reads "lemma#index v1 v2 ... vk" lines. The sidecar "<path>.json" holds
/// {"dimension": k}; without it the first row fixes the dimension.
EmbeddingTable load_embeddings(const std::filesystem::path& path);

/// Writes the line file and its sidecar. Values round-trip exactly.
void save_embeddings(const std::filesystem::path& path, const EmbeddingTable& table);

CoverageReport coverage(const EmbeddingTable& table, const SenseInventory& inventory);
CoverageReport coverage(const EmbeddingTable& table, const std::vector<WordAnnotation>& annotations);

}  // namespace chainnet
