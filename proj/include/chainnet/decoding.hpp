#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chainnet/parse.hpp"

namespace chainnet {

inline constexpr double kForbidden = -std::numeric_limits<double>::infinity();

/// score(h, d) for head h and dependent d over node 0 (the synthetic root)
/// followed by the senses. Entries equal to kForbidden are unusable; the
/// diagonal and column 0 are ignored.
using ScoreMatrix = Eigen::MatrixXd;

struct Arborescence {
    /// head[d] for every node; head[0] == -1.
    std::vector<int> head;
    double total = 0;
};

/// Chu-Liu/Edmonds maximum spanning arborescence rooted at node 0. Throws
/// UsageError when some node cannot be reached with finite scores.
Arborescence max_arborescence(const ScoreMatrix& scores);

double arborescence_score(const ScoreMatrix& scores, const std::vector<int>& head);

struct UndirectedEdge {
    std::size_t a = 0;  // a < b
    std::size_t b = 0;
    double weight = 0;

    bool operator==(const UndirectedEdge&) const = default;
};

enum class Distance { Euclidean, Cosine };

Eigen::MatrixXd distance_matrix(const std::vector<Eigen::VectorXd>& points, Distance metric = Distance::Euclidean);

/// Kruskal minimum spanning tree over a symmetric weight matrix. Ties are
/// broken by (weight, a, b), so among equal-weight trees the lexicographically
/// smallest edge list wins. Entries equal to +infinity are banned edges;
/// returns nullopt if they disconnect the graph.
std::optional<std::vector<UndirectedEdge>> minimum_spanning_tree(const Eigen::MatrixXd& weights);

/// Minimum spanning tree over pairwise distances. Throws UsageError for no
/// points or mismatched dimensions.
std::vector<UndirectedEdge> undirected_mst(const std::vector<Eigen::VectorXd>& points,
                                           Distance metric = Distance::Euclidean);

/// Orients an undirected tree over the senses away from the prototype by
/// breadth-first search and copies the node labels onto the edges. The
/// first sense labelled prototype is the root; any other sense still
/// labelled prototype takes the larger of its metaphor/metonymy
/// probabilities (metaphor when none are given). Throws UsageError when no
/// sense is a prototype or the edges do not form a spanning tree.
Parse orient_and_label(const std::string& word, const std::vector<SenseIndex>& senses,
                       const std::vector<UndirectedEdge>& tree, const std::vector<LabelKind>& labels,
                       const std::vector<std::array<double, kLabelCount>>& probabilities = {});

/// An edge of a parse: `head` empty means the root attachment of a prototype.
struct ParseEdge {
    std::optional<std::size_t> head;
    std::size_t dependent = 0;
};

/// Re-decodes with one edge forbidden; nullopt when no tree avoids it.
using Redecoder = std::function<std::optional<Parse>(const ParseEdge&)>;

/// The parse itself followed by one re-decoded parse per edge, deduplicated
/// and capped at n. Root attachments are banned too when
/// `include_root_edges` is set. Edges whose removal leaves no tree are
/// skipped with a message appended to `warnings`.
std::vector<Parse> n_best_variants(const Parse& parse, std::size_t n, const Redecoder& redecode,
                                   bool include_root_edges, std::vector<std::string>* warnings = nullptr);

}  // namespace chainnet
