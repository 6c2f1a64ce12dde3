#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chainnet/embeddings.hpp"
#include "chainnet/parse.hpp"
#include "chainnet/rng.hpp"

namespace chainnet {

/// What a parser sees of one word: its senses and their embeddings.
struct WordInput {
    std::string word;
    std::vector<SenseIndex> senses;
    std::vector<Eigen::VectorXd> embeddings;

    std::size_t size() const { return senses.size(); }
};

struct Example {
    WordInput input;
    Parse gold;
};

struct ExampleSet {
    std::vector<Example> examples;
    /// Words left out because a sense has no embedding.
    std::vector<std::string> excluded;
    std::vector<std::string> warnings;
};

/// Preprocesses gold annotations (splits merged, virtual senses stripped)
/// and pairs them with embeddings. Only words listed in `words` are kept
/// when it is non-empty; the output follows the order of `annotations`.
ExampleSet make_examples(const std::vector<WordAnnotation>& annotations, const EmbeddingTable& table,
                         const std::vector<std::string>& words = {});

/// Builds the parser input for a bare word without gold structure.
WordInput make_input(const std::string& word, const std::vector<SenseIndex>& senses, const EmbeddingTable& table);

class PolysemyParser {
public:
    virtual ~PolysemyParser() = default;
    virtual std::string name() const = 0;
    virtual Parse predict(const WordInput& word) const = 0;
    /// Up to n parses with the 1-best first (see n_best_variants).
    virtual std::vector<Parse> n_best(const WordInput& word, std::size_t n,
                                      std::vector<std::string>* warnings = nullptr) const = 0;
};

/// Uniform labelled rooted tree: a uniform Pruefer sequence, a uniform root
/// and uniform metaphor/metonymy labels. Always a single prototype.
Parse random_parse(const std::string& word, const std::vector<SenseIndex>& senses, Rng& rng);

/// Random baseline. Each word draws from its own stream of the seed, so
/// predictions do not depend on the order words are visited.
class RandomParser : public PolysemyParser {
public:
    explicit RandomParser(std::uint64_t seed) : seed_(seed) {}
    std::string name() const override { return "random"; }
    Parse predict(const WordInput& word) const override;
    /// Variants redraw until the banned edge is absent (bounded retries).
    std::vector<Parse> n_best(const WordInput& word, std::size_t n,
                              std::vector<std::string>* warnings = nullptr) const override;

private:
    Rng stream_for(const std::string& word) const;
    std::uint64_t seed_;
};

std::uint64_t fnv1a(std::string_view text);

}  // namespace chainnet
