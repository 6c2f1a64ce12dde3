#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "chainnet/sense.hpp"

namespace chainnet {

struct InventorySense {
    SenseRecord record;
    bool proper_noun = false;
};

/// Nominal senses per lemma, in lexicon order with ordinals 1..n.
class SenseInventory {
public:
    void add(const std::string& lemma, std::vector<InventorySense> senses);

    const std::map<std::string, std::vector<InventorySense>>& words() const { return words_; }
    const std::vector<InventorySense>* find(const std::string& lemma) const;
    bool contains(const std::string& lemma) const { return words_.contains(lemma); }
    std::size_t size() const { return words_.size(); }

    /// The sub-inventory holding only the listed lemmas.
    SenseInventory restrict(const std::vector<std::string>& lemmas) const;

private:
    std::map<std::string, std::vector<InventorySense>> words_;
};

/// JSON export: {"lemmas": [{"lemma": "...", "senses": [{"definition": "...",
/// "synonyms": [...], "proper_noun": false}, ...]}, ...]}.
SenseInventory load_inventory_json(const std::filesystem::path& path);

/// A WordNet database directory (index.noun + data.noun). Lemma underscores
/// become spaces; a sense is a proper noun iff its synset carries an
/// instance-hypernym pointer.
SenseInventory load_wordnet_dict(const std::filesystem::path& dir);

/// Dispatches on whether the path is a directory (WordNet) or a file (JSON).
SenseInventory load_inventory(const std::filesystem::path& path);

/// Keeps lemmas with 2-10 nominal senses, dropping single-letter wordforms,
/// wordforms containing whitespace or hyphens, and lemmas whose senses are
/// all proper nouns. Output is sorted.
std::vector<std::string> filter_words(const SenseInventory& inventory);

/// Optional "lemma weight" lines used to order an annotation queue.
std::map<std::string, double> load_word_weights(const std::filesystem::path& path);

/// Weighted sampling without replacement (Efraimidis-Spirakis keys).
std::vector<std::string> weighted_sample(const std::vector<std::string>& words,
                                         const std::map<std::string, double>& weights,
                                         std::size_t count, std::uint64_t seed);

}  // namespace chainnet
