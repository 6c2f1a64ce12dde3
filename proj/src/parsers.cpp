#include "chainnet/parsers.hpp"

#include <algorithm>
#include <set>

#include "chainnet/decoding.hpp"
#include "chainnet/preprocess.hpp"

namespace chainnet {

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

ExampleSet make_examples(const std::vector<WordAnnotation>& annotations, const EmbeddingTable& table,
                         const std::vector<std::string>& words) {
    const std::set<std::string> wanted(words.begin(), words.end());
    ExampleSet out;
    for (const auto& annotation : annotations) {
        if (!wanted.empty() && !wanted.contains(annotation.word)) continue;
        auto prepared = preprocess(annotation);
        for (auto& w : prepared.warnings) out.warnings.push_back(std::move(w));
        Example ex;
        ex.gold = parse_from_annotation(prepared.annotation);
        ex.input.word = annotation.word;
        ex.input.senses = ex.gold.senses;
        bool complete = true;
        for (const auto& id : ex.input.senses) {
            const auto* v = table.find({annotation.word, id});
            if (!v) {
                complete = false;
                break;
            }
            ex.input.embeddings.push_back(*v);
        }
        if (!complete) {
            out.excluded.push_back(annotation.word);
            continue;
        }
        out.examples.push_back(std::move(ex));
    }
    return out;
}

WordInput make_input(const std::string& word, const std::vector<SenseIndex>& senses, const EmbeddingTable& table) {
    WordInput in{word, senses, {}};
    for (const auto& id : senses) in.embeddings.push_back(table.at({word, id}));
    return in;
}

Parse random_parse(const std::string& word, const std::vector<SenseIndex>& senses, Rng& rng) {
    const auto n = senses.size();
    if (n == 0) throw UsageError("cannot parse a word with no senses");
    std::vector<UndirectedEdge> edges;
    if (n == 2) {
        edges.push_back({0, 1, 0});
    } else if (n > 2) {
        std::vector<std::size_t> code(n - 2);
        for (auto& c : code) c = rng.below(n);
        std::vector<std::size_t> degree(n, 1);
        for (auto c : code) ++degree[c];
        for (auto c : code) {
            std::size_t leaf = 0;
            while (degree[leaf] != 1) ++leaf;
            edges.push_back({std::min(leaf, c), std::max(leaf, c), 0});
            --degree[leaf];
            --degree[c];
        }
        std::size_t u = 0;
        while (degree[u] != 1) ++u;
        std::size_t v = u + 1;
        while (degree[v] != 1) ++v;
        edges.push_back({u, v, 0});
    }
    const auto root = rng.below(n);
    std::vector<LabelKind> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = i == root ? LabelKind::Prototype : (rng.coin() ? LabelKind::Metonymy : LabelKind::Metaphor);
    }
    return orient_and_label(word, senses, edges, labels);
}

Rng RandomParser::stream_for(const std::string& word) const { return Rng::stream(seed_, fnv1a(word)); }

Parse RandomParser::predict(const WordInput& word) const {
    auto rng = stream_for(word.word);
    return random_parse(word.word, word.senses, rng);
}

std::vector<Parse> RandomParser::n_best(const WordInput& word, std::size_t n, std::vector<std::string>* warnings) const {
    auto rng = stream_for(word.word);
    const auto best = random_parse(word.word, word.senses, rng);
    constexpr int kAttempts = 1000;
    auto redecode = [&](const ParseEdge& edge) -> std::optional<Parse> {
        const auto banned = attachment_of(best, edge.dependent);
        for (int attempt = 0; attempt < kAttempts; ++attempt) {
            auto candidate = random_parse(word.word, word.senses, rng);
            bool uses = false;
            for (std::size_t i = 0; i < candidate.size() && !uses; ++i) uses = attachment_of(candidate, i) == banned;
            if (!uses) return candidate;
        }
        return std::nullopt;
    };
    return n_best_variants(best, n, redecode, false, warnings);
}

}  // namespace chainnet
