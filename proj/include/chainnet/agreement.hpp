#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chainnet/annotation_json.hpp"
#include "chainnet/parse.hpp"
#include "chainnet/sense.hpp"

namespace chainnet {

/// Hubert-Arabie adjusted Rand index. Throws UsageError when the two
/// partitions do not cover the same senses.
double adjusted_rand(const HomonymyPartition& a, const HomonymyPartition& b);

/// Fleiss' kappa for items rated by the same number of raters.
/// counts[i][c] = raters who put item i in category c. Returns nullopt for no
/// items; 1 when agreement is perfect even if only one category occurs.
std::optional<double> fleiss_kappa(const std::vector<std::vector<int>>& counts);

enum class Filter { All, AgreePrototype, AgreeConnections };
std::string_view to_string(Filter filter);
Filter parse_filter(std::string_view text);

/// One word as seen by several annotators. `items` are the senses that every
/// annotator marked as known; parses cover all senses of the word.
struct AlignedWord {
    std::string word;
    std::vector<SenseIndex> items;
    std::vector<Parse> parses;
    std::vector<HomonymyPartition> partitions;
};

/// Lines up annotator corpora on their shared words. Words any annotator
/// marked unknown are dropped, as are senses any annotator marked unknown.
/// Throws UsageError for fewer than two corpora or mismatched sense sets.
std::vector<AlignedWord> align(const std::vector<std::vector<WordAnnotation>>& corpora);

struct Agreement {
    std::optional<double> percent;
    std::optional<double> kappa;
    std::size_t items = 0;
};

struct LabelAgreement {
    Filter filter = Filter::All;
    std::size_t words = 0;
    /// Indexed by LabelKind: binary agreement on "is this category".
    std::array<Agreement, kLabelCount> per_category;
    Agreement any;
};

/// Mean pairwise percentage agreement and Fleiss' kappa over sense labels.
/// AgreePrototype keeps words where all annotators chose the same
/// prototypes. AgreeConnections keeps, for each annotator pair, the senses
/// both attached to the same place; kappa, which pools all annotators,
/// keeps senses attached identically by everyone.
LabelAgreement label_agreement(const std::vector<AlignedWord>& words, Filter filter);

/// Pairwise undirected attachment agreement in percent (UUAS, or ULAS when
/// `labelled`). Filter::AgreeConnections is not meaningful here.
std::optional<double> attachment_agreement(const std::vector<AlignedWord>& words, bool labelled, Filter filter);

/// Per-item attachment scores for one ordered pair of parses of the same word.
struct PairScore {
    double los = 0;
    double uuas = 0;
    double ulas = 0;
    std::size_t items = 0;
};

/// LOS, UUAS, ULAS as fractions in [0,1] over the listed items. UUAS credits
/// half for each direction in which an item's attachment appears among the
/// other parse's attachments; ULAS requires equal labels and both directions.
PairScore compare_parses(const Parse& a, const Parse& b, const std::vector<SenseIndex>& items);

/// Mean over words of the mean pairwise ARI; nullopt when there are no words.
std::optional<double> mean_adjusted_rand(const std::vector<AlignedWord>& words);

struct GranularityComparison {
    std::size_t words = 0;
    double fraction_differing = 0;
    double mean_clusters_a = 0;
    double mean_clusters_b = 0;
    /// Among differing words, the fraction where a strictly refines b.
    std::optional<double> fraction_finer;
};

/// Compares two clusterings of the same words (e.g. annotated vs etymological).
GranularityComparison compare_granularity(const std::map<std::string, HomonymyPartition>& a,
                                          const std::map<std::string, HomonymyPartition>& b);

/// "lemma<TAB>cluster;cluster" lines where clusters are comma-separated sense
/// indices, e.g. "bridge\t1,2,3;5;9".
std::map<std::string, HomonymyPartition> load_clusters(const std::filesystem::path& path);

struct AgreementReport {
    std::size_t annotators = 0;
    std::size_t words = 0;
    std::optional<double> ari;
    std::vector<LabelAgreement> labels;
    std::map<Filter, std::optional<double>> uuas;
    std::map<Filter, std::optional<double>> ulas;
};

AgreementReport agreement_report(const std::vector<std::vector<WordAnnotation>>& corpora,
                                 const std::vector<Filter>& filters);

Json to_json(const AgreementReport& report);
std::string format_report(const AgreementReport& report);

}  // namespace chainnet
