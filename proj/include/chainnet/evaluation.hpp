#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainnet/agreement.hpp"
#include "chainnet/annotation_json.hpp"
#include "chainnet/parsers.hpp"

namespace chainnet {

/// LOS, UUAS and ULAS in percent for one word.
struct WordScore {
    std::string word;
    double los = 0;
    double uuas = 0;
    double ulas = 0;
};

/// Throws UsageError when the two parses cover different senses.
WordScore score_parse(const Parse& predicted, const Parse& gold);

enum class Protocol { OneBest, NBest };
std::string_view to_string(Protocol protocol);

enum class Metric { Los, Uuas, Ulas };
std::string_view to_string(Metric metric);
double metric_of(const WordScore& score, Metric metric);

struct EvalResult {
    std::string model;
    Protocol protocol = Protocol::OneBest;
    std::vector<WordScore> words;
    double los = 0;
    double uuas = 0;
    double ulas = 0;
    std::vector<std::string> warnings;

    std::vector<double> per_word(Metric metric) const;
};

/// Macro-averages over words. Under n-best, each word contributes the
/// variant with the highest UUAS against gold (earliest on ties) with all
/// three of its metrics; n is the word's sense count.
EvalResult evaluate(const PolysemyParser& parser, const std::vector<Example>& test, Protocol protocol);

/// Two-tailed paired permutation test: each resample swaps every word's pair
/// with probability 1/2. p = (#{|diff*| >= |diff|} + 1) / (r + 1).
/// Resample i draws from its own stream of `seed`.
double permutation_test(const std::vector<double>& a, const std::vector<double>& b, std::size_t resamples,
                        std::uint64_t seed);

/// Exact p-value over all 2^n swap patterns (no add-one). n <= 20.
double permutation_test_exact(const std::vector<double>& a, const std::vector<double>& b);

struct SignificanceResult {
    std::string model_a;
    std::string model_b;
    Metric metric = Metric::Uuas;
    double p_value = 1;
    std::size_t resamples = 0;
    double alpha = 0.01;
    std::size_t comparisons = 1;
    bool significant = false;  // p < alpha / comparisons
};

/// Every model pair on every metric, Bonferroni-corrected over all of them.
std::vector<SignificanceResult> compare_models(const std::vector<EvalResult>& results,
                                               const std::vector<Metric>& metrics, std::size_t resamples,
                                               double alpha, std::uint64_t seed);

Json to_json(const EvalResult& result);
EvalResult eval_result_from_json(const Json& doc);
Json to_json(const SignificanceResult& result);

/// Rows of (model, protocol) with LOS/UUAS/ULAS columns.
std::string format_table(const std::vector<EvalResult>& results);

}  // namespace chainnet
