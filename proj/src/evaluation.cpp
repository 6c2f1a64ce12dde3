#include "chainnet/evaluation.hpp"

#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "chainnet/rng.hpp"

namespace chainnet {

WordScore score_parse(const Parse& predicted, const Parse& gold) {
    const std::set<SenseIndex> a(predicted.senses.begin(), predicted.senses.end());
    const std::set<SenseIndex> b(gold.senses.begin(), gold.senses.end());
    if (a != b || a.size() != gold.size()) throw UsageError("parse and gold of '" + gold.word + "' cover different senses");
    const auto s = compare_parses(predicted, gold, gold.senses);
    return {gold.word, 100.0 * s.los, 100.0 * s.uuas, 100.0 * s.ulas};
}

std::string_view to_string(Protocol protocol) { return protocol == Protocol::OneBest ? "1-best" : "n-best"; }

std::string_view to_string(Metric metric) {
    switch (metric) {
        case Metric::Los: return "LOS";
        case Metric::Uuas: return "UUAS";
        case Metric::Ulas: return "ULAS";
    }
    return "?";
}

double metric_of(const WordScore& score, Metric metric) {
    switch (metric) {
        case Metric::Los: return score.los;
        case Metric::Uuas: return score.uuas;
        case Metric::Ulas: return score.ulas;
    }
    return 0;
}

std::vector<double> EvalResult::per_word(Metric metric) const {
    std::vector<double> out;
    for (const auto& w : words) out.push_back(metric_of(w, metric));
    return out;
}

EvalResult evaluate(const PolysemyParser& parser, const std::vector<Example>& test, Protocol protocol) {
    EvalResult out;
    out.model = parser.name();
    out.protocol = protocol;
    for (const auto& ex : test) {
        if (protocol == Protocol::OneBest) {
            out.words.push_back(score_parse(parser.predict(ex.input), ex.gold));
            continue;
        }
        const auto variants = parser.n_best(ex.input, ex.input.size(), &out.warnings);
        WordScore best = score_parse(variants.front(), ex.gold);
        for (std::size_t i = 1; i < variants.size(); ++i) {
            const auto s = score_parse(variants[i], ex.gold);
            if (s.uuas > best.uuas) best = s;
        }
        out.words.push_back(best);
    }
    if (!out.words.empty()) {
        const auto n = static_cast<double>(out.words.size());
        for (const auto& w : out.words) {
            out.los += w.los / n;
            out.uuas += w.uuas / n;
            out.ulas += w.ulas / n;
        }
    }
    return out;
}

namespace {

void check_paired(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw UsageError("permutation test needs paired score vectors of equal length");
    if (a.empty()) throw UsageError("permutation test needs at least one pair");
}

// Mean differences are compared with a small tolerance so that resamples
// equal to the observed statistic are not lost to rounding.
constexpr double kTolerance = 1e-12;

}  // namespace

double permutation_test(const std::vector<double>& a, const std::vector<double>& b, std::size_t resamples,
                        std::uint64_t seed) {
    check_paired(a, b);
    if (resamples < 1) throw UsageError("permutation test needs at least one resample");
    const auto n = static_cast<double>(a.size());
    double observed = 0;
    for (std::size_t i = 0; i < a.size(); ++i) observed += (a[i] - b[i]) / n;
    const double threshold = std::fabs(observed) - kTolerance;
    std::size_t extreme = 0;
    for (std::size_t r = 0; r < resamples; ++r) {
        auto rng = Rng::stream(seed, r);
        double diff = 0;
        for (std::size_t i = 0; i < a.size(); ++i) diff += (rng.coin() ? b[i] - a[i] : a[i] - b[i]) / n;
        if (std::fabs(diff) >= threshold) ++extreme;
    }
    return static_cast<double>(extreme + 1) / static_cast<double>(resamples + 1);
}

double permutation_test_exact(const std::vector<double>& a, const std::vector<double>& b) {
    check_paired(a, b);
    if (a.size() > 20) throw UsageError("exact permutation test is limited to 20 pairs");
    const auto n = static_cast<double>(a.size());
    double observed = 0;
    for (std::size_t i = 0; i < a.size(); ++i) observed += (a[i] - b[i]) / n;
    const double threshold = std::fabs(observed) - kTolerance;
    const std::uint64_t patterns = std::uint64_t{1} << a.size();
    std::uint64_t extreme = 0;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        double diff = 0;
        for (std::size_t i = 0; i < a.size(); ++i) diff += ((mask >> i) & 1 ? b[i] - a[i] : a[i] - b[i]) / n;
        if (std::fabs(diff) >= threshold) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(patterns);
}

std::vector<SignificanceResult> compare_models(const std::vector<EvalResult>& results,
                                               const std::vector<Metric>& metrics, std::size_t resamples,
                                               double alpha, std::uint64_t seed) {
    std::vector<SignificanceResult> out;
    const std::size_t pairs = results.size() * (results.size() - (results.empty() ? 0 : 1)) / 2;
    const std::size_t comparisons = std::max<std::size_t>(1, pairs * metrics.size());
    std::uint64_t test_index = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        for (std::size_t j = i + 1; j < results.size(); ++j) {
            const auto& a = results[i];
            const auto& b = results[j];
            if (a.words.size() != b.words.size()) throw UsageError("models were evaluated on different word lists");
            for (std::size_t w = 0; w < a.words.size(); ++w) {
                if (a.words[w].word != b.words[w].word) throw UsageError("models were evaluated on different word lists");
            }
            for (auto metric : metrics) {
                SignificanceResult s;
                s.model_a = a.model + " " + std::string(to_string(a.protocol));
                s.model_b = b.model + " " + std::string(to_string(b.protocol));
                s.metric = metric;
                s.resamples = resamples;
                s.alpha = alpha;
                s.comparisons = comparisons;
                s.p_value = permutation_test(a.per_word(metric), b.per_word(metric), resamples,
                                             splitmix64(seed + test_index++));
                s.significant = s.p_value < alpha / static_cast<double>(comparisons);
                out.push_back(s);
            }
        }
    }
    return out;
}

Json to_json(const EvalResult& result) {
    Json words = Json::array();
    for (const auto& w : result.words) {
        words.push_back(Json{{"word", w.word}, {"los", w.los}, {"uuas", w.uuas}, {"ulas", w.ulas}});
    }
    return Json{{"model", result.model},
                {"protocol", std::string(to_string(result.protocol))},
                {"los", result.los},
                {"uuas", result.uuas},
                {"ulas", result.ulas},
                {"words", std::move(words)},
                {"warnings", result.warnings}};
}

EvalResult eval_result_from_json(const Json& doc) {
    EvalResult r;
    r.model = doc.at("model").get<std::string>();
    const auto protocol = doc.at("protocol").get<std::string>();
    if (protocol == "1-best") {
        r.protocol = Protocol::OneBest;
    } else if (protocol == "n-best") {
        r.protocol = Protocol::NBest;
    } else {
        throw DataError("unknown protocol '" + protocol + "'");
    }
    r.los = doc.at("los").get<double>();
    r.uuas = doc.at("uuas").get<double>();
    r.ulas = doc.at("ulas").get<double>();
    for (const auto& w : doc.at("words")) {
        r.words.push_back({w.at("word").get<std::string>(), w.at("los").get<double>(), w.at("uuas").get<double>(),
                           w.at("ulas").get<double>()});
    }
    if (doc.contains("warnings")) r.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return r;
}

Json to_json(const SignificanceResult& s) {
    return Json{{"model_a", s.model_a},         {"model_b", s.model_b}, {"metric", std::string(to_string(s.metric))},
                {"p_value", s.p_value},         {"resamples", s.resamples}, {"alpha", s.alpha},
                {"comparisons", s.comparisons}, {"corrected_alpha", s.alpha / static_cast<double>(s.comparisons)},
                {"significant", s.significant}};
}

std::string format_table(const std::vector<EvalResult>& results) {
    std::ostringstream out;
    out << std::left << std::setw(12) << "model" << std::setw(8) << "" << std::right << std::setw(7) << "LOS"
        << std::setw(7) << "UUAS" << std::setw(7) << "ULAS" << "\n";
    for (const auto& r : results) {
        out << std::left << std::setw(12) << r.model << std::setw(8) << to_string(r.protocol) << std::right
            << std::fixed << std::setprecision(1) << std::setw(7) << r.los << std::setw(7) << r.uuas << std::setw(7)
            << r.ulas << "\n";
    }
    return out.str();
}

}  // namespace chainnet
