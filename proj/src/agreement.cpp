#include "chainnet/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "chainnet/preprocess.hpp"

namespace chainnet {

namespace {

double choose2(double n) { return n * (n - 1) / 2.0; }

std::vector<std::vector<SenseIndex>> canonical(std::vector<std::vector<SenseIndex>> clusters) {
    for (auto& c : clusters) std::sort(c.begin(), c.end());
    std::erase_if(clusters, [](const auto& c) { return c.empty(); });
    std::sort(clusters.begin(), clusters.end());
    return clusters;
}

std::set<SenseIndex> members(const HomonymyPartition& p) {
    std::set<SenseIndex> out;
    for (const auto& c : p.clusters) out.insert(c.begin(), c.end());
    return out;
}

// Connected components of a parse, keeping only the listed senses.
HomonymyPartition clusters_of(const Parse& parse, const std::vector<SenseIndex>& items) {
    std::map<std::size_t, std::vector<SenseIndex>> by_root;
    for (const auto& id : items) {
        auto cur = *parse.position(id);
        for (std::size_t steps = 0; parse.heads[cur] && steps <= parse.size(); ++steps) cur = *parse.heads[cur];
        by_root[cur].push_back(id);
    }
    HomonymyPartition out{parse.word, {}};
    for (auto& [root, senses] : by_root) out.clusters.push_back(std::move(senses));
    return out;
}

std::set<Attachment> attachments(const Parse& parse) {
    std::set<Attachment> out;
    for (std::size_t i = 0; i < parse.size(); ++i) out.insert(attachment_of(parse, i));
    return out;
}

std::set<SenseIndex> prototypes(const Parse& parse) {
    std::set<SenseIndex> out;
    for (std::size_t i = 0; i < parse.size(); ++i) {
        if (parse.labels[i] == LabelKind::Prototype) out.insert(parse.senses[i]);
    }
    return out;
}

bool prototypes_agree(const AlignedWord& word) {
    const auto first = prototypes(word.parses.front());
    return std::all_of(word.parses.begin() + 1, word.parses.end(),
                       [&](const Parse& p) { return prototypes(p) == first; });
}

bool keep_word(const AlignedWord& word, Filter filter) {
    return filter != Filter::AgreePrototype || prototypes_agree(word);
}

Attachment attachment_for(const Parse& parse, const SenseIndex& id) { return attachment_of(parse, *parse.position(id)); }

LabelKind label_for(const Parse& parse, const SenseIndex& id) { return parse.labels[*parse.position(id)]; }

std::optional<double> percent(double hits, double total) {
    if (total == 0) return std::nullopt;
    return 100.0 * hits / total;
}

}  // namespace

double adjusted_rand(const HomonymyPartition& a, const HomonymyPartition& b) {
    if (members(a) != members(b)) throw UsageError("partitions of '" + a.word + "' cover different senses");
    const auto ca = canonical(a.clusters);
    const auto cb = canonical(b.clusters);
    std::map<SenseIndex, std::size_t> block_b;
    for (std::size_t j = 0; j < cb.size(); ++j) {
        for (const auto& s : cb[j]) block_b[s] = j;
    }
    double index = 0, sum_a = 0, sum_b = 0, n = 0;
    for (const auto& cluster : ca) {
        std::map<std::size_t, double> row;
        for (const auto& s : cluster) row[block_b.at(s)] += 1;
        for (const auto& [j, count] : row) index += choose2(count);
        sum_a += choose2(static_cast<double>(cluster.size()));
        n += static_cast<double>(cluster.size());
    }
    for (const auto& cluster : cb) sum_b += choose2(static_cast<double>(cluster.size()));
    const double expected = n < 2 ? 0.0 : sum_a * sum_b / choose2(n);
    const double maximum = (sum_a + sum_b) / 2.0;
    if (maximum == expected) return ca == cb ? 1.0 : 0.0;
    return (index - expected) / (maximum - expected);
}

std::optional<double> fleiss_kappa(const std::vector<std::vector<int>>& counts) {
    if (counts.empty()) return std::nullopt;
    const std::size_t categories = counts.front().size();
    int raters = 0;
    for (int c : counts.front()) raters += c;
    if (raters < 2) throw UsageError("Fleiss' kappa needs at least two raters per item");
    std::vector<double> totals(categories, 0.0);
    double agreement = 0;
    for (const auto& row : counts) {
        if (row.size() != categories) throw UsageError("ragged Fleiss table");
        int sum = 0;
        double squares = 0;
        for (std::size_t j = 0; j < categories; ++j) {
            sum += row[j];
            squares += static_cast<double>(row[j]) * row[j];
            totals[j] += row[j];
        }
        if (sum != raters) throw UsageError("every item needs the same number of raters");
        agreement += (squares - raters) / (static_cast<double>(raters) * (raters - 1));
    }
    const double items = static_cast<double>(counts.size());
    const double observed = agreement / items;
    double chance = 0;
    for (double t : totals) {
        const double p = t / (items * raters);
        chance += p * p;
    }
    if (chance >= 1.0) return 1.0;
    return (observed - chance) / (1.0 - chance);
}

std::string_view to_string(Filter filter) {
    switch (filter) {
        case Filter::All: return "all";
        case Filter::AgreePrototype: return "ap";
        case Filter::AgreeConnections: return "ac";
    }
    return "?";
}

Filter parse_filter(std::string_view text) {
    if (text == "all") return Filter::All;
    if (text == "ap") return Filter::AgreePrototype;
    if (text == "ac") return Filter::AgreeConnections;
    throw UsageError("unknown filter '" + std::string(text) + "' (expected all, ap or ac)");
}

std::vector<AlignedWord> align(const std::vector<std::vector<WordAnnotation>>& corpora) {
    if (corpora.size() < 2) throw UsageError("agreement needs at least two annotators");
    std::vector<std::map<std::string, const WordAnnotation*>> by_word(corpora.size());
    for (std::size_t a = 0; a < corpora.size(); ++a) {
        for (const auto& w : corpora[a]) {
            if (!by_word[a].emplace(w.word, &w).second) {
                throw DataError("annotator corpus " + std::to_string(a + 1) + " has two annotations of '" + w.word + "'");
            }
        }
    }
    std::vector<AlignedWord> out;
    for (const auto& [word, first] : by_word.front()) {
        std::vector<const WordAnnotation*> found;
        for (const auto& m : by_word) {
            auto it = m.find(word);
            if (it == m.end()) break;
            found.push_back(it->second);
        }
        if (found.size() != corpora.size()) continue;
        if (std::any_of(found.begin(), found.end(), [](const auto* w) { return !w->word_known; })) continue;

        AlignedWord aligned{word, {}, {}, {}};
        std::set<SenseIndex> shared;
        std::set<SenseIndex> unknown;
        for (std::size_t a = 0; a < found.size(); ++a) {
            const auto prepared = preprocess(*found[a]).annotation;
            std::set<SenseIndex> ids;
            for (const auto& s : prepared.senses) {
                ids.insert(s.id());
                if (!s.sense.known) unknown.insert(s.id());
            }
            if (a == 0) {
                shared = ids;
            } else if (ids != shared) {
                throw DataError("annotators disagree on the sense inventory of '" + word + "'");
            }
            aligned.parses.push_back(parse_from_annotation(prepared));
        }
        for (const auto& id : shared) {
            if (!unknown.contains(id)) aligned.items.push_back(id);
        }
        if (aligned.items.empty()) continue;
        for (const auto& p : aligned.parses) aligned.partitions.push_back(clusters_of(p, aligned.items));
        out.push_back(std::move(aligned));
    }
    return out;
}

PairScore compare_parses(const Parse& a, const Parse& b, const std::vector<SenseIndex>& items) {
    const auto edges_a = attachments(a);
    const auto edges_b = attachments(b);
    PairScore out;
    for (const auto& id : items) {
        const auto pa = a.position(id);
        const auto pb = b.position(id);
        if (!pa || !pb) throw UsageError("sense " + id.to_string() + " is missing from a parse of '" + a.word + "'");
        const bool same_label = a.labels[*pa] == b.labels[*pb];
        const bool forward = edges_b.contains(attachment_of(a, *pa));
        const bool backward = edges_a.contains(attachment_of(b, *pb));
        out.los += same_label ? 1 : 0;
        out.uuas += (forward ? 0.5 : 0.0) + (backward ? 0.5 : 0.0);
        out.ulas += same_label && forward && backward ? 1 : 0;
        ++out.items;
    }
    if (out.items > 0) {
        const auto n = static_cast<double>(out.items);
        out.los /= n;
        out.uuas /= n;
        out.ulas /= n;
    }
    return out;
}

LabelAgreement label_agreement(const std::vector<AlignedWord>& words, Filter filter) {
    LabelAgreement out;
    out.filter = filter;
    std::array<double, kLabelCount> category_hits{};
    double any_hits = 0;
    double comparisons = 0;
    std::array<std::vector<std::vector<int>>, kLabelCount> category_tables;
    std::vector<std::vector<int>> any_table;

    for (const auto& word : words) {
        if (!keep_word(word, filter)) continue;
        ++out.words;
        const auto& parses = word.parses;
        for (const auto& id : word.items) {
            for (std::size_t i = 0; i < parses.size(); ++i) {
                for (std::size_t j = i + 1; j < parses.size(); ++j) {
                    if (filter == Filter::AgreeConnections &&
                        attachment_for(parses[i], id) != attachment_for(parses[j], id)) {
                        continue;
                    }
                    const auto li = label_for(parses[i], id);
                    const auto lj = label_for(parses[j], id);
                    for (std::size_t c = 0; c < kLabelCount; ++c) {
                        const auto kind = static_cast<LabelKind>(c);
                        if ((li == kind) == (lj == kind)) category_hits[c] += 1;
                    }
                    if (li == lj) any_hits += 1;
                    comparisons += 1;
                }
            }

            if (filter == Filter::AgreeConnections) {
                const auto first = attachment_for(parses.front(), id);
                const bool unanimous = std::all_of(parses.begin() + 1, parses.end(), [&](const Parse& p) {
                    return attachment_for(p, id) == first;
                });
                if (!unanimous) continue;
            }
            std::vector<int> row(kLabelCount, 0);
            for (const auto& p : parses) ++row[static_cast<std::size_t>(label_for(p, id))];
            any_table.push_back(row);
            const int raters = static_cast<int>(parses.size());
            for (std::size_t c = 0; c < kLabelCount; ++c) category_tables[c].push_back({row[c], raters - row[c]});
        }
    }

    for (std::size_t c = 0; c < kLabelCount; ++c) {
        out.per_category[c] = {percent(category_hits[c], comparisons), fleiss_kappa(category_tables[c]),
                               category_tables[c].size()};
    }
    out.any = {percent(any_hits, comparisons), fleiss_kappa(any_table), any_table.size()};
    return out;
}

std::optional<double> attachment_agreement(const std::vector<AlignedWord>& words, bool labelled, Filter filter) {
    if (filter == Filter::AgreeConnections) {
        throw UsageError("the agree-connections filter does not apply to attachment agreement");
    }
    double hits = 0;
    double total = 0;
    for (const auto& word : words) {
        if (!keep_word(word, filter)) continue;
        for (std::size_t i = 0; i < word.parses.size(); ++i) {
            for (std::size_t j = i + 1; j < word.parses.size(); ++j) {
                const auto score = compare_parses(word.parses[i], word.parses[j], word.items);
                hits += (labelled ? score.ulas : score.uuas) * static_cast<double>(score.items);
                total += static_cast<double>(score.items);
            }
        }
    }
    return percent(hits, total);
}

std::optional<double> mean_adjusted_rand(const std::vector<AlignedWord>& words) {
    if (words.empty()) return std::nullopt;
    double sum = 0;
    for (const auto& word : words) {
        double word_sum = 0;
        double pairs = 0;
        for (std::size_t i = 0; i < word.partitions.size(); ++i) {
            for (std::size_t j = i + 1; j < word.partitions.size(); ++j) {
                word_sum += adjusted_rand(word.partitions[i], word.partitions[j]);
                pairs += 1;
            }
        }
        sum += word_sum / pairs;
    }
    return sum / static_cast<double>(words.size());
}

GranularityComparison compare_granularity(const std::map<std::string, HomonymyPartition>& a,
                                          const std::map<std::string, HomonymyPartition>& b) {
    GranularityComparison out;
    std::size_t differing = 0;
    std::size_t finer = 0;
    double clusters_a = 0;
    double clusters_b = 0;
    for (const auto& [word, pa] : a) {
        auto it = b.find(word);
        if (it == b.end()) continue;
        const auto ca = canonical(pa.clusters);
        const auto cb = canonical(it->second.clusters);
        ++out.words;
        clusters_a += static_cast<double>(ca.size());
        clusters_b += static_cast<double>(cb.size());
        if (ca == cb) continue;
        ++differing;
        std::map<SenseIndex, std::size_t> block_b;
        for (std::size_t j = 0; j < cb.size(); ++j) {
            for (const auto& s : cb[j]) block_b[s] = j;
        }
        const bool refines = std::all_of(ca.begin(), ca.end(), [&](const auto& cluster) {
            auto first = block_b.find(cluster.front());
            if (first == block_b.end()) return false;
            return std::all_of(cluster.begin(), cluster.end(), [&](const SenseIndex& s) {
                auto hit = block_b.find(s);
                return hit != block_b.end() && hit->second == first->second;
            });
        });
        if (refines) ++finer;
    }
    if (out.words > 0) {
        const auto n = static_cast<double>(out.words);
        out.fraction_differing = static_cast<double>(differing) / n;
        out.mean_clusters_a = clusters_a / n;
        out.mean_clusters_b = clusters_b / n;
    }
    if (differing > 0) out.fraction_finer = static_cast<double>(finer) / static_cast<double>(differing);
    return out;
}

std::map<std::string, HomonymyPartition> load_clusters(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::map<std::string, HomonymyPartition> out;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (line.empty() || line.front() == '#') continue;
        const auto where = path.string() + ":" + std::to_string(lineno);
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw DataError(where + ": expected lemma<TAB>clusters");
        HomonymyPartition p{line.substr(0, tab), {}};
        std::stringstream clusters(line.substr(tab + 1));
        std::string cluster;
        while (std::getline(clusters, cluster, ';')) {
            std::vector<SenseIndex> ids;
            std::stringstream items(cluster);
            std::string item;
            while (std::getline(items, item, ',')) {
                if (item.empty()) continue;
                try {
                    ids.push_back(SenseIndex::parse(item));
                } catch (const DataError& e) {
                    throw DataError(where + ": " + e.what());
                }
            }
            if (!ids.empty()) p.clusters.push_back(std::move(ids));
        }
        if (p.clusters.empty()) throw DataError(where + ": no clusters");
        if (!out.emplace(p.word, p).second) throw DataError(where + ": duplicate lemma '" + p.word + "'");
    }
    return out;
}

AgreementReport agreement_report(const std::vector<std::vector<WordAnnotation>>& corpora,
                                 const std::vector<Filter>& filters) {
    const auto words = align(corpora);
    AgreementReport report;
    report.annotators = corpora.size();
    report.words = words.size();
    report.ari = mean_adjusted_rand(words);
    for (auto filter : filters) {
        report.labels.push_back(label_agreement(words, filter));
        if (filter == Filter::AgreeConnections) continue;
        report.uuas[filter] = attachment_agreement(words, false, filter);
        report.ulas[filter] = attachment_agreement(words, true, filter);
    }
    return report;
}

namespace {

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string cell(const std::optional<double>& v, int precision) {
    if (!v) return "-";
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << *v;
    return out.str();
}

}  // namespace

Json to_json(const AgreementReport& report) {
    Json j;
    j["annotators"] = report.annotators;
    j["words"] = report.words;
    j["ari"] = optional_json(report.ari);
    Json labels = Json::array();
    for (const auto& l : report.labels) {
        Json entry;
        entry["filter"] = std::string(to_string(l.filter));
        entry["words"] = l.words;
        for (std::size_t c = 0; c < kLabelCount; ++c) {
            const auto& a = l.per_category[c];
            entry[std::string(to_string(static_cast<LabelKind>(c)))] =
                Json{{"percent", optional_json(a.percent)}, {"kappa", optional_json(a.kappa)}, {"items", a.items}};
        }
        entry["any"] = Json{{"percent", optional_json(l.any.percent)},
                            {"kappa", optional_json(l.any.kappa)},
                            {"items", l.any.items}};
        labels.push_back(std::move(entry));
    }
    j["labels"] = std::move(labels);
    Json attach = Json::object();
    for (const auto& [filter, value] : report.uuas) {
        attach[std::string(to_string(filter))] =
            Json{{"uuas", optional_json(value)}, {"ulas", optional_json(report.ulas.at(filter))}};
    }
    j["attachment"] = std::move(attach);
    return j;
}

std::string format_report(const AgreementReport& report) {
    std::ostringstream out;
    out << "annotators: " << report.annotators << "  words: " << report.words << "  ARI: " << cell(report.ari, 3)
        << "\n\n";
    out << std::left << std::setw(8) << "filter" << std::setw(8) << "words";
    for (const char* name : {"prototype", "metaphor", "metonymy", "any"}) out << std::setw(18) << name;
    out << "\n";
    for (const auto& l : report.labels) {
        out << std::setw(8) << to_string(l.filter) << std::setw(8) << l.words;
        auto put = [&](const Agreement& a) { out << std::setw(18) << (cell(a.percent, 1) + "% k=" + cell(a.kappa, 2)); };
        for (const auto& a : l.per_category) put(a);
        put(l.any);
        out << "\n";
    }
    if (!report.uuas.empty()) {
        out << "\n" << std::setw(8) << "filter" << std::setw(10) << "UUAS" << "ULAS\n";
        for (const auto& [filter, value] : report.uuas) {
            out << std::setw(8) << to_string(filter) << std::setw(10) << cell(value, 1)
                << cell(report.ulas.at(filter), 1) << "\n";
        }
    }
    return out.str();
}

}  // namespace chainnet
