#include "fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "chainnet/annotation_json.hpp"

namespace chainnet::testing {

std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(CHAINNET_TEST_DATA) / name; }

WordAnnotation fixture(const std::string& name) {
    auto all = load_annotations(data_path(name + ".json"));
    if (all.size() != 1) throw DataError("fixture " + name + " should hold one annotation");
    return all.front();
}

namespace {

std::vector<SenseIndex> random_ids(Rng& rng, int n, const ForestOptions& options) {
    std::vector<SenseIndex> ids;
    for (int o = 1; o <= n; ++o) {
        if (options.splits && rng.uniform() < 0.2) {
            ids.push_back(SenseIndex::split_a(o));
            ids.push_back(SenseIndex::split_b(o));
        } else {
            ids.push_back(SenseIndex::plain(o));
        }
    }
    if (options.virtuals) {
        const int v = static_cast<int>(rng.below(3));
        for (int i = 1; i <= v; ++i) ids.push_back(SenseIndex::virtual_sense(i));
    }
    return ids;
}

}  // namespace

WordAnnotation random_forest(Rng& rng, int n, const std::string& word, const ForestOptions& options) {
    WordAnnotation a;
    a.word = word;
    a.annotator = "gen";
    const auto ids = random_ids(rng, n, options);
    const std::size_t m = ids.size();
    for (std::size_t i = 0; i < m; ++i) {
        SenseAnnotation s;
        s.sense.id = ids[i];
        s.sense.definition = word + " sense " + ids[i].to_string();
        s.sense.is_split_half = ids[i].is_split_half();
        s.sense.is_virtual = ids[i].is_virtual();
        s.sense.known = rng.uniform() >= options.unknown_rate;
        a.senses.push_back(std::move(s));
    }

    // Attach senses in a random order, each to the root or to an earlier one.
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    rng.shuffle(order);
    for (std::size_t k = 0; k < m; ++k) {
        auto& s = a.senses[order[k]];
        if (k == 0 || rng.below(k + 1) == 0) {
            s.label = SenseLabel::prototype();
            continue;
        }
        const auto parent = a.senses[order[rng.below(k)]].id();
        s.label = rng.coin() ? SenseLabel::metaphor_of(parent) : SenseLabel::metonymy_of(parent);
    }
    for (const auto& s : a.senses) {
        if (!s.label.parent) continue;
        auto* p = a.find(*s.label.parent);
        const bool needs_conduit =
            (s.label.kind == LabelKind::Metonymy && p->label.kind != LabelKind::Prototype) ||
            (s.label.kind == LabelKind::Metaphor && p->label.kind == LabelKind::Metaphor);
        if (needs_conduit) p->conduit = true;
    }
    // Conduits may also appear where they are not needed.
    for (auto& s : a.senses) {
        if (s.label.kind != LabelKind::Prototype && rng.uniform() < 0.1) s.conduit = true;
    }

    int next_feature = 1;
    for (auto& p : a.senses) {
        const bool extended = std::any_of(a.senses.begin(), a.senses.end(), [&](const SenseAnnotation& c) {
            return c.label.kind == LabelKind::Metaphor && c.label.parent == p.id();
        });
        if (!extended) continue;
        const int count = 1 + static_cast<int>(rng.below(3));
        for (int f = 0; f < count; ++f) {
            p.features.push_back({next_feature, "feature " + std::to_string(next_feature)});
            ++next_feature;
        }
    }
    for (auto& c : a.senses) {
        if (c.label.kind != LabelKind::Metaphor) continue;
        const auto* p = a.find(*c.label.parent);
        for (const auto& f : p->features) {
            FeatureJudgement j{f.id, static_cast<Verdict>(rng.below(3)), std::nullopt};
            if (j.verdict == Verdict::Modified) j.modified_text = f.text + " (changed)";
            c.judgements.push_back(j);
        }
        auto count = [&](Verdict v) {
            return std::count_if(c.judgements.begin(), c.judgements.end(),
                                 [v](const FeatureJudgement& j) { return j.verdict == v; });
        };
        if (count(Verdict::Modified) == 0 && (count(Verdict::Kept) == 0 || count(Verdict::Lost) == 0)) {
            c.judgements.front().verdict = Verdict::Modified;
            c.judgements.front().modified_text = "changed";
        }
    }
    return a;
}

Parse make_parse(const std::string& word, const std::vector<std::pair<LabelKind, int>>& nodes) {
    Parse p;
    p.word = word;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        p.senses.push_back(SenseIndex::plain(static_cast<int>(i) + 1));
        p.labels.push_back(nodes[i].first);
        p.heads.push_back(nodes[i].second < 0 ? std::nullopt
                                              : std::optional<std::size_t>(static_cast<std::size_t>(nodes[i].second)));
    }
    return p;
}

WordAnnotation make_annotation(const std::string& word, const std::string& annotator,
                               const std::vector<std::pair<LabelKind, int>>& nodes) {
    WordAnnotation a;
    a.word = word;
    a.annotator = annotator;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        SenseAnnotation s;
        s.sense.id = SenseIndex::plain(static_cast<int>(i) + 1);
        s.sense.definition = word + " sense " + std::to_string(i + 1);
        if (nodes[i].second >= 0) s.label = {nodes[i].first, SenseIndex::plain(nodes[i].second + 1)};
        a.senses.push_back(std::move(s));
    }
    for (auto& s : a.senses) {
        if (!s.label.parent) continue;
        auto& p = a.senses[static_cast<std::size_t>(s.label.parent->ordinal() - 1)];
        const bool needs_conduit = (s.label.kind == LabelKind::Metonymy && p.label.kind != LabelKind::Prototype) ||
                                   (s.label.kind == LabelKind::Metaphor && p.label.kind == LabelKind::Metaphor);
        if (needs_conduit) p.conduit = true;
        if (s.label.kind == LabelKind::Metaphor) {
            if (p.features.empty()) p.features.push_back({1, "has some property"});
            s.judgements = {{1, Verdict::Modified, std::string("has a related property")}};
        }
    }
    return a;
}

TempDir::TempDir() {
    static int counter = 0;
    const auto base = std::filesystem::temp_directory_path();
    Rng rng(static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count()));
    do {
        path_ = base / ("chainnet-test-" + std::to_string(rng.next() % 1000000000) + "-" + std::to_string(counter++));
    } while (std::filesystem::exists(path_));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
}

}  // namespace chainnet::testing
