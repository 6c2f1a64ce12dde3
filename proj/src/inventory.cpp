#include "chainnet/inventory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "chainnet/rng.hpp"

namespace chainnet {

void SenseInventory::add(const std::string& lemma, std::vector<InventorySense> senses) {
    for (std::size_t i = 0; i < senses.size(); ++i) {
        senses[i].record.id = SenseIndex::plain(static_cast<int>(i) + 1);
    }
    words_[lemma] = std::move(senses);
}

const std::vector<InventorySense>* SenseInventory::find(const std::string& lemma) const {
    auto it = words_.find(lemma);
    return it == words_.end() ? nullptr : &it->second;
}

SenseInventory SenseInventory::restrict(const std::vector<std::string>& lemmas) const {
    SenseInventory out;
    for (const auto& l : lemmas) {
        if (auto it = words_.find(l); it != words_.end()) out.words_.insert(*it);
    }
    return out;
}

SenseInventory load_inventory_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path.string() + ": cannot open");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    if (!doc.contains("lemmas") || !doc.at("lemmas").is_array()) {
        throw DataError(path.string() + ": expected a top-level 'lemmas' array");
    }
    SenseInventory inv;
    for (const auto& entry : doc.at("lemmas")) {
        const auto lemma = entry.at("lemma").get<std::string>();
        std::vector<InventorySense> senses;
        for (const auto& s : entry.at("senses")) {
            InventorySense is;
            is.record.definition = s.at("definition").get<std::string>();
            if (s.contains("synonyms")) is.record.synonyms = s.at("synonyms").get<std::vector<std::string>>();
            is.proper_noun = s.value("proper_noun", false);
            senses.push_back(std::move(is));
        }
        if (senses.empty()) throw DataError(path.string() + ": lemma '" + lemma + "' has no senses");
        inv.add(lemma, std::move(senses));
    }
    return inv;
}

namespace {

std::string wordnet_lemma(std::string s) {
    std::replace(s.begin(), s.end(), '_', ' ');
    return s;
}

struct Synset {
    std::vector<std::string> words;
    std::string gloss;
    bool instance = false;
};

Synset parse_data_line(const std::string& line, const std::string& where) {
    Synset out;
    const auto bar = line.find(" | ");
    std::istringstream fields(line.substr(0, bar));
    if (bar != std::string::npos) {
        out.gloss = line.substr(bar + 3);
        while (!out.gloss.empty() && (out.gloss.back() == ' ' || out.gloss.back() == '\r')) {
            out.gloss.pop_back();
        }
    }
    std::string offset, lex_filenum, ss_type, w_cnt_hex;
    if (!(fields >> offset >> lex_filenum >> ss_type >> w_cnt_hex)) {
        throw DataError(where + ": malformed synset line");
    }
    const int w_cnt = std::stoi(w_cnt_hex, nullptr, 16);
    for (int i = 0; i < w_cnt; ++i) {
        std::string word, lex_id;
        if (!(fields >> word >> lex_id)) throw DataError(where + ": truncated word list");
        out.words.push_back(wordnet_lemma(word));
    }
    int p_cnt = 0;
    if (!(fields >> p_cnt)) throw DataError(where + ": missing pointer count");
    for (int i = 0; i < p_cnt; ++i) {
        std::string symbol, target, pos, source_target;
        if (!(fields >> symbol >> target >> pos >> source_target)) {
            throw DataError(where + ": truncated pointer list");
        }
        if (symbol == "@i") out.instance = true;
    }
    return out;
}

}  // namespace

SenseInventory load_wordnet_dict(const std::filesystem::path& dir) {
    const auto data_path = dir / "data.noun";
    const auto index_path = dir / "index.noun";
    std::ifstream data(data_path, std::ios::binary);
    std::ifstream index(index_path);
    if (!data) throw DataError(data_path.string() + ": cannot open");
    if (!index) throw DataError(index_path.string() + ": cannot open");

    std::unordered_map<std::string, std::string> lines_by_offset;
    std::string line;
    while (std::getline(data, line)) {
        if (line.empty() || line[0] == ' ') continue;
        lines_by_offset.emplace(line.substr(0, line.find(' ')), line);
    }

    SenseInventory inv;
    std::size_t line_no = 0;
    while (std::getline(index, line)) {
        ++line_no;
        if (line.empty() || line[0] == ' ') continue;
        const std::string where = index_path.string() + ":" + std::to_string(line_no);
        std::istringstream fields(line);
        std::string lemma, pos;
        int synset_cnt = 0, p_cnt = 0;
        if (!(fields >> lemma >> pos >> synset_cnt >> p_cnt)) throw DataError(where + ": malformed index line");
        std::string skip;
        for (int i = 0; i < p_cnt; ++i) fields >> skip;
        int sense_cnt = 0, tagsense_cnt = 0;
        fields >> sense_cnt >> tagsense_cnt;
        const auto display = wordnet_lemma(lemma);
        std::vector<InventorySense> senses;
        for (int i = 0; i < synset_cnt; ++i) {
            std::string offset;
            if (!(fields >> offset)) throw DataError(where + ": missing synset offset");
            auto it = lines_by_offset.find(offset);
            if (it == lines_by_offset.end()) throw DataError(where + ": synset " + offset + " not in data.noun");
            auto synset = parse_data_line(it->second, data_path.string() + "@" + offset);
            InventorySense is;
            is.record.definition = synset.gloss;
            for (const auto& w : synset.words) {
                std::string lower = w;
                std::transform(lower.begin(), lower.end(), lower.begin(),
                               [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
                if (lower != display) is.record.synonyms.push_back(w);
            }
            is.proper_noun = synset.instance;
            senses.push_back(std::move(is));
        }
        if (!senses.empty()) inv.add(display, std::move(senses));
    }
    return inv;
}

SenseInventory load_inventory(const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) return load_wordnet_dict(path);
    return load_inventory_json(path);
}

namespace {

std::size_t utf8_length(const std::string& s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](unsigned char c) { return (c & 0xC0) != 0x80; }));
}

}  // namespace

std::vector<std::string> filter_words(const SenseInventory& inventory) {
    std::vector<std::string> out;
    for (const auto& [lemma, senses] : inventory.words()) {
        if (senses.size() < 2 || senses.size() > 10) continue;
        if (utf8_length(lemma) <= 1) continue;
        const bool bad_char = std::any_of(lemma.begin(), lemma.end(), [](unsigned char c) {
            return std::isspace(c) || c == '-' || c == '_';
        });
        if (bad_char) continue;
        const bool all_proper = std::all_of(senses.begin(), senses.end(),
                                            [](const InventorySense& s) { return s.proper_noun; });
        if (all_proper) continue;
        out.push_back(lemma);
    }
    return out;
}

std::map<std::string, double> load_word_weights(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path.string() + ": cannot open");
    std::map<std::string, double> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find_last_of(" \t");
        if (tab == std::string::npos) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 'lemma weight'");
        }
        double w = 0.0;
        try {
            w = std::stod(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad weight");
        }
        if (!std::isfinite(w) || w < 0.0) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": weight must be finite and >= 0");
        }
        out[line.substr(0, line.find_last_not_of(" \t", tab) + 1)] = w;
    }
    return out;
}

std::vector<std::string> weighted_sample(const std::vector<std::string>& words,
                                         const std::map<std::string, double>& weights,
                                         std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<double, std::string>> keyed;
    for (const auto& w : words) {
        auto it = weights.find(w);
        const double weight = it == weights.end() ? 0.0 : it->second;
        const double u = rng.uniform();
        if (weight <= 0.0) continue;
        keyed.emplace_back(std::log(std::max(u, 1e-300)) / weight, w);
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < keyed.size() && i < count; ++i) out.push_back(keyed[i].second);
    return out;
}

}  // namespace chainnet
