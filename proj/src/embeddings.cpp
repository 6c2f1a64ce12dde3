#include "chainnet/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace chainnet {

void EmbeddingTable::insert(const SenseId& id, Eigen::VectorXd vector) {
    if (dimension_ == 0) dimension_ = static_cast<std::size_t>(vector.size());
    if (static_cast<std::size_t>(vector.size()) != dimension_) {
        throw DataError("embedding for " + id.to_string() + " has dimension " +
                        std::to_string(vector.size()) + ", expected " + std::to_string(dimension_));
    }
    if (!vector.allFinite()) {
        throw DataError("embedding for " + id.to_string() + " has non-finite entries");
    }
    vectors_[id] = std::move(vector);
}

const Eigen::VectorXd* EmbeddingTable::find(const SenseId& id) const {
    auto it = vectors_.find(id);
    return it == vectors_.end() ? nullptr : &it->second;
}

const Eigen::VectorXd& EmbeddingTable::at(const SenseId& id) const {
    if (const auto* v = find(id)) return *v;
    throw DataError("no embedding for " + id.to_string());
}

namespace {

std::size_t sidecar_dimension(const std::filesystem::path& path) {
    auto sidecar = path;
    sidecar += ".json";
    std::ifstream in(sidecar);
    if (!in) return 0;
    try {
        auto doc = nlohmann::json::parse(in);
        const auto dim = doc.at("dimension").get<long long>();
        if (dim <= 0) throw DataError("dimension must be positive");
        return static_cast<std::size_t>(dim);
    } catch (const std::exception& e) {
        throw DataError(sidecar.string() + ": " + e.what());
    }
}

}  // namespace

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path.string() + ": cannot open");
    EmbeddingTable table(sidecar_dimension(path));

    std::string line;
    std::size_t line_no = 0;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::istringstream fields(line);
        std::string id_text;
        fields >> id_text;
        SenseId id;
        try {
            id = SenseId::parse(id_text);
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
        values.clear();
        std::string token;
        while (fields >> token) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
            if (ec != std::errc{} || ptr != token.data() + token.size()) {
                throw DataError(where + ": cannot parse value '" + token + "'");
            }
            if (!std::isfinite(v)) throw DataError(where + ": non-finite value");
            values.push_back(v);
        }
        if (table.contains(id)) throw DataError(where + ": duplicate embedding for " + id.to_string());
        Eigen::VectorXd vec = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
        try {
            table.insert(id, std::move(vec));
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
    }
    return table;
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingTable& table) {
    std::ofstream out(path);
    if (!out) throw DataError(path.string() + ": cannot write");
    char buf[64];
    for (const auto& [id, vec] : table.entries()) {
        out << id.to_string();
        for (Eigen::Index i = 0; i < vec.size(); ++i) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, vec[i]);
            out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
        }
        out << '\n';
    }
    auto sidecar = path;
    sidecar += ".json";
    std::ofstream meta(sidecar);
    meta << nlohmann::json{{"format", "chainnet-embeddings"}, {"version", 1}, {"dimension", table.dimension()}}.dump(2)
         << '\n';
}

namespace {

CoverageReport finish(std::vector<SenseId> missing) {
    CoverageReport r;
    std::set<std::string> words;
    for (const auto& m : missing) words.insert(m.word);
    r.missing = std::move(missing);
    r.excluded_words.assign(words.begin(), words.end());
    return r;
}

}  // namespace

CoverageReport coverage(const EmbeddingTable& table, const SenseInventory& inventory) {
    std::vector<SenseId> missing;
    for (const auto& [lemma, senses] : inventory.words()) {
        for (const auto& s : senses) {
            SenseId id{lemma, s.record.id};
            if (!table.contains(id)) missing.push_back(std::move(id));
        }
    }
    return finish(std::move(missing));
}

CoverageReport coverage(const EmbeddingTable& table, const std::vector<WordAnnotation>& annotations) {
    std::vector<SenseId> missing;
    for (const auto& a : annotations) {
        for (const auto& s : a.senses) {
            SenseId id{a.word, s.id()};
            if (!table.contains(id)) missing.push_back(std::move(id));
        }
    }
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    return finish(std::move(missing));
}

}  // namespace chainnet
