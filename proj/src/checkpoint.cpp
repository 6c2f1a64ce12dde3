#include "chainnet/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace chainnet {

namespace {

constexpr char kMagic[8] = {'C', 'H', 'N', 'T', 'C', 'K', 'P', 'T'};

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

class Writer {
public:
    explicit Writer(std::ofstream& out) : out_(out) {}
    template <class T>
    void pod(T value) {
        out_.write(reinterpret_cast<const char*>(&value), sizeof value);
    }
    void text(const std::string& s) {
        pod<std::uint64_t>(s.size());
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

private:
    std::ofstream& out_;
};

class Reader {
public:
    Reader(std::ifstream& in, std::string where) : in_(in), where_(std::move(where)) {}
    template <class T>
    T pod() {
        T value;
        read(reinterpret_cast<char*>(&value), sizeof value);
        return value;
    }
    std::string text() {
        const auto size = pod<std::uint64_t>();
        if (size > (1u << 26)) fail("implausible string length");
        std::string s(size, '\0');
        read(s.data(), size);
        return s;
    }
    void read(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) fail("truncated file");
    }
    [[noreturn]] void fail(const std::string& why) const { throw DataError(where_ + ": " + why); }

private:
    std::ifstream& in_;
    std::string where_;
};

template <class Model>
void assign(Model& model, const LoadedCheckpoint& ck, const std::string& where) {
    auto params = model.parameters();
    if (params.size() != ck.tensors.size()) throw DataError(where + ": tensor count does not match the model");
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& [name, value] = ck.tensors[i];
        if (name != params[i].name || value.rows() != params[i].value->rows() || value.cols() != params[i].value->cols()) {
            throw DataError(where + ": tensor '" + name + "' does not match '" + params[i].name + "'");
        }
        *params[i].value = value;
    }
}

template <class Model>
std::vector<ConstParameter> const_view(const Model& model) {
    auto params = const_cast<Model&>(model).parameters();
    std::vector<ConstParameter> out;
    for (const auto& p : params) out.push_back({p.name, p.value});
    return out;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const std::string& kind, const Json& config,
                     const std::vector<ConstParameter>& tensors) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    Writer w(out);
    out.write(kMagic, sizeof kMagic);
    w.pod<std::uint32_t>(kCheckpointVersion);
    w.text(kind);
    const auto config_text = config.dump();
    w.text(config_text);
    w.pod<std::uint64_t>(fnv1a(config_text));
    w.pod<std::uint32_t>(static_cast<std::uint32_t>(tensors.size()));
    for (const auto& t : tensors) {
        w.text(t.name);
        w.pod<std::uint64_t>(static_cast<std::uint64_t>(t.value->rows()));
        w.pod<std::uint64_t>(static_cast<std::uint64_t>(t.value->cols()));
        out.write(reinterpret_cast<const char*>(t.value->data()),
                  static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(t.value->size())));
    }
    if (!out) throw DataError("failed writing " + path.string());
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    Reader r(in, path.string());
    char magic[sizeof kMagic];
    r.read(magic, sizeof magic);
    if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) r.fail("not a checkpoint file");
    const auto version = r.pod<std::uint32_t>();
    if (version != kCheckpointVersion) r.fail("unsupported checkpoint version " + std::to_string(version));
    LoadedCheckpoint ck;
    ck.kind = r.text();
    const auto config_text = r.text();
    if (r.pod<std::uint64_t>() != fnv1a(config_text)) r.fail("config fingerprint mismatch");
    try {
        ck.config = Json::parse(config_text);
    } catch (const Json::parse_error& e) {
        r.fail(std::string("bad config: ") + e.what());
    }
    const auto count = r.pod<std::uint32_t>();
    for (std::uint32_t i = 0; i < count; ++i) {
        auto name = r.text();
        const auto rows = r.pod<std::uint64_t>();
        const auto cols = r.pod<std::uint64_t>();
        if (rows > (1u << 16) || cols > (1u << 16)) r.fail("implausible tensor shape for '" + name + "'");
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        r.read(reinterpret_cast<char*>(m.data()), sizeof(double) * rows * cols);
        ck.tensors.emplace_back(std::move(name), std::move(m));
    }
    return ck;
}

void save_mpd(const std::filesystem::path& path, const MpdModel& model) {
    save_checkpoint(path, "mpd", Json{{"dimension", model.dimension()}}, const_view(model));
}

void save_biaffine(const std::filesystem::path& path, const BiaffineModel& model) {
    save_checkpoint(path, "biaffine", to_json(model.config), const_view(model));
}

MpdModel load_mpd(const std::filesystem::path& path) {
    const auto ck = load_checkpoint(path);
    if (ck.kind != "mpd") throw DataError(path.string() + ": expected an mpd checkpoint, found '" + ck.kind + "'");
    const auto k = ck.config.at("dimension").get<Eigen::Index>();
    MpdModel model{Eigen::MatrixXd::Zero(kLabelCount, k), Eigen::MatrixXd::Zero(kLabelCount, 1)};
    assign(model, ck, path.string());
    return model;
}

BiaffineModel load_biaffine(const std::filesystem::path& path) {
    const auto ck = load_checkpoint(path);
    if (ck.kind != "biaffine") {
        throw DataError(path.string() + ": expected a biaffine checkpoint, found '" + ck.kind + "'");
    }
    Rng unused(0);
    auto model = BiaffineModel::create(biaffine_config_from_json(ck.config), unused);
    assign(model, ck, path.string());
    return model;
}

std::unique_ptr<PolysemyParser> load_parser(const std::filesystem::path& path, Distance metric) {
    const auto kind = load_checkpoint(path).kind;
    if (kind == "mpd") return std::make_unique<MpdParser>(load_mpd(path), metric);
    if (kind == "biaffine") return std::make_unique<BiaffineParser>(load_biaffine(path));
    throw DataError(path.string() + ": unknown model kind '" + kind + "'");
}

}  // namespace chainnet
