#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "chainnet/cli.hpp"
#include "chainnet/embeddings.hpp"
#include "chainnet/evaluation.hpp"
#include "fixtures.hpp"
#include "synthetic.hpp"

using namespace chainnet;
using namespace chainnet::testing;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    args.insert(args.begin(), "chainnet");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Outcome o;
    o.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string fx(const std::string& name) { return data_path(name + ".json").string(); }

void write_jsonl(const std::filesystem::path& path, const std::vector<WordAnnotation>& annotations) {
    std::string text;
    for (const auto& a : annotations) text += to_json(a).dump() + "\n";
    write_file(path, text);
}

WordAnnotation by(WordAnnotation a, const std::string& annotator) {
    a.annotator = annotator;
    return a;
}

}  // namespace

TEST_CASE("help, usage errors and unknown subcommands") {
    CHECK(cli({"--help"}).code == kExitOk);
    const auto help = cli({"count", "--help"});
    CHECK(help.code == kExitOk);
    CHECK(help.out.find("--senses") != std::string::npos);
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"frobnicate"}).code == kExitUsage);
    CHECK(cli({"count"}).code == kExitUsage);
    CHECK(cli({"count", "-n", "many"}).code == kExitUsage);
    CHECK(cli({"count", "-n", "0"}).code == kExitUsage);
    CHECK(cli({"count", "-n", "30"}).code == kExitUsage);
    CHECK(cli({"agree", "--annotations", fx("neck")}).code == kExitUsage);
}

TEST_CASE("count prints the number of annotations") {
    auto o = cli({"count", "-n", "4"});
    CHECK(o.code == kExitOk);
    CHECK(o.out.rfind("729", 0) == 0);

    o = cli({"count", "-n", "3", "--enumerate", "--constructible", "--json"});
    REQUIRE(o.code == kExitOk);
    const auto j = Json::parse(o.out);
    // Counts are exact integers of any size, so they are written as strings.
    CHECK(j["single_root"] == "36");
    CHECK(j["total"] == "49");
    CHECK(j["enumerated"] == 49);
    CHECK(j["constructible"] == "31");
}

TEST_CASE("validate exits 0 on valid files and 1 on violations or broken files") {
    auto o = cli({"validate", fx("march"), fx("neck"), fx("birth"), fx("twin")});
    CHECK(o.code == kExitOk);
    CHECK(o.out.find("4 annotation(s), 0 invalid") != std::string::npos);

    o = cli({"validate", "--json", fx("neck"), fx("bad_cycle")});
    CHECK(o.code == kExitData);
    const auto j = Json::parse(o.out);
    CHECK(j["invalid"] == 1);
    CHECK_FALSE(j["violations"].empty());

    CHECK(cli({"validate", fx("malformed")}).code == kExitData);
    CHECK(cli({"validate", fx("no_such_file")}).code == kExitData);
}

TEST_CASE("stats, preprocess and agree") {
    TempDir dir;
    auto o = cli({"stats", "--annotations", fx("march"), fx("neck"), "--inventory", fx("inventory")});
    CHECK(o.code == kExitOk);
    CHECK_NOTHROW(Json::parse(o.out));

    o = cli({"preprocess", "--annotations", fx("birth"), fx("twin"), "--out", (dir / "pre.jsonl").string()});
    CHECK(o.code == kExitOk);
    CHECK(cli({"validate", (dir / "pre.jsonl").string()}).code == kExitOk);
    const auto text = read_file(dir / "pre.jsonl");
    CHECK(text.find("\"1A\"") == std::string::npos);
    CHECK(text.find("\"V1\"") == std::string::npos);
    CHECK(cli({"preprocess", "--annotations", fx("bad_cycle")}).code == kExitData);

    write_jsonl(dir / "a.jsonl", {by(fixture("neck"), "a"), by(fixture("march"), "a")});
    write_jsonl(dir / "b.jsonl", {by(fixture("neck"), "b"), by(fixture("march"), "b")});
    o = cli({"agree", "--annotations", (dir / "a.jsonl").string(), (dir / "b.jsonl").string(), "--out",
             (dir / "agree.json").string()});
    CHECK(o.code == kExitOk);
    CHECK_FALSE(o.out.empty());
    CHECK(std::filesystem::exists(dir / "agree.json"));
    CHECK_NOTHROW(Json::parse(read_file(dir / "agree.json")));
    CHECK(cli({"agree", "--annotations", (dir / "a.jsonl").string(), (dir / "b.jsonl").string(), "--filters",
               "all,bogus"})
              .code == kExitUsage);

    write_file(dir / "c1.tsv", "bank\t1,2;3\nneck\t1;2\n");
    write_file(dir / "c2.tsv", "bank\t1;2;3\nneck\t1;2\n");
    o = cli({"agree", "--clusters", (dir / "c1.tsv").string(), (dir / "c2.tsv").string()});
    CHECK(o.code == kExitOk);
    CHECK(Json::parse(o.out)["fraction_differing"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("split, train, parse, evaluate and significance end to end") {
    TempDir dir;
    SyntheticOptions options;
    options.words = 80;
    options.code_size = 4;
    options.max_senses = 5;
    const auto corpus = make_synthetic_corpus(options);
    write_jsonl(dir / "gold.jsonl", corpus.gold);
    save_embeddings(dir / "emb.txt", corpus.table);
    const auto gold = (dir / "gold.jsonl").string();
    const auto emb = (dir / "emb.txt").string();
    const auto split = (dir / "split.json").string();

    REQUIRE(cli({"split", "--annotations", gold, "--seed", "3", "--out", split}).code == kExitOk);
    const auto s = Json::parse(read_file(split));
    CHECK(s["test"].size() == 8);
    CHECK(s["seed"] == 3);

    auto o = cli({"train", "--model", "mpd", "--annotations", gold, "--embeddings", emb, "--split", split, "--out",
                  (dir / "mpd.bin").string(), "--log", (dir / "log.tsv").string(), "--learning-rate", "0.05",
                  "--max-epochs", "20"});
    REQUIRE(o.code == kExitOk);
    CHECK(read_file(dir / "log.tsv").rfind("phase\t", 0) == 0);

    o = cli({"train", "--model", "biaffine", "--annotations", gold, "--embeddings", emb, "--split", split, "--out",
             (dir / "bi.bin").string(), "--learning-rate", "0.01", "--max-epochs", "3", "--edge-hidden", "8",
             "--label-hidden", "4"});
    REQUIRE(o.code == kExitOk);
    CHECK(cli({"train", "--model", "lstm", "--annotations", gold, "--embeddings", emb, "--split", split, "--out",
               (dir / "x.bin").string()})
              .code == kExitUsage);

    o = cli({"parse", "--model", (dir / "mpd.bin").string(), "--annotations", gold, "--embeddings", emb});
    CHECK(o.code == kExitOk);
    std::istringstream lines(o.out);
    std::string line;
    std::size_t parsed = 0;
    while (std::getline(lines, line)) {
        CHECK(is_well_formed(parse_from_json(Json::parse(line))));
        ++parsed;
    }
    CHECK(parsed == corpus.gold.size());

    write_file(dir / "words.txt", "neck\nmarch\n");
    o = cli({"parse", "--random", "--seed", "4", "--inventory", fx("inventory"), "--words",
             (dir / "words.txt").string(), "--n-best"});
    CHECK(o.code == kExitOk);
    const auto first = Json::parse(o.out.substr(0, o.out.find('\n')));
    CHECK(first["word"] == "neck");
    CHECK(first["variants"].size() == 5);

    const auto mpd_report = (dir / "mpd.json").string();
    const auto random_report = (dir / "random.json").string();
    o = cli({"evaluate", "--model", (dir / "mpd.bin").string(), "--annotations", gold, "--embeddings", emb, "--split",
             split, "--protocol", "1-best", "--out", mpd_report});
    REQUIRE(o.code == kExitOk);
    CHECK(o.out.find("UUAS") != std::string::npos);
    o = cli({"evaluate", "--random", "--seed", "1", "--annotations", gold, "--split", split, "--protocol", "1-best",
             "--out", random_report});
    REQUIRE(o.code == kExitOk);

    o = cli({"significance", "--results", mpd_report, random_report, "--resamples", "500", "--out",
             (dir / "sig.json").string()});
    CHECK(o.code == kExitOk);
    const auto sig = Json::parse(read_file(dir / "sig.json"));
    CHECK_FALSE(sig.empty());

    CHECK(cli({"evaluate", "--model", (dir / "missing.bin").string(), "--annotations", gold, "--embeddings", emb})
              .code == kExitData);
    CHECK(cli({"evaluate", "--annotations", gold}).code == kExitUsage);
}

TEST_CASE("options can come from a config file") {
    TempDir dir;
    write_file(dir / "count.toml", "[count]\nsenses = 3\nlabels = 2\n");
    const auto o = cli({"--config", (dir / "count.toml").string(), "count"});
    CHECK(o.code == kExitOk);
    CHECK(o.out.rfind("49", 0) == 0);
}

TEST_CASE("the installed binary reports exit codes") {
    const std::string exe = CHAINNET_CLI_PATH;
    auto status = [&](const std::string& args) {
        const int raw = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status("count -n 3") == 0);
    CHECK(status("validate " + fx("bad_cycle")) == 1);
    CHECK(status("count") == 2);
}
