#include "doctest.h"

#include <algorithm>
#include <set>

#include "chainnet/dataset.hpp"
#include "chainnet/embeddings.hpp"
#include "chainnet/inventory.hpp"
#include "fixtures.hpp"

using namespace chainnet;
using namespace chainnet::testing;

namespace {

std::vector<std::string> numbered(std::size_t n, const std::string& prefix = "w") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

InventorySense sense(const std::string& definition, bool proper = false) {
    InventorySense s;
    s.record.definition = definition;
    s.proper_noun = proper;
    return s;
}

}  // namespace

TEST_CASE("splits are 80:10:10 over distinct words") {
    const auto s = split_dataset(numbered(6500), 42);
    CHECK(s.train.size() == 5200);
    CHECK(s.dev.size() == 650);
    CHECK(s.test.size() == 650);
    CHECK(split_dataset(numbered(6500), 42) == s);
    CHECK_FALSE(split_dataset(numbered(6500), 43) == s);

    // Order and duplicates of the input do not matter.
    auto shuffled = numbered(6500);
    std::reverse(shuffled.begin(), shuffled.end());
    shuffled.push_back("w7");
    CHECK(split_dataset(shuffled, 42) == s);

    CHECK(split_dataset(numbered(15), 1).dev.size() == 2);
    CHECK_THROWS_AS(split_dataset(numbered(9), 1), UsageError);
}

TEST_CASE("splits lose and duplicate nothing") {
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        const auto n = 10 + rng.below(300);
        const auto words = numbered(n, "x" + std::to_string(t) + "_");
        const auto s = split_dataset(words, rng.next());
        std::vector<std::string> all;
        for (const auto* part : {&s.train, &s.dev, &s.test}) all.insert(all.end(), part->begin(), part->end());
        std::sort(all.begin(), all.end());
        auto sorted = words;
        std::sort(sorted.begin(), sorted.end());
        CHECK(all == sorted);
        CHECK(s.dev.size() == s.test.size());
    }
}

TEST_CASE("split files round trip") {
    TempDir dir;
    const auto s = split_dataset(numbered(30), 5);
    save_split(dir / "split.json", s, 5);
    CHECK(load_split(dir / "split.json") == s);
    write_file(dir / "bad.json", "{\"train\": 3}");
    CHECK_THROWS_AS(load_split(dir / "bad.json"), DataError);
}

TEST_CASE("inventory JSON loads lemmas in lexicon order") {
    const auto inv = load_inventory(data_path("inventory.json"));
    REQUIRE(inv.contains("march"));
    const auto* senses = inv.find("march");
    REQUIRE(senses);
    CHECK(senses->size() >= 2);
    CHECK_FALSE(senses->front().record.definition.empty());
    CHECK(inv.find("nothing") == nullptr);
    const auto sub = inv.restrict({"neck"});
    CHECK(sub.size() == 1);
    CHECK(sub.contains("neck"));
}

TEST_CASE("WordNet database directories load, with instance synsets as proper nouns") {
    TempDir dir;
    write_file(dir / "data.noun",
               "  1 This software and database is being provided\n"
               "00000100 05 n 02 bank 0 depository_financial_institution 0 001 @ 00000300 n 0000 | a financial institution\n"
               "00000200 17 n 01 bank 0 000 | sloping land beside water\n"
               "00000300 05 n 01 Bank 1 001 @i 00000100 n 0000 | a proper name  \n"
               "00000400 05 n 01 sea_lion 0 000 | an eared seal\n");
    write_file(dir / "index.noun",
               "  1 This software and database is being provided\n"
               "bank n 3 2 @ ~ 3 1 00000100 00000200 00000300\n"
               "sea_lion n 1 0 1 0 00000400\n");
    const auto inv = load_inventory(dir.path());
    const auto* bank = inv.find("bank");
    REQUIRE(bank);
    REQUIRE(bank->size() == 3);
    CHECK((*bank)[0].record.definition == "a financial institution");
    CHECK((*bank)[0].record.synonyms == std::vector<std::string>{"depository financial institution"});
    CHECK((*bank)[1].record.synonyms.empty());
    CHECK_FALSE((*bank)[0].proper_noun);
    CHECK((*bank)[2].proper_noun);
    CHECK((*bank)[2].record.definition == "a proper name");
    CHECK(inv.contains("sea lion"));

    write_file(dir / "index.noun", "bank n 1 0 1 0 00000999\n");
    CHECK_THROWS_AS(load_inventory(dir.path()), DataError);
    CHECK_THROWS_AS(load_wordnet_dict(dir / "missing"), DataError);
}

TEST_CASE("word filter keeps lemmas with 2 to 10 senses") {
    SenseInventory inv;
    inv.add("one", {sense("a")});
    inv.add("two", {sense("a"), sense("b")});
    inv.add("ten", std::vector<InventorySense>(10, sense("a")));
    inv.add("eleven", std::vector<InventorySense>(11, sense("a")));
    inv.add("x", {sense("a"), sense("b")});
    inv.add("sea lion", {sense("a"), sense("b")});
    inv.add("x-ray", {sense("a"), sense("b")});
    inv.add("paris", {sense("a", true), sense("b", true)});
    inv.add("bank", {sense("a"), sense("b", true)});
    CHECK(filter_words(inv) == std::vector<std::string>{"bank", "ten", "two"});
}

TEST_CASE("weighted sampling draws distinct words and favours heavy ones") {
    const auto words = numbered(50);
    std::map<std::string, double> weights;
    for (const auto& w : words) weights[w] = 1.0;
    weights["w0"] = 1000.0;
    int first = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto pick = weighted_sample(words, weights, 10, seed);
        CHECK(pick.size() == 10);
        CHECK(std::set<std::string>(pick.begin(), pick.end()).size() == 10);
        first += std::find(pick.begin(), pick.end(), "w0") != pick.end();
    }
    CHECK(first >= 48);
    CHECK(weighted_sample(words, weights, 10, 1) == weighted_sample(words, weights, 10, 1));
    CHECK(weighted_sample(words, weights, 100, 1).size() == 50);

    TempDir dir;
    write_file(dir / "w.txt", "# weights\nsea lion 2.5\nbank\t1\n");
    const auto loaded = load_word_weights(dir / "w.txt");
    CHECK(loaded.at("sea lion") == 2.5);
    CHECK(loaded.at("bank") == 1.0);
}

TEST_CASE("embedding files round trip exactly") {
    TempDir dir;
    EmbeddingTable table(3);
    Rng rng(8);
    for (int i = 1; i <= 4; ++i) {
        table.insert({"neck", SenseIndex::plain(i)}, Eigen::Vector3d(rng.normal(), rng.normal() * 1e-17, 1.0 / 3.0));
    }
    save_embeddings(dir / "emb.txt", table);
    const auto back = load_embeddings(dir / "emb.txt");
    CHECK(back.dimension() == 3);
    CHECK(back.entries() == table.entries());

    // Without the sidecar the first row fixes the dimension.
    write_file(dir / "plain.txt", "neck#1 1 2\nneck#2 3 4\n");
    CHECK(load_embeddings(dir / "plain.txt").dimension() == 2);
    write_file(dir / "ragged.txt", "neck#1 1 2\nneck#2 3\n");
    CHECK_THROWS_AS(load_embeddings(dir / "ragged.txt"), DataError);
    write_file(dir / "nan.txt", "neck#1 1 nan\n");
    CHECK_THROWS_AS(load_embeddings(dir / "nan.txt"), DataError);
    CHECK_THROWS_AS(table.insert({"neck", SenseIndex::plain(9)}, Eigen::Vector2d(1, 2)), DataError);
}

TEST_CASE("coverage lists missing senses and excluded words") {
    SenseInventory inv;
    inv.add("bank", {sense("a"), sense("b")});
    inv.add("neck", {sense("a"), sense("b")});
    EmbeddingTable table(1);
    table.insert({"bank", SenseIndex::plain(1)}, Eigen::VectorXd::Ones(1));
    table.insert({"bank", SenseIndex::plain(2)}, Eigen::VectorXd::Ones(1));
    table.insert({"neck", SenseIndex::plain(1)}, Eigen::VectorXd::Ones(1));
    const auto report = coverage(table, inv);
    CHECK(report.missing == std::vector<SenseId>{{"neck", SenseIndex::plain(2)}});
    CHECK(report.excluded_words == std::vector<std::string>{"neck"});
}
