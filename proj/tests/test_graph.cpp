#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kgrx/errors.hpp"
#include "kgrx/graph.hpp"
#include "kgrx/rng.hpp"

using namespace kgrx;

namespace {

std::string data_path(const std::string& name) {
    return std::string(KGRX_TEST_DATA_DIR) + "/" + name;
}

std::string write_temp(const std::string& stem, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / (stem + ".tsv");
    std::ofstream out(path);
    out << content;
    return path.string();
}

// Random graph over a small id universe; returns the raw triple soup before
// deduplication so tests can build their own reference views of it.
std::vector<Triple> random_soup(Rng& rng, int n_entities, int n_rows) {
    std::vector<Triple> soup;
    for (int i = 0; i < n_rows; ++i) {
        Triple t;
        t.head = "e" + std::to_string(rng.below(static_cast<std::uint64_t>(n_entities)));
        t.tail = "e" + std::to_string(rng.below(static_cast<std::uint64_t>(n_entities)));
        t.relation = "r" + std::to_string(rng.below(3));
        t.article_count = static_cast<long long>(rng.below(20));
        soup.push_back(std::move(t));
    }
    return soup;
}

// Deduplication is the loader's job, so the soup goes through a file.
Graph graph_from_soup(const std::vector<Triple>& soup, const std::string& stem) {
    std::string content;
    for (const Triple& t : soup)
        content += t.head + "\tgene\t" + t.relation + "\t" + t.tail + "\tgene\t" +
                   std::to_string(t.article_count) + "\n";
    return Graph::load(write_temp(stem, content));
}

}  // namespace

TEST_CASE("toy graph loads with expected composition") {
    const Graph g = Graph::load(data_path("toy_graph.tsv"));
    CHECK(g.entities().size() == 20);
    CHECK(g.triples().size() == 40);
    CHECK(g.ids_of_kind(EntityKind::drug).size() == 8);
    CHECK(g.ids_of_kind(EntityKind::disease).size() == 4);
    CHECK(g.ids_of_kind(EntityKind::gene).size() == 8);
    const std::vector<std::string> rels = g.relations();
    CHECK(rels == std::vector<std::string>{"associates", "indication", "interacts", "targets"});
    CHECK(g.has_triple("drugA1", "indication", "diseaseA1"));
    CHECK_FALSE(g.has_triple("diseaseA1", "indication", "drugA1"));
    const Entity& e = g.entity("geneB3");
    CHECK(e.kind == EntityKind::gene);
    CHECK(e.name == "geneB3");
}

TEST_CASE("entities and triples come out sorted") {
    const Graph g = Graph::load(data_path("toy_graph.tsv"));
    CHECK(std::is_sorted(g.entities().begin(), g.entities().end(),
                         [](const Entity& a, const Entity& b) { return a.id < b.id; }));
    CHECK(std::is_sorted(g.triples().begin(), g.triples().end(),
                         [](const Triple& a, const Triple& b) {
                             return std::tie(a.head, a.relation, a.tail) <
                                    std::tie(b.head, b.relation, b.tail);
                         }));
}

TEST_CASE("duplicate rows collapse keeping the largest article count") {
    const std::string path = write_temp(
        "kgrx_dup",
        "a\tdrug\ttreats\tb\tdisease\t3\n"
        "a\tdrug\ttreats\tb\tdisease\t9\n"
        "a\tdrug\ttreats\tb\tdisease\t1\n");
    const Graph g = Graph::load(path);
    REQUIRE(g.triples().size() == 1);
    CHECK(g.triples()[0].article_count == 9);
}

TEST_CASE("dedup against a set-based oracle") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<Triple> soup = random_soup(rng, 6, 50);
        const Graph g = graph_from_soup(soup, "kgrx_soup_dedup");

        std::map<std::string, long long> oracle;  // key -> max count
        for (const Triple& t : soup) {
            long long& c = oracle[triple_key(t.head, t.relation, t.tail)];
            c = std::max(c, t.article_count);
        }
        REQUIRE(g.triples().size() == oracle.size());
        for (const Triple& t : g.triples()) {
            auto it = oracle.find(triple_key(t.head, t.relation, t.tail));
            REQUIRE(it != oracle.end());
            CHECK(t.article_count == it->second);
        }
    }
}

TEST_CASE("neighbors match a brute-force scan and cover every incidence") {
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const Graph g = graph_from_soup(random_soup(rng, 5, 30), "kgrx_soup_nbr");

        std::size_t total_hits = 0;
        for (const Entity& e : g.entities()) {
            const std::vector<NeighborHit> hits = g.neighbors(e.id);
            total_hits += hits.size();

            std::size_t expected = 0;
            for (const Triple& t : g.triples()) {
                if (t.head == e.id) ++expected;  // forward role
                if (t.tail == e.id) ++expected;  // backward role (self loop counts again)
            }
            REQUIRE(hits.size() == expected);

            for (const NeighborHit& h : hits) {
                const Triple& t = g.triples()[h.triple_index];
                if (h.forward) {
                    CHECK(t.head == e.id);
                    CHECK(t.tail == h.other);
                } else {
                    CHECK(t.tail == e.id);
                    CHECK(t.head == h.other);
                }
            }
            const bool sorted = std::is_sorted(
                hits.begin(), hits.end(), [&](const NeighborHit& a, const NeighborHit& b) {
                    const Triple& ta = g.triples()[a.triple_index];
                    const Triple& tb = g.triples()[b.triple_index];
                    return std::tie(ta.relation, a.other, b.forward) <
                           std::tie(tb.relation, b.other, a.forward);
                });
            CHECK(sorted);
        }
        // Every triple contributes exactly two incidences.
        CHECK(total_hits == 2 * g.triples().size());
    }
}

TEST_CASE("neighbors honors relation exclusion") {
    const Graph g = Graph::load(data_path("toy_graph.tsv"));
    const auto all_hits = g.neighbors("geneA1");
    const auto filtered = g.neighbors("geneA1", {"interacts"});
    CHECK(filtered.size() < all_hits.size());
    for (const NeighborHit& h : filtered)
        CHECK(g.triples()[h.triple_index].relation != "interacts");
}

TEST_CASE("save and reload give an identical graph") {
    const Graph g = Graph::load(data_path("toy_graph.tsv"));
    const auto path = std::filesystem::temp_directory_path() / "kgrx_roundtrip.tsv";
    g.save(path.string());
    const Graph h = Graph::load(path.string());
    REQUIRE(g.entities().size() == h.entities().size());
    REQUIRE(g.triples().size() == h.triples().size());
    for (std::size_t i = 0; i < g.entities().size(); ++i) CHECK(g.entities()[i] == h.entities()[i]);
    for (std::size_t i = 0; i < g.triples().size(); ++i) CHECK(g.triples()[i] == h.triples()[i]);
}

TEST_CASE("malformed input is rejected") {
    SUBCASE("conflicting kinds for one id") {
        const std::string path = write_temp("kgrx_kinds",
                                            "a\tdrug\ttreats\tb\tdisease\n"
                                            "a\tgene\ttreats\tc\tdisease\n");
        CHECK_THROWS_AS(Graph::load(path), ValidationError);
    }
    SUBCASE("negative article count") {
        const std::string path = write_temp("kgrx_neg", "a\tdrug\ttreats\tb\tdisease\t-2\n");
        CHECK_THROWS_AS(Graph::load(path), ValidationError);
    }
    SUBCASE("ragged row") {
        const std::string path = write_temp("kgrx_ragged", "a\tdrug\ttreats\n");
        CHECK_THROWS_AS(Graph::load(path), ParseError);
    }
    SUBCASE("unparseable count") {
        const std::string path = write_temp("kgrx_count", "a\tdrug\ttreats\tb\tdisease\txyz\n");
        CHECK_THROWS_AS(Graph::load(path), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(Graph::load("/nonexistent/kgrx.tsv"), ParseError);
    }
}

TEST_CASE("comments, blank lines and missing counts are tolerated") {
    const std::string path = write_temp("kgrx_lenient",
                                        "# header comment\n"
                                        "\n"
                                        "a\tdrug\ttreats\tb\tdisease\n"
                                        "c\tDrug\ttreats\tb\tDISEASE\t4\n");
    const Graph g = Graph::load(path);
    REQUIRE(g.triples().size() == 2);
    CHECK(g.triples()[0].article_count == 0);
    CHECK(g.entity("c").kind == EntityKind::drug);
}

TEST_CASE("unknown kind strings map to other") {
    CHECK(parse_kind("widget") == EntityKind::other);
    CHECK(parse_kind("DISEASE") == EntityKind::disease);
    CHECK(parse_kind("Pathway") == EntityKind::pathway);
    CHECK(parse_kind("phenotype") == EntityKind::phenotype);
}

TEST_CASE("entity lookup failures throw") {
    const Graph g = Graph::load(data_path("toy_graph.tsv"));
    CHECK_FALSE(g.has_entity("nope"));
    CHECK_THROWS_AS(g.entity("nope"), NotFoundError);
}

TEST_CASE("find_by_name is canonical and breaks ties by smallest id") {
    std::vector<Entity> entities = {{"z9", "SAME name", EntityKind::drug},
                                    {"a1", "same NAME  ", EntityKind::drug},
                                    {"m5", "same name", EntityKind::gene}};
    std::vector<Triple> triples = {{"z9", "r", "a1", 0}, {"m5", "r", "a1", 0}};
    // Entity list passed in unsorted on purpose.
    const Graph g(entities, triples);
    const Entity* hit = g.find_by_name("  Same Name", EntityKind::drug);
    REQUIRE(hit != nullptr);
    CHECK(hit->id == "a1");
    CHECK(g.find_by_name("same name", EntityKind::disease) == nullptr);
    CHECK(g.find_by_name("absent", EntityKind::drug) == nullptr);
}

TEST_CASE("triple_key is the tab-joined identity") {
    CHECK(triple_key("a", "b", "c") == "a\tb\tc");
}
