#include <doctest.h>

#include <set>
#include <utility>

#include "kgre/kg.hpp"
#include "kgre/synthkg.hpp"

using namespace kgre;

namespace {

const char* kTinyIcd =
    R"({"id": "R52", "title_concat": "Pain", "code_desc": "R52 Pain, unspecified", "see_also": null, "parent": null}
{"id": "R07.9", "title_concat": "Chest Pain", "code_desc": "R07.9 Chest pain, unspecified", "see_also": "Pain, chest", "parent": "R52"}
)";

}  // namespace

TEST_CASE("icd jsonl: two records with a parent link") {
    KnowledgeGraph kg = parse_kg(kTinyIcd, KgFormat::Icd10Jsonl);
    CHECK(kg.size() == 2);
    CHECK(kg.node("R07.9").parent == ConceptId("R52"));
    CHECK(kg.node("R52").icd_sections->see_also == std::nullopt);
    CHECK(kg.node("R07.9").descriptions.size() == 3);
}

TEST_CASE("graph jsonl: dangling edge names the missing target") {
    std::string content =
        R"({"id": "A", "descriptions": ["alpha"], "edges": []}
{"id": "B", "descriptions": ["beta"], "edges": [["is_a", "C"]]}
)";
    CHECK_THROWS_WITH_AS(parse_kg(content, KgFormat::GraphJsonl),
                         "edge target does not exist: C", DanglingEdge);
}

TEST_CASE("load errors: duplicate id, malformed record, cycle") {
    CHECK_THROWS_AS(parse_kg(R"({"id": "A", "descriptions": ["a"]}
{"id": "A", "descriptions": ["b"]}
)",
                             KgFormat::GraphJsonl),
                    DuplicateId);
    CHECK_THROWS_AS(parse_kg("{\"id\": \"A\"}\n", KgFormat::GraphJsonl), MalformedRecord);
    CHECK_THROWS_AS(parse_kg("not json\n", KgFormat::GraphJsonl), MalformedRecord);
    // two nodes that are each other's parent
    std::string cyclic =
        R"({"id": "A", "title_concat": "a", "code_desc": "A a", "see_also": null, "parent": "B"}
{"id": "B", "title_concat": "b", "code_desc": "B b", "see_also": null, "parent": "A"}
)";
    CHECK_THROWS_AS(parse_kg(cyclic, KgFormat::Icd10Jsonl), CycleDetected);
}

TEST_CASE("duplicate (label, target) edges are rejected") {
    std::string content =
        R"({"id": "A", "descriptions": ["alpha"], "edges": [["is_a", "A"], ["is_a", "A"]]}
)";
    CHECK_THROWS_AS(parse_kg(content, KgFormat::GraphJsonl), MalformedRecord);
}

TEST_CASE("text normalization collapses whitespace without case folding") {
    std::string content = "{\"id\": \"  A  \", \"descriptions\": [\" Chest   PAIN \"]}\n";
    KnowledgeGraph kg = parse_kg(content, KgFormat::GraphJsonl);
    CHECK(kg.node("A").descriptions[0] == "Chest PAIN");
}

TEST_CASE("is_parent on a small reference shape") {
    KnowledgeGraph kg = parse_kg(kTinyIcd, KgFormat::Icd10Jsonl);
    CHECK(kg.is_parent("R52", "R07.9"));
    CHECK_FALSE(kg.is_parent("R07.9", "R52"));
    CHECK_FALSE(kg.is_parent("R52", "R52"));  // never its own parent
    CHECK_THROWS_AS(kg.is_parent("R52", "nope"), UnknownId);
}

TEST_CASE("is_parent: unrelated siblings are false") {
    std::string content =
        R"({"id": "P", "title_concat": "p", "code_desc": "P p", "see_also": null, "parent": null}
{"id": "A", "title_concat": "a", "code_desc": "A a", "see_also": null, "parent": "P"}
{"id": "B", "title_concat": "b", "code_desc": "B b", "see_also": null, "parent": "P"}
)";
    KnowledgeGraph kg = parse_kg(content, KgFormat::Icd10Jsonl);
    CHECK_FALSE(kg.is_parent("A", "B"));
}

TEST_CASE("is_connected respects edge direction and any label") {
    std::string content =
        R"({"id": "A", "descriptions": ["alpha"], "edges": [["finding_site", "B"]]}
{"id": "B", "descriptions": ["beta"], "edges": []}
)";
    KnowledgeGraph kg = parse_kg(content, KgFormat::GraphJsonl);
    CHECK(kg.is_connected("A", "B"));
    CHECK_FALSE(kg.is_connected("B", "A"));
}

TEST_CASE("wrong kind errors") {
    KnowledgeGraph tree = parse_kg(kTinyIcd, KgFormat::Icd10Jsonl);
    CHECK_THROWS_AS(tree.is_connected("R52", "R07.9"), WrongKind);
    KnowledgeGraph graph =
        parse_kg("{\"id\": \"A\", \"descriptions\": [\"a\"]}\n", KgFormat::GraphJsonl);
    CHECK_THROWS_AS(graph.is_parent("A", "A"), WrongKind);
}

TEST_CASE("synthetic 500-node export loads with the census node/edge counts") {
    SynthSpec spec;
    spec.n_concepts = 500;
    spec.edge_density = 0.005;
    spec.seed = 42;
    SynthOutput synth = generate(spec);
    std::string serialized = serialize_kg(synth.kg);
    KnowledgeGraph loaded = parse_kg(serialized, KgFormat::GraphJsonl);
    CHECK(loaded.size() == synth.census.nodes);
    size_t edges = 0;
    for (const auto& n : loaded.nodes()) edges += n.edges.size();
    CHECK(edges == synth.census.edges);
}

TEST_CASE("round-trip: load, serialize, reload is isomorphic") {
    SynthSpec spec;
    spec.n_concepts = 60;
    spec.seed = 7;
    KnowledgeGraph kg = generate(spec).kg;
    KnowledgeGraph back = parse_kg(serialize_kg(kg), KgFormat::GraphJsonl);
    REQUIRE(back.size() == kg.size());
    for (const auto& n : kg.nodes()) {
        const ConceptNode& m = back.node(n.id);
        CHECK(m.descriptions == n.descriptions);
        CHECK(m.edges == n.edges);
    }

    SynthSpec icd;
    icd.mode = SynthSpec::Mode::IcdTree;
    icd.n_concepts = 40;
    icd.seed = 9;
    KnowledgeGraph tree = generate(icd).kg;
    KnowledgeGraph tree_back = parse_kg(serialize_kg(tree), KgFormat::Icd10Jsonl);
    REQUIRE(tree_back.size() == tree.size());
    for (const auto& n : tree.nodes()) {
        CHECK(tree_back.node(n.id).descriptions == n.descriptions);
        CHECK(tree_back.node(n.id).parent == n.parent);
    }
}

TEST_CASE("is_connected agrees with an exhaustive edge-list scan") {
    SynthSpec spec;
    spec.n_concepts = 50;
    spec.edge_density = 0.05;
    spec.seed = 11;
    KnowledgeGraph kg = generate(spec).kg;
    // brute-force census of ordered connected pairs
    std::set<std::pair<ConceptId, ConceptId>> truth;
    for (const auto& n : kg.nodes()) {
        for (const auto& [label, target] : n.edges) {
            (void)label;
            truth.insert({n.id, target});
        }
    }
    for (const auto& a : kg.nodes()) {
        for (const auto& b : kg.nodes()) {
            CHECK(kg.is_connected(a.id, b.id) == (truth.count({a.id, b.id}) > 0));
        }
    }
}
