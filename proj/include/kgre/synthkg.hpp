#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kgre/evalkit.hpp"
#include "kgre/kg.hpp"

namespace kgre {

struct SpecInvalid : KgreError {
    using KgreError::KgreError;
};

struct SurfaceNoise {
    double acronym_rate = 0.3;
    double reorder_rate = 0.8;
    double typo_rate = 0.2;
};

struct SynthSpec {
    enum class Mode { Multigraph, IcdTree };
    Mode mode = Mode::Multigraph;
    int n_concepts = 100;
    int d_min = 2;  // synonyms per concept, inclusive range
    int d_max = 5;
    double edge_density = 0.01;  // fraction of ordered node pairs connected
    int tree_branching = 4;      // IcdTree mode
    SurfaceNoise noise;
    uint64_t seed = 1;
};

struct SynthCensus {
    size_t nodes = 0;
    size_t edges = 0;         // edge records, parallel edges included
    size_t parent_links = 0;  // IcdTree mode
    std::vector<size_t> per_node_d;
    size_t synonym_pair_total = 0;  // sum of d*(d-1)/2, or section pairs for ICD
    size_t graph_pair_total = 0;    // unique ordered connected pairs / parent links
};

struct SynthOutput {
    KnowledgeGraph kg;
    SynthCensus census;
    // unseen surface variants of seen concepts (zero-shot on mentions only)
    std::vector<AnnotatedMention> test_in_domain;
    // the subset whose lexical overlap with the concept texts is destroyed
    std::vector<AnnotatedMention> test_acronym;
    // one unseen variant per concept, for held-out-concept splits
    std::vector<AnnotatedMention> holdout_pool;
};

SynthOutput generate(const SynthSpec& spec);

// phrase grammar: modifier + body part + condition
const std::vector<std::string>& grammar_modifiers();
const std::vector<std::string>& grammar_body_parts();
const std::vector<std::string>& grammar_conditions();

struct PhraseWords {
    std::string modifier, body, condition;
};
std::optional<PhraseWords> parse_main_description(const std::string& text);

}  // namespace kgre
