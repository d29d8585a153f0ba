#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "kgre/retrieval.hpp"
#include "kgre/taskgen.hpp"

namespace kgre {

struct NoEligibleMentions : KgreError {
    using KgreError::KgreError;
};

struct AnnotatedMention {
    std::string mention_text;
    ConceptId gold_concept;
};

enum class Regime { MentionsOnly, MentionsAndConcepts };

struct EvalSplit {
    std::string name;
    std::vector<AnnotatedMention> mentions;
    Regime regime = Regime::MentionsOnly;
    std::set<ConceptId> held_out_concepts;  // empty for MentionsOnly
};

struct MentionTrace {
    std::string mention_text;
    ConceptId gold;
    int gold_rank = 0;  // 1-based; 0 when absent from the top-k
    std::vector<ConceptId> top5;
};

struct EvalReport {
    std::string split_name;
    std::string system_name;
    double r_at_1 = 0.0;
    double r_at_25 = 0.0;
    size_t n = 0;
    std::vector<MentionTrace> traces;
};

double recall_at_k(const std::vector<std::pair<RetrievalResult, ConceptId>>& results, int k);

// passes training pairs that touch no held-out concept
using PairFilter = std::function<bool(const TrainingPair&)>;

std::pair<EvalSplit, PairFilter> make_zeroshot_split(const KnowledgeGraph& kg,
                                                     const std::vector<AnnotatedMention>& mentions,
                                                     Regime regime, double holdout_fraction,
                                                     uint64_t seed);

using SearchFn = std::function<RetrievalResult(const std::string& mention, int k)>;

EvalReport evaluate(const SearchFn& search, const std::string& system_name,
                    const EvalSplit& split);

// mention_text <TAB> gold_concept_id per line; golds must resolve in the KG
std::vector<AnnotatedMention> parse_mentions(const std::string& content,
                                             const KnowledgeGraph& kg);
std::vector<AnnotatedMention> load_mentions(const std::string& path,
                                            const KnowledgeGraph& kg);
std::string serialize_mentions(const std::vector<AnnotatedMention>& mentions);
void save_mentions(const std::vector<AnnotatedMention>& mentions, const std::string& path);

std::string serialize_report(const EvalReport& report);  // line-delimited records
std::string summary_table(const std::vector<EvalReport>& reports);

}  // namespace kgre
