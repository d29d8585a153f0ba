#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgre/kg.hpp"

namespace kgre {

enum class Task { IcdSyn, IcdGraph, SnomedSyn, SnomedGraph, UmlsSyn, UmlsGraph };

const char* task_name(Task t);
Task task_from_name(const std::string& name);

struct TrainingPair {
    std::string mention_text;
    std::string concept_text;
    ConceptId mention_node;
    ConceptId concept_node;
    Task task;

    bool operator==(const TrainingPair&) const = default;
};

struct TaskDataset {
    std::vector<TrainingPair> train;
    std::vector<TrainingPair> dev;
    std::string task_label;
    uint64_t seed = 0;
};

struct TaskStats {
    size_t train_count = 0;
    size_t dev_count = 0;
    std::vector<std::pair<std::string, size_t>> per_task_counts;  // sorted by task name
};

struct TooFewPairs : KgreError {
    using KgreError::KgreError;
};
struct EmptyInput : KgreError {
    using KgreError::KgreError;
};
struct TextContainsTab : KgreError {
    using KgreError::KgreError;
};

// one pair per unordered section pair among the node's present ICD sections,
// ordered (TitleConcatenation, CodeDescription, SeeAlso)
std::vector<TrainingPair> gen_icd_synonym_pairs(const KnowledgeGraph& kg);

// one pair per parent-child link: mention = parent code description,
// concept = child code description
std::vector<TrainingPair> gen_icd_graph_pairs(const KnowledgeGraph& kg,
                                              bool symmetric = false);

// per node with d descriptions: d*(d-1)/2 pairs, later rank as mention
std::vector<TrainingPair> gen_synonym_pairs(const KnowledgeGraph& kg, Task task);

// one pair per unique directed (i, j) edge using main descriptions;
// parallel edges deduplicated, self-loops skipped
std::vector<TrainingPair> gen_graph_pairs(const KnowledgeGraph& kg, Task task,
                                          bool symmetric = false);

TaskDataset split_80_20(std::vector<TrainingPair> pairs, uint64_t seed,
                        const std::string& task_label = "");

TaskDataset make_comb(const std::vector<TaskDataset>& datasets, uint64_t seed);

TaskStats task_stats(const TaskDataset& ds);

// tab-separated: task \t mention_node \t concept_node \t mention_text \t concept_text
std::string serialize_pairs(const std::vector<TrainingPair>& pairs);
std::vector<TrainingPair> parse_pairs(const std::string& content);
void save_pairs(const std::vector<TrainingPair>& pairs, const std::string& path);
std::vector<TrainingPair> load_pairs(const std::string& path);

}  // namespace kgre
