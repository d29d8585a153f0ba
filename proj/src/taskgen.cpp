#include "kgre/taskgen.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace kgre {

const char* task_name(Task t) {
    switch (t) {
        case Task::IcdSyn: return "icd-syn";
        case Task::IcdGraph: return "icd-graph";
        case Task::SnomedSyn: return "snomed-syn";
        case Task::SnomedGraph: return "snomed-graph";
        case Task::UmlsSyn: return "umls-syn";
        case Task::UmlsGraph: return "umls-graph";
    }
    return "?";
}

Task task_from_name(const std::string& name) {
    for (Task t : {Task::IcdSyn, Task::IcdGraph, Task::SnomedSyn, Task::SnomedGraph,
                   Task::UmlsSyn, Task::UmlsGraph}) {
        if (name == task_name(t)) return t;
    }
    throw KgreError("unknown task name: " + name);
}

namespace {

void push_pair(std::vector<TrainingPair>& out, std::string m, std::string c,
               const ConceptId& mn, const ConceptId& cn, Task task) {
    // fully degenerate pairs carry no training signal
    if (m == c && mn == cn) return;
    out.push_back({std::move(m), std::move(c), mn, cn, task});
}

}  // namespace

std::vector<TrainingPair> gen_icd_synonym_pairs(const KnowledgeGraph& kg) {
    if (kg.kind() != GraphKind::Icd10Tree) {
        throw WrongKind("gen_icd_synonym_pairs requires an ICD-10 tree");
    }
    std::vector<TrainingPair> out;
    for (const auto& n : kg.nodes()) {
        if (!n.icd_sections) throw KgreError("node " + n.id + " lacks icd sections");
        const auto& sec = *n.icd_sections;
        std::vector<const std::string*> present = {&sec.title_concatenation,
                                                   &sec.code_description};
        if (sec.see_also) present.push_back(&*sec.see_also);
        for (size_t l = 0; l < present.size(); ++l) {
            for (size_t r = l + 1; r < present.size(); ++r) {
                push_pair(out, *present[l], *present[r], n.id, n.id, Task::IcdSyn);
            }
        }
    }
    return out;
}

std::vector<TrainingPair> gen_icd_graph_pairs(const KnowledgeGraph& kg, bool symmetric) {
    if (kg.kind() != GraphKind::Icd10Tree) {
        throw WrongKind("gen_icd_graph_pairs requires an ICD-10 tree");
    }
    std::vector<TrainingPair> out;
    for (const auto& child : kg.nodes()) {
        if (!child.parent) continue;
        const ConceptNode& parent = kg.node(*child.parent);
        const std::string& pm = parent.icd_sections->code_description;
        const std::string& cc = child.icd_sections->code_description;
        push_pair(out, pm, cc, parent.id, child.id, Task::IcdGraph);
        if (symmetric) push_pair(out, cc, pm, child.id, parent.id, Task::IcdGraph);
    }
    return out;
}

std::vector<TrainingPair> gen_synonym_pairs(const KnowledgeGraph& kg, Task task) {
    if (task != Task::SnomedSyn && task != Task::UmlsSyn) {
        throw KgreError("gen_synonym_pairs expects a synonym task");
    }
    if (kg.kind() != GraphKind::LabeledMultigraph) {
        throw WrongKind("gen_synonym_pairs requires a labeled multigraph");
    }
    std::vector<TrainingPair> out;
    for (const auto& n : kg.nodes()) {
        size_t d = n.descriptions.size();
        // ranks are 1-based; mention is the later rank p, concept the earlier q
        for (size_t p = 1; p < d; ++p) {
            for (size_t q = 0; q < p; ++q) {
                push_pair(out, n.descriptions[p], n.descriptions[q], n.id, n.id, task);
            }
        }
    }
    return out;
}

std::vector<TrainingPair> gen_graph_pairs(const KnowledgeGraph& kg, Task task,
                                          bool symmetric) {
    if (task != Task::SnomedGraph && task != Task::UmlsGraph) {
        throw KgreError("gen_graph_pairs expects a graph task");
    }
    if (kg.kind() != GraphKind::LabeledMultigraph) {
        throw WrongKind("gen_graph_pairs requires a labeled multigraph");
    }
    std::vector<TrainingPair> out;
    for (const auto& n : kg.nodes()) {
        std::set<ConceptId> seen;  // dedup parallel edges to the same target
        for (const auto& [label, target] : n.edges) {
            (void)label;
            if (target == n.id) continue;
            if (!seen.insert(target).second) continue;
            const ConceptNode& t = kg.node(target);
            push_pair(out, n.descriptions[0], t.descriptions[0], n.id, t.id, task);
            if (symmetric) {
                push_pair(out, t.descriptions[0], n.descriptions[0], t.id, n.id, task);
            }
        }
    }
    return out;
}

TaskDataset split_80_20(std::vector<TrainingPair> pairs, uint64_t seed,
                        const std::string& task_label) {
    if (pairs.size() < 5) throw TooFewPairs("need at least 5 pairs to split 80:20");
    // exact (mention_text, concept_text, task) triples must not straddle the
    // split; duplicates collapse to their first occurrence
    std::set<std::tuple<std::string, std::string, Task>> seen;
    std::vector<TrainingPair> unique;
    unique.reserve(pairs.size());
    for (auto& p : pairs) {
        if (seen.insert({p.mention_text, p.concept_text, p.task}).second) {
            unique.push_back(std::move(p));
        }
    }
    Rng rng(seed);
    shuffle_inplace(unique, rng);
    size_t n = unique.size();
    size_t n_train = (n * 8 + 9) / 10;  // ceil(0.8 n)
    TaskDataset ds;
    ds.task_label = task_label;
    ds.seed = seed;
    ds.train.assign(unique.begin(), unique.begin() + static_cast<long>(n_train));
    ds.dev.assign(unique.begin() + static_cast<long>(n_train), unique.end());
    return ds;
}

TaskDataset make_comb(const std::vector<TaskDataset>& datasets, uint64_t seed) {
    if (datasets.empty()) throw EmptyInput("make_comb requires at least one dataset");
    size_t s_train = SIZE_MAX, s_dev = SIZE_MAX;
    for (const auto& ds : datasets) {
        if (ds.train.empty()) throw EmptyInput("make_comb input has empty train split");
        s_train = std::min(s_train, ds.train.size());
        s_dev = std::min(s_dev, ds.dev.size());
    }
    Rng rng(seed);
    TaskDataset comb;
    comb.task_label = "comb";
    comb.seed = seed;
    auto sample_into = [&](const std::vector<TrainingPair>& src, size_t k,
                           std::vector<TrainingPair>& dst) {
        auto idx = sample_without_replacement(src.size(), k, rng);
        std::sort(idx.begin(), idx.end());
        for (size_t i : idx) dst.push_back(src[i]);
    };
    for (const auto& ds : datasets) sample_into(ds.train, s_train, comb.train);
    for (const auto& ds : datasets) sample_into(ds.dev, s_dev, comb.dev);
    shuffle_inplace(comb.train, rng);
    shuffle_inplace(comb.dev, rng);
    return comb;
}

TaskStats task_stats(const TaskDataset& ds) {
    TaskStats st;
    st.train_count = ds.train.size();
    st.dev_count = ds.dev.size();
    std::map<std::string, size_t> counts;
    for (const auto& p : ds.train) counts[task_name(p.task)]++;
    for (const auto& p : ds.dev) counts[task_name(p.task)]++;
    st.per_task_counts.assign(counts.begin(), counts.end());
    return st;
}

std::string serialize_pairs(const std::vector<TrainingPair>& pairs) {
    std::string out;
    for (const auto& p : pairs) {
        for (const std::string* s : {&p.mention_text, &p.concept_text}) {
            if (s->find('\t') != std::string::npos) {
                throw TextContainsTab("pair text contains a tab: " + *s);
            }
        }
        out += task_name(p.task);
        out += '\t';
        out += p.mention_node;
        out += '\t';
        out += p.concept_node;
        out += '\t';
        out += p.mention_text;
        out += '\t';
        out += p.concept_text;
        out += '\n';
    }
    return out;
}

std::vector<TrainingPair> parse_pairs(const std::string& content) {
    std::vector<TrainingPair> pairs;
    std::istringstream in(content);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        size_t start = 0;
        for (size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == '\t') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (fields.size() != 5) throw MalformedRecord(line_no, "expected 5 tab-separated fields");
        pairs.push_back({fields[3], fields[4], fields[1], fields[2], task_from_name(fields[0])});
    }
    return pairs;
}

void save_pairs(const std::vector<TrainingPair>& pairs, const std::string& path) {
    write_file(path, serialize_pairs(pairs));
}

std::vector<TrainingPair> load_pairs(const std::string& path) {
    return parse_pairs(read_file(path));
}

}  // namespace kgre
