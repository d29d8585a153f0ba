#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgre/common.hpp"

namespace kgre {

using ConceptId = std::string;

struct IcdSections {
    std::string title_concatenation;
    std::string code_description;
    std::optional<std::string> see_also;
};

struct ConceptNode {
    ConceptId id;
    // descriptions[0] is the main description
    std::vector<std::string> descriptions;
    std::optional<IcdSections> icd_sections;
    std::vector<std::pair<std::string, ConceptId>> edges;  // (relation label, target)
    std::optional<ConceptId> parent;                       // tree graphs only
};

enum class GraphKind { Icd10Tree, LabeledMultigraph };
enum class KgFormat { Icd10Jsonl, GraphJsonl };

class KnowledgeGraph {
public:
    explicit KnowledgeGraph(GraphKind kind) : kind_(kind) {}

    GraphKind kind() const { return kind_; }
    size_t size() const { return nodes_.size(); }
    const std::vector<ConceptNode>& nodes() const { return nodes_; }

    bool contains(const ConceptId& id) const { return index_.count(id) > 0; }
    const ConceptNode& node(const ConceptId& id) const;

    // insertion order preserved; validates node-local invariants
    void add_node(ConceptNode node);

    // checks dangling edges/parents and tree acyclicity; throws on violation
    void validate() const;

    bool is_parent(const ConceptId& a, const ConceptId& b) const;
    bool is_connected(const ConceptId& a, const ConceptId& b) const;

private:
    GraphKind kind_;
    std::vector<ConceptNode> nodes_;
    std::unordered_map<ConceptId, size_t> index_;
};

KnowledgeGraph load_kg(const std::string& path, KgFormat format);
KnowledgeGraph parse_kg(const std::string& content, KgFormat format);
std::string serialize_kg(const KnowledgeGraph& kg);  // emits the kg's native format
void save_kg(const KnowledgeGraph& kg, const std::string& path);

}  // namespace kgre
