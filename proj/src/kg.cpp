#include "kgre/kg.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace kgre {

using nlohmann::json;

const ConceptNode& KnowledgeGraph::node(const ConceptId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw UnknownId(id);
    return nodes_[it->second];
}

void KnowledgeGraph::add_node(ConceptNode node) {
    if (node.id.empty()) throw KgreError("empty concept id");
    if (index_.count(node.id)) throw DuplicateId(node.id);
    if (node.descriptions.empty()) throw KgreError("node " + node.id + " has no descriptions");
    for (const auto& d : node.descriptions) {
        if (d.empty()) throw KgreError("node " + node.id + " has an empty description");
    }
    if (node.icd_sections) {
        if (node.icd_sections->title_concatenation.empty() ||
            node.icd_sections->code_description.empty()) {
            throw KgreError("node " + node.id + " has empty icd sections");
        }
    }
    std::set<std::pair<std::string, ConceptId>> seen;
    for (const auto& e : node.edges) {
        if (!seen.insert(e).second) {
            throw KgreError("node " + node.id + " has duplicate edge (" + e.first + ", " +
                            e.second + ")");
        }
    }
    index_.emplace(node.id, nodes_.size());
    nodes_.push_back(std::move(node));
}

void KnowledgeGraph::validate() const {
    for (const auto& n : nodes_) {
        for (const auto& [label, target] : n.edges) {
            (void)label;
            if (!contains(target)) throw DanglingEdge(target);
        }
        if (n.parent && !contains(*n.parent)) throw DanglingEdge(*n.parent);
    }
    if (kind_ == GraphKind::Icd10Tree) {
        // walk every parent chain; a chain longer than the node count is a cycle
        for (const auto& n : nodes_) {
            const ConceptNode* cur = &n;
            size_t hops = 0;
            while (cur->parent) {
                if (++hops > nodes_.size()) throw CycleDetected(n.id);
                cur = &node(*cur->parent);
            }
        }
    }
}

bool KnowledgeGraph::is_parent(const ConceptId& a, const ConceptId& b) const {
    if (kind_ != GraphKind::Icd10Tree) throw WrongKind("is_parent requires an ICD-10 tree");
    if (!contains(a)) throw UnknownId(a);
    const ConceptNode& child = node(b);
    return child.parent && *child.parent == a;
}

bool KnowledgeGraph::is_connected(const ConceptId& a, const ConceptId& b) const {
    if (kind_ != GraphKind::LabeledMultigraph) {
        throw WrongKind("is_connected requires a labeled multigraph");
    }
    const ConceptNode& from = node(a);
    if (!contains(b)) throw UnknownId(b);
    for (const auto& [label, target] : from.edges) {
        (void)label;
        if (target == b) return true;
    }
    return false;
}

namespace {

std::string norm_checked(const json& j, const char* field, size_t line_no) {
    if (!j.is_string()) {
        throw MalformedRecord(line_no, std::string(field) + " must be a string");
    }
    std::string s = normalize_text(j.get<std::string>());
    if (s.empty()) throw MalformedRecord(line_no, std::string(field) + " is empty");
    return s;
}

ConceptNode parse_graph_record(const json& j, size_t line_no) {
    ConceptNode n;
    if (!j.contains("id") || !j.contains("descriptions")) {
        throw MalformedRecord(line_no, "missing id or descriptions");
    }
    n.id = norm_checked(j["id"], "id", line_no);
    if (!j["descriptions"].is_array() || j["descriptions"].empty()) {
        throw MalformedRecord(line_no, "descriptions must be a non-empty array");
    }
    for (const auto& d : j["descriptions"]) {
        n.descriptions.push_back(norm_checked(d, "description", line_no));
    }
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) throw MalformedRecord(line_no, "edges must be an array");
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
                throw MalformedRecord(line_no, "edge must be [label, target_id]");
            }
            n.edges.emplace_back(e[0].get<std::string>(),
                                 normalize_text(e[1].get<std::string>()));
        }
    }
    return n;
}

ConceptNode parse_icd_record(const json& j, size_t line_no) {
    ConceptNode n;
    for (const char* f : {"id", "title_concat", "code_desc"}) {
        if (!j.contains(f)) throw MalformedRecord(line_no, std::string("missing ") + f);
    }
    n.id = norm_checked(j["id"], "id", line_no);
    IcdSections sec;
    sec.title_concatenation = norm_checked(j["title_concat"], "title_concat", line_no);
    sec.code_description = norm_checked(j["code_desc"], "code_desc", line_no);
    if (j.contains("see_also") && !j["see_also"].is_null()) {
        sec.see_also = norm_checked(j["see_also"], "see_also", line_no);
    }
    n.descriptions.push_back(sec.title_concatenation);
    n.descriptions.push_back(sec.code_description);
    if (sec.see_also) n.descriptions.push_back(*sec.see_also);
    n.icd_sections = std::move(sec);
    if (j.contains("parent") && !j["parent"].is_null()) {
        n.parent = norm_checked(j["parent"], "parent", line_no);
    }
    return n;
}

}  // namespace

KnowledgeGraph parse_kg(const std::string& content, KgFormat format) {
    KnowledgeGraph kg(format == KgFormat::Icd10Jsonl ? GraphKind::Icd10Tree
                                                     : GraphKind::LabeledMultigraph);
    std::istringstream in(content);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw MalformedRecord(line_no, e.what());
        }
        if (!j.is_object()) throw MalformedRecord(line_no, "record is not an object");
        try {
            ConceptNode n = (format == KgFormat::Icd10Jsonl) ? parse_icd_record(j, line_no)
                                                             : parse_graph_record(j, line_no);
            kg.add_node(std::move(n));
        } catch (const DuplicateId&) {
            throw;
        } catch (const MalformedRecord&) {
            throw;
        } catch (const KgreError& e) {
            throw MalformedRecord(line_no, e.what());
        }
    }
    kg.validate();
    return kg;
}

KnowledgeGraph load_kg(const std::string& path, KgFormat format) {
    return parse_kg(read_file(path), format);
}

std::string serialize_kg(const KnowledgeGraph& kg) {
    std::string out;
    for (const auto& n : kg.nodes()) {
        json j;
        if (kg.kind() == GraphKind::Icd10Tree) {
            j["id"] = n.id;
            j["title_concat"] = n.icd_sections->title_concatenation;
            j["code_desc"] = n.icd_sections->code_description;
            j["see_also"] = n.icd_sections->see_also ? json(*n.icd_sections->see_also)
                                                     : json(nullptr);
            j["parent"] = n.parent ? json(*n.parent) : json(nullptr);
        } else {
            j["id"] = n.id;
            j["descriptions"] = n.descriptions;
            json edges = json::array();
            for (const auto& [label, target] : n.edges) {
                edges.push_back(json::array({label, target}));
            }
            j["edges"] = edges;
        }
        out += j.dump();
        out += '\n';
    }
    return out;
}

void save_kg(const KnowledgeGraph& kg, const std::string& path) {
    write_file(path, serialize_kg(kg));
}

}  // namespace kgre
