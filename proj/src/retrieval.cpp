#include "kgre/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

namespace kgre {

ConceptCatalog catalog_from_kg(const KnowledgeGraph& kg, bool main_desc_only) {
    ConceptCatalog cat;
    for (const auto& n : kg.nodes()) {
        size_t limit = main_desc_only ? 1 : n.descriptions.size();
        for (size_t i = 0; i < limit; ++i) {
            cat.entries.push_back({n.id, n.descriptions[i], i == 0});
        }
    }
    if (cat.entries.empty()) throw KgreError("catalog is empty");
    return cat;
}

namespace {

// best score per concept, then sort by (-score, concept_id), cut to k
RetrievalResult collapse_and_rank(const std::vector<std::pair<ConceptId, double>>& scored,
                                  int k) {
    std::map<ConceptId, double> best;
    for (const auto& [id, score] : scored) {
        auto it = best.find(id);
        if (it == best.end() || score > it->second) best[id] = score;
    }
    std::vector<std::pair<ConceptId, double>> ranked(best.begin(), best.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<int>(ranked.size()) > k) ranked.resize(static_cast<size_t>(k));
    return {std::move(ranked)};
}

}  // namespace

DenseIndex build_dense_index(const EncoderModel& model, const Tokenizer& tok,
                             const ConceptCatalog& catalog, uint64_t model_fingerprint,
                             int threads) {
    std::vector<std::vector<int>> ids;
    ids.reserve(catalog.entries.size());
    for (const auto& e : catalog.entries) {
        ids.push_back(tok.encode_text(e.text, model.dims.max_len));
    }
    std::vector<Vec> rows = embed(model, ids, threads);
    DenseIndex index;
    index.catalog = catalog;
    index.model_fingerprint = model_fingerprint;
    index.embeddings.resize(static_cast<int>(rows.size()), model.dims.dim);
    for (size_t r = 0; r < rows.size(); ++r) {
        std::copy(rows[r].begin(), rows[r].end(), index.embeddings.row(static_cast<int>(r)));
    }
    return index;
}

RetrievalResult search_dense(const DenseIndex& index, const EncoderModel& model,
                             const Tokenizer& tok, uint64_t model_fingerprint,
                             const std::string& mention, int k) {
    if (k < 1) throw KgreError("k must be at least 1");
    if (model_fingerprint != index.model_fingerprint) {
        throw FingerprintMismatch("dense index was built with a different model");
    }
    Vec q = embed(model, {tok.encode_text(mention, model.dims.max_len)})[0];
    std::vector<std::pair<ConceptId, double>> scored;
    scored.reserve(index.catalog.entries.size());
    for (int r = 0; r < index.embeddings.rows; ++r) {
        const double* row = index.embeddings.row(r);
        double dot = 0.0;
        for (size_t i = 0; i < q.size(); ++i) dot += q[i] * row[i];
        scored.emplace_back(index.catalog.entries[static_cast<size_t>(r)].concept_id, dot);
    }
    return collapse_and_rank(scored, k);
}

Bm25Index build_bm25_index(const ConceptCatalog& catalog) {
    Bm25Index index;
    index.catalog = catalog;
    index.lengths.reserve(catalog.entries.size());
    uint64_t total = 0;
    for (size_t e = 0; e < catalog.entries.size(); ++e) {
        auto terms = split_non_alnum(catalog.entries[e].text);
        index.lengths.push_back(static_cast<uint32_t>(terms.size()));
        total += terms.size();
        std::map<std::string, uint32_t> tf;
        for (const auto& t : terms) tf[t]++;
        for (const auto& [term, count] : tf) {
            index.postings[term].emplace_back(static_cast<uint32_t>(e), count);
        }
    }
    index.avg_length =
        static_cast<double>(total) / static_cast<double>(catalog.entries.size());
    return index;
}

RetrievalResult search_bm25(const Bm25Index& index, const std::string& mention, int k) {
    if (k < 1) throw KgreError("k must be at least 1");
    auto term_list = split_non_alnum(mention);
    // the sum runs over the query's term set, so repeated terms count once
    std::set<std::string> terms(term_list.begin(), term_list.end());
    double n_docs = static_cast<double>(index.catalog.entries.size());
    std::unordered_map<uint32_t, double> scores;
    for (const auto& term : terms) {
        auto it = index.postings.find(term);
        if (it == index.postings.end()) continue;
        double df = static_cast<double>(it->second.size());
        double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
        for (const auto& [entry, tf] : it->second) {
            double len = static_cast<double>(index.lengths[entry]);
            double norm = Bm25Index::kK1 * (1.0 - Bm25Index::kB +
                                            Bm25Index::kB * len / index.avg_length);
            scores[entry] += idf * (tf * (Bm25Index::kK1 + 1.0)) / (tf + norm);
        }
    }
    std::vector<std::pair<ConceptId, double>> scored;
    scored.reserve(scores.size());
    for (const auto& [entry, score] : scores) {
        scored.emplace_back(index.catalog.entries[entry].concept_id, score);
    }
    return collapse_and_rank(scored, k);
}

// ---- persistence ------------------------------------------------------------

namespace {

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t get_u32(const std::string& s, size_t& off) {
    if (off + 4 > s.size()) throw KgreError("truncated index file");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<uint32_t>(static_cast<unsigned char>(s[off + static_cast<size_t>(i)]))
             << (8 * i);
    }
    off += 4;
    return v;
}

uint64_t get_u64(const std::string& s, size_t& off) {
    if (off + 8 > s.size()) throw KgreError("truncated index file");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<uint64_t>(static_cast<unsigned char>(s[off + static_cast<size_t>(i)]))
             << (8 * i);
    }
    off += 8;
    return v;
}

std::string catalog_lines(const ConceptCatalog& cat) {
    std::string out;
    for (const auto& e : cat.entries) {
        if (e.concept_id.find('\t') != std::string::npos ||
            e.text.find('\t') != std::string::npos) {
            throw KgreError("catalog entry contains a tab");
        }
        out += e.concept_id;
        out += '\t';
        out += e.is_main ? '1' : '0';
        out += '\t';
        out += e.text;
        out += '\n';
    }
    return out;
}

ConceptCatalog parse_catalog_lines(const std::string& body) {
    ConceptCatalog cat;
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        size_t a = line.find('\t');
        size_t b = line.find('\t', a + 1);
        if (a == std::string::npos || b == std::string::npos) {
            throw KgreError("bad catalog line in index file");
        }
        cat.entries.push_back(
            {line.substr(0, a), line.substr(b + 1), line.substr(a + 1, b - a - 1) == "1"});
    }
    return cat;
}

}  // namespace

std::string serialize_dense_index(const DenseIndex& index) {
    std::string out = "KGIX";
    put_u32(out, static_cast<uint32_t>(index.embeddings.rows));
    put_u32(out, static_cast<uint32_t>(index.embeddings.cols));
    put_u64(out, index.model_fingerprint);
    for (double x : index.embeddings.a) {
        float f = static_cast<float>(x);
        uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put_u32(out, bits);
    }
    out += catalog_lines(index.catalog);
    return out;
}

DenseIndex deserialize_dense_index(const std::string& content) {
    if (content.size() < 4 || content.compare(0, 4, "KGIX") != 0) {
        throw KgreError("bad dense index magic");
    }
    size_t off = 4;
    uint32_t n = get_u32(content, off);
    uint32_t d = get_u32(content, off);
    DenseIndex index;
    index.model_fingerprint = get_u64(content, off);
    index.embeddings.resize(static_cast<int>(n), static_cast<int>(d));
    for (double& x : index.embeddings.a) {
        uint32_t bits = get_u32(content, off);
        float f;
        std::memcpy(&f, &bits, 4);
        x = static_cast<double>(f);
    }
    index.catalog = parse_catalog_lines(content.substr(off));
    if (index.catalog.entries.size() != n) {
        throw KgreError("dense index catalog size mismatch");
    }
    return index;
}

void save_dense_index(const DenseIndex& index, const std::string& path) {
    write_file(path, serialize_dense_index(index));
}

DenseIndex load_dense_index(const std::string& path) {
    return deserialize_dense_index(read_file(path));
}

std::string serialize_bm25_index(const Bm25Index& index) {
    std::ostringstream out;
    out << "kgre-bm25 1\n";
    out << "entries " << index.catalog.entries.size() << "\n";
    out << catalog_lines(index.catalog);
    std::map<std::string, const std::vector<std::pair<uint32_t, uint32_t>>*> sorted;
    for (const auto& [term, plist] : index.postings) sorted[term] = &plist;
    for (const auto& [term, plist] : sorted) {
        out << "post " << term;
        for (const auto& [entry, tf] : *plist) out << " " << entry << ":" << tf;
        out << "\n";
    }
    return out.str();
}

Bm25Index deserialize_bm25_index(const std::string& content) {
    std::istringstream in(content);
    std::string line;
    std::getline(in, line);
    if (line != "kgre-bm25 1") throw KgreError("bad bm25 index header");
    std::getline(in, line);
    size_t n = 0;
    if (line.rfind("entries ", 0) == 0) n = std::stoull(line.substr(8));
    ConceptCatalog cat;
    for (size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw KgreError("truncated bm25 index");
        size_t a = line.find('\t');
        size_t b = line.find('\t', a + 1);
        if (a == std::string::npos || b == std::string::npos) {
            throw KgreError("bad catalog line in bm25 index");
        }
        cat.entries.push_back(
            {line.substr(0, a), line.substr(b + 1), line.substr(a + 1, b - a - 1) == "1"});
    }
    // lengths and avg recomputed from texts; postings read back verbatim
    Bm25Index rebuilt = build_bm25_index(cat);
    Bm25Index index;
    index.catalog = std::move(cat);
    index.lengths = std::move(rebuilt.lengths);
    index.avg_length = rebuilt.avg_length;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("post ", 0) != 0) throw KgreError("bad posting line in bm25 index");
        std::istringstream ls(line.substr(5));
        std::string term;
        ls >> term;
        auto& plist = index.postings[term];
        std::string item;
        while (ls >> item) {
            size_t colon = item.find(':');
            if (colon == std::string::npos) throw KgreError("bad posting entry");
            plist.emplace_back(static_cast<uint32_t>(std::stoul(item.substr(0, colon))),
                               static_cast<uint32_t>(std::stoul(item.substr(colon + 1))));
        }
    }
    return index;
}

void save_bm25_index(const Bm25Index& index, const std::string& path) {
    write_file(path, serialize_bm25_index(index));
}

Bm25Index load_bm25_index(const std::string& path) {
    return deserialize_bm25_index(read_file(path));
}

}  // namespace kgre
