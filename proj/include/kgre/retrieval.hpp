#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgre/encoder.hpp"
#include "kgre/kg.hpp"
#include "kgre/tokenizer.hpp"

namespace kgre {

struct FingerprintMismatch : KgreError {
    using KgreError::KgreError;
};

struct CatalogEntry {
    ConceptId concept_id;
    std::string text;
    bool is_main = false;
};

struct ConceptCatalog {
    std::vector<CatalogEntry> entries;
};

// one entry per (concept, description); main_desc_only keeps descriptions[0]
ConceptCatalog catalog_from_kg(const KnowledgeGraph& kg, bool main_desc_only = false);

struct RetrievalResult {
    std::vector<std::pair<ConceptId, double>> hits;  // scores non-increasing
};

struct DenseIndex {
    Mat embeddings;  // n x D, row per catalog entry
    ConceptCatalog catalog;
    uint64_t model_fingerprint = 0;
};

DenseIndex build_dense_index(const EncoderModel& model, const Tokenizer& tok,
                             const ConceptCatalog& catalog, uint64_t model_fingerprint,
                             int threads = 1);

// exact top-k by inner product; entries of one concept collapse to the
// best-scoring entry before the cut; ties ordered by ascending concept id
RetrievalResult search_dense(const DenseIndex& index, const EncoderModel& model,
                             const Tokenizer& tok, uint64_t model_fingerprint,
                             const std::string& mention, int k);

struct Bm25Index {
    static constexpr double kK1 = 1.2;
    static constexpr double kB = 0.75;

    ConceptCatalog catalog;
    std::unordered_map<std::string, std::vector<std::pair<uint32_t, uint32_t>>>
        postings;                   // token -> (entry index, term frequency)
    std::vector<uint32_t> lengths;  // tokens per entry
    double avg_length = 0.0;
};

Bm25Index build_bm25_index(const ConceptCatalog& catalog);

// score(q,d) = sum over shared terms of idf(t) * tf*(k1+1) / (tf + k1*(1-b+b*len/avg)),
// idf(t) = ln(1 + (N-df+0.5)/(df+0.5)); no term overlap yields an empty result
RetrievalResult search_bm25(const Bm25Index& index, const std::string& mention, int k);

// "KGIX" binary blob + catalog mapping
std::string serialize_dense_index(const DenseIndex& index);
DenseIndex deserialize_dense_index(const std::string& content);
void save_dense_index(const DenseIndex& index, const std::string& path);
DenseIndex load_dense_index(const std::string& path);

std::string serialize_bm25_index(const Bm25Index& index);
Bm25Index deserialize_bm25_index(const std::string& content);
void save_bm25_index(const Bm25Index& index, const std::string& path);
Bm25Index load_bm25_index(const std::string& path);

}  // namespace kgre
