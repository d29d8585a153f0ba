#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgre/common.hpp"

namespace kgre {

struct EmptyCorpus : KgreError {
    using KgreError::KgreError;
};
struct VocabTooSmall : KgreError {
    using KgreError::KgreError;
};

// Byte-level BPE. Ids are dense: PAD=0, UNK=1, BOS=2, EOS=3, the 256 byte
// tokens at 4..259, merged tokens after that. Text is lowercased before
// byte encoding, so encode/decode round-trips the lowercased form.
class Tokenizer {
public:
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kBos = 2;
    static constexpr int kEos = 3;
    static constexpr int kFirstByte = 4;

    struct Merge {
        int left;
        int right;
        int result;
    };

    Tokenizer();

    size_t vocab_size() const { return token_strings_.size(); }
    const std::vector<Merge>& merges() const { return merges_; }
    const std::vector<size_t>& merge_counts() const { return merge_counts_; }
    const std::string& token_string(int id) const { return token_strings_[id]; }

    // raw BPE tokens of lowercase(text), no specials, no padding
    std::vector<int> encode(std::string_view text) const;
    std::string decode(const std::vector<int>& ids) const;

    // BOS + tokens + EOS truncated to max_len (BOS/EOS kept), PAD-filled
    std::vector<int> encode_text(std::string_view text, int max_len) const;

    void add_merge(Merge m, size_t count_at_merge);

    std::string serialize() const;
    static Tokenizer deserialize(const std::string& content);
    void save(const std::string& path) const;
    static Tokenizer load(const std::string& path);

private:
    std::vector<std::string> token_strings_;  // index = id; specials empty
    std::vector<Merge> merges_;
    std::vector<size_t> merge_counts_;
};

Tokenizer train_tokenizer(const std::vector<std::string>& corpus, size_t vocab_size);

}  // namespace kgre
