#include "kgre/tokenizer.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace kgre {

Tokenizer::Tokenizer() {
    token_strings_.resize(260);
    for (int b = 0; b < 256; ++b) {
        token_strings_[kFirstByte + b] = std::string(1, static_cast<char>(b));
    }
}

void Tokenizer::add_merge(Merge m, size_t count_at_merge) {
    if (m.result != static_cast<int>(token_strings_.size())) {
        throw KgreError("merge result id must be the next dense id");
    }
    token_strings_.push_back(token_strings_[m.left] + token_strings_[m.right]);
    merges_.push_back(m);
    merge_counts_.push_back(count_at_merge);
}

std::vector<int> Tokenizer::encode(std::string_view text) const {
    std::string lower = to_lower(text);
    std::vector<int> ids;
    ids.reserve(lower.size());
    for (unsigned char c : lower) ids.push_back(kFirstByte + c);
    for (const Merge& m : merges_) {
        size_t w = 0;
        for (size_t r = 0; r < ids.size(); ++r) {
            if (r + 1 < ids.size() && ids[r] == m.left && ids[r + 1] == m.right) {
                ids[w++] = m.result;
                ++r;
            } else {
                ids[w++] = ids[r];
            }
        }
        ids.resize(w);
    }
    return ids;
}

std::string Tokenizer::decode(const std::vector<int>& ids) const {
    std::string out;
    for (int id : ids) {
        if (id < kFirstByte || id >= static_cast<int>(token_strings_.size())) continue;
        out += token_strings_[id];
    }
    return out;
}

std::vector<int> Tokenizer::encode_text(std::string_view text, int max_len) const {
    if (max_len < 3) throw KgreError("max_len must be at least 3");
    std::vector<int> toks = encode(text);
    std::vector<int> out;
    out.reserve(static_cast<size_t>(max_len));
    out.push_back(kBos);
    size_t body = std::min(toks.size(), static_cast<size_t>(max_len - 2));
    out.insert(out.end(), toks.begin(), toks.begin() + static_cast<long>(body));
    out.push_back(kEos);
    out.resize(static_cast<size_t>(max_len), kPad);
    return out;
}

Tokenizer train_tokenizer(const std::vector<std::string>& corpus, size_t vocab_size) {
    if (corpus.empty()) throw EmptyCorpus("tokenizer corpus is empty");
    if (vocab_size < 260) throw VocabTooSmall("vocab_size must be at least 260");

    Tokenizer tok;
    std::vector<std::vector<int>> seqs;
    seqs.reserve(corpus.size());
    for (const auto& s : corpus) {
        std::string lower = to_lower(s);
        std::vector<int> ids;
        ids.reserve(lower.size());
        for (unsigned char c : lower) ids.push_back(Tokenizer::kFirstByte + c);
        seqs.push_back(std::move(ids));
    }

    while (tok.vocab_size() < vocab_size) {
        std::map<std::pair<int, int>, size_t> counts;
        for (const auto& seq : seqs) {
            for (size_t i = 0; i + 1 < seq.size(); ++i) {
                counts[{seq[i], seq[i + 1]}]++;
            }
        }
        // most frequent pair; ties broken by lexicographic (left, right) strings
        std::pair<int, int> best{-1, -1};
        size_t best_count = 1;
        for (const auto& [pair, count] : counts) {
            if (count < 2 || count < best_count) continue;
            if (count > best_count) {
                best = pair;
                best_count = count;
                continue;
            }
            auto key = std::make_pair(tok.token_string(pair.first),
                                      tok.token_string(pair.second));
            auto best_key = std::make_pair(tok.token_string(best.first),
                                           tok.token_string(best.second));
            if (key < best_key) best = pair;
        }
        if (best.first < 0) break;  // no pair occurs twice

        int result = static_cast<int>(tok.vocab_size());
        tok.add_merge({best.first, best.second, result}, best_count);
        for (auto& seq : seqs) {
            size_t w = 0;
            for (size_t r = 0; r < seq.size(); ++r) {
                if (r + 1 < seq.size() && seq[r] == best.first && seq[r + 1] == best.second) {
                    seq[w++] = result;
                    ++r;
                } else {
                    seq[w++] = seq[r];
                }
            }
            seq.resize(w);
        }
    }
    return tok;
}

namespace {

std::string hex_encode(const std::string& s) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(s.size() * 2);
    for (unsigned char c : s) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

std::string hex_decode(const std::string& s) {
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw KgreError("bad hex digit in tokenizer file");
    };
    if (s.size() % 2) throw KgreError("odd hex string in tokenizer file");
    std::string out;
    out.reserve(s.size() / 2);
    for (size_t i = 0; i < s.size(); i += 2) {
        out.push_back(static_cast<char>((nib(s[i]) << 4) | nib(s[i + 1])));
    }
    return out;
}

}  // namespace

std::string Tokenizer::serialize() const {
    std::ostringstream out;
    out << "kgre-tokenizer 1\n";
    out << "vocab " << vocab_size() << "\n";
    for (size_t i = 0; i < merges_.size(); ++i) {
        const Merge& m = merges_[i];
        out << "merge " << m.left << " " << m.right << " " << m.result << " "
            << merge_counts_[i] << " " << hex_encode(token_strings_[m.result]) << "\n";
    }
    return out.str();
}

Tokenizer Tokenizer::deserialize(const std::string& content) {
    std::istringstream in(content);
    std::string header;
    std::getline(in, header);
    if (header != "kgre-tokenizer 1") throw KgreError("bad tokenizer file header");
    Tokenizer tok;
    std::string line;
    size_t declared = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "vocab") {
            ls >> declared;
        } else if (kind == "merge") {
            Merge m{};
            size_t count;
            std::string hex;
            if (!(ls >> m.left >> m.right >> m.result >> count >> hex)) {
                throw KgreError("bad merge line in tokenizer file");
            }
            std::string expect = tok.token_string(m.left) + tok.token_string(m.right);
            if (hex_decode(hex) != expect) {
                throw KgreError("merge references tokens that are not derivable");
            }
            tok.add_merge(m, count);
        } else {
            throw KgreError("unknown tokenizer file line: " + kind);
        }
    }
    if (declared && declared != tok.vocab_size()) {
        throw KgreError("tokenizer vocab count mismatch");
    }
    return tok;
}

void Tokenizer::save(const std::string& path) const { write_file(path, serialize()); }

Tokenizer Tokenizer::load(const std::string& path) {
    return deserialize(read_file(path));
}

}  // namespace kgre
