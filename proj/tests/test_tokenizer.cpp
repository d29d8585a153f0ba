#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "kgre/common.hpp"
#include "kgre/tokenizer.hpp"

using namespace kgre;

TEST_CASE("corpus [aaaa] with vocab 261 learns exactly the merge aa") {
    Tokenizer tok = train_tokenizer({"aaaa"}, 261);
    REQUIRE(tok.merges().size() == 1);
    CHECK(tok.token_string(tok.merges()[0].result) == "aa");
    CHECK(tok.vocab_size() == 261);
}

TEST_CASE("training stops early when no pair occurs twice") {
    Tokenizer tok = train_tokenizer({"abc"}, 500);
    CHECK(tok.merges().empty());
    CHECK(tok.vocab_size() == 260);
}

TEST_CASE("preconditions: empty corpus and tiny vocab rejected") {
    CHECK_THROWS_AS(train_tokenizer({}, 300), EmptyCorpus);
    CHECK_THROWS_AS(train_tokenizer({"x"}, 259), VocabTooSmall);
}

TEST_CASE("encode/decode round-trips the lowercased text") {
    std::vector<std::string> corpus = {"chest pain",       "chest pain, unspecified",
                                       "acute chest pain", "pain in the knee",
                                       "knee trauma",      "GI hemorrhage"};
    Tokenizer tok = train_tokenizer(corpus, 300);
    for (const auto& s : corpus) CHECK(tok.decode(tok.encode(s)) == to_lower(s));
    // strings outside the corpus still round-trip (byte fallback)
    CHECK(tok.decode(tok.encode("Zebra Xylophone-42!")) == "zebra xylophone-42!");
}

TEST_CASE("every merge matches an exhaustive pair-count oracle") {
    std::vector<std::string> corpus = {
        "acute pulmonary sclerosis", "chronic knee trauma",   "bilateral ocular ulcer",
        "diffuse lumbar weakness",   "acute nasal vasculitis",
        "chronic pulmonary rupture", "acute knee sclerosis",
        "bilateral lumbar ulcer"};
    Tokenizer tok = train_tokenizer(corpus, 320);
    REQUIRE(tok.merges().size() >= 10);

    // independent simulation: byte sequences + brute-force pair counting
    std::vector<std::vector<std::string>> seqs;
    for (const auto& s : corpus) {
        std::string lower = to_lower(s);
        std::vector<std::string> seq;
        for (unsigned char c : lower) seq.push_back(std::string(1, static_cast<char>(c)));
        seqs.push_back(std::move(seq));
    }
    for (size_t m = 0; m < tok.merges().size(); ++m) {
        std::map<std::pair<std::string, std::string>, size_t> counts;
        for (const auto& seq : seqs)
            for (size_t i = 0; i + 1 < seq.size(); ++i) counts[{seq[i], seq[i + 1]}]++;
        // oracle's pick: highest count, lexicographically smallest pair on ties
        std::pair<std::string, std::string> best;
        size_t best_count = 0;
        for (const auto& [pair, n] : counts) {
            if (n > best_count) {
                best = pair;
                best_count = n;
            }
        }
        REQUIRE(best_count >= 2);
        const auto& merge = tok.merges()[m];
        CHECK(tok.token_string(merge.left) == best.first);
        CHECK(tok.token_string(merge.right) == best.second);
        CHECK(tok.merge_counts()[m] == best_count);
        // apply the merge to the simulated sequences
        std::string merged = best.first + best.second;
        for (auto& seq : seqs) {
            std::vector<std::string> out;
            for (size_t i = 0; i < seq.size();) {
                if (i + 1 < seq.size() && seq[i] == best.first && seq[i + 1] == best.second) {
                    out.push_back(merged);
                    i += 2;
                } else {
                    out.push_back(seq[i]);
                    ++i;
                }
            }
            seq = std::move(out);
        }
    }
}

TEST_CASE("deterministic: retraining gives byte-identical serialization") {
    std::vector<std::string> corpus = {"knee pain", "chest pain", "knee trauma"};
    CHECK(train_tokenizer(corpus, 280).serialize() == train_tokenizer(corpus, 280).serialize());
}

TEST_CASE("encode_text framing: specials, truncation, padding, lowercasing") {
    Tokenizer tok = train_tokenizer({"chest pain"}, 265);
    auto empty = tok.encode_text("", 5);
    CHECK(empty == std::vector<int>{Tokenizer::kBos, Tokenizer::kEos, Tokenizer::kPad,
                                    Tokenizer::kPad, Tokenizer::kPad});
    auto truncated = tok.encode_text("a very long mention that cannot possibly fit", 6);
    REQUIRE(truncated.size() == 6);
    CHECK(truncated.front() == Tokenizer::kBos);
    CHECK(truncated.back() == Tokenizer::kEos);
    CHECK(tok.encode_text("Chest Pain", 16) == tok.encode_text("chest pain", 16));
}

TEST_CASE("serialization round-trip preserves vocab, merges, and encodings") {
    std::vector<std::string> corpus = {"pulmonary sclerosis", "pulmonary rupture",
                                       "ocular sclerosis"};
    Tokenizer tok = train_tokenizer(corpus, 300);
    Tokenizer back = Tokenizer::deserialize(tok.serialize());
    CHECK(back.vocab_size() == tok.vocab_size());
    REQUIRE(back.merges().size() == tok.merges().size());
    for (const auto& s : corpus) CHECK(back.encode(s) == tok.encode(s));
    CHECK(back.serialize() == tok.serialize());
}
