#include "kgre/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace kgre {

double recall_at_k(const std::vector<std::pair<RetrievalResult, ConceptId>>& results, int k) {
    if (k < 1) throw KgreError("k must be at least 1");
    if (results.empty()) throw KgreError("no results to score");
    size_t hits = 0;
    for (const auto& [res, gold] : results) {
        size_t limit = std::min(res.hits.size(), static_cast<size_t>(k));
        for (size_t i = 0; i < limit; ++i) {
            if (res.hits[i].first == gold) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(results.size());
}

std::pair<EvalSplit, PairFilter> make_zeroshot_split(
    const KnowledgeGraph& kg, const std::vector<AnnotatedMention>& mentions, Regime regime,
    double holdout_fraction, uint64_t seed) {
    EvalSplit split;
    split.regime = regime;
    if (regime == Regime::MentionsOnly) {
        split.name = "mentions-only";
        split.mentions = mentions;
        return {std::move(split), [](const TrainingPair&) { return true; }};
    }
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
        throw KgreError("holdout_fraction must lie strictly between 0 and 1");
    }
    split.name = "mentions-and-concepts";
    size_t n = kg.size();
    auto k = static_cast<size_t>(
        std::ceil(holdout_fraction * static_cast<double>(n)));
    Rng rng(seed);
    auto picked = sample_without_replacement(n, k, rng);
    for (size_t idx : picked) split.held_out_concepts.insert(kg.nodes()[idx].id);
    for (const auto& m : mentions) {
        if (split.held_out_concepts.count(m.gold_concept)) split.mentions.push_back(m);
    }
    if (split.mentions.empty()) {
        throw NoEligibleMentions("no mention has a held-out gold concept");
    }
    std::set<ConceptId> holdout = split.held_out_concepts;
    PairFilter filter = [holdout](const TrainingPair& p) {
        return holdout.count(p.mention_node) == 0 && holdout.count(p.concept_node) == 0;
    };
    return {std::move(split), std::move(filter)};
}

EvalReport evaluate(const SearchFn& search, const std::string& system_name,
                    const EvalSplit& split) {
    if (split.mentions.empty()) throw NoEligibleMentions("evaluation split is empty");
    EvalReport report;
    report.split_name = split.name;
    report.system_name = system_name;
    report.n = split.mentions.size();
    size_t hits1 = 0, hits25 = 0;
    for (const auto& m : split.mentions) {
        RetrievalResult res = search(m.mention_text, 25);
        MentionTrace trace;
        trace.mention_text = m.mention_text;
        trace.gold = m.gold_concept;
        for (size_t i = 0; i < res.hits.size(); ++i) {
            if (i < 5) trace.top5.push_back(res.hits[i].first);
            if (res.hits[i].first == m.gold_concept) trace.gold_rank = static_cast<int>(i + 1);
        }
        if (trace.gold_rank == 1) ++hits1;
        if (trace.gold_rank >= 1 && trace.gold_rank <= 25) ++hits25;
        report.traces.push_back(std::move(trace));
    }
    report.r_at_1 = static_cast<double>(hits1) / static_cast<double>(report.n);
    report.r_at_25 = static_cast<double>(hits25) / static_cast<double>(report.n);
    return report;
}

std::vector<AnnotatedMention> parse_mentions(const std::string& content,
                                             const KnowledgeGraph& kg) {
    std::vector<AnnotatedMention> mentions;
    std::istringstream in(content);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw MalformedRecord(line_no, "expected mention<TAB>gold_concept_id");
        }
        AnnotatedMention m{line.substr(0, tab), line.substr(tab + 1)};
        if (m.mention_text.empty()) throw MalformedRecord(line_no, "empty mention text");
        // unresolvable golds are rejected, never silently skipped
        if (!kg.contains(m.gold_concept)) throw UnknownId(m.gold_concept);
        mentions.push_back(std::move(m));
    }
    return mentions;
}

std::vector<AnnotatedMention> load_mentions(const std::string& path,
                                            const KnowledgeGraph& kg) {
    return parse_mentions(read_file(path), kg);
}

std::string serialize_mentions(const std::vector<AnnotatedMention>& mentions) {
    std::string out;
    for (const auto& m : mentions) {
        out += m.mention_text;
        out += '\t';
        out += m.gold_concept;
        out += '\n';
    }
    return out;
}

void save_mentions(const std::vector<AnnotatedMention>& mentions, const std::string& path) {
    write_file(path, serialize_mentions(mentions));
}

namespace {

std::string fixed4(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(4) << v;
    return ss.str();
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
        } else {
            out += c;
        }
    }
    return out;
}

}  // namespace

std::string serialize_report(const EvalReport& report) {
    std::ostringstream out;
    out << "{\"split\":\"" << json_escape(report.split_name) << "\",\"system\":\""
        << json_escape(report.system_name) << "\",\"r_at_1\":" << fixed4(report.r_at_1)
        << ",\"r_at_25\":" << fixed4(report.r_at_25) << ",\"n\":" << report.n << "}\n";
    for (const auto& t : report.traces) {
        out << "{\"mention\":\"" << json_escape(t.mention_text) << "\",\"gold\":\""
            << json_escape(t.gold) << "\",\"gold_rank\":" << t.gold_rank << ",\"top5\":[";
        for (size_t i = 0; i < t.top5.size(); ++i) {
            if (i) out << ",";
            out << "\"" << json_escape(t.top5[i]) << "\"";
        }
        out << "]}\n";
    }
    return out.str();
}

std::string summary_table(const std::vector<EvalReport>& reports) {
    size_t w_sys = 6, w_split = 5;
    for (const auto& r : reports) {
        w_sys = std::max(w_sys, r.system_name.size());
        w_split = std::max(w_split, r.split_name.size());
    }
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(w_sys + 2)) << "system"
        << std::setw(static_cast<int>(w_split + 2)) << "split" << std::right
        << std::setw(8) << "R@1" << std::setw(8) << "R@25" << std::setw(8) << "n" << "\n";
    for (const auto& r : reports) {
        out << std::left << std::setw(static_cast<int>(w_sys + 2)) << r.system_name
            << std::setw(static_cast<int>(w_split + 2)) << r.split_name << std::right
            << std::setw(8) << fixed4(r.r_at_1) << std::setw(8) << fixed4(r.r_at_25)
            << std::setw(8) << r.n << "\n";
    }
    return out.str();
}

}  // namespace kgre
