#include "kgre/synthkg.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace kgre {

// one distinct initial per word within each category, so acronyms identify
// their concept uniquely
const std::vector<std::string>& grammar_modifiers() {
    static const std::vector<std::string> v = {"acute",  "bilateral", "chronic",
                                               "diffuse", "early",    "focal",
                                               "global", "hereditary"};
    return v;
}

const std::vector<std::string>& grammar_body_parts() {
    static const std::vector<std::string> v = {"iliac",      "jugular", "knee",
                                               "lumbar",     "mandibular", "nasal",
                                               "ocular",     "pulmonary"};
    return v;
}

const std::vector<std::string>& grammar_conditions() {
    static const std::vector<std::string> v = {"quadriplegia", "rupture",    "sclerosis",
                                               "trauma",       "ulcer",      "vasculitis",
                                               "weakness",     "xerosis"};
    return v;
}

std::optional<PhraseWords> parse_main_description(const std::string& text) {
    std::istringstream in(text);
    PhraseWords w;
    std::string extra;
    if (!(in >> w.modifier >> w.body >> w.condition) || (in >> extra)) return std::nullopt;
    auto has = [](const std::vector<std::string>& v, const std::string& s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };
    if (!has(grammar_modifiers(), w.modifier) || !has(grammar_body_parts(), w.body) ||
        !has(grammar_conditions(), w.condition)) {
        return std::nullopt;
    }
    return w;
}

namespace {

std::string acronym_of(const PhraseWords& w) {
    std::string a;
    for (const std::string* s : {&w.modifier, &w.body, &w.condition}) {
        a.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>((*s)[0]))));
    }
    return a;
}

std::string typo_of(const std::string& word, uint64_t salt) {
    // deterministic doubled character somewhere after the first letter
    size_t pos = 1 + salt % (word.size() - 1);
    std::string out = word;
    out.insert(out.begin() + static_cast<long>(pos), word[pos]);
    return out;
}

// training-time surface variants
std::string reorder1(const PhraseWords& w) { return w.body + " " + w.condition + ", " + w.modifier; }
std::string reorder2(const PhraseWords& w) { return w.modifier + " " + w.condition + " of the " + w.body; }
std::string reorder3(const PhraseWords& w) { return w.condition + " of " + w.body + ", " + w.modifier; }
// test-only variants, never emitted as synonyms
std::string test_variant(const PhraseWords& w) { return w.condition + ", " + w.modifier + " " + w.body; }
std::string holdout_variant(const PhraseWords& w) { return "the " + w.body + " " + w.condition + " (" + w.modifier + ")"; }

struct ConceptDraft {
    PhraseWords words;
    std::string main;
    std::vector<std::string> synonyms;
    bool has_acronym_synonym = false;
};

std::vector<ConceptDraft> draft_concepts(const SynthSpec& spec, Rng& rng) {
    const auto& mods = grammar_modifiers();
    const auto& bodies = grammar_body_parts();
    const auto& conds = grammar_conditions();
    size_t universe = mods.size() * bodies.size() * conds.size();
    if (static_cast<size_t>(spec.n_concepts) > universe) {
        throw SpecInvalid("n_concepts exceeds the phrase grammar universe (" +
                          std::to_string(universe) + ")");
    }
    auto picked = sample_without_replacement(universe, static_cast<size_t>(spec.n_concepts),
                                             rng);
    std::vector<ConceptDraft> drafts;
    drafts.reserve(picked.size());
    for (size_t code : picked) {
        ConceptDraft d;
        d.words.modifier = mods[code % mods.size()];
        d.words.body = bodies[(code / mods.size()) % bodies.size()];
        d.words.condition = conds[code / (mods.size() * bodies.size())];
        d.main = d.words.modifier + " " + d.words.body + " " + d.words.condition;
        drafts.push_back(std::move(d));
    }
    return drafts;
}

void add_synonyms(ConceptDraft& d, int n_synonyms, const SurfaceNoise& noise, Rng& rng) {
    std::vector<std::string> candidates;
    bool want_acronym = rng.uniform() < noise.acronym_rate;
    if (want_acronym) candidates.push_back(acronym_of(d.words));
    if (rng.uniform() < noise.reorder_rate) {
        candidates.push_back(reorder1(d.words));
        candidates.push_back(reorder2(d.words));
        candidates.push_back(reorder3(d.words));
    } else {
        candidates.push_back(reorder2(d.words));
        candidates.push_back(reorder1(d.words));
    }
    if (rng.uniform() < noise.typo_rate) {
        candidates.push_back(typo_of(d.words.body, rng.next()) + " " + d.words.condition +
                             ", " + d.words.modifier);
    }
    // fill with typo'd main variants if the pool runs short
    uint64_t salt = 1;
    while (static_cast<int>(candidates.size()) < n_synonyms) {
        candidates.push_back(d.words.modifier + " " + typo_of(d.words.body, salt++) + " " +
                             d.words.condition);
    }
    std::set<std::string> used = {d.main};
    for (const auto& c : candidates) {
        if (static_cast<int>(d.synonyms.size()) >= n_synonyms) break;
        if (!used.insert(c).second) continue;
        d.synonyms.push_back(c);
        if (c == acronym_of(d.words)) d.has_acronym_synonym = true;
    }
}

}  // namespace

SynthOutput generate(const SynthSpec& spec) {
    if (spec.n_concepts < 10) throw SpecInvalid("n_concepts must be at least 10");
    if (spec.d_min < 1 || spec.d_max < spec.d_min) throw SpecInvalid("bad synonym range");
    for (double r : {spec.noise.acronym_rate, spec.noise.reorder_rate, spec.noise.typo_rate}) {
        if (r < 0.0 || r > 1.0) throw SpecInvalid("noise rates must lie in [0, 1]");
    }
    if (spec.edge_density < 0.0 || spec.edge_density > 1.0) {
        throw SpecInvalid("edge_density must lie in [0, 1]");
    }
    if (spec.mode == SynthSpec::Mode::IcdTree && spec.tree_branching < 1) {
        throw SpecInvalid("tree_branching must be positive");
    }

    Rng rng(spec.seed);
    std::vector<ConceptDraft> drafts = draft_concepts(spec, rng);
    size_t n = drafts.size();

    SynthOutput out{KnowledgeGraph(spec.mode == SynthSpec::Mode::IcdTree
                                       ? GraphKind::Icd10Tree
                                       : GraphKind::LabeledMultigraph),
                    {}, {}, {}, {}};
    SynthCensus& census = out.census;
    census.nodes = n;

    std::vector<ConceptId> ids(n);
    if (spec.mode == SynthSpec::Mode::IcdTree) {
        for (size_t i = 0; i < n; ++i) {
            ids[i] = std::string(1, static_cast<char>('A' + i % 26)) +
                     (i / 26 < 10 ? "0" : "") + std::to_string(i / 26);
        }
        for (size_t i = 0; i < n; ++i) {
            ConceptNode node;
            node.id = ids[i];
            IcdSections sec;
            sec.title_concatenation = drafts[i].main;
            sec.code_description = ids[i] + " " + drafts[i].main;
            bool with_see_also = rng.uniform() < spec.noise.reorder_rate;
            if (with_see_also) sec.see_also = reorder1(drafts[i].words);
            node.descriptions.push_back(sec.title_concatenation);
            node.descriptions.push_back(sec.code_description);
            if (sec.see_also) node.descriptions.push_back(*sec.see_also);
            node.icd_sections = std::move(sec);
            if (i > 0) {
                node.parent = ids[(i - 1) / static_cast<size_t>(spec.tree_branching)];
                ++census.parent_links;
            }
            census.per_node_d.push_back(node.descriptions.size());
            census.synonym_pair_total += with_see_also ? 3 : 1;  // C(sections, 2)
            out.kg.add_node(std::move(node));
        }
        census.graph_pair_total = census.parent_links;
    } else {
        for (size_t i = 0; i < n; ++i) ids[i] = std::to_string(100000 + i);
        for (size_t i = 0; i < n; ++i) {
            int d = spec.d_min +
                    static_cast<int>(rng.below(static_cast<uint64_t>(spec.d_max - spec.d_min + 1)));
            add_synonyms(drafts[i], d - 1, spec.noise, rng);
            ConceptNode node;
            node.id = ids[i];
            node.descriptions.push_back(drafts[i].main);
            for (const auto& s : drafts[i].synonyms) node.descriptions.push_back(s);
            size_t di = node.descriptions.size();
            census.per_node_d.push_back(di);
            census.synonym_pair_total += di * (di - 1) / 2;
            out.kg.add_node(std::move(node));
        }
        // directed edges over unique ordered pairs, plus a few parallel edges
        static const std::vector<std::string> labels = {"is_a", "finding_site",
                                                        "relative_to", "associated_with"};
        auto target = static_cast<size_t>(spec.edge_density * static_cast<double>(n) *
                                          static_cast<double>(n - 1));
        std::set<std::pair<size_t, size_t>> pairs;
        std::vector<std::vector<std::pair<std::string, ConceptId>>> edges(n);
        while (pairs.size() < target) {
            size_t a = rng.below(n);
            size_t b = rng.below(n);
            if (a == b) continue;
            if (!pairs.insert({a, b}).second) continue;
            const std::string& label = labels[rng.below(labels.size())];
            edges[a].emplace_back(label, ids[b]);
            ++census.edges;
            if (rng.uniform() < 0.02) {  // parallel edge under another label
                size_t alt = rng.below(labels.size() - 1);
                const std::string& other =
                    labels[alt] == label ? labels[labels.size() - 1] : labels[alt];
                edges[a].emplace_back(other, ids[b]);
                ++census.edges;
            }
        }
        census.graph_pair_total = pairs.size();
        // nodes are already added; rebuild with edges attached
        KnowledgeGraph kg(GraphKind::LabeledMultigraph);
        for (size_t i = 0; i < n; ++i) {
            ConceptNode node = out.kg.nodes()[i];
            node.edges = std::move(edges[i]);
            kg.add_node(std::move(node));
        }
        out.kg = std::move(kg);
    }
    out.kg.validate();

    // test sets: reserved surface patterns, so every mention is unseen
    for (size_t i = 0; i < n; ++i) {
        out.test_in_domain.push_back({test_variant(drafts[i].words), ids[i]});
        out.holdout_pool.push_back({holdout_variant(drafts[i].words), ids[i]});
        if (!drafts[i].has_acronym_synonym) {
            AnnotatedMention m{acronym_of(drafts[i].words), ids[i]};
            out.test_acronym.push_back(m);
            out.test_in_domain.push_back(std::move(m));
        }
    }

    // hygiene: no test mention may appear verbatim among the descriptions
    std::set<std::string> described;
    for (const auto& node : out.kg.nodes()) {
        described.insert(node.descriptions.begin(), node.descriptions.end());
    }
    for (const auto* vec : {&out.test_in_domain, &out.test_acronym, &out.holdout_pool}) {
        for (const auto& m : *vec) {
            if (described.count(m.mention_text)) {
                throw KgreError("test mention collides with a description: " +
                                m.mention_text);
            }
        }
    }
    return out;
}

}  // namespace kgre
