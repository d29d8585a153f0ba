// kgre: knowledge-graph self-supervision for zero-shot medical entity retrieval.
//
// Subcommands compose through files only: synth -> gen-tasks -> train ->
// index -> query/eval -> report. Every run writes a .manifest.json next to
// its outputs recording the effective configuration and file hashes.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgre/evalkit.hpp"
#include "kgre/kg.hpp"
#include "kgre/manifest.hpp"
#include "kgre/retrieval.hpp"
#include "kgre/synthkg.hpp"
#include "kgre/taskgen.hpp"
#include "kgre/trainer.hpp"

namespace fs = std::filesystem;
using namespace kgre;

namespace {

constexpr const char* kVersion = "kgre 0.1.0";

struct Ctx {
    std::string workdir = ".";
    int threads = 1;
    std::string command_line;

    std::string path(const std::string& p) const {
        if (p.empty() || fs::path(p).is_absolute()) return p;
        return (fs::path(workdir) / p).string();
    }
};

KgFormat parse_format(const std::string& f) {
    if (f == "icd10") return KgFormat::Icd10Jsonl;
    if (f == "graph") return KgFormat::GraphJsonl;
    throw KgreError("unknown format (expected icd10 or graph): " + f);
}

void emit_manifest(const Ctx& ctx, CLI::App* sub, uint64_t seed,
                   const std::vector<std::string>& inputs,
                   const std::vector<std::string>& outputs) {
    RunManifest m;
    m.tool_version = kVersion;
    m.command_line = ctx.command_line;
    m.config_snapshot = sub->config_to_str(true, false);
    m.seed = seed;
    for (const auto& p : inputs) m.input_hashes.emplace_back(p, hex64(hash_file(p)));
    for (const auto& p : outputs) m.output_hashes.emplace_back(p, hex64(hash_file(p)));
    if (!outputs.empty()) write_manifest(m, outputs.front() + ".manifest.json");
}

std::string serialize_census(const SynthCensus& c) {
    std::string out;
    nlohmann::json totals;
    totals["record"] = "totals";
    totals["nodes"] = c.nodes;
    totals["edges"] = c.edges;
    totals["parent_links"] = c.parent_links;
    totals["synonym_pairs"] = c.synonym_pair_total;
    totals["graph_pairs"] = c.graph_pair_total;
    out += totals.dump() + "\n";
    for (size_t i = 0; i < c.per_node_d.size(); ++i) {
        nlohmann::json row;
        row["record"] = "node_d";
        row["index"] = i;
        row["d"] = c.per_node_d[i];
        out += row.dump() + "\n";
    }
    return out;
}

std::set<ConceptId> load_holdout_ids(const std::string& path) {
    std::set<ConceptId> ids;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) ids.insert(line);
    }
    return ids;
}

// ---- synth ------------------------------------------------------------------

void run_synth(Ctx& ctx, CLI::App* sub, const SynthSpec& spec, const std::string& out_dir) {
    SynthOutput out = generate(spec);
    fs::create_directories(ctx.path(out_dir));
    auto p = [&](const std::string& name) { return ctx.path(out_dir + "/" + name); };
    save_kg(out.kg, p("kg.jsonl"));
    write_file(p("census.jsonl"), serialize_census(out.census));
    save_mentions(out.test_in_domain, p("test_in_domain.tsv"));
    save_mentions(out.test_acronym, p("test_acronym.tsv"));
    save_mentions(out.holdout_pool, p("holdout_pool.tsv"));
    std::cout << "synth: " << out.census.nodes << " nodes, " << out.census.edges
              << " edges, " << out.census.synonym_pair_total << " synonym pairs, "
              << out.census.graph_pair_total << " graph pairs\n";
    emit_manifest(ctx, sub, spec.seed, {},
                  {p("kg.jsonl"), p("census.jsonl"), p("test_in_domain.tsv"),
                   p("test_acronym.tsv"), p("holdout_pool.tsv")});
}

// ---- gen-tasks --------------------------------------------------------------

std::vector<TrainingPair> generate_task(const KnowledgeGraph& kg, Task task,
                                        bool symmetric) {
    switch (task) {
        case Task::IcdSyn: return gen_icd_synonym_pairs(kg);
        case Task::IcdGraph: return gen_icd_graph_pairs(kg, symmetric);
        case Task::SnomedSyn:
        case Task::UmlsSyn: return gen_synonym_pairs(kg, task);
        case Task::SnomedGraph:
        case Task::UmlsGraph: return gen_graph_pairs(kg, task, symmetric);
    }
    throw KgreError("unreachable task");
}

void run_gen_tasks(Ctx& ctx, CLI::App* sub, const std::string& kg_path,
                   const std::string& format, const std::string& task_name,
                   uint64_t seed, const std::string& out_prefix,
                   const std::string& holdout_path, bool symmetric,
                   const std::vector<std::string>& comb_inputs) {
    std::vector<std::string> inputs, outputs;
    TaskDataset ds;
    if (task_name == "comb") {
        if (comb_inputs.empty()) throw KgreError("comb task requires --comb-input");
        std::vector<TaskDataset> parts;
        for (const auto& prefix : comb_inputs) {
            TaskDataset part;
            part.train = load_pairs(ctx.path(prefix + ".train.tsv"));
            part.dev = load_pairs(ctx.path(prefix + ".dev.tsv"));
            inputs.push_back(ctx.path(prefix + ".train.tsv"));
            inputs.push_back(ctx.path(prefix + ".dev.tsv"));
            parts.push_back(std::move(part));
        }
        ds = make_comb(parts, seed);
    } else {
        KnowledgeGraph kg = load_kg(ctx.path(kg_path), parse_format(format));
        inputs.push_back(ctx.path(kg_path));
        auto pairs = generate_task(kg, task_from_name(task_name), symmetric);
        if (!holdout_path.empty()) {
            auto holdout = load_holdout_ids(ctx.path(holdout_path));
            inputs.push_back(ctx.path(holdout_path));
            std::erase_if(pairs, [&](const TrainingPair& p) {
                return holdout.count(p.mention_node) || holdout.count(p.concept_node);
            });
        }
        save_pairs(pairs, ctx.path(out_prefix + ".pairs.tsv"));
        outputs.push_back(ctx.path(out_prefix + ".pairs.tsv"));
        ds = split_80_20(std::move(pairs), seed, task_name);
    }
    save_pairs(ds.train, ctx.path(out_prefix + ".train.tsv"));
    save_pairs(ds.dev, ctx.path(out_prefix + ".dev.tsv"));
    outputs.push_back(ctx.path(out_prefix + ".train.tsv"));
    outputs.push_back(ctx.path(out_prefix + ".dev.tsv"));
    TaskStats st = task_stats(ds);
    std::cout << "gen-tasks: train " << st.train_count << ", dev " << st.dev_count << "\n";
    for (const auto& [name, count] : st.per_task_counts) {
        std::cout << "  " << name << ": " << count << "\n";
    }
    emit_manifest(ctx, sub, seed, inputs, outputs);
}

// ---- train ------------------------------------------------------------------

void run_train(Ctx& ctx, CLI::App* sub, const std::string& train_path,
               const std::string& dev_path, const std::string& aux_train,
               const std::string& aux_dev, const std::string& tok_path,
               size_t vocab_size, ModelDims dims, TrainConfig cfg,
               const std::string& out_path, const std::string& log_path) {
    std::vector<std::string> inputs = {ctx.path(train_path)};
    TaskDataset ds;
    ds.train = load_pairs(ctx.path(train_path));
    if (!dev_path.empty()) {
        ds.dev = load_pairs(ctx.path(dev_path));
        inputs.push_back(ctx.path(dev_path));
    }

    Tokenizer tok;
    if (fs::exists(ctx.path(tok_path))) {
        tok = Tokenizer::load(ctx.path(tok_path));
        inputs.push_back(ctx.path(tok_path));
    } else {
        std::vector<std::string> corpus;
        for (const auto& p : ds.train) {
            corpus.push_back(p.mention_text);
            corpus.push_back(p.concept_text);
        }
        tok = train_tokenizer(corpus, vocab_size);
        tok.save(ctx.path(tok_path));
        std::cout << "train: trained tokenizer, vocab " << tok.vocab_size() << "\n";
    }
    dims.vocab = static_cast<int>(tok.vocab_size());

    cfg.threads = ctx.threads;
    EncoderModel model = init_model(dims, cfg.seed);
    TrainResult result;
    if (!aux_train.empty()) {
        TaskDataset aux;
        aux.train = load_pairs(ctx.path(aux_train));
        inputs.push_back(ctx.path(aux_train));
        if (!aux_dev.empty()) {
            aux.dev = load_pairs(ctx.path(aux_dev));
            inputs.push_back(ctx.path(aux_dev));
        }
        result = train_multitask(std::move(model), tok, ds, aux, cfg);
    } else {
        result = train(std::move(model), tok, ds, cfg);
    }

    save_model(result.model, ctx.path(out_path));
    std::vector<std::string> outputs = {ctx.path(out_path)};
    if (!log_path.empty()) {
        write_file(ctx.path(log_path), serialize_train_log(result.log));
        outputs.push_back(ctx.path(log_path));
    }
    double final_loss = result.log.steps.empty() ? 0.0 : result.log.steps.back().loss;
    std::cout << "train: " << result.log.steps.size() << " steps, final loss " << final_loss
              << ", best epoch " << result.log.best_epoch << "\n";
    if (result.log.aborted_non_finite) {
        std::cout << "train: aborted on non-finite loss; last finite checkpoint saved\n";
    }
    emit_manifest(ctx, sub, cfg.seed, inputs, outputs);
}

// ---- index ------------------------------------------------------------------

void run_index_dense(Ctx& ctx, CLI::App* sub, const std::string& kg_path,
                     const std::string& format, const std::string& model_path,
                     const std::string& tok_path, const std::string& out_path,
                     bool main_only) {
    KnowledgeGraph kg = load_kg(ctx.path(kg_path), parse_format(format));
    EncoderModel model = load_model(ctx.path(model_path));
    Tokenizer tok = Tokenizer::load(ctx.path(tok_path));
    ConceptCatalog cat = catalog_from_kg(kg, main_only);
    uint64_t fp = hash_file(ctx.path(model_path));
    DenseIndex index = build_dense_index(model, tok, cat, fp, ctx.threads);
    save_dense_index(index, ctx.path(out_path));
    std::cout << "index: dense, " << cat.entries.size() << " entries\n";
    emit_manifest(ctx, sub, 0,
                  {ctx.path(kg_path), ctx.path(model_path), ctx.path(tok_path)},
                  {ctx.path(out_path)});
}

void run_index_bm25(Ctx& ctx, CLI::App* sub, const std::string& kg_path,
                    const std::string& format, const std::string& out_path,
                    bool main_only) {
    KnowledgeGraph kg = load_kg(ctx.path(kg_path), parse_format(format));
    ConceptCatalog cat = catalog_from_kg(kg, main_only);
    Bm25Index index = build_bm25_index(cat);
    save_bm25_index(index, ctx.path(out_path));
    std::cout << "index: bm25, " << cat.entries.size() << " entries\n";
    emit_manifest(ctx, sub, 0, {ctx.path(kg_path)}, {ctx.path(out_path)});
}

// ---- query / eval -----------------------------------------------------------

SearchFn make_search(const std::string& system, const std::string& index_path,
                     const std::string& model_path, const std::string& tok_path, Ctx& ctx,
                     std::shared_ptr<void>& keepalive) {
    if (system == "bm25") {
        auto index = std::make_shared<Bm25Index>(load_bm25_index(ctx.path(index_path)));
        keepalive = index;
        return [index](const std::string& mention, int k) {
            return search_bm25(*index, mention, k);
        };
    }
    if (system == "dense") {
        struct DenseBundle {
            DenseIndex index;
            EncoderModel model;
            Tokenizer tok;
            uint64_t fp;
        };
        auto b = std::make_shared<DenseBundle>();
        b->index = load_dense_index(ctx.path(index_path));
        b->model = load_model(ctx.path(model_path));
        b->tok = Tokenizer::load(ctx.path(tok_path));
        b->fp = hash_file(ctx.path(model_path));
        keepalive = b;
        return [b](const std::string& mention, int k) {
            return search_dense(b->index, b->model, b->tok, b->fp, mention, k);
        };
    }
    throw KgreError("unknown system (expected dense or bm25): " + system);
}

void run_query(Ctx& ctx, const std::string& system, const std::string& index_path,
               const std::string& model_path, const std::string& tok_path,
               const std::string& mention, int k) {
    std::shared_ptr<void> keep;
    SearchFn search = make_search(system, index_path, model_path, tok_path, ctx, keep);
    RetrievalResult res = search(mention, k);
    for (size_t i = 0; i < res.hits.size(); ++i) {
        std::cout << (i + 1) << "\t" << res.hits[i].first << "\t" << res.hits[i].second
                  << "\n";
    }
}

void run_eval(Ctx& ctx, CLI::App* sub, const std::string& system,
              const std::string& index_path, const std::string& model_path,
              const std::string& tok_path, const std::string& split_path,
              const std::string& kg_path, const std::string& format,
              const std::string& name, const std::string& report_path) {
    KnowledgeGraph kg = load_kg(ctx.path(kg_path), parse_format(format));
    EvalSplit split;
    split.name = name.empty() ? fs::path(split_path).stem().string() : name;
    split.mentions = load_mentions(ctx.path(split_path), kg);
    std::shared_ptr<void> keep;
    SearchFn search = make_search(system, index_path, model_path, tok_path, ctx, keep);
    EvalReport report = evaluate(search, system, split);
    std::vector<std::string> inputs = {ctx.path(kg_path), ctx.path(split_path),
                                       ctx.path(index_path)};
    std::vector<std::string> outputs;
    if (!report_path.empty()) {
        write_file(ctx.path(report_path), serialize_report(report));
        outputs.push_back(ctx.path(report_path));
    }
    std::cout << summary_table({report});
    emit_manifest(ctx, sub, 0, inputs, outputs);
}

void run_make_split(Ctx& ctx, CLI::App* sub, const std::string& kg_path,
                    const std::string& format, const std::string& mentions_path,
                    double fraction, uint64_t seed, const std::string& out_split,
                    const std::string& out_holdout) {
    KnowledgeGraph kg = load_kg(ctx.path(kg_path), parse_format(format));
    auto mentions = load_mentions(ctx.path(mentions_path), kg);
    auto [split, filter] =
        make_zeroshot_split(kg, mentions, Regime::MentionsAndConcepts, fraction, seed);
    (void)filter;  // the holdout file drives filtering in gen-tasks
    save_mentions(split.mentions, ctx.path(out_split));
    std::string ids;
    for (const auto& id : split.held_out_concepts) ids += id + "\n";
    write_file(ctx.path(out_holdout), ids);
    std::cout << "make-split: " << split.held_out_concepts.size() << " held-out concepts, "
              << split.mentions.size() << " mentions\n";
    emit_manifest(ctx, sub, seed, {ctx.path(kg_path), ctx.path(mentions_path)},
                  {ctx.path(out_split), ctx.path(out_holdout)});
}

// ---- report -----------------------------------------------------------------

void run_report(Ctx& ctx, const std::vector<std::string>& report_files) {
    std::vector<EvalReport> reports;
    for (const auto& f : report_files) {
        std::istringstream in(read_file(ctx.path(f)));
        std::string first;
        if (!std::getline(in, first)) throw KgreError("empty report file: " + f);
        auto j = nlohmann::json::parse(first);
        EvalReport r;
        r.split_name = j.at("split").get<std::string>();
        r.system_name = j.at("system").get<std::string>();
        r.r_at_1 = j.at("r_at_1").get<double>();
        r.r_at_25 = j.at("r_at_25").get<double>();
        r.n = j.at("n").get<size_t>();
        reports.push_back(std::move(r));
    }
    std::cout << summary_table(reports);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knowledge-graph self-supervised zero-shot entity retrieval"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "flat key=value config file");
    app.require_subcommand(1);

    Ctx ctx;
    for (int i = 0; i < argc; ++i) {
        if (i) ctx.command_line += ' ';
        ctx.command_line += argv[i];
    }
    app.add_option("--workdir", ctx.workdir, "base directory for relative paths");
    app.add_option("--threads", ctx.threads,
                   "worker threads for parallel sections (1 = bitwise reproducible)");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic ontology + test sets");
    SynthSpec spec;
    std::string synth_mode = "graph", synth_out = "synth";
    synth->add_option("--mode", synth_mode, "graph | icd10")->default_str("graph");
    synth->add_option("--n", spec.n_concepts, "number of concepts");
    synth->add_option("--d-min", spec.d_min, "min descriptions per concept");
    synth->add_option("--d-max", spec.d_max, "max descriptions per concept");
    synth->add_option("--density", spec.edge_density, "fraction of ordered pairs connected");
    synth->add_option("--branching", spec.tree_branching, "tree branching factor (icd10)");
    synth->add_option("--acronym-rate", spec.noise.acronym_rate);
    synth->add_option("--reorder-rate", spec.noise.reorder_rate);
    synth->add_option("--typo-rate", spec.noise.typo_rate);
    synth->add_option("--seed", spec.seed);
    synth->add_option("--out-dir", synth_out, "output directory");
    synth->callback([&] {
        spec.mode = synth_mode == "icd10" ? SynthSpec::Mode::IcdTree
                                          : SynthSpec::Mode::Multigraph;
        run_synth(ctx, synth, spec, synth_out);
    });

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate and inspect a KG export");
    std::string in_kg, in_format = "graph", in_out;
    ingest->add_option("--kg", in_kg)->required();
    ingest->add_option("--format", in_format, "icd10 | graph");
    ingest->add_option("--out", in_out, "re-serialize the normalized graph");
    ingest->callback([&] {
        KnowledgeGraph kg = load_kg(ctx.path(in_kg), parse_format(in_format));
        size_t edges = 0, parents = 0;
        for (const auto& n : kg.nodes()) {
            edges += n.edges.size();
            parents += n.parent ? 1 : 0;
        }
        std::cout << "ingest: " << kg.size() << " nodes, " << edges << " edges, "
                  << parents << " parent links\n";
        if (!in_out.empty()) {
            save_kg(kg, ctx.path(in_out));
            emit_manifest(ctx, ingest, 0, {ctx.path(in_kg)}, {ctx.path(in_out)});
        }
    });

    // gen-tasks
    auto* gen = app.add_subcommand("gen-tasks", "build (mention, concept) training pairs");
    std::string g_kg, g_format = "graph", g_task, g_out = "task", g_holdout;
    uint64_t g_seed = 1;
    bool g_symmetric = false;
    std::vector<std::string> g_comb;
    gen->add_option("--kg", g_kg);
    gen->add_option("--format", g_format, "icd10 | graph");
    gen->add_option("--task", g_task,
                    "icd-syn | icd-graph | snomed-syn | snomed-graph | umls-syn | "
                    "umls-graph | comb")
        ->required();
    gen->add_option("--seed", g_seed);
    gen->add_option("--out", g_out, "output prefix (.pairs/.train/.dev .tsv)");
    gen->add_option("--holdout", g_holdout, "file of concept ids to exclude");
    gen->add_flag("--symmetric-graph-pairs", g_symmetric,
                  "also emit reversed graph pairs");
    gen->add_option("--comb-input", g_comb, "task prefix to combine (repeatable)");
    gen->callback([&] {
        run_gen_tasks(ctx, gen, g_kg, g_format, g_task, g_seed, g_out, g_holdout,
                      g_symmetric, g_comb);
    });

    // train
    auto* tr = app.add_subcommand("train", "train the dual encoder");
    std::string t_train, t_dev, t_aux_train, t_aux_dev, t_tok = "tokenizer.txt";
    std::string t_out = "model.kgre", t_log, t_ckpt;
    size_t t_vocab = 1024;
    ModelDims t_dims;
    t_dims.vocab = 1024;
    t_dims.dim = 64;
    t_dims.layers = 2;
    t_dims.heads = 4;
    t_dims.ffn = 256;
    t_dims.max_len = 24;
    TrainConfig t_cfg;
    bool t_no_unique = false;
    tr->add_option("--train", t_train)->required();
    tr->add_option("--dev", t_dev);
    tr->add_option("--aux-train", t_aux_train, "auxiliary task train split (multi-task)");
    tr->add_option("--aux-dev", t_aux_dev);
    tr->add_option("--aux-weight", t_cfg.aux_weight);
    tr->add_option("--tokenizer", t_tok, "tokenizer file; trained here if absent");
    tr->add_option("--vocab-size", t_vocab, "BPE vocab size when training the tokenizer");
    tr->add_option("--dim", t_dims.dim);
    tr->add_option("--layers", t_dims.layers);
    tr->add_option("--heads", t_dims.heads);
    tr->add_option("--ffn", t_dims.ffn);
    tr->add_option("--max-len", t_dims.max_len);
    tr->add_option("--batch-size", t_cfg.batch_size);
    tr->add_option("--lr", t_cfg.lr_peak);
    tr->add_option("--warmup", t_cfg.warmup_ratio);
    tr->add_option("--epochs", t_cfg.max_epochs);
    tr->add_option("--seed", t_cfg.seed);
    tr->add_flag("--no-unique-concepts", t_no_unique,
                 "allow repeated concepts within a batch");
    tr->add_option("--out", t_out);
    tr->add_option("--log", t_log, "per-step training log file");
    tr->add_option("--checkpoint-dir", t_ckpt);
    tr->callback([&] {
        t_cfg.unique_concepts_per_batch = !t_no_unique;
        if (!t_ckpt.empty()) {
            fs::create_directories(ctx.path(t_ckpt));
            t_cfg.checkpoint_dir = ctx.path(t_ckpt);
        }
        run_train(ctx, tr, t_train, t_dev, t_aux_train, t_aux_dev, t_tok, t_vocab, t_dims,
                  t_cfg, t_out, t_log);
    });

    // index
    auto* index = app.add_subcommand("index", "build a retrieval index");
    index->require_subcommand(1);
    auto* dense = index->add_subcommand("build-dense");
    auto* bm25 = index->add_subcommand("build-bm25");
    std::string i_kg, i_format = "graph", i_model, i_tok, i_out;
    bool i_main_only = false;
    for (auto* s : {dense, bm25}) {
        s->add_option("--kg", i_kg)->required();
        s->add_option("--format", i_format, "icd10 | graph");
        s->add_option("--out", i_out)->required();
        s->add_flag("--main-desc-only", i_main_only, "index main descriptions only");
    }
    dense->add_option("--model", i_model)->required();
    dense->add_option("--tokenizer", i_tok)->required();
    dense->callback([&] {
        run_index_dense(ctx, dense, i_kg, i_format, i_model, i_tok, i_out, i_main_only);
    });
    bm25->callback([&] { run_index_bm25(ctx, bm25, i_kg, i_format, i_out, i_main_only); });

    // query
    auto* query = app.add_subcommand("query", "top-k lookup for one mention");
    std::string q_system = "dense", q_index, q_model, q_tok, q_mention;
    int q_k = 25;
    query->add_option("--system", q_system, "dense | bm25");
    query->add_option("--index", q_index)->required();
    query->add_option("--model", q_model);
    query->add_option("--tokenizer", q_tok);
    query->add_option("--mention", q_mention)->required();
    query->add_option("--k", q_k);
    query->callback([&] { run_query(ctx, q_system, q_index, q_model, q_tok, q_mention, q_k); });

    // eval
    auto* ev = app.add_subcommand("eval", "recall@k over an annotated test set");
    std::string e_system = "dense", e_index, e_model, e_tok, e_split, e_kg;
    std::string e_format = "graph", e_name, e_report;
    bool e_make_split = false;
    std::string e_mentions, e_out_split, e_out_holdout;
    double e_fraction = 0.2;
    uint64_t e_seed = 1;
    ev->add_option("--system", e_system, "dense | bm25");
    ev->add_option("--index", e_index);
    ev->add_option("--model", e_model);
    ev->add_option("--tokenizer", e_tok);
    ev->add_option("--split", e_split, "mention<TAB>gold test file");
    ev->add_option("--kg", e_kg)->required();
    ev->add_option("--format", e_format, "icd10 | graph");
    ev->add_option("--name", e_name, "split name for the report");
    ev->add_option("--report", e_report, "report output file");
    ev->add_flag("--make-split", e_make_split,
                 "build a mentions-and-concepts holdout split instead of evaluating");
    ev->add_option("--mentions", e_mentions, "mention pool for --make-split");
    ev->add_option("--fraction", e_fraction, "held-out concept fraction");
    ev->add_option("--seed", e_seed);
    ev->add_option("--out-split", e_out_split);
    ev->add_option("--out-holdout", e_out_holdout);
    ev->callback([&] {
        if (e_make_split) {
            run_make_split(ctx, ev, e_kg, e_format, e_mentions, e_fraction, e_seed,
                           e_out_split, e_out_holdout);
        } else {
            run_eval(ctx, ev, e_system, e_index, e_model, e_tok, e_split, e_kg, e_format,
                     e_name, e_report);
        }
    });

    // report
    auto* rep = app.add_subcommand("report", "combine eval reports into one table");
    std::vector<std::string> r_files;
    rep->add_option("--in", r_files, "report files (repeatable)")->required();
    rep->callback([&] { run_report(ctx, r_files); });

    auto started = std::chrono::steady_clock::now();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const KgreError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    std::cerr << "elapsed: " << elapsed << " ms\n";
    return 0;
}
