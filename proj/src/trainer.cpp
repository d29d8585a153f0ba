#include "kgre/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace kgre {

BatchScores score_batch(const std::vector<Vec>& mentions, const std::vector<Vec>& concepts) {
    if (mentions.size() != concepts.size() || mentions.empty()) {
        throw ShapeMismatch("score_batch requires equal non-empty batches");
    }
    int b = static_cast<int>(mentions.size());
    BatchScores s;
    s.scores.resize(b, b);
    for (int i = 0; i < b; ++i) {
        for (int j = 0; j < b; ++j) {
            double dot = 0.0;
            const Vec& em = mentions[static_cast<size_t>(i)];
            const Vec& ec = concepts[static_cast<size_t>(j)];
            for (size_t k = 0; k < em.size(); ++k) dot += em[k] * ec[k];
            s.scores.at(i, j) = dot;
        }
    }
    return s;
}

std::pair<double, Mat> batch_loss(const BatchScores& s) {
    const Mat& m = s.scores;
    if (m.rows != m.cols || m.rows < 1) throw ShapeMismatch("score matrix must be square");
    int b = m.rows;
    for (double v : m.a) {
        if (!std::isfinite(v)) throw NonFinite("non-finite score matrix");
    }
    Mat ds;
    ds.resize(b, b);
    double loss = 0.0;
    for (int i = 0; i < b; ++i) {
        const double* row = m.row(i);
        double mx = row[0];
        for (int j = 1; j < b; ++j) mx = std::max(mx, row[j]);
        double denom = 0.0;
        for (int j = 0; j < b; ++j) denom += std::exp(row[j] - mx);
        double log_denom = mx + std::log(denom);
        loss += log_denom - row[i];
        double* dr = ds.row(i);
        for (int j = 0; j < b; ++j) {
            double p = std::exp(row[j] - log_denom);
            dr[j] = (p - (i == j ? 1.0 : 0.0)) / b;
        }
    }
    loss /= b;
    if (!std::isfinite(loss)) throw NonFinite("non-finite batch loss");
    return {loss, ds};
}

double lr_at(int64_t step, int64_t total_steps, const TrainConfig& cfg) {
    if (total_steps < 1) throw KgreError("total_steps must be positive");
    if (step < 0) step = 0;
    if (step > total_steps) step = total_steps;
    auto warmup = static_cast<int64_t>(
        std::ceil(cfg.warmup_ratio * static_cast<double>(total_steps)));
    if (warmup < 1) warmup = 1;
    if (step <= warmup) {
        return cfg.lr_peak * static_cast<double>(step) / static_cast<double>(warmup);
    }
    return cfg.lr_peak * static_cast<double>(total_steps - step) /
           static_cast<double>(total_steps - warmup);
}

std::vector<std::vector<size_t>> make_batches(const std::vector<TrainingPair>& pairs,
                                              std::vector<size_t> order, int batch_size,
                                              bool unique_concepts) {
    std::vector<std::vector<size_t>> batches;
    std::vector<size_t> remaining = std::move(order);
    while (static_cast<int>(remaining.size()) >= batch_size) {
        size_t completed_before = batches.size();
        std::vector<size_t> next_round;
        std::vector<size_t> cur;
        std::set<ConceptId> in_batch;
        for (size_t idx : remaining) {
            if (unique_concepts && in_batch.count(pairs[idx].concept_node)) {
                next_round.push_back(idx);  // conflicting pair deferred
                continue;
            }
            cur.push_back(idx);
            in_batch.insert(pairs[idx].concept_node);
            if (static_cast<int>(cur.size()) == batch_size) {
                batches.push_back(std::move(cur));
                cur.clear();
                in_batch.clear();
            }
        }
        next_round.insert(next_round.end(), cur.begin(), cur.end());
        if (batches.size() == completed_before) break;  // only conflicts left
        remaining = std::move(next_round);
    }
    return batches;  // trailing incomplete batch dropped
}

namespace {

struct AdamState {
    Gradients m;
    Gradients v;
    int64_t t = 0;
};

void adam_update(EncoderModel& model, const Gradients& grad, AdamState& st, double lr,
                 const TrainConfig& cfg) {
    st.t += 1;
    double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(st.t));
    double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(st.t));
    std::vector<Vec*> p, m, v;
    std::vector<const Vec*> g;
    model.for_each_tensor([&](const std::string&, Vec& x) { p.push_back(&x); });
    grad.for_each_tensor([&](const std::string&, const Vec& x) { g.push_back(&x); });
    st.m.for_each_tensor([&](const std::string&, Vec& x) { m.push_back(&x); });
    st.v.for_each_tensor([&](const std::string&, Vec& x) { v.push_back(&x); });
    for (size_t k = 0; k < p.size(); ++k) {
        for (size_t i = 0; i < p[k]->size(); ++i) {
            double gi = (*g[k])[i];
            double mi = cfg.adam_beta1 * (*m[k])[i] + (1.0 - cfg.adam_beta1) * gi;
            double vi = cfg.adam_beta2 * (*v[k])[i] + (1.0 - cfg.adam_beta2) * gi * gi;
            (*m[k])[i] = mi;
            (*v[k])[i] = vi;
            (*p[k])[i] -= lr * (mi / bc1) / (std::sqrt(vi / bc2) + cfg.adam_eps);
        }
    }
}

struct EncodedPairs {
    std::vector<std::vector<int>> mentions;
    std::vector<std::vector<int>> concepts;
};

EncodedPairs encode_pairs(const Tokenizer& tok, const std::vector<TrainingPair>& pairs,
                          int max_len) {
    EncodedPairs e;
    e.mentions.reserve(pairs.size());
    e.concepts.reserve(pairs.size());
    for (const auto& p : pairs) {
        e.mentions.push_back(tok.encode_text(p.mention_text, max_len));
        e.concepts.push_back(tok.encode_text(p.concept_text, max_len));
    }
    return e;
}

// loss and gradient contribution of one batch through the shared encoder
double batch_step(const EncoderModel& model, const EncodedPairs& enc,
                  const std::vector<size_t>& batch, double weight, Gradients& grad,
                  int threads) {
    std::vector<std::vector<int>> ids_m, ids_c;
    ids_m.reserve(batch.size());
    ids_c.reserve(batch.size());
    for (size_t idx : batch) {
        ids_m.push_back(enc.mentions[idx]);
        ids_c.push_back(enc.concepts[idx]);
    }
    BatchEncoding em_enc, ec_enc;
    std::vector<Vec> em = embed_cached(model, ids_m, em_enc, threads);
    std::vector<Vec> ec = embed_cached(model, ids_c, ec_enc, threads);
    auto [loss, ds] = batch_loss(score_batch(em, ec));
    if (weight == 0.0) return 0.0;

    size_t b = batch.size();
    size_t d = em[0].size();
    std::vector<Vec> dem(b, Vec(d, 0.0)), dec(b, Vec(d, 0.0));
    for (size_t i = 0; i < b; ++i) {
        for (size_t j = 0; j < b; ++j) {
            double w = weight * ds.at(static_cast<int>(i), static_cast<int>(j));
            if (w == 0.0) continue;
            for (size_t k = 0; k < d; ++k) {
                dem[i][k] += w * ec[j][k];
                dec[j][k] += w * em[i][k];
            }
        }
    }
    backward_cached(model, em_enc, dem, grad, threads);
    backward_cached(model, ec_enc, dec, grad, threads);
    return weight * loss;
}

double eval_dev_loss(const EncoderModel& model, const EncodedPairs& enc, size_t dev_size,
                     int batch_size, int threads) {
    if (dev_size < 2) return std::nan("");
    double total = 0.0;
    size_t batches = 0;
    for (size_t start = 0; start + 2 <= dev_size; start += static_cast<size_t>(batch_size)) {
        size_t end = std::min(dev_size, start + static_cast<size_t>(batch_size));
        if (end - start < 2) break;
        std::vector<std::vector<int>> ids_m(enc.mentions.begin() + static_cast<long>(start),
                                            enc.mentions.begin() + static_cast<long>(end));
        std::vector<std::vector<int>> ids_c(enc.concepts.begin() + static_cast<long>(start),
                                            enc.concepts.begin() + static_cast<long>(end));
        std::vector<Vec> em = embed(model, ids_m, threads);
        std::vector<Vec> ec = embed(model, ids_c, threads);
        total += batch_loss(score_batch(em, ec)).first;
        ++batches;
    }
    return batches ? total / static_cast<double>(batches) : std::nan("");
}

TrainResult train_impl(EncoderModel model, const Tokenizer& tok, const TaskDataset& primary,
                       const TaskDataset* auxiliary, const TrainConfig& cfg) {
    if (cfg.batch_size < 2) throw KgreError("batch_size must be at least 2");
    if (static_cast<int>(primary.train.size()) < cfg.batch_size) {
        throw DatasetTooSmall("train split smaller than one batch");
    }
    if (auxiliary && static_cast<int>(auxiliary->train.size()) < cfg.batch_size) {
        throw DatasetTooSmall("auxiliary train split smaller than one batch");
    }

    int max_len = model.dims.max_len;
    EncodedPairs enc_train = encode_pairs(tok, primary.train, max_len);
    EncodedPairs enc_dev = encode_pairs(tok, primary.dev, max_len);
    EncodedPairs enc_aux;
    std::vector<std::vector<size_t>> aux_batches;
    size_t aux_cursor = 0;
    uint64_t aux_refills = 0;
    if (auxiliary) enc_aux = encode_pairs(tok, auxiliary->train, max_len);

    auto steps_per_epoch =
        static_cast<int64_t>(primary.train.size() / static_cast<size_t>(cfg.batch_size));
    int64_t total_steps = steps_per_epoch * cfg.max_epochs;
    if (total_steps < 1) total_steps = 1;

    TrainLog log;
    AdamState adam{zeros_like(model), zeros_like(model), 0};
    EncoderModel best = model;
    double best_dev = std::numeric_limits<double>::infinity();
    EncoderModel last_finite = model;
    int64_t step = 0;

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        Rng rng(cfg.seed + 0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(epoch + 1));
        std::vector<size_t> order(primary.train.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        shuffle_inplace(order, rng);
        auto batches = make_batches(primary.train, std::move(order), cfg.batch_size,
                                    cfg.unique_concepts_per_batch);

        for (const auto& batch : batches) {
            try {
                Gradients grad = zeros_like(model);
                double loss = batch_step(model, enc_train, batch, 1.0, grad, cfg.threads);
                if (auxiliary && cfg.aux_weight != 0.0) {
                    if (aux_cursor >= aux_batches.size()) {
                        // same shuffle scheme as the primary epochs, so an
                        // auxiliary equal to the primary draws identical batches
                        Rng arng(cfg.seed +
                                 0x9e3779b97f4a7c15ULL * (aux_refills++ + 1));
                        std::vector<size_t> aorder(auxiliary->train.size());
                        for (size_t i = 0; i < aorder.size(); ++i) aorder[i] = i;
                        shuffle_inplace(aorder, arng);
                        aux_batches = make_batches(auxiliary->train, std::move(aorder),
                                                   cfg.batch_size,
                                                   cfg.unique_concepts_per_batch);
                        aux_cursor = 0;
                    }
                    loss += batch_step(model, enc_aux, aux_batches[aux_cursor++],
                                       cfg.aux_weight, grad, cfg.threads);
                }
                ++step;
                double lr = lr_at(step, total_steps, cfg);
                adam_update(model, grad, adam, lr, cfg);
                log.steps.push_back({step, epoch, lr, loss});
                if (!model.all_finite()) throw NonFinite("parameters diverged");
                last_finite = model;
            } catch (const NonFinite&) {
                log.aborted_non_finite = true;
                return {std::move(last_finite), std::move(log)};
            } catch (const NonFiniteActivation&) {
                log.aborted_non_finite = true;
                return {std::move(last_finite), std::move(log)};
            }
        }

        double dev = eval_dev_loss(model, enc_dev, primary.dev.size(), cfg.batch_size,
                                   cfg.threads);
        log.dev_losses.push_back(dev);
        if (!std::isnan(dev) && dev < best_dev) {
            best_dev = dev;
            best = model;
            log.best_epoch = epoch;
        }
        if (cfg.checkpoint_dir) {
            save_model(model, *cfg.checkpoint_dir + "/epoch-" + std::to_string(epoch) +
                                  ".kgre");
        }
    }

    if (log.best_epoch < 0) {
        // no usable dev split; fall back to the final parameters
        best = model;
        log.best_epoch = cfg.max_epochs - 1;
    }
    return {std::move(best), std::move(log)};
}

}  // namespace

TrainResult train(EncoderModel model, const Tokenizer& tok, const TaskDataset& ds,
                  const TrainConfig& cfg) {
    return train_impl(std::move(model), tok, ds, nullptr, cfg);
}

TrainResult train_multitask(EncoderModel model, const Tokenizer& tok,
                            const TaskDataset& primary, const TaskDataset& auxiliary,
                            const TrainConfig& cfg) {
    return train_impl(std::move(model), tok, primary, &auxiliary, cfg);
}

std::string serialize_train_log(const TrainLog& log) {
    std::ostringstream out;
    out.precision(12);
    for (const auto& s : log.steps) {
        out << "{\"step\":" << s.step << ",\"epoch\":" << s.epoch << ",\"lr\":" << s.lr
            << ",\"loss\":" << s.loss << "}\n";
    }
    for (size_t e = 0; e < log.dev_losses.size(); ++e) {
        out << "{\"epoch\":" << e << ",\"dev_loss\":" << log.dev_losses[e] << "}\n";
    }
    out << "{\"best_epoch\":" << log.best_epoch << "}\n";
    return out.str();
}

}  // namespace kgre
