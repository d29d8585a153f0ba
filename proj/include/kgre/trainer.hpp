#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kgre/encoder.hpp"
#include "kgre/taskgen.hpp"
#include "kgre/tokenizer.hpp"

namespace kgre {

struct NonFinite : KgreError {
    using KgreError::KgreError;
};
struct DatasetTooSmall : KgreError {
    using KgreError::KgreError;
};

struct TrainConfig {
    int batch_size = 128;
    double lr_peak = 3e-4;  // desk-scale default for a from-scratch encoder
    double warmup_ratio = 0.02;
    int max_epochs = 50;
    uint64_t seed = 1;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    bool unique_concepts_per_batch = true;
    double aux_weight = 1.0;  // multi-task only; 0 disables the auxiliary term
    int threads = 1;
    std::optional<std::string> checkpoint_dir;  // per-epoch epoch-{n}.kgre files
};

// B x B inner-product score matrix: scores.at(i, j) = <e_m_i, e_c_j>
struct BatchScores {
    Mat scores;
};

BatchScores score_batch(const std::vector<Vec>& mentions, const std::vector<Vec>& concepts);

// mean negative log likelihood of the diagonal under row-wise softmax,
// with the exact gradient w.r.t. every score entry
std::pair<double, Mat> batch_loss(const BatchScores& s);

// warm-up to lr_peak over ceil(warmup_ratio * total_steps) steps, then
// linear decay to zero at total_steps
double lr_at(int64_t step, int64_t total_steps, const TrainConfig& cfg);

struct StepRecord {
    int64_t step;
    int epoch;
    double lr;
    double loss;
};

struct TrainLog {
    std::vector<StepRecord> steps;
    std::vector<double> dev_losses;  // one per epoch; NaN when dev is unusable
    int best_epoch = -1;
    bool aborted_non_finite = false;
};

std::string serialize_train_log(const TrainLog& log);

struct TrainResult {
    EncoderModel model;
    TrainLog log;
};

TrainResult train(EncoderModel model, const Tokenizer& tok, const TaskDataset& ds,
                  const TrainConfig& cfg);

// one batch from each dataset per step; loss = primary + aux_weight * auxiliary
TrainResult train_multitask(EncoderModel model, const Tokenizer& tok,
                            const TaskDataset& primary, const TaskDataset& auxiliary,
                            const TrainConfig& cfg);

// exposed for tests: greedy bucketing that keeps concept nodes unique per batch,
// deferring conflicting pairs to later batches; incomplete trailing batch dropped
std::vector<std::vector<size_t>> make_batches(const std::vector<TrainingPair>& pairs,
                                              std::vector<size_t> order, int batch_size,
                                              bool unique_concepts);

}  // namespace kgre
