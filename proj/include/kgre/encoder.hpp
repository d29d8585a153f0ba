#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgre/common.hpp"

namespace kgre {

struct NonFiniteActivation : KgreError {
    using KgreError::KgreError;
};
struct ShapeMismatch : KgreError {
    using KgreError::KgreError;
};

// row-major matrix of doubles; y = x * W convention (rows = input dim)
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    void resize(int r, int c) {
        rows = r;
        cols = c;
        a.assign(static_cast<size_t>(r) * c, 0.0);
    }
    double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
    double* row(int r) { return a.data() + static_cast<size_t>(r) * cols; }
    const double* row(int r) const { return a.data() + static_cast<size_t>(r) * cols; }
};

using Vec = std::vector<double>;

struct ModelDims {
    int vocab = 4096;
    int dim = 128;
    int layers = 2;
    int heads = 4;
    int ffn = 512;
    int max_len = 32;
};

enum class Pooling { MeanOverNonPad, FirstToken };

struct LayerParams {
    Vec ln1_g, ln1_b;
    Mat wq, wk, wv, wo;  // D x D
    Vec bq, bk, bv, bo;
    Vec ln2_g, ln2_b;
    Mat w1;  // D x F
    Vec b1;
    Mat w2;  // F x D
    Vec b2;
};

// Pre-layer-norm transformer encoder with mean pooling over non-PAD positions.
struct EncoderModel {
    ModelDims dims;
    Pooling pooling = Pooling::MeanOverNonPad;
    bool l2_normalize = false;

    Mat tok_emb;  // V x D
    Mat pos_emb;  // Lmax x D
    std::vector<LayerParams> layers;
    Vec lnf_g, lnf_b;

    // visits every parameter tensor in the serialization order
    template <typename F>
    void for_each_tensor(F&& f) {
        f("tok_emb", tok_emb.a);
        f("pos_emb", pos_emb.a);
        for (size_t l = 0; l < layers.size(); ++l) {
            auto& lp = layers[l];
            std::string p = "layer" + std::to_string(l) + ".";
            f(p + "ln1_g", lp.ln1_g);
            f(p + "ln1_b", lp.ln1_b);
            f(p + "wq", lp.wq.a);
            f(p + "bq", lp.bq);
            f(p + "wk", lp.wk.a);
            f(p + "bk", lp.bk);
            f(p + "wv", lp.wv.a);
            f(p + "bv", lp.bv);
            f(p + "wo", lp.wo.a);
            f(p + "bo", lp.bo);
            f(p + "ln2_g", lp.ln2_g);
            f(p + "ln2_b", lp.ln2_b);
            f(p + "w1", lp.w1.a);
            f(p + "b1", lp.b1);
            f(p + "w2", lp.w2.a);
            f(p + "b2", lp.b2);
        }
        f("lnf_g", lnf_g);
        f("lnf_b", lnf_b);
    }

    template <typename F>
    void for_each_tensor(F&& f) const {
        const_cast<EncoderModel*>(this)->for_each_tensor(
            [&](const std::string& name, Vec& v) { f(name, static_cast<const Vec&>(v)); });
    }

    size_t parameter_count() const;
    bool all_finite() const;
};

// same shape-tree as the model parameters
using Gradients = EncoderModel;

EncoderModel init_model(const ModelDims& dims, uint64_t seed);
Gradients zeros_like(const EncoderModel& model);

// batch of token-id sequences; every sequence must have length dims.max_len
std::vector<Vec> embed(const EncoderModel& model, const std::vector<std::vector<int>>& ids,
                       int threads = 1);

// reverse-mode gradients of the pooled embeddings contracted with upstream
Gradients backward(const EncoderModel& model, const std::vector<std::vector<int>>& ids,
                   const std::vector<Vec>& upstream, int threads = 1);

// combined pass used by the trainer: caches forward state once
struct BatchEncoding;
std::vector<Vec> embed_cached(const EncoderModel& model,
                              const std::vector<std::vector<int>>& ids, BatchEncoding& enc,
                              int threads = 1);
void backward_cached(const EncoderModel& model, const BatchEncoding& enc,
                     const std::vector<Vec>& upstream, Gradients& grad, int threads = 1);

std::string serialize_model(const EncoderModel& model);  // "KGRE" binary blob
EncoderModel deserialize_model(const std::string& content);
void save_model(const EncoderModel& model, const std::string& path);
EncoderModel load_model(const std::string& path);

// forward-state cache for one batch; reusable between embed and backward
struct SeqCache;
struct BatchEncoding {
    std::vector<SeqCache> caches;
    BatchEncoding();
    BatchEncoding(BatchEncoding&&) noexcept;
    BatchEncoding& operator=(BatchEncoding&&) noexcept;
    ~BatchEncoding();
};

}  // namespace kgre
