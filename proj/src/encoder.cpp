#include "kgre/encoder.hpp"

#include <cmath>
#include <cstring>
#include <thread>

#include "kgre/tokenizer.hpp"

namespace kgre {

namespace {

constexpr double kLnEps = 1e-5;
constexpr double kNegInf = -1e30;

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2)); }

double gelu_grad(double x) {
    return 0.5 * (1.0 + std::erf(x * M_SQRT1_2)) +
           x * std::exp(-0.5 * x * x) * 0.3989422804014327;  // 1/sqrt(2*pi)
}

// y[t] = x[t] * W + b, x: L x in, W: in x out
void affine(const Mat& x, const Mat& w, const Vec& b, Mat& y) {
    y.resize(x.rows, w.cols);
    for (int t = 0; t < x.rows; ++t) {
        const double* xr = x.row(t);
        double* yr = y.row(t);
        for (int j = 0; j < w.cols; ++j) yr[j] = b[static_cast<size_t>(j)];
        for (int i = 0; i < x.cols; ++i) {
            double xi = xr[i];
            if (xi == 0.0) continue;
            const double* wr = w.row(i);
            for (int j = 0; j < w.cols; ++j) yr[j] += xi * wr[j];
        }
    }
}

// gradients of y = x W + b: dx += dy W^T, dW += x^T dy, db += colsum(dy)
void affine_backward(const Mat& x, const Mat& w, const Mat& dy, Mat& dx, Mat& dw, Vec& db) {
    for (int t = 0; t < x.rows; ++t) {
        const double* dyr = dy.row(t);
        const double* xr = x.row(t);
        double* dxr = dx.row(t);
        for (int j = 0; j < w.cols; ++j) db[static_cast<size_t>(j)] += dyr[j];
        for (int i = 0; i < x.cols; ++i) {
            const double* wr = w.row(i);
            double* dwr = dw.row(i);
            double acc = 0.0;
            double xi = xr[i];
            for (int j = 0; j < w.cols; ++j) {
                acc += dyr[j] * wr[j];
                dwr[j] += xi * dyr[j];
            }
            dxr[i] += acc;
        }
    }
}

struct LnCache {
    Mat xhat;        // L x D
    Vec inv_std;     // L
};

void layer_norm(const Mat& x, const Vec& g, const Vec& b, Mat& y, LnCache& cache) {
    int n = x.cols;
    y.resize(x.rows, n);
    cache.xhat.resize(x.rows, n);
    cache.inv_std.assign(static_cast<size_t>(x.rows), 0.0);
    for (int t = 0; t < x.rows; ++t) {
        const double* xr = x.row(t);
        double mu = 0.0;
        for (int i = 0; i < n; ++i) mu += xr[i];
        mu /= n;
        double var = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = xr[i] - mu;
            var += d * d;
        }
        var /= n;
        double inv = 1.0 / std::sqrt(var + kLnEps);
        cache.inv_std[static_cast<size_t>(t)] = inv;
        double* xh = cache.xhat.row(t);
        double* yr = y.row(t);
        for (int i = 0; i < n; ++i) {
            xh[i] = (xr[i] - mu) * inv;
            yr[i] = g[static_cast<size_t>(i)] * xh[i] + b[static_cast<size_t>(i)];
        }
    }
}

void layer_norm_backward(const Mat& dy, const Vec& g, const LnCache& cache, Mat& dx,
                         Vec& dg, Vec& db) {
    int n = dy.cols;
    for (int t = 0; t < dy.rows; ++t) {
        const double* dyr = dy.row(t);
        const double* xh = cache.xhat.row(t);
        double inv = cache.inv_std[static_cast<size_t>(t)];
        double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
        for (int i = 0; i < n; ++i) {
            double dxh = dyr[i] * g[static_cast<size_t>(i)];
            sum_dxhat += dxh;
            sum_dxhat_xhat += dxh * xh[i];
            dg[static_cast<size_t>(i)] += dyr[i] * xh[i];
            db[static_cast<size_t>(i)] += dyr[i];
        }
        double m1 = sum_dxhat / n;
        double m2 = sum_dxhat_xhat / n;
        double* dxr = dx.row(t);
        for (int i = 0; i < n; ++i) {
            double dxh = dyr[i] * g[static_cast<size_t>(i)];
            dxr[i] += inv * (dxh - m1 - xh[i] * m2);
        }
    }
}

struct LayerCache {
    Mat x_in;        // input to attention block (pre-LN1)
    LnCache ln1;
    Mat h, q, k, v;  // post-LN1 and projections, L x D
    std::vector<Mat> attn;  // per head, L x L softmax probabilities
    Mat ctx;         // L x D
    Mat x_mid;       // input to ffn block (pre-LN2)
    LnCache ln2;
    Mat h2;          // post-LN2
    Mat z;           // pre-GELU, L x F
    Mat gz;          // post-GELU, L x F
};

}  // namespace

struct SeqCache {
    std::vector<int> ids;
    std::vector<bool> mask;
    int n_tokens = 0;  // non-PAD count
    Mat x0;
    std::vector<LayerCache> layers;
    Mat x_final;  // pre-final-LN
    LnCache lnf;
    Mat y;        // post-final-LN
    Vec pooled;   // raw pooled output (before optional L2 normalization)
};

BatchEncoding::BatchEncoding() = default;
BatchEncoding::BatchEncoding(BatchEncoding&&) noexcept = default;
BatchEncoding& BatchEncoding::operator=(BatchEncoding&&) noexcept = default;
BatchEncoding::~BatchEncoding() = default;

size_t EncoderModel::parameter_count() const {
    size_t n = 0;
    for_each_tensor([&](const std::string&, const Vec& v) { n += v.size(); });
    return n;
}

bool EncoderModel::all_finite() const {
    bool ok = true;
    for_each_tensor([&](const std::string&, const Vec& v) {
        for (double x : v) {
            if (!std::isfinite(x)) ok = false;
        }
    });
    return ok;
}

EncoderModel init_model(const ModelDims& dims, uint64_t seed) {
    if (dims.dim % dims.heads != 0) throw KgreError("dim must be divisible by heads");
    EncoderModel m;
    m.dims = dims;
    m.tok_emb.resize(dims.vocab, dims.dim);
    m.pos_emb.resize(dims.max_len, dims.dim);
    m.layers.resize(static_cast<size_t>(dims.layers));
    for (auto& lp : m.layers) {
        lp.ln1_g.assign(static_cast<size_t>(dims.dim), 1.0);
        lp.ln1_b.assign(static_cast<size_t>(dims.dim), 0.0);
        lp.ln2_g.assign(static_cast<size_t>(dims.dim), 1.0);
        lp.ln2_b.assign(static_cast<size_t>(dims.dim), 0.0);
        lp.wq.resize(dims.dim, dims.dim);
        lp.wk.resize(dims.dim, dims.dim);
        lp.wv.resize(dims.dim, dims.dim);
        lp.wo.resize(dims.dim, dims.dim);
        lp.bq.assign(static_cast<size_t>(dims.dim), 0.0);
        lp.bk.assign(static_cast<size_t>(dims.dim), 0.0);
        lp.bv.assign(static_cast<size_t>(dims.dim), 0.0);
        lp.bo.assign(static_cast<size_t>(dims.dim), 0.0);
        lp.w1.resize(dims.dim, dims.ffn);
        lp.b1.assign(static_cast<size_t>(dims.ffn), 0.0);
        lp.w2.resize(dims.ffn, dims.dim);
        lp.b2.assign(static_cast<size_t>(dims.dim), 0.0);
    }
    m.lnf_g.assign(static_cast<size_t>(dims.dim), 1.0);
    m.lnf_b.assign(static_cast<size_t>(dims.dim), 0.0);

    Rng rng(seed);
    m.for_each_tensor([&](const std::string& name, Vec& v) {
        if (name.find("ln") != std::string::npos || name.find(".b") != std::string::npos) {
            return;  // norms and biases keep their deterministic init
        }
        for (double& x : v) x = rng.normal() * 0.02;
    });
    return m;
}

Gradients zeros_like(const EncoderModel& model) {
    EncoderModel g = model;  // copies shapes and config
    g.for_each_tensor([](const std::string&, Vec& v) { std::fill(v.begin(), v.end(), 0.0); });
    return g;
}

namespace {

void forward_one(const EncoderModel& m, const std::vector<int>& ids, SeqCache& c) {
    const ModelDims& d = m.dims;
    int L = d.max_len;
    int D = d.dim;
    int H = d.heads;
    int Dh = D / H;
    double scale = 1.0 / std::sqrt(static_cast<double>(Dh));
    if (static_cast<int>(ids.size()) != L) {
        throw ShapeMismatch("sequence length must equal max_len");
    }

    c.ids = ids;
    c.mask.assign(static_cast<size_t>(L), false);
    c.n_tokens = 0;
    for (int t = 0; t < L; ++t) {
        if (ids[static_cast<size_t>(t)] != Tokenizer::kPad) {
            c.mask[static_cast<size_t>(t)] = true;
            ++c.n_tokens;
        }
        if (ids[static_cast<size_t>(t)] < 0 || ids[static_cast<size_t>(t)] >= d.vocab) {
            throw ShapeMismatch("token id out of vocabulary range");
        }
    }
    if (c.n_tokens == 0) throw ShapeMismatch("sequence is all PAD");

    c.x0.resize(L, D);
    for (int t = 0; t < L; ++t) {
        const double* te = m.tok_emb.row(ids[static_cast<size_t>(t)]);
        const double* pe = m.pos_emb.row(t);
        double* xr = c.x0.row(t);
        for (int i = 0; i < D; ++i) xr[i] = te[i] + pe[i];
    }

    Mat x = c.x0;
    c.layers.resize(m.layers.size());
    for (size_t l = 0; l < m.layers.size(); ++l) {
        const LayerParams& lp = m.layers[l];
        LayerCache& lc = c.layers[l];
        lc.x_in = x;

        layer_norm(lc.x_in, lp.ln1_g, lp.ln1_b, lc.h, lc.ln1);
        affine(lc.h, lp.wq, lp.bq, lc.q);
        affine(lc.h, lp.wk, lp.bk, lc.k);
        affine(lc.h, lp.wv, lp.bv, lc.v);

        lc.attn.assign(static_cast<size_t>(H), Mat{});
        lc.ctx.resize(L, D);
        for (int hh = 0; hh < H; ++hh) {
            Mat& p = lc.attn[static_cast<size_t>(hh)];
            p.resize(L, L);
            int off = hh * Dh;
            for (int t = 0; t < L; ++t) {
                const double* qr = lc.q.row(t) + off;
                double* pr = p.row(t);
                double mx = kNegInf;
                for (int u = 0; u < L; ++u) {
                    double s = kNegInf;
                    if (c.mask[static_cast<size_t>(u)]) {
                        const double* kr = lc.k.row(u) + off;
                        s = 0.0;
                        for (int i = 0; i < Dh; ++i) s += qr[i] * kr[i];
                        s *= scale;
                    }
                    pr[u] = s;
                    if (s > mx) mx = s;
                }
                double denom = 0.0;
                for (int u = 0; u < L; ++u) {
                    double e = (pr[u] <= kNegInf) ? 0.0 : std::exp(pr[u] - mx);
                    pr[u] = e;
                    denom += e;
                }
                double* cr = lc.ctx.row(t) + off;
                for (int i = 0; i < Dh; ++i) cr[i] = 0.0;
                for (int u = 0; u < L; ++u) {
                    pr[u] /= denom;
                    if (pr[u] == 0.0) continue;
                    const double* vr = lc.v.row(u) + off;
                    for (int i = 0; i < Dh; ++i) cr[i] += pr[u] * vr[i];
                }
            }
        }

        Mat o;
        affine(lc.ctx, lp.wo, lp.bo, o);
        lc.x_mid.resize(L, D);
        for (size_t i = 0; i < o.a.size(); ++i) lc.x_mid.a[i] = lc.x_in.a[i] + o.a[i];

        layer_norm(lc.x_mid, lp.ln2_g, lp.ln2_b, lc.h2, lc.ln2);
        affine(lc.h2, lp.w1, lp.b1, lc.z);
        lc.gz.resize(L, d.ffn);
        for (size_t i = 0; i < lc.z.a.size(); ++i) lc.gz.a[i] = gelu(lc.z.a[i]);
        Mat f;
        affine(lc.gz, lp.w2, lp.b2, f);
        x.resize(L, D);
        for (size_t i = 0; i < f.a.size(); ++i) x.a[i] = lc.x_mid.a[i] + f.a[i];
    }

    c.x_final = x;
    layer_norm(c.x_final, m.lnf_g, m.lnf_b, c.y, c.lnf);

    c.pooled.assign(static_cast<size_t>(D), 0.0);
    if (m.pooling == Pooling::FirstToken) {
        const double* yr = c.y.row(0);
        for (int i = 0; i < D; ++i) c.pooled[static_cast<size_t>(i)] = yr[i];
    } else {
        for (int t = 0; t < L; ++t) {
            if (!c.mask[static_cast<size_t>(t)]) continue;
            const double* yr = c.y.row(t);
            for (int i = 0; i < D; ++i) c.pooled[static_cast<size_t>(i)] += yr[i];
        }
        for (int i = 0; i < D; ++i) c.pooled[static_cast<size_t>(i)] /= c.n_tokens;
    }
    for (double v : c.pooled) {
        if (!std::isfinite(v)) throw NonFiniteActivation("non-finite pooled embedding");
    }
}

void backward_one(const EncoderModel& m, const SeqCache& c, const Vec& dpooled,
                  Gradients& g) {
    const ModelDims& d = m.dims;
    int L = d.max_len;
    int D = d.dim;
    int H = d.heads;
    int Dh = D / H;
    double scale = 1.0 / std::sqrt(static_cast<double>(Dh));
    if (static_cast<int>(dpooled.size()) != D) {
        throw ShapeMismatch("upstream gradient dimension mismatch");
    }

    Mat dy;
    dy.resize(L, D);
    if (m.pooling == Pooling::FirstToken) {
        double* r = dy.row(0);
        for (int i = 0; i < D; ++i) r[i] = dpooled[static_cast<size_t>(i)];
    } else {
        for (int t = 0; t < L; ++t) {
            if (!c.mask[static_cast<size_t>(t)]) continue;
            double* r = dy.row(t);
            for (int i = 0; i < D; ++i) r[i] = dpooled[static_cast<size_t>(i)] / c.n_tokens;
        }
    }

    Mat dx;
    dx.resize(L, D);
    layer_norm_backward(dy, m.lnf_g, c.lnf, dx, g.lnf_g, g.lnf_b);

    for (size_t li = m.layers.size(); li-- > 0;) {
        const LayerParams& lp = m.layers[li];
        const LayerCache& lc = c.layers[li];
        LayerParams& gl = g.layers[li];

        // ffn block: x_out = x_mid + gelu(LN2(x_mid) W1 + b1) W2 + b2
        Mat dgz;
        dgz.resize(L, d.ffn);
        affine_backward(lc.gz, lp.w2, dx, dgz, gl.w2, gl.b2);
        Mat dz;
        dz.resize(L, d.ffn);
        for (size_t i = 0; i < dz.a.size(); ++i) dz.a[i] = dgz.a[i] * gelu_grad(lc.z.a[i]);
        Mat dh2;
        dh2.resize(L, D);
        affine_backward(lc.h2, lp.w1, dz, dh2, gl.w1, gl.b1);
        // residual: dx already carries the identity path into x_mid
        layer_norm_backward(dh2, lp.ln2_g, lc.ln2, dx, gl.ln2_g, gl.ln2_b);

        // attention block: x_mid = x_in + attn(LN1(x_in)) Wo + bo
        Mat dctx;
        dctx.resize(L, D);
        affine_backward(lc.ctx, lp.wo, dx, dctx, gl.wo, gl.bo);

        Mat dq, dk, dv;
        dq.resize(L, D);
        dk.resize(L, D);
        dv.resize(L, D);
        for (int hh = 0; hh < H; ++hh) {
            const Mat& p = lc.attn[static_cast<size_t>(hh)];
            int off = hh * Dh;
            for (int t = 0; t < L; ++t) {
                const double* pr = p.row(t);
                const double* dcr = dctx.row(t) + off;
                // dp[u] = <dctx[t], v[u]>; dv[u] += p[u] * dctx[t]
                Vec dp(static_cast<size_t>(L), 0.0);
                double dot_dp_p = 0.0;
                for (int u = 0; u < L; ++u) {
                    if (pr[u] == 0.0) continue;
                    const double* vr = lc.v.row(u) + off;
                    double s = 0.0;
                    double* dvr = dv.row(u) + off;
                    for (int i = 0; i < Dh; ++i) {
                        s += dcr[i] * vr[i];
                        dvr[i] += pr[u] * dcr[i];
                    }
                    dp[static_cast<size_t>(u)] = s;
                    dot_dp_p += s * pr[u];
                }
                double* dqr = dq.row(t) + off;
                for (int u = 0; u < L; ++u) {
                    if (pr[u] == 0.0) continue;
                    double ds = pr[u] * (dp[static_cast<size_t>(u)] - dot_dp_p) * scale;
                    const double* kr = lc.k.row(u) + off;
                    const double* qr = lc.q.row(t) + off;
                    double* dkr = dk.row(u) + off;
                    for (int i = 0; i < Dh; ++i) {
                        dqr[i] += ds * kr[i];
                        dkr[i] += ds * qr[i];
                    }
                }
            }
        }

        Mat dh;
        dh.resize(L, D);
        affine_backward(lc.h, lp.wq, dq, dh, gl.wq, gl.bq);
        affine_backward(lc.h, lp.wk, dk, dh, gl.wk, gl.bk);
        affine_backward(lc.h, lp.wv, dv, dh, gl.wv, gl.bv);
        // residual identity path into x_in stays in dx
        layer_norm_backward(dh, lp.ln1_g, lc.ln1, dx, gl.ln1_g, gl.ln1_b);
    }

    for (int t = 0; t < L; ++t) {
        const double* dxr = dx.row(t);
        double* dte = g.tok_emb.row(c.ids[static_cast<size_t>(t)]);
        double* dpe = g.pos_emb.row(t);
        for (int i = 0; i < D; ++i) {
            dte[i] += dxr[i];
            dpe[i] += dxr[i];
        }
    }
}

template <typename Fn>
void parallel_over(size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i, 0);
        return;
    }
    int tcount = std::min<int>(threads, static_cast<int>(n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(tcount));
    for (int t = 0; t < tcount; ++t) {
        pool.emplace_back([&, t] {
            for (size_t i = static_cast<size_t>(t); i < n; i += static_cast<size_t>(tcount)) {
                fn(i, t);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<Vec> embed_cached(const EncoderModel& model,
                              const std::vector<std::vector<int>>& ids, BatchEncoding& enc,
                              int threads) {
    if (ids.empty()) throw ShapeMismatch("empty batch");
    enc.caches.assign(ids.size(), SeqCache{});
    parallel_over(ids.size(), threads,
                  [&](size_t i, int) { forward_one(model, ids[i], enc.caches[i]); });
    std::vector<Vec> out(ids.size());
    for (size_t i = 0; i < ids.size(); ++i) {
        out[i] = enc.caches[i].pooled;
        if (model.l2_normalize) {
            double norm = 0.0;
            for (double v : out[i]) norm += v * v;
            norm = std::sqrt(norm);
            if (norm > 0.0) {
                for (double& v : out[i]) v /= norm;
            }
        }
    }
    return out;
}

std::vector<Vec> embed(const EncoderModel& model, const std::vector<std::vector<int>>& ids,
                       int threads) {
    BatchEncoding enc;
    return embed_cached(model, ids, enc, threads);
}

void backward_cached(const EncoderModel& model, const BatchEncoding& enc,
                     const std::vector<Vec>& upstream, Gradients& grad, int threads) {
    if (model.l2_normalize) {
        throw KgreError("backward through L2-normalized outputs is not supported");
    }
    if (enc.caches.size() != upstream.size()) {
        throw ShapeMismatch("upstream batch size mismatch");
    }
    if (threads <= 1) {
        for (size_t i = 0; i < enc.caches.size(); ++i) {
            backward_one(model, enc.caches[i], upstream[i], grad);
        }
        return;
    }
    int tcount = std::min<int>(threads, static_cast<int>(enc.caches.size()));
    std::vector<Gradients> partial(static_cast<size_t>(tcount), zeros_like(model));
    parallel_over(enc.caches.size(), tcount, [&](size_t i, int t) {
        backward_one(model, enc.caches[i], upstream[i], partial[static_cast<size_t>(t)]);
    });
    // reduce in fixed thread order
    for (auto& part : partial) {
        std::vector<Vec*> dst, src;
        grad.for_each_tensor([&](const std::string&, Vec& v) { dst.push_back(&v); });
        part.for_each_tensor([&](const std::string&, Vec& v) { src.push_back(&v); });
        for (size_t k = 0; k < dst.size(); ++k) {
            for (size_t j = 0; j < dst[k]->size(); ++j) (*dst[k])[j] += (*src[k])[j];
        }
    }
}

Gradients backward(const EncoderModel& model, const std::vector<std::vector<int>>& ids,
                   const std::vector<Vec>& upstream, int threads) {
    BatchEncoding enc;
    embed_cached(model, ids, enc, threads);
    Gradients grad = zeros_like(model);
    backward_cached(model, enc, upstream, grad, threads);
    return grad;
}

// ---- serialization ----------------------------------------------------------

namespace {

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t get_u32(const std::string& s, size_t& off) {
    if (off + 4 > s.size()) throw KgreError("truncated model file");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<uint32_t>(static_cast<unsigned char>(s[off + static_cast<size_t>(i)]))
             << (8 * i);
    }
    off += 4;
    return v;
}

void put_f32(std::string& out, float f) {
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(out, bits);
}

float get_f32(const std::string& s, size_t& off) {
    uint32_t bits = get_u32(s, off);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

}  // namespace

std::string serialize_model(const EncoderModel& model) {
    std::string out = "KGRE";
    put_u32(out, 1);  // format version
    put_u32(out, static_cast<uint32_t>(model.dims.vocab));
    put_u32(out, static_cast<uint32_t>(model.dims.dim));
    put_u32(out, static_cast<uint32_t>(model.dims.layers));
    put_u32(out, static_cast<uint32_t>(model.dims.heads));
    put_u32(out, static_cast<uint32_t>(model.dims.ffn));
    put_u32(out, static_cast<uint32_t>(model.dims.max_len));
    put_u32(out, model.pooling == Pooling::FirstToken ? 1 : 0);
    put_u32(out, model.l2_normalize ? 1 : 0);
    model.for_each_tensor([&](const std::string&, const Vec& v) {
        for (double x : v) put_f32(out, static_cast<float>(x));
    });
    return out;
}

EncoderModel deserialize_model(const std::string& content) {
    if (content.size() < 4 || content.compare(0, 4, "KGRE") != 0) {
        throw KgreError("bad model file magic");
    }
    size_t off = 4;
    uint32_t version = get_u32(content, off);
    if (version != 1) throw KgreError("unsupported model format version");
    ModelDims d;
    d.vocab = static_cast<int>(get_u32(content, off));
    d.dim = static_cast<int>(get_u32(content, off));
    d.layers = static_cast<int>(get_u32(content, off));
    d.heads = static_cast<int>(get_u32(content, off));
    d.ffn = static_cast<int>(get_u32(content, off));
    d.max_len = static_cast<int>(get_u32(content, off));
    uint32_t pooling = get_u32(content, off);
    uint32_t l2 = get_u32(content, off);

    EncoderModel m = init_model(d, 0);
    m.pooling = pooling == 1 ? Pooling::FirstToken : Pooling::MeanOverNonPad;
    m.l2_normalize = l2 != 0;
    m.for_each_tensor([&](const std::string&, Vec& v) {
        for (double& x : v) x = static_cast<double>(get_f32(content, off));
    });
    if (off != content.size()) throw KgreError("trailing bytes in model file");
    return m;
}

void save_model(const EncoderModel& model, const std::string& path) {
    write_file(path, serialize_model(model));
}

EncoderModel load_model(const std::string& path) {
    return deserialize_model(read_file(path));
}

}  // namespace kgre
