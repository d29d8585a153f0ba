#include <doctest.h>

#include <cmath>
#include <vector>

#include "kgre/encoder.hpp"
#include "kgre/tokenizer.hpp"

using namespace kgre;

namespace {

// Independent single-layer forward pass, written as plain nested loops against
// the documented architecture (pre-LN, eps 1e-5, erf GELU, masked softmax,
// mean pooling over non-PAD). Used as the oracle for embed().
Vec oracle_forward(const EncoderModel& m, const std::vector<int>& ids) {
    const int L = m.dims.max_len, D = m.dims.dim, H = m.dims.heads, F = m.dims.ffn;
    const int Dh = D / H;
    const double eps = 1e-5;
    auto ln = [&](const std::vector<Vec>& x, const Vec& g, const Vec& b) {
        std::vector<Vec> y(x.size(), Vec(static_cast<size_t>(D)));
        for (size_t t = 0; t < x.size(); ++t) {
            double mu = 0.0;
            for (double v : x[t]) mu += v;
            mu /= D;
            double var = 0.0;
            for (double v : x[t]) var += (v - mu) * (v - mu);
            var /= D;
            for (int i = 0; i < D; ++i)
                y[t][i] = g[i] * (x[t][i] - mu) / std::sqrt(var + eps) + b[i];
        }
        return y;
    };
    auto matmul = [](const std::vector<Vec>& x, const Mat& w, const Vec& b) {
        std::vector<Vec> y(x.size(), Vec(static_cast<size_t>(w.cols)));
        for (size_t t = 0; t < x.size(); ++t)
            for (int j = 0; j < w.cols; ++j) {
                double s = b[static_cast<size_t>(j)];
                for (int i = 0; i < w.rows; ++i) s += x[t][static_cast<size_t>(i)] * w.at(i, j);
                y[t][static_cast<size_t>(j)] = s;
            }
        return y;
    };

    std::vector<Vec> x(static_cast<size_t>(L), Vec(static_cast<size_t>(D)));
    for (int t = 0; t < L; ++t)
        for (int i = 0; i < D; ++i)
            x[t][i] = m.tok_emb.at(ids[static_cast<size_t>(t)], i) + m.pos_emb.at(t, i);

    for (const LayerParams& lp : m.layers) {
        auto h = ln(x, lp.ln1_g, lp.ln1_b);
        auto q = matmul(h, lp.wq, lp.bq);
        auto k = matmul(h, lp.wk, lp.bk);
        auto v = matmul(h, lp.wv, lp.bv);
        std::vector<Vec> ctx(static_cast<size_t>(L), Vec(static_cast<size_t>(D), 0.0));
        for (int hh = 0; hh < H; ++hh) {
            int off = hh * Dh;
            for (int t = 0; t < L; ++t) {
                Vec e(static_cast<size_t>(L), 0.0);
                double denom = 0.0;
                for (int u = 0; u < L; ++u) {
                    if (ids[static_cast<size_t>(u)] == Tokenizer::kPad) continue;
                    double s = 0.0;
                    for (int i = 0; i < Dh; ++i) s += q[t][off + i] * k[u][off + i];
                    e[u] = std::exp(s / std::sqrt(static_cast<double>(Dh)));
                    denom += e[u];
                }
                for (int u = 0; u < L; ++u)
                    for (int i = 0; i < Dh; ++i) ctx[t][off + i] += e[u] / denom * v[u][off + i];
            }
        }
        auto o = matmul(ctx, lp.wo, lp.bo);
        std::vector<Vec> mid(static_cast<size_t>(L), Vec(static_cast<size_t>(D)));
        for (int t = 0; t < L; ++t)
            for (int i = 0; i < D; ++i) mid[t][i] = x[t][i] + o[t][i];
        auto h2 = ln(mid, lp.ln2_g, lp.ln2_b);
        auto z = matmul(h2, lp.w1, lp.b1);
        for (auto& row : z)
            for (double& val : row) val = 0.5 * val * (1.0 + std::erf(val / std::sqrt(2.0)));
        auto f = matmul(z, lp.w2, lp.b2);
        (void)F;
        for (int t = 0; t < L; ++t)
            for (int i = 0; i < D; ++i) x[t][i] = mid[t][i] + f[t][i];
    }
    auto y = ln(x, m.lnf_g, m.lnf_b);
    Vec pooled(static_cast<size_t>(D), 0.0);
    int n = 0;
    for (int t = 0; t < L; ++t) {
        if (ids[static_cast<size_t>(t)] == Tokenizer::kPad) continue;
        ++n;
        for (int i = 0; i < D; ++i) pooled[i] += y[t][i];
    }
    for (double& v : pooled) v /= n;
    return pooled;
}

double batch_dot(const EncoderModel& m, const std::vector<std::vector<int>>& ids,
                 const std::vector<Vec>& up) {
    auto out = embed(m, ids);
    double s = 0.0;
    for (size_t b = 0; b < out.size(); ++b)
        for (size_t i = 0; i < out[b].size(); ++i) s += out[b][i] * up[b][i];
    return s;
}

}  // namespace

TEST_CASE("embed matches the independent forward oracle within 1e-6") {
    ModelDims dims{10, 4, 1, 1, 6, 4};  // single layer, single head
    EncoderModel m = init_model(dims, 77);
    std::vector<int> ids = {Tokenizer::kBos, 5, Tokenizer::kEos, Tokenizer::kPad};
    Vec got = embed(m, {ids})[0];
    Vec want = oracle_forward(m, ids);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-6));

    // also a two-layer, two-head instance
    ModelDims dims2{12, 8, 2, 2, 10, 5};
    EncoderModel m2 = init_model(dims2, 123);
    std::vector<int> ids2 = {Tokenizer::kBos, 7, 9, Tokenizer::kEos, Tokenizer::kPad};
    Vec got2 = embed(m2, {ids2})[0];
    Vec want2 = oracle_forward(m2, ids2);
    for (size_t i = 0; i < got2.size(); ++i)
        CHECK(got2[i] == doctest::Approx(want2[i]).epsilon(1e-6));
}

TEST_CASE("embed shape, determinism, and batch permutation equivariance") {
    ModelDims dims{16, 8, 1, 2, 12, 6};
    EncoderModel m = init_model(dims, 5);
    std::vector<std::vector<int>> batch = {
        {2, 4, 5, 3, 0, 0}, {2, 6, 3, 0, 0, 0}, {2, 7, 8, 9, 3, 0}};
    auto out = embed(m, batch);
    REQUIRE(out.size() == 3);
    for (const auto& v : out) CHECK(v.size() == 8);
    CHECK(embed(m, batch) == out);
    auto permuted = embed(m, {batch[2], batch[0], batch[1]});
    CHECK(permuted[0] == out[2]);
    CHECK(permuted[1] == out[0]);
    CHECK(permuted[2] == out[1]);
}

TEST_CASE("padding never changes an embedding (mask correctness)") {
    ModelDims dims{16, 8, 2, 2, 12, 10};
    EncoderModel wide = init_model(dims, 9);
    // same weights, shorter position table: row-prefix of pos_emb
    EncoderModel narrow = wide;
    narrow.dims.max_len = 6;
    Mat pos;
    pos.resize(6, 8);
    for (int t = 0; t < 6; ++t)
        for (int i = 0; i < 8; ++i) pos.at(t, i) = wide.pos_emb.at(t, i);
    narrow.pos_emb = pos;

    std::vector<int> short_ids = {2, 4, 5, 3, 0, 0};
    std::vector<int> long_ids = short_ids;
    long_ids.resize(10, Tokenizer::kPad);
    Vec a = embed(narrow, {short_ids})[0];
    Vec b = embed(wide, {long_ids})[0];
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("zero upstream gradient gives all-zero gradients") {
    ModelDims dims{16, 8, 1, 2, 12, 5};
    EncoderModel m = init_model(dims, 3);
    std::vector<std::vector<int>> batch = {{2, 4, 3, 0, 0}};
    Gradients g = backward(m, batch, {Vec(8, 0.0)});
    g.for_each_tensor([](const std::string&, const Vec& v) {
        for (double x : v) CHECK(x == 0.0);
    });
}

TEST_CASE("duplicated example doubles its gradient contribution") {
    ModelDims dims{16, 8, 1, 2, 12, 5};
    EncoderModel m = init_model(dims, 3);
    std::vector<int> ids = {2, 4, 6, 3, 0};
    Vec up = {0.3, -0.1, 0.7, 0.2, -0.5, 0.4, 0.0, 1.1};
    Gradients one = backward(m, {ids}, {up});
    Gradients two = backward(m, {ids, ids}, {up, up});
    std::vector<const Vec*> va, vb;
    one.for_each_tensor([&](const std::string&, const Vec& v) { va.push_back(&v); });
    two.for_each_tensor([&](const std::string&, const Vec& v) { vb.push_back(&v); });
    for (size_t k = 0; k < va.size(); ++k)
        for (size_t j = 0; j < va[k]->size(); ++j)
            CHECK((*vb[k])[j] == doctest::Approx(2.0 * (*va[k])[j]).epsilon(1e-12));
}

TEST_CASE("all parameter gradients match central finite differences") {
    ModelDims dims{20, 8, 1, 2, 12, 5};  // D=8, N=1, H=2
    EncoderModel m = init_model(dims, 41);
    std::vector<std::vector<int>> batch = {{2, 4, 6, 3, 0}, {2, 7, 3, 0, 0}};
    Rng rng(99);
    std::vector<Vec> up(2, Vec(8));
    for (auto& v : up)
        for (double& x : v) x = rng.normal();

    Gradients analytic = backward(m, batch, up);
    const double eps = 1e-4;
    double max_rel = 0.0;
    std::vector<Vec*> params;
    m.for_each_tensor([&](const std::string&, Vec& v) { params.push_back(&v); });
    std::vector<const Vec*> grads;
    analytic.for_each_tensor([&](const std::string&, const Vec& v) { grads.push_back(&v); });
    for (size_t k = 0; k < params.size(); ++k) {
        for (size_t j = 0; j < params[k]->size(); ++j) {
            double orig = (*params[k])[j];
            (*params[k])[j] = orig + eps;
            double plus = batch_dot(m, batch, up);
            (*params[k])[j] = orig - eps;
            double minus = batch_dot(m, batch, up);
            (*params[k])[j] = orig;
            double fd = (plus - minus) / (2.0 * eps);
            double a = (*grads[k])[j];
            double denom = std::max({std::abs(a), std::abs(fd), 1e-6});
            max_rel = std::max(max_rel, std::abs(a - fd) / denom);
        }
    }
    CHECK(max_rel < 1e-3);
}

TEST_CASE("shape and input validation") {
    ModelDims dims{16, 8, 1, 2, 12, 5};
    EncoderModel m = init_model(dims, 3);
    CHECK_THROWS_AS(embed(m, {{2, 3, 0}}), ShapeMismatch);          // wrong length
    CHECK_THROWS_AS(embed(m, {{2, 99, 3, 0, 0}}), ShapeMismatch);   // id out of range
    CHECK_THROWS_AS(embed(m, {{0, 0, 0, 0, 0}}), ShapeMismatch);    // all PAD
    CHECK_THROWS_AS(embed(m, {}), ShapeMismatch);                   // empty batch
    ModelDims bad{16, 8, 1, 3, 12, 5};                              // 8 % 3 != 0
    CHECK_THROWS_AS(init_model(bad, 1), KgreError);
}

TEST_CASE("model serialization round-trips and is idempotent") {
    ModelDims dims{32, 8, 2, 2, 16, 6};
    EncoderModel m = init_model(dims, 17);
    std::string blob = serialize_model(m);
    EncoderModel back = deserialize_model(blob);
    CHECK(back.dims.vocab == dims.vocab);
    CHECK(back.dims.max_len == dims.max_len);
    CHECK(back.parameter_count() == m.parameter_count());
    // float32 storage: a second round-trip must be byte-identical
    CHECK(serialize_model(back) == blob);
    // and embeddings agree within float32 precision
    std::vector<int> ids = {2, 5, 3, 0, 0, 0};
    Vec a = embed(m, {ids})[0];
    Vec b = embed(back, {ids})[0];
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-4));
    CHECK_THROWS_AS(deserialize_model("JUNKDATA"), KgreError);
}
