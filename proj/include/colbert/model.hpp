#pragma once

// Parallel-path classifier head.
//
//   sentence i (i < s_max) --> path i: dense+ReLU x3 --> 20 values --+
//   (missing sentences feed zeros)                                    |--> concat --> head --> sigmoid
//   whole text ------------> text path: dense+ReLU x3 --> 60 values --+
//
// Head layers use ReLU except the last, which produces the logit. Every path
// has its own weights. Forward, backward and Adam are written out by hand.
//
// The scalar type is a template parameter: float for production use, double
// for gradient checking. Parameter files always hold float32.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "colbert/binary_io.hpp"
#include "colbert/encoder.hpp"
#include "colbert/error.hpp"
#include "colbert/random.hpp"

namespace colbert::model {

using encoder::EmbeddingRecord;

inline constexpr std::size_t kSentencePathOutput = 20;
inline constexpr std::size_t kTextPathOutput = 60;

struct ModelConfig {
    std::size_t dim = 768;
    std::size_t s_max = 3;
    std::vector<std::size_t> sentence_path_sizes{128, 64, 20};
    std::vector<std::size_t> text_path_sizes{256, 128, 60};
    std::vector<std::size_t> head_sizes{128, 32, 1};
    std::uint64_t seed = 0;

    std::size_t head_input_width() const { return s_max * sentence_path_sizes.back() + text_path_sizes.back(); }

    /// Throws ShapeMismatch when the layer inventory cannot form a valid head.
    void validate() const {
        auto fail = [](const std::string& why) { throw Error(ErrorCode::shape_mismatch, why); };
        if (dim == 0) fail("dim must be > 0");
        if (s_max == 0 || s_max > 255) fail("s_max must be in [1, 255]");
        for (const auto* sizes : {&sentence_path_sizes, &text_path_sizes, &head_sizes}) {
            if (sizes->empty()) fail("every layer stack needs at least one layer");
            for (auto s : *sizes) {
                if (s == 0) fail("layer sizes must be > 0");
            }
        }
        if (sentence_path_sizes.back() != kSentencePathOutput) fail("sentence paths must end in 20 units");
        if (text_path_sizes.back() != kTextPathOutput) fail("text path must end in 60 units");
        if (head_sizes.back() != 1) fail("head must end in a single unit");
    }

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

template <typename T>
struct DenseLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<T> weight; // out x in, row-major
    std::vector<T> bias;   // out

    DenseLayer() = default;
    DenseLayer(std::size_t in_, std::size_t out_) : in(in_), out(out_), weight(in_ * out_, T(0)), bias(out_, T(0)) {}

    T& w(std::size_t row, std::size_t col) { return weight[row * in + col]; }
    T w(std::size_t row, std::size_t col) const { return weight[row * in + col]; }

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// All trainable weights. Also used for gradients and Adam moments, which
/// share the shape.
template <typename T>
struct ModelParams {
    std::vector<std::vector<DenseLayer<T>>> sentence_paths;
    std::vector<DenseLayer<T>> text_path;
    std::vector<DenseLayer<T>> head;

    /// Zero-filled params with the layer shapes implied by cfg.
    static ModelParams zeros(const ModelConfig& cfg) {
        cfg.validate();
        auto stack = [](std::size_t in, const std::vector<std::size_t>& sizes) {
            std::vector<DenseLayer<T>> layers;
            for (auto out : sizes) {
                layers.emplace_back(in, out);
                in = out;
            }
            return layers;
        };
        ModelParams p;
        for (std::size_t i = 0; i < cfg.s_max; ++i) p.sentence_paths.push_back(stack(cfg.dim, cfg.sentence_path_sizes));
        p.text_path = stack(cfg.dim, cfg.text_path_sizes);
        p.head = stack(cfg.head_input_width(), cfg.head_sizes);
        return p;
    }

    /// Visits layers in file order: sentence paths ascending, text path, head.
    template <typename F>
    void for_each_layer(F&& f) {
        for (auto& path : sentence_paths) {
            for (auto& l : path) f(l);
        }
        for (auto& l : text_path) f(l);
        for (auto& l : head) f(l);
    }

    template <typename F>
    void for_each_layer(F&& f) const {
        for (const auto& path : sentence_paths) {
            for (const auto& l : path) f(l);
        }
        for (const auto& l : text_path) f(l);
        for (const auto& l : head) f(l);
    }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for_each_layer([&](const DenseLayer<T>& l) { n += l.weight.size() + l.bias.size(); });
        return n;
    }

    void fill(T value) {
        for_each_layer([&](DenseLayer<T>& l) {
            std::fill(l.weight.begin(), l.weight.end(), value);
            std::fill(l.bias.begin(), l.bias.end(), value);
        });
    }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

template <typename To, typename From>
ModelParams<To> convert(const ModelParams<From>& src) {
    auto layer = [](const DenseLayer<From>& l) {
        DenseLayer<To> out;
        out.in = l.in;
        out.out = l.out;
        out.weight.assign(l.weight.begin(), l.weight.end());
        out.bias.assign(l.bias.begin(), l.bias.end());
        return out;
    };
    auto stack = [&](const std::vector<DenseLayer<From>>& ls) {
        std::vector<DenseLayer<To>> out;
        for (const auto& l : ls) out.push_back(layer(l));
        return out;
    };
    ModelParams<To> dst;
    for (const auto& path : src.sentence_paths) dst.sentence_paths.push_back(stack(path));
    dst.text_path = stack(src.text_path);
    dst.head = stack(src.head);
    return dst;
}

/// Uniform He-style initialization: weights ~ U(-sqrt(6 / fan_in), +sqrt(6 / fan_in)),
/// biases zero. Deterministic in cfg.seed.
template <typename T = float>
ModelParams<T> init(const ModelConfig& cfg) {
    auto params = ModelParams<T>::zeros(cfg);
    Rng rng(cfg.seed);
    params.for_each_layer([&](DenseLayer<T>& l) {
        const double limit = std::sqrt(6.0 / static_cast<double>(l.in));
        for (auto& w : l.weight) w = static_cast<T>((2.0 * uniform_unit(rng) - 1.0) * limit);
    });
    return params;
}

struct Prediction {
    double probability = 0.5;
    bool label = false;

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

inline constexpr double kDecisionThreshold = 0.5;

template <typename T>
T sigmoid(T z) {
    if (z >= T(0)) return T(1) / (T(1) + std::exp(-z));
    const T e = std::exp(z);
    return e / (T(1) + e);
}

/// Per-layer outputs kept for the backward pass. acts[0] is the stack input,
/// acts[k] the output of layer k (post-ReLU; the final head entry is the raw logit).
template <typename T>
struct Activations {
    std::vector<std::vector<std::vector<T>>> sentence_paths;
    std::vector<std::vector<T>> text_path;
    std::vector<std::vector<T>> head;
    T probability = T(0.5);
};

template <typename T>
struct ForwardResult {
    Prediction prediction;
    Activations<T> activations;
};

namespace detail {

template <typename T>
void dense(const DenseLayer<T>& layer, std::span<const T> x, std::vector<T>& y, bool relu) {
    y.resize(layer.out);
    for (std::size_t o = 0; o < layer.out; ++o) {
        const T* row = layer.weight.data() + o * layer.in;
        T acc = layer.bias[o];
        for (std::size_t i = 0; i < layer.in; ++i) acc += row[i] * x[i];
        y[o] = (relu && acc < T(0)) ? T(0) : acc;
    }
}

template <typename T>
void run_stack(const std::vector<DenseLayer<T>>& layers, std::vector<std::vector<T>>& acts, bool relu_last) {
    acts.resize(layers.size() + 1);
    for (std::size_t k = 0; k < layers.size(); ++k) {
        dense(layers[k], std::span<const T>(acts[k]), acts[k + 1], relu_last || k + 1 < layers.size());
    }
}

/// Backpropagates d(loss)/d(output of the stack) through it, accumulating
/// into grads. Returns d(loss)/d(stack input) when want_input_grad is set.
template <typename T>
std::vector<T> back_stack(const std::vector<DenseLayer<T>>& layers, const std::vector<std::vector<T>>& acts,
                          std::vector<T> upstream, bool relu_last, std::vector<DenseLayer<T>>& grads,
                          bool want_input_grad) {
    for (std::size_t k = layers.size(); k-- > 0;) {
        const auto& layer = layers[k];
        const auto& out = acts[k + 1];
        const auto& in = acts[k];
        const bool relu = relu_last || k + 1 < layers.size();
        if (relu) {
            for (std::size_t o = 0; o < layer.out; ++o) {
                if (!(out[o] > T(0))) upstream[o] = T(0);
            }
        }
        auto& g = grads[k];
        for (std::size_t o = 0; o < layer.out; ++o) {
            const T d = upstream[o];
            g.bias[o] += d;
            if (d == T(0)) continue;
            T* grow = g.weight.data() + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i) grow[i] += d * in[i];
        }
        if (k == 0 && !want_input_grad) return {};
        std::vector<T> down(layer.in, T(0));
        for (std::size_t o = 0; o < layer.out; ++o) {
            const T d = upstream[o];
            if (d == T(0)) continue;
            const T* row = layer.weight.data() + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i) down[i] += d * row[i];
        }
        upstream = std::move(down);
    }
    return upstream;
}

inline void check_record(const EmbeddingRecord& record, const ModelConfig& cfg) {
    auto mismatch = [&](std::size_t got) {
        throw Error(ErrorCode::dim_mismatch, "record " + std::to_string(record.example_id) + " has dim " +
                                                 std::to_string(got) + ", model expects " + std::to_string(cfg.dim));
    };
    if (record.whole_text.size() != cfg.dim) mismatch(record.whole_text.size());
    for (const auto& s : record.sentence_vectors) {
        if (s.size() != cfg.dim) mismatch(s.size());
    }
}

} // namespace detail

template <typename T>
ForwardResult<T> forward(const ModelParams<T>& params, const EmbeddingRecord& record, const ModelConfig& cfg) {
    detail::check_record(record, cfg);
    ForwardResult<T> result;
    auto& acts = result.activations;

    acts.sentence_paths.resize(cfg.s_max);
    std::vector<T> concat;
    concat.reserve(cfg.head_input_width());
    for (std::size_t p = 0; p < cfg.s_max; ++p) {
        auto& path_acts = acts.sentence_paths[p];
        path_acts.resize(1);
        if (p < record.sentence_vectors.size()) {
            path_acts[0].assign(record.sentence_vectors[p].begin(), record.sentence_vectors[p].end());
        } else {
            path_acts[0].assign(cfg.dim, T(0));
        }
        detail::run_stack(params.sentence_paths[p], path_acts, true);
        concat.insert(concat.end(), path_acts.back().begin(), path_acts.back().end());
    }

    acts.text_path.resize(1);
    acts.text_path[0].assign(record.whole_text.begin(), record.whole_text.end());
    detail::run_stack(params.text_path, acts.text_path, true);
    concat.insert(concat.end(), acts.text_path.back().begin(), acts.text_path.back().end());

    acts.head.resize(1);
    acts.head[0] = std::move(concat);
    detail::run_stack(params.head, acts.head, false);

    acts.probability = sigmoid(acts.head.back()[0]);
    const auto p = static_cast<double>(acts.probability);
    result.prediction = {p, p >= kDecisionThreshold};
    return result;
}

inline constexpr double kLossEpsilon = 1e-7;

/// Binary cross-entropy with the probability clamped to [1e-7, 1 - 1e-7].
inline double loss(double probability, bool label) {
    const double p = std::clamp(probability, kLossEpsilon, 1.0 - kLossEpsilon);
    return label ? -std::log(p) : -std::log(1.0 - p);
}

/// Adds this record's gradient into grads (which must have the params' shape).
template <typename T>
void accumulate_gradient(const ModelParams<T>& params, const Activations<T>& acts, bool label, ModelParams<T>& grads) {
    // d(BCE)/d(logit) for a sigmoid output
    std::vector<T> upstream{acts.probability - (label ? T(1) : T(0))};
    auto d_concat = detail::back_stack(params.head, acts.head, std::move(upstream), false, grads.head, true);

    const std::size_t s_max = params.sentence_paths.size();
    const std::size_t sent_width = params.sentence_paths.front().back().out;
    for (std::size_t p = 0; p < s_max; ++p) {
        std::vector<T> d_path(d_concat.begin() + static_cast<std::ptrdiff_t>(p * sent_width),
                              d_concat.begin() + static_cast<std::ptrdiff_t>((p + 1) * sent_width));
        detail::back_stack(params.sentence_paths[p], acts.sentence_paths[p], std::move(d_path), true,
                           grads.sentence_paths[p], false);
    }
    std::vector<T> d_text(d_concat.begin() + static_cast<std::ptrdiff_t>(s_max * sent_width), d_concat.end());
    detail::back_stack(params.text_path, acts.text_path, std::move(d_text), true, grads.text_path, false);
}

/// Gradient of the single-record loss with respect to every parameter.
template <typename T>
ModelParams<T> backward(const ModelParams<T>& params, const Activations<T>& acts, bool label) {
    auto grads = params;
    grads.fill(T(0));
    accumulate_gradient(params, acts, label, grads);
    return grads;
}

template <typename T>
struct BatchGradient {
    ModelParams<T> gradient; // mean over the batch
    double mean_loss = 0;
};

/// Mean gradient over records[indices[0..]] summed in index order.
template <typename T, typename RecordAt>
BatchGradient<T> batch_gradient(const ModelParams<T>& params, const ModelConfig& cfg, RecordAt&& record_at,
                                const std::vector<bool>& labels, std::span<const std::size_t> indices) {
    BatchGradient<T> out{params, 0.0};
    out.gradient.fill(T(0));
    for (auto idx : indices) {
        const auto fwd = forward(params, record_at(idx), cfg);
        out.mean_loss += loss(fwd.prediction.probability, labels[idx]);
        accumulate_gradient(params, fwd.activations, labels[idx], out.gradient);
    }
    const T scale = T(1) / static_cast<T>(indices.size());
    out.gradient.for_each_layer([&](DenseLayer<T>& l) {
        for (auto& g : l.weight) g *= scale;
        for (auto& g : l.bias) g *= scale;
    });
    out.mean_loss /= static_cast<double>(indices.size());
    return out;
}

struct TrainConfig {
    std::size_t epochs = 5;
    std::size_t batch_size = 64;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;

    void validate() const {
        if (epochs < 1) throw Error(ErrorCode::invalid_argument, "epochs must be >= 1");
        if (batch_size < 1) throw Error(ErrorCode::invalid_argument, "batch size must be >= 1");
        if (!(learning_rate > 0)) throw Error(ErrorCode::invalid_argument, "learning rate must be > 0");
    }
};

template <typename T>
class Adam {
public:
    Adam(const ModelParams<T>& shape, const TrainConfig& cfg) : cfg_(cfg), m_(shape), v_(shape) {
        m_.fill(T(0));
        v_.fill(T(0));
    }

    void step(ModelParams<T>& params, const ModelParams<T>& grads) {
        ++t_;
        const double c1 = 1.0 - std::pow(cfg_.adam_beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(cfg_.adam_beta2, static_cast<double>(t_));
        const T b1 = static_cast<T>(cfg_.adam_beta1);
        const T b2 = static_cast<T>(cfg_.adam_beta2);
        const T lr = static_cast<T>(cfg_.learning_rate);
        const T eps = static_cast<T>(cfg_.adam_eps);
        const T inv_c1 = static_cast<T>(1.0 / c1);
        const T inv_c2 = static_cast<T>(1.0 / c2);
        auto update = [&](std::vector<T>& p, const std::vector<T>& g, std::vector<T>& m, std::vector<T>& v) {
            for (std::size_t i = 0; i < p.size(); ++i) {
                m[i] = b1 * m[i] + (T(1) - b1) * g[i];
                v[i] = b2 * v[i] + (T(1) - b2) * g[i] * g[i];
                p[i] -= lr * (m[i] * inv_c1) / (std::sqrt(v[i] * inv_c2) + eps);
            }
        };
        auto apply_stack = [&](std::vector<DenseLayer<T>>& ps, const std::vector<DenseLayer<T>>& gs,
                               std::vector<DenseLayer<T>>& ms, std::vector<DenseLayer<T>>& vs) {
            for (std::size_t k = 0; k < ps.size(); ++k) {
                update(ps[k].weight, gs[k].weight, ms[k].weight, vs[k].weight);
                update(ps[k].bias, gs[k].bias, ms[k].bias, vs[k].bias);
            }
        };
        for (std::size_t p = 0; p < params.sentence_paths.size(); ++p) {
            apply_stack(params.sentence_paths[p], grads.sentence_paths[p], m_.sentence_paths[p], v_.sentence_paths[p]);
        }
        apply_stack(params.text_path, grads.text_path, m_.text_path, v_.text_path);
        apply_stack(params.head, grads.head, m_.head, v_.head);
    }

    std::uint64_t steps() const { return t_; }

private:
    TrainConfig cfg_;
    ModelParams<T> m_;
    ModelParams<T> v_;
    std::uint64_t t_ = 0;
};

template <typename T>
struct TrainResult {
    ModelParams<T> params;
    std::vector<double> epoch_losses; // mean per-record loss seen during each epoch
};

/// Called after every epoch with (epoch index, mean loss, current params);
/// returning false stops training early.
template <typename T>
using EpochCallback = std::function<bool(std::size_t, double, const ModelParams<T>&)>;

/// Mini-batch Adam over `count` records fetched through record_at(i).
template <typename T, typename RecordAt>
TrainResult<T> train(ModelParams<T> params, const ModelConfig& model_cfg, std::size_t count, RecordAt&& record_at,
                     const std::vector<bool>& labels, const TrainConfig& cfg, const EpochCallback<T>& on_epoch = {}) {
    cfg.validate();
    if (count == 0) throw Error(ErrorCode::empty_training_set, "no training records");
    if (labels.size() < count) throw Error(ErrorCode::length_mismatch, "fewer labels than training records");

    TrainResult<T> result;
    Adam<T> adam(params, cfg);
    Rng rng(cfg.seed);
    std::vector<std::size_t> order(count);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle(std::span(order), rng);
        double loss_sum = 0;
        for (std::size_t start = 0; start < count; start += cfg.batch_size) {
            const std::size_t len = std::min(cfg.batch_size, count - start);
            const std::span<const std::size_t> batch(order.data() + start, len);
            auto bg = batch_gradient(params, model_cfg, record_at, labels, batch);
            loss_sum += bg.mean_loss * static_cast<double>(len);
            adam.step(params, bg.gradient);
        }
        result.epoch_losses.push_back(loss_sum / static_cast<double>(count));
        if (on_epoch && !on_epoch(epoch, result.epoch_losses.back(), params)) break;
    }
    result.params = std::move(params);
    return result;
}

template <typename T>
TrainResult<T> train(ModelParams<T> params, const ModelConfig& model_cfg, std::span<const EmbeddingRecord> records,
                     const std::vector<bool>& labels, const TrainConfig& cfg, const EpochCallback<T>& on_epoch = {}) {
    return train(
        std::move(params), model_cfg, records.size(),
        [&](std::size_t i) -> const EmbeddingRecord& { return records[i]; }, labels, cfg, on_epoch);
}

template <typename T>
Prediction predict(const ModelParams<T>& params, const EmbeddingRecord& record, const ModelConfig& cfg) {
    return forward(params, record, cfg).prediction;
}

template <typename T>
std::vector<Prediction> predict_batch(const ModelParams<T>& params, std::span<const EmbeddingRecord> records,
                                      const ModelConfig& cfg) {
    std::vector<Prediction> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(predict(params, r, cfg));
    return out;
}

// Parameter file, little-endian:
//   "CBPM" | version u16 = 1 | dim u32 | s_max u32 |
//   3 x (layer count u32 | sizes u32...) for sentence path, text path, head |
//   seed u64 | per layer in for_each_layer order: weights (row-major) then biases, float32

inline constexpr std::string_view kParamMagic = "CBPM";
inline constexpr std::uint16_t kParamVersion = 1;

/// Values are narrowed to float32 on write.
template <typename T>
void save_params(const std::filesystem::path& path, const ModelParams<T>& params, const ModelConfig& cfg) {
    cfg.validate();
    binary_io::Writer w;
    w.bytes(kParamMagic);
    w.u16(kParamVersion);
    w.u32(static_cast<std::uint32_t>(cfg.dim));
    w.u32(static_cast<std::uint32_t>(cfg.s_max));
    for (const auto* sizes : {&cfg.sentence_path_sizes, &cfg.text_path_sizes, &cfg.head_sizes}) {
        w.u32(static_cast<std::uint32_t>(sizes->size()));
        for (auto s : *sizes) w.u32(static_cast<std::uint32_t>(s));
    }
    w.u64(cfg.seed);
    const auto expected = ModelParams<T>::zeros(cfg);
    std::size_t layer_index = 0;
    std::vector<const DenseLayer<T>*> expected_layers;
    expected.for_each_layer([&](const DenseLayer<T>& l) { expected_layers.push_back(&l); });
    params.for_each_layer([&](const DenseLayer<T>& l) {
        if (layer_index >= expected_layers.size() || l.in != expected_layers[layer_index]->in ||
            l.out != expected_layers[layer_index]->out) {
            throw Error(ErrorCode::shape_mismatch, "params do not match the model config");
        }
        ++layer_index;
        for (T v : l.weight) w.f32(static_cast<float>(v));
        for (T v : l.bias) w.f32(static_cast<float>(v));
    });
    if (layer_index != expected_layers.size()) throw Error(ErrorCode::shape_mismatch, "params are missing layers");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
    out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
    if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

template <typename T = float>
std::pair<ModelParams<T>, ModelConfig> load_params(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::missing_file, path.string());
    const auto file_size = std::filesystem::file_size(path);
    binary_io::Reader r(in, path.string());

    char magic[4];
    r.bytes(magic, 4);
    if (std::string_view(magic, 4) != kParamMagic) throw Error(ErrorCode::bad_magic, path.string() + ": not a CBPM file");
    const auto version = r.u16();
    if (version != kParamVersion) {
        throw Error(ErrorCode::version_mismatch, path.string() + ": parameter format version " + std::to_string(version));
    }
    ModelConfig cfg;
    cfg.dim = r.u32();
    cfg.s_max = r.u32();
    for (auto* sizes : {&cfg.sentence_path_sizes, &cfg.text_path_sizes, &cfg.head_sizes}) {
        const auto n = r.u32();
        if (n > 1024) throw Error(ErrorCode::shape_mismatch, path.string() + ": implausible layer count");
        sizes->resize(n);
        for (auto& s : *sizes) s = r.u32();
    }
    cfg.seed = r.u64();
    cfg.validate();

    // Check the payload size before allocating anything shape-dependent.
    std::uint64_t floats = 0;
    auto count_stack = [&](std::uint64_t in_width, const std::vector<std::size_t>& sizes) {
        for (auto s : sizes) {
            floats += in_width * s + s;
            in_width = s;
        }
    };
    for (std::size_t p = 0; p < cfg.s_max; ++p) count_stack(cfg.dim, cfg.sentence_path_sizes);
    count_stack(cfg.dim, cfg.text_path_sizes);
    count_stack(cfg.head_input_width(), cfg.head_sizes);
    const auto header_end = static_cast<std::uint64_t>(in.tellg());
    if (header_end + 4 * floats > file_size) {
        throw Error(ErrorCode::truncated_file, path.string() + ": parameter payload is shorter than the config requires");
    }
    if (header_end + 4 * floats < file_size) {
        throw Error(ErrorCode::shape_mismatch, path.string() + ": trailing bytes after the last layer");
    }

    auto params = ModelParams<T>::zeros(cfg);
    std::vector<float> buf;
    params.for_each_layer([&](DenseLayer<T>& l) {
        buf.resize(l.weight.size());
        r.f32s(buf);
        std::copy(buf.begin(), buf.end(), l.weight.begin());
        buf.resize(l.bias.size());
        r.f32s(buf);
        std::copy(buf.begin(), buf.end(), l.bias.begin());
    });
    return {std::move(params), std::move(cfg)};
}

} // namespace colbert::model
