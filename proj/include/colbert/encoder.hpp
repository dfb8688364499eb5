#pragma once

// Sentence-embedding backends. The model never talks to a transformer
// directly: it consumes fixed-size vectors from one of these.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "colbert/error.hpp"
#include "colbert/random.hpp"
#include "colbert/textprep.hpp"

namespace colbert::encoder {

using EmbeddingVector = std::vector<float>;

struct EmbeddingRecord {
    std::uint64_t example_id = 0;
    EmbeddingVector whole_text;
    std::vector<EmbeddingVector> sentence_vectors;

    std::size_t dim() const { return whole_text.size(); }

    friend bool operator==(const EmbeddingRecord&, const EmbeddingRecord&) = default;
};

struct EncoderConfig {
    std::size_t dim = 768;
    std::size_t max_seq_len = 100;
    std::size_t max_sentences = 3;

    void validate() const {
        if (dim == 0) throw Error(ErrorCode::invalid_argument, "embedding dim must be > 0");
        if (max_seq_len == 0 || max_seq_len > 512) {
            throw Error(ErrorCode::invalid_argument, "max_seq_len must be in (0, 512]");
        }
        if (max_sentences == 0) throw Error(ErrorCode::invalid_argument, "max_sentences must be > 0");
    }
};

class Encoder {
public:
    virtual ~Encoder() = default;
    virtual std::size_t dim() const = 0;
    /// Empty text maps to the zero vector for every backend.
    virtual EmbeddingVector encode(std::string_view text) const = 0;
};

/// Unit-norm pseudo-random vector derived from the FNV-1a hash of the bytes.
/// Stable across runs, compilers and platforms.
inline EmbeddingVector mock_encode(std::string_view text, std::size_t dim) {
    EmbeddingVector v(dim, 0.0f);
    if (text.empty() || dim == 0) return v;
    std::uint64_t state = fnv1a64(text);
    std::vector<double> raw(dim);
    double norm2 = 0;
    for (auto& x : raw) {
        // top 53 bits -> [-1, 1)
        x = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
        norm2 += x * x;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < dim; ++i) v[i] = static_cast<float>(raw[i] * inv);
    return v;
}

class MockEncoder final : public Encoder {
public:
    explicit MockEncoder(std::size_t dim) : dim_(dim) {}
    std::size_t dim() const override { return dim_; }
    EmbeddingVector encode(std::string_view text) const override { return mock_encode(text, dim_); }

private:
    std::size_t dim_;
};

/// Pass-through backend over vectors computed elsewhere, keyed by text.
class PrecomputedEncoder final : public Encoder {
public:
    explicit PrecomputedEncoder(std::size_t dim) : dim_(dim) {}

    void add(std::string text, EmbeddingVector vector) {
        if (vector.size() != dim_) {
            throw Error(ErrorCode::dim_mismatch, "vector of size " + std::to_string(vector.size()) +
                                                     " added to encoder of dim " + std::to_string(dim_));
        }
        vectors_.insert_or_assign(std::move(text), std::move(vector));
    }

    std::size_t size() const { return vectors_.size(); }
    std::size_t dim() const override { return dim_; }

    EmbeddingVector encode(std::string_view text) const override {
        if (text.empty()) return EmbeddingVector(dim_, 0.0f);
        auto it = vectors_.find(std::string(text));
        if (it == vectors_.end()) throw Error(ErrorCode::not_in_store, "no vector for text '" + std::string(text) + "'");
        return it->second;
    }

private:
    std::size_t dim_;
    std::unordered_map<std::string, EmbeddingVector> vectors_;
};

/// Whole-text vector plus one vector for each of the first max_sentences
/// sentences; later sentences are dropped.
inline EmbeddingRecord encode_record(const textprep::CleanText& clean, const Encoder& encoder,
                                     const EncoderConfig& cfg, std::uint64_t example_id = 0) {
    if (encoder.dim() != cfg.dim) {
        throw Error(ErrorCode::dim_mismatch, "encoder dim " + std::to_string(encoder.dim()) + " != configured dim " +
                                                 std::to_string(cfg.dim));
    }
    if (clean.sentences.empty()) throw Error(ErrorCode::empty_input, "text has no sentences to encode");
    EmbeddingRecord record;
    record.example_id = example_id;
    record.whole_text = encoder.encode(clean.cleaned);
    const std::size_t n = std::min(clean.sentences.size(), cfg.max_sentences);
    record.sentence_vectors.reserve(n);
    for (std::size_t i = 0; i < n; ++i) record.sentence_vectors.push_back(encoder.encode(clean.sentences[i]));
    return record;
}

} // namespace colbert::encoder
