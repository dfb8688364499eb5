#pragma once

// Embedding store file, little-endian, no padding:
//
//   "CBEM" | version u16 = 1 | dim u32 | record count u64
//   per record: example_id u64 | sentence_count u8 |
//               (1 + sentence_count) x dim x float32, whole-text vector first
//
// Opening a store walks the record headers once to build an id -> offset
// index; lookups afterwards seek straight to the record.

#include <filesystem>
#include <fstream>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "colbert/binary_io.hpp"
#include "colbert/encoder.hpp"
#include "colbert/error.hpp"
#include "colbert/textprep.hpp"

namespace colbert::store {

inline constexpr std::string_view kMagic = "CBEM";
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::size_t kHeaderBytes = 4 + 2 + 4 + 8;

using encoder::EmbeddingRecord;

inline void write(const std::filesystem::path& path, std::span<const EmbeddingRecord> records,
                  const encoder::EncoderConfig& cfg) {
    const std::size_t dim = cfg.dim;
    for (const auto& r : records) {
        if (r.whole_text.size() != dim) {
            throw Error(ErrorCode::dim_mismatch, "record " + std::to_string(r.example_id) + " has dim " +
                                                     std::to_string(r.whole_text.size()) + ", store dim is " +
                                                     std::to_string(dim));
        }
        if (r.sentence_vectors.empty() || r.sentence_vectors.size() > 255) {
            throw Error(ErrorCode::invalid_argument,
                        "record " + std::to_string(r.example_id) + " must have 1..255 sentence vectors");
        }
        for (const auto& s : r.sentence_vectors) {
            if (s.size() != dim) {
                throw Error(ErrorCode::dim_mismatch,
                            "record " + std::to_string(r.example_id) + " has a sentence vector of wrong dim");
            }
        }
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
    binary_io::Writer w;
    w.bytes(kMagic);
    w.u16(kVersion);
    w.u32(static_cast<std::uint32_t>(dim));
    w.u64(records.size());
    for (const auto& r : records) {
        w.u64(r.example_id);
        w.u8(static_cast<std::uint8_t>(r.sentence_vectors.size()));
        w.f32s(r.whole_text);
        for (const auto& s : r.sentence_vectors) w.f32s(s);
        if (w.buffer().size() > (1u << 20)) {
            out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
            w.clear();
        }
    }
    out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
    if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

/// Read-only random-access view of a store file. Safe to share between
/// threads; reads are serialized on an internal lock.
class EmbeddingStore {
public:
    static EmbeddingStore open(const std::filesystem::path& path) { return EmbeddingStore(path); }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }
    std::uint16_t version() const { return kVersion; }

    /// Example ids in file order.
    std::vector<std::uint64_t> ids() const {
        std::vector<std::uint64_t> out;
        out.reserve(entries_.size());
        for (const auto& e : entries_) out.push_back(e.id);
        return out;
    }

    bool contains(std::uint64_t example_id) const { return index_.contains(example_id); }

    void require_dim(std::size_t expected) const {
        if (dim_ != expected) {
            throw Error(ErrorCode::dim_mismatch, path_.string() + ": store dim " + std::to_string(dim_) +
                                                     ", expected " + std::to_string(expected));
        }
    }

    EmbeddingRecord get(std::uint64_t example_id) const {
        auto it = index_.find(example_id);
        if (it == index_.end()) {
            throw Error(ErrorCode::id_not_found, path_.string() + ": no record with id " + std::to_string(example_id));
        }
        return at(it->second);
    }

    /// Record by position in the file.
    EmbeddingRecord at(std::size_t position) const {
        const Entry& e = entries_.at(position);
        EmbeddingRecord record;
        record.example_id = e.id;
        record.whole_text.resize(dim_);
        record.sentence_vectors.assign(e.sentence_count, encoder::EmbeddingVector(dim_));
        std::lock_guard lock(mutex_);
        in_.clear();
        in_.seekg(static_cast<std::streamoff>(e.offset + 9));
        binary_io::Reader r(in_, path_.string());
        r.f32s(record.whole_text);
        for (auto& s : record.sentence_vectors) r.f32s(s);
        return record;
    }

    EmbeddingStore(EmbeddingStore&& other) noexcept
        : path_(std::move(other.path_)), in_(std::move(other.in_)), dim_(other.dim_),
          entries_(std::move(other.entries_)), index_(std::move(other.index_)) {}

private:
    struct Entry {
        std::uint64_t id;
        std::uint8_t sentence_count;
        std::uint64_t offset;
    };

    explicit EmbeddingStore(const std::filesystem::path& path) : path_(path) {
        if (!std::filesystem::is_regular_file(path)) throw Error(ErrorCode::missing_file, path.string());
        in_.open(path, std::ios::binary);
        if (!in_) throw Error(ErrorCode::missing_file, path.string());
        const auto file_size = std::filesystem::file_size(path);

        binary_io::Reader r(in_, path.string());
        char magic[4];
        r.bytes(magic, 4);
        if (std::string_view(magic, 4) != kMagic) throw Error(ErrorCode::bad_magic, path.string() + ": not a CBEM file");
        const auto version = r.u16();
        if (version != kVersion) {
            throw Error(ErrorCode::version_mismatch,
                        path.string() + ": format version " + std::to_string(version) + ", expected 1");
        }
        dim_ = r.u32();
        if (dim_ == 0) throw Error(ErrorCode::dim_mismatch, path.string() + ": dim is 0");
        const auto count = r.u64();

        const std::uint64_t vector_bytes = 4ULL * dim_;
        std::uint64_t offset = kHeaderBytes;
        entries_.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, file_size / 9)));
        for (std::uint64_t i = 0; i < count; ++i) {
            if (offset + 9 > file_size) {
                throw Error(ErrorCode::truncated_file, path.string() + ": record " + std::to_string(i) + " of " +
                                                           std::to_string(count) + " is missing");
            }
            in_.seekg(static_cast<std::streamoff>(offset));
            const auto id = r.u64();
            const auto sentences = r.u8();
            const std::uint64_t end = offset + 9 + (1ULL + sentences) * vector_bytes;
            if (end > file_size) {
                throw Error(ErrorCode::truncated_file,
                            path.string() + ": record " + std::to_string(i) + " extends past end of file");
            }
            if (!index_.emplace(id, entries_.size()).second) {
                throw Error(ErrorCode::invalid_argument, path.string() + ": duplicate example id " + std::to_string(id));
            }
            entries_.push_back({id, sentences, offset});
            offset = end;
        }
    }

    std::filesystem::path path_;
    mutable std::ifstream in_;
    mutable std::mutex mutex_;
    std::size_t dim_ = 0;
    std::vector<Entry> entries_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// File-backed encoder: maps each example's cleaned text and sentences to the
/// vectors stored for it. texts[i] is the raw text of example id i.
inline encoder::PrecomputedEncoder make_store_encoder(const EmbeddingStore& store,
                                                     std::span<const std::string> texts) {
    encoder::PrecomputedEncoder enc(store.dim());
    for (std::size_t pos = 0; pos < store.size(); ++pos) {
        auto record = store.at(pos);
        if (record.example_id >= texts.size()) continue;
        const auto clean = textprep::preprocess(texts[record.example_id]);
        enc.add(clean.cleaned, std::move(record.whole_text));
        const std::size_t n = std::min(clean.sentences.size(), record.sentence_vectors.size());
        for (std::size_t k = 0; k < n; ++k) enc.add(clean.sentences[k], std::move(record.sentence_vectors[k]));
    }
    return enc;
}

} // namespace colbert::store
