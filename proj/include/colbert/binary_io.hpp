#pragma once

// Little-endian primitives shared by the embedding store and the parameter
// file. Values are assembled byte by byte so the layout is host-independent.

#include <bit>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>

#include "colbert/error.hpp"

namespace colbert::binary_io {

class Writer {
public:
    void bytes(std::string_view b) { buf_.append(b); }

    template <typename U>
    void unsigned_le(U value) {
        for (std::size_t i = 0; i < sizeof(U); ++i) buf_.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
    }

    void u8(std::uint8_t v) { unsigned_le(v); }
    void u16(std::uint16_t v) { unsigned_le(v); }
    void u32(std::uint32_t v) { unsigned_le(v); }
    void u64(std::uint64_t v) { unsigned_le(v); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

    void f32s(std::span<const float> values) {
        for (float v : values) f32(v);
    }

    const std::string& buffer() const { return buf_; }
    std::string& buffer() { return buf_; }
    void clear() { buf_.clear(); }

private:
    std::string buf_;
};

/// Reads from a stream; a short read raises TruncatedFile.
class Reader {
public:
    Reader(std::istream& in, std::string what) : in_(in), what_(std::move(what)) {}

    void bytes(char* out, std::size_t n) {
        in_.read(out, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) {
            throw Error(ErrorCode::truncated_file, what_ + ": unexpected end of file");
        }
    }

    template <typename U>
    U unsigned_le() {
        unsigned char b[sizeof(U)];
        bytes(reinterpret_cast<char*>(b), sizeof(U));
        U value = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(static_cast<U>(b[i]) << (8 * i));
        return value;
    }

    std::uint8_t u8() { return unsigned_le<std::uint8_t>(); }
    std::uint16_t u16() { return unsigned_le<std::uint16_t>(); }
    std::uint32_t u32() { return unsigned_le<std::uint32_t>(); }
    std::uint64_t u64() { return unsigned_le<std::uint64_t>(); }
    float f32() { return std::bit_cast<float>(u32()); }

    void f32s(std::span<float> out) {
        std::string raw(out.size() * 4, '\0');
        bytes(raw.data(), raw.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            std::uint32_t bits = 0;
            for (std::size_t k = 0; k < 4; ++k) {
                bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(raw[4 * i + k])) << (8 * k);
            }
            out[i] = std::bit_cast<float>(bits);
        }
    }

    std::istream& stream() { return in_; }

private:
    std::istream& in_;
    std::string what_;
};

} // namespace colbert::binary_io
