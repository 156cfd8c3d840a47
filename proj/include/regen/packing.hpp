#pragma once

// Byte <-> symbol conversion.
//
// Ingest treats the input as an MSB-first bitstream and cuts it into
// fixed-width groups: m bits per symbol for GF(2^m), floor(log2 p) bits for
// GF(p) (so every group is a valid element). Trailing bits are zero-padded.
// The original byte length recorded in the manifest makes the map exact on
// the way back.
//
// On disk each symbol occupies ceil(bits(q-1)/8) bytes little-endian, except
// GF(2) symbols, which are bit-packed eight per byte MSB-first.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "regen/field.hpp"
#include "regen/matrix.hpp"

namespace regen {

// Payload bits carried by one symbol during ingest.
inline uint32_t ingest_bits_per_symbol(const Field& f) {
    if (f.kind() == FieldKind::BinaryExt) return f.degree();
    return std::bit_width(f.characteristic()) - 1;  // values stay below p
}

// Bytes one symbol occupies in a chunk file (GF(2) is bit-packed instead).
inline uint32_t storage_symbol_bytes(const Field& f) {
    return (std::bit_width(f.order() - 1) + 7) / 8;
}

inline size_t chunk_file_bytes(const Field& f, size_t symbols) {
    if (f.order() == 2) return (symbols + 7) / 8;
    return symbols * storage_symbol_bytes(f);
}

namespace detail {

class BitReader {
public:
    explicit BitReader(const std::vector<uint8_t>& bytes) : bytes_(&bytes) {}

    size_t bits_left() const { return bytes_->size() * 8 - pos_; }

    // Next `count` bits MSB-first; missing bits read as zero.
    uint32_t take(uint32_t count) {
        uint32_t v = 0;
        for (uint32_t i = 0; i < count; ++i) {
            uint32_t bit = 0;
            if (pos_ < bytes_->size() * 8) {
                bit = ((*bytes_)[pos_ >> 3] >> (7 - (pos_ & 7))) & 1;
                ++pos_;
            }
            v = (v << 1) | bit;
        }
        return v;
    }

private:
    const std::vector<uint8_t>* bytes_;
    size_t pos_ = 0;
};

class BitWriter {
public:
    void put(uint32_t value, uint32_t count) {
        for (uint32_t i = 0; i < count; ++i) {
            uint32_t bit = (value >> (count - 1 - i)) & 1;
            if ((len_ & 7) == 0) bytes_.push_back(0);
            bytes_.back() |= uint8_t(bit << (7 - (len_ & 7)));
            ++len_;
        }
    }

    std::vector<uint8_t> take() && { return std::move(bytes_); }

private:
    std::vector<uint8_t> bytes_;
    size_t len_ = 0;
};

}  // namespace detail

// Number of symbols a byte payload occupies before chunk padding.
inline size_t payload_symbol_count(const Field& f, size_t byte_length) {
    uint32_t bps = ingest_bits_per_symbol(f);
    return (byte_length * 8 + bps - 1) / bps;
}

inline Vec pack_bytes(const std::vector<uint8_t>& bytes, const Field& f) {
    uint32_t bps = ingest_bits_per_symbol(f);
    detail::BitReader reader(bytes);
    Vec symbols;
    symbols.reserve(payload_symbol_count(f, bytes.size()));
    while (reader.bits_left() > 0) symbols.push_back(reader.take(bps));
    return symbols;
}

inline std::vector<uint8_t> unpack_symbols(const Vec& symbols, const Field& f, size_t byte_length) {
    uint32_t bps = ingest_bits_per_symbol(f);
    detail::BitWriter writer;
    for (uint32_t s : symbols) writer.put(s, bps);
    std::vector<uint8_t> bytes = std::move(writer).take();
    if (bytes.size() < byte_length) throw CorruptionError("decoded payload shorter than recorded length");
    bytes.resize(byte_length);
    return bytes;
}

inline std::vector<uint8_t> symbols_to_file_bytes(const Vec& symbols, const Field& f) {
    if (f.order() == 2) {
        detail::BitWriter writer;
        for (uint32_t s : symbols) writer.put(s, 1);
        return std::move(writer).take();
    }
    uint32_t w = storage_symbol_bytes(f);
    std::vector<uint8_t> out;
    out.reserve(symbols.size() * w);
    for (uint32_t s : symbols)
        for (uint32_t b = 0; b < w; ++b) out.push_back(uint8_t(s >> (8 * b)));  // little-endian
    return out;
}

inline Vec file_bytes_to_symbols(const std::vector<uint8_t>& bytes, const Field& f, size_t count) {
    Vec symbols(count, 0);
    if (f.order() == 2) {
        if (bytes.size() != (count + 7) / 8) throw CorruptionError("chunk file has wrong size");
        for (size_t i = 0; i < count; ++i) symbols[i] = (bytes[i >> 3] >> (7 - (i & 7))) & 1;
        return symbols;
    }
    uint32_t w = storage_symbol_bytes(f);
    if (bytes.size() != count * w) throw CorruptionError("chunk file has wrong size");
    for (size_t i = 0; i < count; ++i) {
        uint32_t v = 0;
        for (uint32_t b = 0; b < w; ++b) v |= uint32_t(bytes[i * w + b]) << (8 * b);
        if (v >= f.order()) throw CorruptionError("stored symbol exceeds field order");
        symbols[i] = v;
    }
    return symbols;
}

}  // namespace regen
