#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "tanim/errors.hpp"

// Little-endian primitives shared by the file formats. Values are assembled
// byte by byte, so the on-disk layout is independent of the host byte order.
namespace tanim::detail {

inline void put_u8(std::string& out, std::uint8_t value) { out.push_back(char(value)); }

inline void put_u32(std::string& out, std::uint32_t value) {
    for (int shift = 0; shift < 32; shift += 8) out.push_back(char((value >> shift) & 0xff));
}

inline void put_u64(std::string& out, std::uint64_t value) {
    for (int shift = 0; shift < 64; shift += 8) out.push_back(char((value >> shift) & 0xff));
}

inline void put_f32(std::string& out, float value) {
    std::uint32_t bits;
    std::memcpy(&bits, &value, sizeof bits);
    put_u32(out, bits);
}

inline void put_f64(std::string& out, double value) {
    std::uint64_t bits;
    std::memcpy(&bits, &value, sizeof bits);
    put_u64(out, bits);
}

// Bounds-checked sequential reader over an in-memory byte buffer.
class ByteReader {
  public:
    ByteReader(const std::string& bytes, const std::string& what)
        : bytes_(bytes), what_(what) {}

    std::uint8_t u8() { return std::uint8_t(take(1)[0]); }

    std::uint32_t u32() {
        const char* p = take(4);
        std::uint32_t value = 0;
        for (int i = 0; i < 4; ++i) value |= std::uint32_t(std::uint8_t(p[i])) << (8 * i);
        return value;
    }

    std::uint64_t u64() {
        const char* p = take(8);
        std::uint64_t value = 0;
        for (int i = 0; i < 8; ++i) value |= std::uint64_t(std::uint8_t(p[i])) << (8 * i);
        return value;
    }

    float f32() {
        const std::uint32_t bits = u32();
        float value;
        std::memcpy(&value, &bits, sizeof value);
        return value;
    }

    double f64() {
        const std::uint64_t bits = u64();
        double value;
        std::memcpy(&value, &bits, sizeof value);
        return value;
    }

    std::string raw(std::size_t n) { return std::string(take(n), n); }

    std::size_t remaining() const { return bytes_.size() - offset_; }

    void expect_exhausted() const {
        if (offset_ != bytes_.size())
            throw FormatError(what_ + ": " + std::to_string(bytes_.size() - offset_) +
                              " unexpected trailing bytes");
    }

  private:
    const char* take(std::size_t n) {
        if (offset_ + n > bytes_.size())
            throw FormatError(what_ + ": truncated at byte " + std::to_string(offset_) +
                              " (needed " + std::to_string(n) + " more, have " +
                              std::to_string(bytes_.size() - offset_) + ")");
        const char* p = bytes_.data() + offset_;
        offset_ += n;
        return p;
    }

    const std::string& bytes_;
    std::string what_;
    std::size_t offset_ = 0;
};

inline std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on '" + path + "'");
    return bytes;
}

inline void write_file_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace tanim::detail
