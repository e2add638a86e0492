// binio.hpp — endian-explicit binary readers and writers plus CRC32.
//
// Legacy VTK payloads are big-endian; the native cache and prediction files
// are little-endian. Helpers here take the byte order as part of the call so
// format code never depends on host endianness.
#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "aerobench/error.hpp"

namespace aerobench {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian hosts are not supported");

template <typename T>
inline T byteswap_value(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
        std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    T out;
    std::memcpy(&out, bytes.data(), sizeof(T));
    return out;
}

template <typename T>
inline T to_endian(T v, std::endian order) {
    if (std::endian::native != order) return byteswap_value(v);
    return v;
}

template <typename T>
inline void write_value(std::ostream& os, T v, std::endian order) {
    const T w = to_endian(v, order);
    os.write(reinterpret_cast<const char*>(&w), sizeof(T));
}

template <typename T>
inline T read_value(std::istream& is, std::endian order, const char* what) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) raise(ErrorCode::TruncatedStream, std::string("short read for ") + what);
    return to_endian(v, order);
}

inline void write_u64_string(std::ostream& os, const std::string& s, std::endian order) {
    write_value<std::uint64_t>(os, s.size(), order);
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_u64_string(std::istream& is, std::endian order, const char* what) {
    const std::uint64_t n = read_value<std::uint64_t>(is, order, what);
    std::string s(n, '\0');
    is.read(s.data(), static_cast<std::streamsize>(n));
    if (!is) raise(ErrorCode::TruncatedStream, std::string("short read for ") + what);
    return s;
}

// CRC-32 (IEEE 802.3, reflected, polynomial 0xEDB88320). Incremental so
// formats can checksum a payload while streaming it out.
class Crc32 {
public:
    Crc32() { ensure_table(); }

    void update(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i)
            state_ = table()[(state_ ^ p[i]) & 0xFF] ^ (state_ >> 8);
    }

    std::uint32_t value() const { return state_ ^ 0xFFFFFFFFu; }

    static std::uint32_t of(const void* data, std::size_t len) {
        Crc32 c;
        c.update(data, len);
        return c.value();
    }

private:
    static const std::uint32_t* table() {
        static std::uint32_t t[256];
        static const bool built = [] {
            for (std::uint32_t i = 0; i < 256; ++i) {
                std::uint32_t c = i;
                for (int k = 0; k < 8; ++k)
                    c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
                t[i] = c;
            }
            return true;
        }();
        (void)built;
        return t;
    }

    static void ensure_table() { (void)table(); }

    std::uint32_t state_ = 0xFFFFFFFFu;
};

// Stream wrapper that checksums every byte written through it.
class CrcOstream {
public:
    explicit CrcOstream(std::ostream& os) : os_(os) {}

    void write_bytes(const void* data, std::size_t len) {
        os_.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
        crc_.update(data, len);
    }

    template <typename T>
    void write(T v, std::endian order) {
        const T w = to_endian(v, order);
        write_bytes(&w, sizeof(T));
    }

    void write_string_u64(const std::string& s, std::endian order) {
        write<std::uint64_t>(s.size(), order);
        write_bytes(s.data(), s.size());
    }

    std::uint32_t crc() const { return crc_.value(); }

private:
    std::ostream& os_;
    Crc32 crc_;
};

// Stream wrapper that checksums every byte read through it.
class CrcIstream {
public:
    explicit CrcIstream(std::istream& is) : is_(is) {}

    void read_bytes(void* data, std::size_t len, const char* what) {
        is_.read(static_cast<char*>(data), static_cast<std::streamsize>(len));
        if (!is_) raise(ErrorCode::TruncatedStream, std::string("short read for ") + what);
        crc_.update(data, len);
    }

    template <typename T>
    T read(std::endian order, const char* what) {
        T v;
        read_bytes(&v, sizeof(T), what);
        return to_endian(v, order);
    }

    std::string read_string_u64(std::endian order, const char* what) {
        const std::uint64_t n = read<std::uint64_t>(order, what);
        std::string s(n, '\0');
        if (n > 0) read_bytes(s.data(), n, what);
        return s;
    }

    std::uint32_t crc() const { return crc_.value(); }

private:
    std::istream& is_;
    Crc32 crc_;
};

} // namespace aerobench
