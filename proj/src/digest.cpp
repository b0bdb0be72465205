#include "improver/digest.hpp"

#include <cstring>
#include <stdexcept>

namespace improver {

namespace {

inline std::uint64_t rotl64(std::uint64_t x, int r) {
    return (x << r) | (x >> (64 - r));
}

inline std::uint64_t fmix64(std::uint64_t k) {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    k *= 0xc4ceb9fe1a85ec53ULL;
    k ^= k >> 33;
    return k;
}

inline std::uint64_t load64le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

Digest128 hash_bytes(std::string_view bytes) {
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t len = bytes.size();
    const std::size_t nblocks = len / 16;

    std::uint64_t h1 = 0, h2 = 0;
    const std::uint64_t c1 = 0x87c37b91114253d5ULL;
    const std::uint64_t c2 = 0x4cf5ad432745937fULL;

    for (std::size_t i = 0; i < nblocks; ++i) {
        std::uint64_t k1 = load64le(data + i * 16);
        std::uint64_t k2 = load64le(data + i * 16 + 8);

        k1 *= c1; k1 = rotl64(k1, 31); k1 *= c2; h1 ^= k1;
        h1 = rotl64(h1, 27); h1 += h2; h1 = h1 * 5 + 0x52dce729;

        k2 *= c2; k2 = rotl64(k2, 33); k2 *= c1; h2 ^= k2;
        h2 = rotl64(h2, 31); h2 += h1; h2 = h2 * 5 + 0x38495ab5;
    }

    const unsigned char* tail = data + nblocks * 16;
    std::uint64_t k1 = 0, k2 = 0;
    switch (len & 15) {
        case 15: k2 ^= std::uint64_t(tail[14]) << 48; [[fallthrough]];
        case 14: k2 ^= std::uint64_t(tail[13]) << 40; [[fallthrough]];
        case 13: k2 ^= std::uint64_t(tail[12]) << 32; [[fallthrough]];
        case 12: k2 ^= std::uint64_t(tail[11]) << 24; [[fallthrough]];
        case 11: k2 ^= std::uint64_t(tail[10]) << 16; [[fallthrough]];
        case 10: k2 ^= std::uint64_t(tail[9]) << 8; [[fallthrough]];
        case 9:  k2 ^= std::uint64_t(tail[8]);
                 k2 *= c2; k2 = rotl64(k2, 33); k2 *= c1; h2 ^= k2;
                 [[fallthrough]];
        case 8:  k1 ^= std::uint64_t(tail[7]) << 56; [[fallthrough]];
        case 7:  k1 ^= std::uint64_t(tail[6]) << 48; [[fallthrough]];
        case 6:  k1 ^= std::uint64_t(tail[5]) << 40; [[fallthrough]];
        case 5:  k1 ^= std::uint64_t(tail[4]) << 32; [[fallthrough]];
        case 4:  k1 ^= std::uint64_t(tail[3]) << 24; [[fallthrough]];
        case 3:  k1 ^= std::uint64_t(tail[2]) << 16; [[fallthrough]];
        case 2:  k1 ^= std::uint64_t(tail[1]) << 8; [[fallthrough]];
        case 1:  k1 ^= std::uint64_t(tail[0]);
                 k1 *= c1; k1 = rotl64(k1, 31); k1 *= c2; h1 ^= k1;
                 break;
        case 0: break;
    }

    h1 ^= len; h2 ^= len;
    h1 += h2; h2 += h1;
    h1 = fmix64(h1); h2 = fmix64(h2);
    h1 += h2; h2 += h1;
    return Digest128{h1, h2};
}

std::string Digest128::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(32, '0');
    for (int i = 0; i < 16; ++i) out[i] = digits[(h1 >> (60 - 4 * i)) & 0xF];
    for (int i = 0; i < 16; ++i) out[16 + i] = digits[(h2 >> (60 - 4 * i)) & 0xF];
    return out;
}

Digest128 Digest128::from_hex(std::string_view hex) {
    if (hex.size() != 32) throw std::invalid_argument("digest hex must be 32 chars");
    auto nibble = [](char c) -> std::uint64_t {
        if (c >= '0' && c <= '9') return std::uint64_t(c - '0');
        if (c >= 'a' && c <= 'f') return std::uint64_t(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return std::uint64_t(c - 'A' + 10);
        throw std::invalid_argument("bad hex digit in digest");
    };
    Digest128 d;
    for (int i = 0; i < 16; ++i) d.h1 = (d.h1 << 4) | nibble(hex[i]);
    for (int i = 0; i < 16; ++i) d.h2 = (d.h2 << 4) | nibble(hex[16 + i]);
    return d;
}

}  // namespace improver
