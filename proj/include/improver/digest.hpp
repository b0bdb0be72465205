#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace improver {

// 128-bit digest. Ordering and equality are lexicographic on (h1, h2),
// matching the hex rendering (h1 then h2, big-endian words).
struct Digest128 {
    std::uint64_t h1 = 0;
    std::uint64_t h2 = 0;

    friend bool operator==(const Digest128&, const Digest128&) = default;
    friend auto operator<=>(const Digest128&, const Digest128&) = default;

    std::string hex() const;
    static Digest128 from_hex(std::string_view hex);
};

// MurmurHash3 x64 128, seed 0. Fixed for the life of the formats: replay
// fixtures and recorded digests depend on it. Empty input hashes to the
// all-zero digest.
Digest128 hash_bytes(std::string_view bytes);

}  // namespace improver
