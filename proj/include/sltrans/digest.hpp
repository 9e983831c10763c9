#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sltrans {

// SHA-256 of `data` as 64 lower-case hex digits.
std::string sha256_hex(std::string_view data);

// Stable 64-bit mixer used wherever the pipeline needs a cheap
// content-derived integer (shingle hashing, band bucketing).
std::uint64_t splitmix64(std::uint64_t x);

// FNV-1a over bytes, the base hash for token shingles.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace sltrans
