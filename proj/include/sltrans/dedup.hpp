#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sltrans/types.hpp"

namespace sltrans {

struct MinHashSignature {
    std::string sample_id;
    std::vector<std::uint64_t> mins;  // one minimum per hash function
    std::uint64_t seed{0};
};

struct ClusterAssignment {
    std::uint64_t cluster_id{0};
    std::string canonical_id;              // lexicographically smallest member
    std::vector<std::string> member_ids;   // sorted; repeats when identical
                                           // content arrived at two paths
};

struct DedupParams {
    std::uint64_t shingle_w{5};
    std::uint64_t k{256};
    std::uint64_t bands{32};
    std::uint64_t rows{8};
    double threshold{0.85};
    std::uint64_t seed{0};
};

struct DedupDrop {
    std::string id;
    std::string path;
    std::uint64_t cluster_id{0};
};

struct DedupResult {
    std::vector<SourceSample> retained;      // input order preserved
    std::vector<ClusterAssignment> clusters; // includes singletons: a partition
    std::vector<DedupDrop> drops;
};

// Hashes of every contiguous w-token window under the reference tokenizer,
// sorted and deduplicated. Texts shorter than w tokens yield one hash of the
// whole token sequence.
std::vector<std::uint64_t> shingle(std::string_view text, std::uint64_t w = 5);

// Component i is min over the shingle set of the i-th hash function derived
// from `seed`. Rejects an empty shingle set.
MinHashSignature minhash_signature(const std::vector<std::uint64_t>& shingles,
                                   std::uint64_t k, std::uint64_t seed);

// Fraction of equal components; signatures must share k and seed.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

// Index pairs (i < j) that agree exactly on all rows of at least one band.
// Requires bands * rows == k.
std::vector<std::pair<std::size_t, std::size_t>> lsh_candidates(
    const std::vector<MinHashSignature>& signatures, std::uint64_t bands, std::uint64_t rows);

// MinHash/LSH near-duplicate clustering, scoped per language. Candidate
// pairs are confirmed by estimate_jaccard >= threshold; confirmed pairs
// induce connected components; the canonical member of each component is
// retained. Deterministic for fixed params regardless of input scale.
DedupResult dedup(const std::vector<SourceSample>& samples, const DedupParams& params);

}  // namespace sltrans
