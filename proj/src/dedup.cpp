#include "sltrans/dedup.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <unordered_map>

#include "sltrans/digest.hpp"
#include "sltrans/errors.hpp"
#include "sltrans/tokenizer.hpp"

namespace sltrans {

namespace {

constexpr std::uint64_t kMersenne61 = (1ULL << 61) - 1;

inline std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(p & kMersenne61);
    std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
    std::uint64_t r = lo + hi;
    if (r >= kMersenne61) r -= kMersenne61;
    return r;
}

struct HashFamily {
    std::vector<std::uint64_t> a;
    std::vector<std::uint64_t> b;

    HashFamily(std::uint64_t k, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        a.reserve(k);
        b.reserve(k);
        for (std::uint64_t i = 0; i < k; ++i) {
            a.push_back(1 + rng() % (kMersenne61 - 1));
            b.push_back(rng() % kMersenne61);
        }
    }

    std::uint64_t apply(std::size_t i, std::uint64_t x) const {
        std::uint64_t v = x % kMersenne61;
        std::uint64_t r = mulmod61(a[i], v) + b[i];
        if (r >= kMersenne61) r -= kMersenne61;
        return r;
    }
};

struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return;
        if (x > y) std::swap(x, y);  // smaller index wins, keeps things stable
        parent[y] = x;
    }
};

}  // namespace

std::vector<std::uint64_t> shingle(std::string_view text, std::uint64_t w) {
    static const ReferenceTokenizer tokenizer;
    const std::vector<std::string_view> tokens = tokenizer.tokenize(text);

    auto hash_window = [&](std::size_t begin, std::size_t end) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::size_t i = begin; i < end; ++i) {
            h = fnv1a64(tokens[i], h);
            h ^= 0x1F;
            h *= 0x100000001b3ULL;
        }
        return h;
    };

    std::vector<std::uint64_t> hashes;
    if (tokens.size() < w) {
        hashes.push_back(hash_window(0, tokens.size()));
    } else {
        hashes.reserve(tokens.size() - w + 1);
        for (std::size_t i = 0; i + w <= tokens.size(); ++i) {
            hashes.push_back(hash_window(i, i + w));
        }
    }
    std::sort(hashes.begin(), hashes.end());
    hashes.erase(std::unique(hashes.begin(), hashes.end()), hashes.end());
    return hashes;
}

MinHashSignature minhash_signature(const std::vector<std::uint64_t>& shingles,
                                   std::uint64_t k, std::uint64_t seed) {
    if (shingles.empty()) {
        throw UsageError("minhash_signature: cannot sign an empty shingle set");
    }
    if (k == 0) {
        throw ConfigError("minhash_signature: k must be >= 1");
    }
    // The family is a pure function of (k, seed); cache the common case.
    static thread_local std::unique_ptr<HashFamily> cached;
    static thread_local std::uint64_t cached_k = 0;
    static thread_local std::uint64_t cached_seed = 0;
    if (!cached || cached_k != k || cached_seed != seed) {
        cached = std::make_unique<HashFamily>(k, seed);
        cached_k = k;
        cached_seed = seed;
    }
    const HashFamily& family = *cached;

    MinHashSignature sig;
    sig.seed = seed;
    sig.mins.assign(k, kMersenne61);
    for (std::uint64_t s : shingles) {
        for (std::uint64_t i = 0; i < k; ++i) {
            std::uint64_t h = family.apply(i, s);
            if (h < sig.mins[i]) sig.mins[i] = h;
        }
    }
    return sig;
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
    if (a.mins.size() != b.mins.size() || a.seed != b.seed) {
        throw UsageError("estimate_jaccard: signatures disagree on k or seed");
    }
    if (a.mins.empty()) {
        throw UsageError("estimate_jaccard: empty signatures");
    }
    std::size_t equal = 0;
    for (std::size_t i = 0; i < a.mins.size(); ++i) {
        if (a.mins[i] == b.mins[i]) ++equal;
    }
    return static_cast<double>(equal) / static_cast<double>(a.mins.size());
}

std::vector<std::pair<std::size_t, std::size_t>> lsh_candidates(
    const std::vector<MinHashSignature>& signatures, std::uint64_t bands, std::uint64_t rows) {
    if (bands == 0 || rows == 0 ||
        (signatures.empty() ? bands * rows == 0
                            : bands * rows != signatures.front().mins.size())) {
        throw ConfigError("lsh_candidates: bands*rows must equal k");
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::uint64_t band = 0; band < bands; ++band) {
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
        for (std::size_t i = 0; i < signatures.size(); ++i) {
            std::uint64_t h = splitmix64(band + 0x51ed270b8a1c6d3fULL);
            for (std::uint64_t r = 0; r < rows; ++r) {
                h = splitmix64(h ^ signatures[i].mins[band * rows + r]);
            }
            buckets[h].push_back(i);
        }
        for (const auto& [hash, members] : buckets) {
            if (members.size() < 2) continue;
            for (std::size_t x = 0; x < members.size(); ++x) {
                for (std::size_t y = x + 1; y < members.size(); ++y) {
                    pairs.emplace_back(members[x], members[y]);
                }
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

DedupResult dedup(const std::vector<SourceSample>& samples, const DedupParams& params) {
    if (params.bands * params.rows != params.k) {
        throw ConfigError("dedup: bands*rows must equal k");
    }
    if (params.threshold < 0.0 || params.threshold > 1.0) {
        throw ConfigError("dedup: threshold must be within [0,1]");
    }

    const std::size_t n = samples.size();
    UnionFind uf(n);

    // Per-language scoping: signatures and LSH run inside each group.
    std::map<Language, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        groups[samples[i].language].push_back(i);
    }

    for (const auto& [language, indices] : groups) {
        std::vector<MinHashSignature> sigs;
        sigs.reserve(indices.size());
        for (std::size_t idx : indices) {
            auto shingles = shingle(samples[idx].text, params.shingle_w);
            sigs.push_back(minhash_signature(shingles, params.k, params.seed));
            sigs.back().sample_id = samples[idx].id;
        }
        for (const auto& [x, y] : lsh_candidates(sigs, params.bands, params.rows)) {
            if (estimate_jaccard(sigs[x], sigs[y]) >= params.threshold) {
                uf.unite(indices[x], indices[y]);
            }
        }
    }

    // Components in first-member input order; members sorted by id.
    std::map<std::size_t, std::vector<std::size_t>> components;
    for (std::size_t i = 0; i < n; ++i) {
        components[uf.find(i)].push_back(i);
    }

    DedupResult result;
    std::vector<bool> keep(n, false);
    std::uint64_t next_cluster = 0;
    for (auto& [root, members] : components) {
        ClusterAssignment cluster;
        cluster.cluster_id = next_cluster++;
        std::size_t canonical_idx = members.front();
        for (std::size_t idx : members) {
            cluster.member_ids.push_back(samples[idx].id);
            if (samples[idx].id < samples[canonical_idx].id) canonical_idx = idx;
        }
        std::sort(cluster.member_ids.begin(), cluster.member_ids.end());
        cluster.canonical_id = samples[canonical_idx].id;
        keep[canonical_idx] = true;
        for (std::size_t idx : members) {
            if (idx != canonical_idx) {
                result.drops.push_back({samples[idx].id, samples[idx].path, cluster.cluster_id});
            }
        }
        result.clusters.push_back(std::move(cluster));
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (keep[i]) result.retained.push_back(samples[i]);
    }
    return result;
}

}  // namespace sltrans
