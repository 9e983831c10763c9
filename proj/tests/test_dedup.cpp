#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "sltrans/dedup.hpp"
#include "sltrans/digest.hpp"
#include "sltrans/errors.hpp"

using namespace sltrans;

namespace {

// Brute-force |A∩B| / |A∪B| over sorted hash vectors; the oracle the
// estimator is judged against.
double exact_jaccard(const std::vector<std::uint64_t>& a,
                     const std::vector<std::uint64_t>& b) {
    std::vector<std::uint64_t> inter, uni;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
    return uni.empty() ? 0.0 : static_cast<double>(inter.size()) /
                                   static_cast<double>(uni.size());
}

std::vector<std::uint64_t> sorted_unique(std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Token stream of mostly-unique identifiers rendered as source-ish text.
std::string render_tokens(const std::vector<std::string>& tokens) {
    std::string text;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        text += tokens[i];
        text += (i % 8 == 7) ? "\n" : " ";
    }
    text += "\n";
    return text;
}

SourceSample make_sample(const std::string& text, const std::string& path,
                         Language lang = Language::C) {
    SourceSample s;
    s.id = sha256_hex(text);
    s.language = lang;
    s.text = text;
    s.byte_len = text.size();
    s.origin = "synthetic";
    s.path = path;
    return s;
}

}  // namespace

TEST_CASE("shingle windowing arithmetic") {
    CHECK(shingle("a b c d e", 5).size() == 1);          // exactly w tokens
    CHECK(shingle("a b", 5).size() == 1);                // fewer than w
    CHECK(shingle("", 5).size() == 1);                   // empty token sequence

    // 12 distinct tokens -> 8 windows, all distinct at 64 bits
    CHECK(shingle("q w e r t y u i o p a s", 5).size() == 8);

    // repeated tokens cannot exceed the window count
    CHECK(shingle("a a a a a a a", 5).size() <= 3);
}

TEST_CASE("one interior token change moves Jaccard strictly below 1") {
    std::vector<std::string> tokens;
    for (int i = 0; i < 40; ++i) tokens.push_back("ident" + std::to_string(i));
    const std::string original = render_tokens(tokens);
    tokens[20] = "renamed";
    const std::string variant = render_tokens(tokens);

    auto a = shingle(original, 5);
    auto b = shingle(variant, 5);
    const double j = exact_jaccard(a, b);
    CHECK(j < 1.0);
    CHECK(j > 0.5);
}

TEST_CASE("minhash determinism and identity") {
    auto shingles = shingle("int main() { return 0; }", 5);
    auto sig1 = minhash_signature(shingles, 256, 1234);
    auto sig2 = minhash_signature(shingles, 256, 1234);
    CHECK(sig1.mins == sig2.mins);
    CHECK(estimate_jaccard(sig1, sig2) == doctest::Approx(1.0));

    auto other_seed = minhash_signature(shingles, 256, 99);
    CHECK_THROWS_AS(estimate_jaccard(sig1, other_seed), UsageError);
    auto other_k = minhash_signature(shingles, 128, 1234);
    CHECK_THROWS_AS(estimate_jaccard(sig1, other_k), UsageError);
    CHECK_THROWS_AS(minhash_signature({}, 256, 1), UsageError);
}

TEST_CASE("estimator concentration over 1000 synthetic pairs") {
    std::mt19937_64 rng(0xDEADBEEF);
    const std::uint64_t k = 256;
    const std::uint64_t seed = 0x5171;

    double abs_err_sum = 0.0;
    int within_012 = 0;
    const int pairs = 1000;
    for (int p = 0; p < pairs; ++p) {
        const std::size_t union_size = 200 + rng() % 800;
        // Dedup-shaped similarity mix: a third near-disjoint, a third
        // near-duplicate, a third anywhere in [0,1].
        double target = static_cast<double>(rng() % 1001) / 1000.0;
        if (p % 3 == 0) target *= 0.2;
        if (p % 3 == 1) target = 1.0 - target * 0.2;
        const std::size_t inter = static_cast<std::size_t>(target * union_size);

        std::vector<std::uint64_t> shared, a_only, b_only;
        for (std::size_t i = 0; i < inter; ++i) shared.push_back(rng());
        const std::size_t rest = union_size - inter;
        for (std::size_t i = 0; i < rest / 2; ++i) a_only.push_back(rng());
        for (std::size_t i = 0; i < rest - rest / 2; ++i) b_only.push_back(rng());

        std::vector<std::uint64_t> a = shared, b = shared;
        a.insert(a.end(), a_only.begin(), a_only.end());
        b.insert(b.end(), b_only.begin(), b_only.end());
        a = sorted_unique(a);
        b = sorted_unique(b);
        if (a.empty() || b.empty()) continue;

        const double exact = exact_jaccard(a, b);
        const double est = estimate_jaccard(minhash_signature(a, k, seed),
                                            minhash_signature(b, k, seed));
        const double err = std::abs(est - exact);
        abs_err_sum += err;
        if (err <= 0.12) ++within_012;
    }
    CHECK(abs_err_sum / pairs <= 0.02);
    CHECK(within_012 >= static_cast<int>(pairs * 0.99));
}

TEST_CASE("disjoint and half-overlapping sets estimate correctly") {
    std::mt19937_64 rng(4242);
    const std::uint64_t k = 256;
    for (int p = 0; p < 100; ++p) {
        std::vector<std::uint64_t> a, b;
        for (int i = 0; i < 150; ++i) a.push_back(rng());
        for (int i = 0; i < 150; ++i) b.push_back(rng());
        a = sorted_unique(a);
        b = sorted_unique(b);
        const double est = estimate_jaccard(minhash_signature(a, k, 7),
                                            minhash_signature(b, k, 7));
        CHECK(est <= 0.05);
    }

    // |A|=|B|=200 sharing 100 elements: exact J = 100/300
    std::vector<std::uint64_t> shared, a, b;
    for (int i = 0; i < 100; ++i) shared.push_back(rng());
    a = shared;
    b = shared;
    for (int i = 0; i < 100; ++i) a.push_back(rng());
    for (int i = 0; i < 100; ++i) b.push_back(rng());
    a = sorted_unique(a);
    b = sorted_unique(b);
    const double exact = exact_jaccard(a, b);
    CHECK(exact == doctest::Approx(1.0 / 3.0).epsilon(0.02));
    const double est = estimate_jaccard(minhash_signature(a, 256, 11),
                                        minhash_signature(b, 256, 11));
    CHECK(std::abs(est - exact) <= 0.12);
}

TEST_CASE("lsh candidates require bands*rows == k and catch identical twins") {
    auto s1 = minhash_signature(shingle("alpha beta gamma delta epsilon zeta", 5), 256, 3);
    auto s2 = s1;
    auto s3 = minhash_signature(shingle("one two three four five six seven", 5), 256, 3);
    std::vector<MinHashSignature> sigs = {s1, s2, s3};

    CHECK_THROWS_AS(lsh_candidates(sigs, 31, 8), ConfigError);
    CHECK_THROWS_AS(lsh_candidates(sigs, 0, 0), ConfigError);

    auto pairs = lsh_candidates(sigs, 32, 8);
    REQUIRE(!pairs.empty());
    CHECK(std::find(pairs.begin(), pairs.end(), std::make_pair<std::size_t, std::size_t>(
                                                     0, 1)) != pairs.end());
}

TEST_CASE("dedup: pairwise-distinct corpus has zero drops") {
    std::mt19937_64 rng(17);
    std::vector<SourceSample> samples;
    for (int d = 0; d < 40; ++d) {
        std::vector<std::string> tokens;
        for (int t = 0; t < 120; ++t) {
            tokens.push_back("sym" + std::to_string(rng() % 1000000));
        }
        samples.push_back(make_sample(render_tokens(tokens),
                                      "doc" + std::to_string(d) + ".c"));
    }
    DedupParams params;
    DedupResult result = dedup(samples, params);
    CHECK(result.drops.empty());
    CHECK(result.retained.size() == samples.size());
    CHECK(result.clusters.size() == samples.size());
}

TEST_CASE("dedup: verbatim duplicates form pair clusters") {
    std::mt19937_64 rng(23);
    std::vector<SourceSample> samples;
    for (int d = 0; d < 10; ++d) {
        std::vector<std::string> tokens;
        for (int t = 0; t < 100; ++t) {
            tokens.push_back("v" + std::to_string(rng() % 1000000));
        }
        const std::string text = render_tokens(tokens);
        samples.push_back(make_sample(text, "orig" + std::to_string(d) + ".c"));
        samples.push_back(make_sample(text, "copy" + std::to_string(d) + ".c"));
    }
    DedupParams params;
    DedupResult result = dedup(samples, params);
    CHECK(result.clusters.size() == 10);
    CHECK(result.drops.size() == 10);
    for (const ClusterAssignment& cluster : result.clusters) {
        CHECK(cluster.member_ids.size() == 2);
        CHECK(cluster.member_ids[0] == cluster.member_ids[1]);  // same content
        CHECK(cluster.canonical_id == cluster.member_ids[0]);
    }
    CHECK(result.retained.size() + result.drops.size() == samples.size());
}

TEST_CASE("dedup equals brute-force exact-Jaccard clustering on planted corpus") {
    std::mt19937_64 rng(0xC0FFEE);
    const double threshold = 0.85;

    std::vector<std::string> texts;
    std::vector<std::vector<std::string>> token_lists;
    // 120 base docs of 220..280 mostly-unique identifiers
    for (int d = 0; d < 120; ++d) {
        std::vector<std::string> tokens;
        const std::size_t len = 220 + rng() % 61;
        for (std::size_t t = 0; t < len; ++t) {
            tokens.push_back("id" + std::to_string(rng() % 100000000));
        }
        token_lists.push_back(tokens);
        texts.push_back(render_tokens(tokens));
    }
    // 60 single-identifier-renamed variants of the first 60 docs
    for (int d = 0; d < 60; ++d) {
        auto tokens = token_lists[d];
        tokens[5 + rng() % (tokens.size() - 10)] = "renamed" + std::to_string(d);
        token_lists.push_back(tokens);
        texts.push_back(render_tokens(tokens));
    }
    // 20 second variants of the first 20 docs (different position), so some
    // components have three members
    for (int d = 0; d < 20; ++d) {
        auto tokens = token_lists[d];
        tokens[2] = "other" + std::to_string(d);
        token_lists.push_back(tokens);
        texts.push_back(render_tokens(tokens));
    }
    REQUIRE(texts.size() == 200);

    std::vector<SourceSample> samples;
    for (std::size_t d = 0; d < texts.size(); ++d) {
        samples.push_back(make_sample(texts[d], "p" + std::to_string(d) + ".c"));
    }

    DedupParams params;
    params.threshold = threshold;
    DedupResult result = dedup(samples, params);

    // Brute-force oracle: all-pairs exact Jaccard over the shingle sets,
    // connected components at the same threshold.
    std::vector<std::vector<std::uint64_t>> sets;
    for (const auto& s : samples) sets.push_back(shingle(s.text, params.shingle_w));
    std::vector<std::size_t> parent(samples.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            if (exact_jaccard(sets[i], sets[j]) >= threshold) {
                parent[std::max(find(i), find(j))] = std::min(find(i), find(j));
            }
        }
    }
    std::map<std::size_t, std::vector<std::string>> oracle_components;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        oracle_components[find(i)].push_back(samples[i].id);
    }
    std::set<std::vector<std::string>> oracle_clusters;
    for (auto& [root, ids] : oracle_components) {
        std::sort(ids.begin(), ids.end());
        oracle_clusters.insert(ids);
    }

    std::set<std::vector<std::string>> produced;
    for (const ClusterAssignment& cluster : result.clusters) {
        produced.insert(cluster.member_ids);  // already sorted
    }

    CHECK(produced == oracle_clusters);
    CHECK(result.retained.size() == result.clusters.size());
    CHECK(result.retained.size() + result.drops.size() == samples.size());
}

TEST_CASE("dedup is deterministic and per-language") {
    std::vector<SourceSample> samples;
    std::vector<std::string> tokens;
    for (int t = 0; t < 150; ++t) tokens.push_back("t" + std::to_string(t * 7919 % 4096));
    const std::string text = render_tokens(tokens);
    // identical text in two languages: never clustered across languages
    samples.push_back(make_sample(text, "a.c", Language::C));
    samples.push_back(make_sample(text, "b.rs", Language::Rust));

    DedupParams params;
    DedupResult first = dedup(samples, params);
    DedupResult second = dedup(samples, params);
    CHECK(first.drops.empty());
    CHECK(first.retained.size() == 2);
    REQUIRE(first.clusters.size() == second.clusters.size());
    for (std::size_t i = 0; i < first.clusters.size(); ++i) {
        CHECK(first.clusters[i].cluster_id == second.clusters[i].cluster_id);
        CHECK(first.clusters[i].canonical_id == second.clusters[i].canonical_id);
        CHECK(first.clusters[i].member_ids == second.clusters[i].member_ids);
    }

    DedupParams bad = params;
    bad.bands = 31;
    CHECK_THROWS_AS(dedup(samples, bad), ConfigError);
}
