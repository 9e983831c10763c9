#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sltrans/errors.hpp"
#include "sltrans/subprocess.hpp"
#include "sltrans/tokenizer.hpp"
#include "test_util.hpp"

using namespace sltrans;

TEST_CASE("reference tokenizer basics") {
    ReferenceTokenizer tok;
    CHECK(tok.count("") == 0);
    CHECK(tok.count("a+b") == 3);
    CHECK(tok.count("   \n\t ") == 0);
    CHECK(tok.count("abc") == 1);
    CHECK(tok.count("abc1") == 1);   // digits continue an identifier run
    CHECK(tok.count("1abc") == 2);   // but cannot start one
    CHECK(tok.count("x <= 10;") == 5);
    CHECK(tok.count("_private") == 1);
    CHECK(tok.count("\xC3\xA9t\xC3\xA9") == 1);  // non-ASCII joins identifiers
}

// Hand-tokenized fixed sample: 7+0+6+5+17+7+1+12+3+1 tokens per line.
TEST_CASE("reference tokenizer matches a hand-computed count") {
    const std::string sample =
        "#include <stdio.h>\n"
        "\n"
        "int main(void) {\n"
        "    int total = 0;\n"
        "    for (int i = 1; i <= 10; i++) {\n"
        "        total += i * 2;\n"
        "    }\n"
        "    printf(\"%d\\n\", total);\n"
        "    return 0;\n"
        "}\n";
    ReferenceTokenizer tok;
    CHECK(tok.count(sample) == 59);
    CHECK(tok.tokenize(sample).size() == 59);
}

TEST_CASE("tokenize and count agree") {
    ReferenceTokenizer tok;
    const std::string samples[] = {
        "", "x", "foo(bar, 12)", "a%%b", "  mixed 12ab 34 _x\tz  ",
        "line1\nline2\n", "%\"\\'",
    };
    for (const std::string& s : samples) {
        CHECK(tok.count(s) == tok.tokenize(s).size());
    }
}

// Concatenation through a newline cannot destroy interior tokens.
TEST_CASE("concatenation consistency property") {
    ReferenceTokenizer tok;
    std::mt19937_64 rng(7);
    const std::string alphabet = "ab1+;_ ()\n\t*";
    for (int round = 0; round < 300; ++round) {
        std::string a, b;
        for (std::size_t i = 0, n = rng() % 24; i < n; ++i) {
            a.push_back(alphabet[rng() % alphabet.size()]);
        }
        for (std::size_t i = 0, n = rng() % 24; i < n; ++i) {
            b.push_back(alphabet[rng() % alphabet.size()]);
        }
        const std::uint64_t joined = tok.count(a + "\n" + b);
        CHECK(joined + 1 >= tok.count(a) + tok.count(b));
    }
}

TEST_CASE("vocab tokenizer greedy longest match with byte fallback") {
    TempDir tmp;
    const auto vocab_path = tmp.path() / "vocab.txt";
    testutil::write_file(vocab_path, "int\nin\ni\nmain\n(\n)\n{\n}\nreturn\n 0\n;\n \n");

    VocabTokenizer tok(vocab_path.string());
    // "int main() { return 0; }" ->
    // [int][ ][main][(][)][ ][{][ ][return][ 0][;][ ][}]
    CHECK(tok.count("int main() { return 0; }") == 13);
    // unknown bytes fall back to one token per byte
    CHECK(tok.count("zz") == 2);
    CHECK(tok.count("") == 0);
}

TEST_CASE("tokenizer registry") {
    auto ref = make_tokenizer("reference", "");
    CHECK(ref->name() == "reference");
    CHECK_THROWS_AS(make_tokenizer("bogus", ""), ConfigError);
    CHECK_THROWS_AS(make_tokenizer("vocab", ""), ConfigError);
    CHECK_THROWS_AS(make_tokenizer("vocab", "/nonexistent/vocab.txt"), ConfigError);

    TempDir tmp;
    const auto vocab_path = tmp.path() / "v.txt";
    testutil::write_file(vocab_path, "aa\nbb\n");
    auto vocab = make_tokenizer("vocab", vocab_path.string());
    CHECK(vocab->count("aabb") == 2);
}
