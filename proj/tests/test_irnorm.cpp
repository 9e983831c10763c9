#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <vector>

#include "sltrans/errors.hpp"
#include "sltrans/irnorm.hpp"
#include "sltrans/tokenizer.hpp"

using namespace sltrans;

namespace {

// Independent split-and-filter recount used as the oracle for
// count_code_lines and for the comment-stripping line arithmetic.
std::uint64_t oracle_nonblank_lines(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::uint64_t n = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\f\v") != std::string::npos) ++n;
    }
    return n;
}

bool oracle_is_comment(const std::string& line) {
    auto pos = line.find_first_not_of(" \t\r\f\v");
    return pos != std::string::npos && line[pos] == ';';
}

const std::string kSampleIr =
    "; ModuleID = 'input.c'\n"
    "source_filename = \"input.c\"\n"
    "target datalayout = \"e-m:e-i64:64-f80:128-n8:16:32:64-S128\"\n"
    "target triple = \"x86_64-pc-linux-gnu\"\n"
    "\n"
    "@.str = private unnamed_addr constant [4 x i8] c\"%d\\0A\\00\", align 1\n"
    "\n"
    "; Function Attrs: nounwind\n"
    "define dso_local i32 @main() #0 {\n"
    "  %1 = alloca i32, align 4\n"
    "  store i32 0, i32* %1, align 4\n"
    "  ret i32 0\n"
    "}\n"
    "\n"
    "declare i32 @printf(i8*, ...) #1\n"
    "\n"
    "attributes #0 = { nounwind \"frame-pointer\"=\"all\" }\n"
    "attributes #1 = { \"frame-pointer\"=\"all\" }\n"
    "\n"
    "!llvm.module.flags = !{!0, !1, !2}\n"
    "!llvm.ident = !{!3}\n"
    "\n"
    "!0 = !{i32 1, !\"wchar_size\", i32 4}\n"
    "!1 = !{i32 7, !\"PIC Level\", i32 2}\n"
    "!2 = !{i32 7, !\"uwtable\", i32 1}\n"
    "!3 = !{!\"clang version 14.0.0\"}\n";

}  // namespace

TEST_CASE("normalize_ir strips the module preamble") {
    const std::string input =
        "target triple = \"x86_64\"\n"
        "define i32 @f() {\n"
        "  ret i32 1\n"
        "}\n";
    const std::string expected =
        "define i32 @f() {\n"
        "  ret i32 1\n"
        "}\n";
    CHECK(normalize_ir(input) == expected);
}

TEST_CASE("normalize_ir drops comments, preamble and stripped metadata") {
    const std::string out = normalize_ir(kSampleIr);
    CHECK(out.find("target triple") == std::string::npos);
    CHECK(out.find("target datalayout") == std::string::npos);
    CHECK(out.find("source_filename") == std::string::npos);
    CHECK(out.find("; ModuleID") == std::string::npos);
    CHECK(out.find("; Function Attrs") == std::string::npos);
    CHECK(out.find("!llvm.module.flags") == std::string::npos);
    CHECK(out.find("!llvm.ident") == std::string::npos);
    CHECK(out.find("!0 = ") == std::string::npos);
    CHECK(out.find("!3 = ") == std::string::npos);
    // everything semantic survives verbatim
    CHECK(out.find("@.str = private unnamed_addr constant") != std::string::npos);
    CHECK(out.find("define dso_local i32 @main() #0 {") != std::string::npos);
    CHECK(out.find("declare i32 @printf(i8*, ...) #1") != std::string::npos);
    CHECK(out.find("attributes #0") != std::string::npos);
}

TEST_CASE("normalize_ir keeps metadata still referenced by surviving lines") {
    const std::string input =
        "define void @f() !prof !1 {\n"
        "  ret void\n"
        "}\n"
        "!llvm.module.flags = !{!0}\n"
        "!0 = !{i32 1, !\"wchar_size\", i32 4}\n"
        "!1 = !{!\"function_entry_count\", i64 12}\n";
    const std::string out = normalize_ir(input);
    CHECK(out.find("!0 = ") == std::string::npos);   // only the flags used it
    CHECK(out.find("!1 = ") != std::string::npos);   // the function still does
    CHECK(out.find("!llvm.module.flags") == std::string::npos);
}

TEST_CASE("normalize_ir removes metadata reachable only through stripped roots") {
    const std::string input =
        "define void @f() {\n"
        "  ret void\n"
        "}\n"
        "!llvm.module.flags = !{!0}\n"
        "!0 = !{i32 1, !\"ProfileSummary\", !1}\n"
        "!1 = !{!2}\n"
        "!2 = !{!\"TotalCount\", i64 0}\n";
    const std::string out = normalize_ir(input);
    CHECK(out.find("!0") == std::string::npos);
    CHECK(out.find("!1") == std::string::npos);
    CHECK(out.find("!2") == std::string::npos);
    CHECK(out.find("define void @f()") != std::string::npos);
}

TEST_CASE("normalize_ir collapses blank runs and is idempotent") {
    const std::string input =
        "\n\n"
        "define void @f() {\n"
        "  ret void\n"
        "}\n"
        "\n\n\n"
        "declare void @g()\n"
        "\n\n";
    const std::string once = normalize_ir(input);
    CHECK(once ==
          "define void @f() {\n"
          "  ret void\n"
          "}\n"
          "\n"
          "declare void @g()\n");
    CHECK(normalize_ir(once) == once);

    const std::string fixtures[] = {kSampleIr, input, "", ";\n", "define void @f()\n"};
    for (const std::string& fixture : fixtures) {
        const std::string a = normalize_ir(fixture);
        CHECK(normalize_ir(a) == a);
    }
}

TEST_CASE("normalize_ir line arithmetic matches an independent classifier") {
    // Fixture without metadata so the oracle stays line-local: output code
    // lines == input lines minus comments, preamble and blanks.
    const std::string input =
        "; header comment\n"
        "source_filename = \"x.c\"\n"
        "target datalayout = \"e\"\n"
        "target triple = \"t\"\n"
        "@g = global i32 0\n"
        "; interleaved\n"
        "define void @f() {\n"
        "  ; inner whole-line comment\n"
        "  ret void\n"
        "}\n"
        "\n"
        "declare void @h()\n";
    std::istringstream in(input);
    std::string line;
    std::uint64_t expected = 0;
    while (std::getline(in, line)) {
        const bool blank = line.find_first_not_of(" \t\r\f\v") == std::string::npos;
        const bool comment = oracle_is_comment(line);
        const bool preamble = line.rfind("source_filename", 0) == 0 ||
                              line.rfind("target datalayout", 0) == 0 ||
                              line.rfind("target triple", 0) == 0;
        if (!blank && !comment && !preamble) ++expected;
    }
    const std::string out = normalize_ir(input);
    CHECK(count_code_lines(out) == expected);
    CHECK(count_code_lines(out) == oracle_nonblank_lines(out));
}

TEST_CASE("normalization never increases the code line count") {
    const std::string fixtures[] = {
        kSampleIr,
        "a\nb\nc\n",
        "\n\n\n",
        "; only comments\n; here\n",
    };
    for (const std::string& fixture : fixtures) {
        CHECK(count_code_lines(normalize_ir(fixture)) <= count_code_lines(fixture));
    }
}

TEST_CASE("count_code_lines counts non-blank lines") {
    CHECK(count_code_lines("") == 0);
    CHECK(count_code_lines("a\n\n b\n") == 2);
    CHECK(count_code_lines("a") == 1);
    CHECK(count_code_lines("   \n\t\n") == 0);
    const std::string normalized = normalize_ir(kSampleIr);
    CHECK(count_code_lines(normalized) == oracle_nonblank_lines(normalized));
}

TEST_CASE("length filter boundary is strict") {
    CHECK(apply_length_filter(2499));
    CHECK_FALSE(apply_length_filter(2500));
    CHECK(apply_length_filter(1));
    CHECK_FALSE(apply_length_filter(9999));
    for (std::uint64_t n = 0; n < 64; ++n) {
        CHECK(apply_length_filter(n, 32) == (n < 32));
    }
}

TEST_CASE("length_multiplier is the exact token ratio") {
    CHECK(length_multiplier(100, 100) == doctest::Approx(1.0));
    CHECK(length_multiplier(508, 100) == doctest::Approx(5.08));
    CHECK(length_multiplier(1, 3) == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(length_multiplier(10, 0), UsageError);
}

TEST_CASE("make_artifact assembles metrics and flags empty results") {
    ReferenceTokenizer tok;
    IRArtifact artifact = make_artifact("abc", OptLevel::size, kSampleIr,
                                        "int main(){return 0;}\n", tok);
    CHECK(artifact.code_line_count == count_code_lines(normalize_ir(kSampleIr)));
    CHECK(artifact.ir_token_count == tok.count(artifact.normalized_ir));
    CHECK(artifact.src_token_count == tok.count("int main(){return 0;}\n"));
    CHECK(artifact.length_multiplier ==
          doctest::Approx(static_cast<double>(artifact.ir_token_count) /
                          static_cast<double>(artifact.src_token_count)));

    IRArtifact empty = make_artifact("abc", OptLevel::perf, "; nothing but comments\n",
                                     "int x;\n", tok);
    CHECK(empty.code_line_count == 0);
}
