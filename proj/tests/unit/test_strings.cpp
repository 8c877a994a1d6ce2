#include "doctest.h"
#include "sopbench/strings.hpp"

using namespace sopbench;

TEST_CASE("to_lower folds ASCII only") {
    CHECK(to_lower("Hello World") == "hello world");
    CHECK(to_lower("ICON_STAR") == "icon_star");
    CHECK(to_lower("") == "");
}

TEST_CASE("trim strips both ends") {
    CHECK(trim("  x  ") == "x");
    CHECK(trim("\t\n x \r\n") == "x");
    CHECK(trim("") == "");
    CHECK(trim("   ") == "");
    CHECK(trim("no-op") == "no-op");
}

TEST_CASE("collapse_whitespace squeezes runs to single spaces") {
    CHECK(collapse_whitespace("a  b\t\tc") == "a b c");
    CHECK(collapse_whitespace("a\nb") == "a b");
}

TEST_CASE("normalize_text lowers, trims, collapses") {
    CHECK(normalize_text("  Best   Rated\tHeadphones ") == "best rated headphones");
    CHECK(normalize_text("OK") == "ok");
    CHECK(normalize_text("") == "");
}

TEST_CASE("split_lines") {
    CHECK(split_lines("a\nb\nc") == std::vector<std::string>{"a", "b", "c"});
    // a trailing newline yields a final empty segment (callers skip blanks)
    CHECK(split_lines("a\nb\n") == std::vector<std::string>{"a", "b", ""});
    CHECK(split_lines("") == std::vector<std::string>{""});
    CHECK(split_lines("one") == std::vector<std::string>{"one"});
    CHECK(split_lines("a\r\nb") == std::vector<std::string>{"a", "b"});
    // blank interior lines are preserved
    CHECK(split_lines("a\n\nb") == std::vector<std::string>{"a", "", "b"});
}

TEST_CASE("count_tokens counts whitespace-delimited words") {
    CHECK(count_tokens("") == 0);
    CHECK(count_tokens("   ") == 0);
    CHECK(count_tokens("one") == 1);
    CHECK(count_tokens("action: TYPE\ntext: best rated headphones") == 6);
}

TEST_CASE("contains_word_sequence matches contiguous whole words") {
    CHECK(contains_word_sequence("Agree and continue", "agree"));
    CHECK(contains_word_sequence("Add to Cart now", "add to cart"));
    CHECK(contains_word_sequence("OK", "ok"));
    CHECK_FALSE(contains_word_sequence("Notifications", "no"));
    CHECK_FALSE(contains_word_sequence("XXX", "x"));
    CHECK_FALSE(contains_word_sequence("add cart", "add to cart"));
    CHECK_FALSE(contains_word_sequence("", "ok"));
}

TEST_CASE("replace_first substitutes only the first occurrence") {
    CHECK(replace_first("type '*'", "*", "hello") == "type 'hello'");
    CHECK(replace_first("a*b*c", "*", "-") == "a-b*c");
    CHECK(replace_first("none", "*", "-") == "none");
}
