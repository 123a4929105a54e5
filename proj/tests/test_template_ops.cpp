#include <string>
#include <vector>

#include "doctest.h"
#include "lunar/core.hpp"
#include "lunar/template_ops.hpp"

using namespace lunar;

TEST_CASE("extraction pulls labeled backticked spans in order") {
  SUBCASE("single") {
    const auto got = extract_templates(
        "LogTemplate[1]: `session opened for user {username}`");
    REQUIRE(got.size() == 1);
    CHECK(got[0] == "session opened for user {username}");
  }
  SUBCASE("three in order with surrounding prose") {
    const auto got = extract_templates(
        "Sure, here are the templates.\n"
        "LogTemplate[1]: `alpha {x}`\n"
        "LogTemplate[2]: `beta {y}`\n"
        "Some commentary in between.\n"
        "LogTemplate[3]: `gamma`\n");
    REQUIRE(got.size() == 3);
    CHECK(got[0] == "alpha {x}");
    CHECK(got[1] == "beta {y}");
    CHECK(got[2] == "gamma");
  }
  SUBCASE("prose without backticks fails") {
    CHECK_THROWS_AS(
        extract_templates("I cannot find a template for these logs."),
        ExtractionError);
  }
  SUBCASE("backticks without the label fail") {
    CHECK_THROWS_AS(extract_templates("here is `something` unlabeled"),
                    ExtractionError);
  }
  SUBCASE("label variants still match") {
    const auto got =
        extract_templates("LogTemplate[12] - `epsilon {v} zeta`");
    REQUIRE(got.size() == 1);
    CHECK(got[0] == "epsilon {v} zeta");
  }
}

TEST_CASE("normalization replaces braced spans with placeholders") {
  CHECK(normalize_template_text("session opened for user {username}").tokens ==
        std::vector<std::string>{"session", "opened", "for", "user", "<*>"});
  CHECK(normalize_template_text("t {x} a").tokens ==
        std::vector<std::string>{"t", "<*>", "a"});
}

TEST_CASE("adjacent and embedded placeholders collapse to whole tokens") {
  CHECK(normalize_template_text("a {p}{q} b").tokens ==
        std::vector<std::string>{"a", "<*>", "b"});
  CHECK(normalize_template_text("blk_{id} sent").tokens ==
        std::vector<std::string>{"<*>", "sent"});
  CHECK(normalize_template_text("nested {outer {inner}} end").tokens ==
        std::vector<std::string>{"nested", "<*>", "end"});
}

TEST_CASE("normalization is idempotent") {
  const Template once = normalize_template_text("took {n} ms at {t}");
  const Template twice = normalize_template_text(once.text());
  CHECK(once == twice);
  CHECK(normalize_template_text("plain constant text").text() ==
        "plain constant text");
}

TEST_CASE("placeholder tokens never carry residue") {
  for (const char* raw : {"x{a}y", "{a}{b}", "pre{a}", "{a}post", "<*><*>"}) {
    const Template t = normalize_template_text(std::string("k ") + raw);
    REQUIRE(t.tokens.size() == 2);
    CHECK(t.tokens[1] == "<*>");
  }
}

TEST_CASE("aggregation selects the majority string") {
  SUBCASE("clear majority") {
    const Template t = aggregate_and_normalize({"t {x} a", "t {x} a", "t b a"});
    CHECK(t.tokens == std::vector<std::string>{"t", "<*>", "a"});
  }
  SUBCASE("singleton list") {
    const Template t =
        aggregate_and_normalize({"session opened for user {username}"});
    CHECK(t.tokens ==
          std::vector<std::string>{"session", "opened", "for", "user", "<*>"});
  }
  SUBCASE("tie favors first appearance") {
    const Template t = aggregate_and_normalize({"one {a}", "two {b}"});
    CHECK(t.tokens == std::vector<std::string>{"one", "<*>"});
  }
  SUBCASE("empty input refused") {
    CHECK_THROWS_AS(aggregate_and_normalize({}), InputError);
  }
}
