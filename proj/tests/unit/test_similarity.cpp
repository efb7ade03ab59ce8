#include <doctest.h>

#include <cmath>
#include <random>

#include "extractbench/dates.hpp"
#include "extractbench/errors.hpp"
#include "extractbench/similarity.hpp"
#include "helpers.hpp"

using namespace extractbench;
using namespace std::chrono;

namespace {

const SimilarityConfig kCfg{};

sys_days ymd(int y, unsigned m, unsigned d) { return sys_days{year{y} / month{m} / d}; }

double fs(const FieldValue& p, const FieldValue& g, EmbeddingProvider& e, const FieldSpec* spec = nullptr) {
  return field_similarity(&p, g, spec, kCfg, e);
}

}  // namespace

TEST_CASE("numeric similarity") {
  CHECK(numeric_similarity(42, 42, kCfg) == 1.0);
  CHECK(numeric_similarity(0, 100, kCfg) == 0.0);
  CHECK(std::fabs(numeric_similarity(110, 100, kCfg) - 0.9) <= 1e-12);
  CHECK(std::fabs(numeric_similarity(90, 100, kCfg) - 0.9) <= 1e-12);
  CHECK(numeric_similarity(250, 100, kCfg) == 0.0);
  CHECK(numeric_similarity(200, 100, kCfg) == 0.0);
  CHECK(numeric_similarity(0, 0, kCfg) == 1.0);
  CHECK(numeric_similarity(1e-12, 0, kCfg) == doctest::Approx(0.999).epsilon(1e-12));
  CHECK(numeric_similarity(1, 0, kCfg) == 0.0);
  CHECK_THROWS_AS(numeric_similarity(NAN, 1, kCfg), Error);
  CHECK_THROWS_AS(numeric_similarity(1, INFINITY, kCfg), Error);
}

TEST_CASE("numeric similarity is scale free") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50, 50), k(0.01, 100);
  for (int i = 0; i < 200; ++i) {
    const double p = u(rng), g = u(rng) + 60, s = k(rng);
    CHECK(numeric_similarity(p * s, g * s, kCfg) == doctest::Approx(numeric_similarity(p, g, kCfg)).epsilon(1e-9));
  }
}

TEST_CASE("date similarity") {
  CHECK(date_similarity(ymd(2024, 3, 1), ymd(2024, 3, 1), kCfg) == 1.0);
  CHECK(date_similarity(ymd(2023, 1, 1), ymd(2024, 1, 1), kCfg) == 0.5);
  CHECK(date_similarity(ymd(2024, 1, 1), ymd(2022, 1, 1), kCfg) == 0.25);
  CHECK(date_similarity(ymd(2020, 1, 1), ymd(2020, 1, 1) + days{730}, kCfg) == 0.25);
}

TEST_CASE("boolean similarity") {
  CHECK(boolean_similarity(true, true) == 1.0);
  CHECK(boolean_similarity(true, false) == 0.0);
}

TEST_CASE("string similarity") {
  testing::StubEmbedder stub;
  stub.set("a", {1, 0, 0, 0});
  stub.set("b", {0, 1, 0, 0});
  stub.set("neg", {-1, 0, 0, 0});
  CHECK(string_similarity("John Smith", "John Smith", stub) == 1.0);
  CHECK(stub.calls() == 0);
  CHECK(string_similarity("a", "b", stub) == 0.0);
  CHECK(string_similarity("a", "neg", stub) == 0.0);

  DeterministicEmbedder det;
  const double s = string_similarity("John Smith", "John P. Smith", det);
  CHECK(s > 0.5);
  CHECK(s < 1.0);

  testing::FailingEmbedder down;
  CHECK_THROWS_AS(string_similarity("x", "y", down), Error);
  CHECK(string_similarity("x", "x", down) == 1.0);
}

TEST_CASE("list similarity examples") {
  testing::StubEmbedder stub;
  stub.set("a", {1, 0, 0, 0});
  stub.set("b", {0, 1, 0, 0});
  stub.set("x", {1, 0, 0, 0});
  stub.set("y", {0.3, std::sqrt(1 - 0.09), 0, 0});
  CHECK(list_similarity({}, {}, nullptr, kCfg, stub) == 1.0);
  CHECK(list_similarity({"a"}, {}, nullptr, kCfg, stub) == 0.0);
  CHECK(list_similarity({}, {"a"}, nullptr, kCfg, stub) == 0.0);
  CHECK(list_similarity({"a"}, {"a", "b"}, nullptr, kCfg, stub) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(string_similarity("x", "y", stub) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(list_similarity({"x"}, {"y"}, nullptr, kCfg, stub) == 0.0);
}

TEST_CASE("list similarity from scores") {
  CHECK(list_similarity_from_scores(ScoreMatrix(2, 2, {0.9, 0.8, 0.85, 0.1}), 0.35) ==
        doctest::Approx(2 * 1.65 / 4).epsilon(1e-12));
  CHECK(list_similarity_from_scores(ScoreMatrix(1, 1, {0.35}), 0.35) == 0.0);
  CHECK(list_similarity_from_scores(ScoreMatrix(0, 0), 0.35) == 1.0);
}

TEST_CASE("list similarity properties") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = dim(rng), c = dim(rng);
    ScoreMatrix s(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) s(i, j) = u(rng);
    const double base = list_similarity_from_scores(s, 0.35);
    CHECK(base >= 0.0);
    CHECK(base <= 1.0);
    CHECK(list_similarity_from_scores(s.transposed(), 0.35) == doctest::Approx(base).epsilon(1e-12));

    ScoreMatrix grown(r + 1, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) grown(i, j) = s(i, j);
    for (std::size_t j = 0; j < c; ++j) grown(r, j) = 0.2;
    const double after = list_similarity_from_scores(grown, 0.35);
    if (base > 0.0) CHECK(after < base);
    else CHECK(after == 0.0);

    double prev = base;
    for (double tau : {0.4, 0.5, 0.6, 0.8, 0.95}) {
      const double v = list_similarity_from_scores(s, tau);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("field similarity dispatch") {
  DeterministicEmbedder e;
  CHECK(fs("Financial Conduct Authority", "Financial Conduct Authority", e) == 1.0);
  CHECK(fs(true, false, e) == 0.0);
  CHECK(fs(true, true, e) == 1.0);
  CHECK(fs(FieldValue::Object{{"x", 1}, {"y", "a"}}, FieldValue::Object{{"x", 1}, {"y", "a"}}, e) == 1.0);
  CHECK(fs(FieldValue::Object{{"x", 1}}, FieldValue::Object{{"x", 1}, {"y", "a"}}, e) == 0.5);
  CHECK(fs(FieldValue::Object{{"x", 2}}, FieldValue::Object{}, e) == 1.0);
  CHECK(field_similarity(nullptr, FieldValue("a"), nullptr, kCfg, e) == 0.0);
  CHECK(fs(110, 100, e) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(fs("2023-01-01", "2024-01-01", e) == 0.5);
  CHECK(fs("March 1, 2024", "2024/03/01", e) == 1.0);
  CHECK(fs("true", true, e) == 1.0);
  CHECK(fs("TRUE", true, e) == 1.0);
  CHECK(fs("yes", true, e) == 0.0);
  CHECK(fs(42, "42", e) == 1.0);
  CHECK(fs("Zürich", FieldValue::List{"Zürich"}, e) == 1.0);
  CHECK(fs(FieldValue::List{"a", "b"}, "a", e) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(fs(nullptr, nullptr, e) == 1.0);
}

TEST_CASE("self comparison scores 1 for every kind") {
  DeterministicEmbedder e;
  const FieldValue values[] = {
      nullptr, true, 3.5, 0, "text", "2024-05-06",
      FieldValue::List{}, FieldValue::List{"a", 1, false},
      FieldValue::Object{{"k", FieldValue::List{1, 2}}, {"m", FieldValue::Object{{"z", "q"}}}},
  };
  for (const auto& v : values) CHECK(fs(v, v, e) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("similarity config validation") {
  SimilarityConfig ok;
  CHECK_NOTHROW(ok.validate());
  SimilarityConfig bad = ok;
  bad.tau = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ok;
  bad.date_half_life_days = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ok;
  bad.numeric_rel_cap = -1;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK(ok.to_json()["tau"] == 0.35);
}

TEST_CASE("date parsing") {
  CHECK(parse_date("2024-02-29") == ymd(2024, 2, 29));
  CHECK(!parse_date("2023-02-29"));
  CHECK(parse_date("2024-02-01T10:00:00Z") == ymd(2024, 2, 1));
  CHECK(parse_date("  sep 5, 2021 ") == ymd(2021, 9, 5));
  CHECK(parse_date("1999") == ymd(1999, 1, 1));
  CHECK(!parse_date("Smarch 5, 2021"));
  CHECK(!parse_date("12345"));
  CHECK(!parse_date("the year 1999"));
}
