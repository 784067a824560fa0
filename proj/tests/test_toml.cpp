#include <doctest.h>

#include "posefuse/error.hpp"
#include "toml.hpp"

using posefuse::Error;

TEST_CASE("toml scalars, arrays and sections") {
  const auto doc = posefuse::toml::parse(R"(
# pipeline settings
gamma = 0.18
jobs = 4
persons = "all"
verbose = false
estimators = ["lcrnet", "alphapose", "openpose"]
bins = [0, 0.5, 1.0]

[trace]
width = 640

[estimator.expert_a]
person_miss_p = 0.25  # detector style
)");

  CHECK(doc["gamma"].get<double>() == 0.18);
  CHECK(doc["jobs"].get<int>() == 4);
  CHECK(doc["jobs"].is_number_integer());
  CHECK(doc["persons"].get<std::string>() == "all");
  CHECK(doc["verbose"].get<bool>() == false);
  REQUIRE(doc["estimators"].size() == 3);
  CHECK(doc["estimators"][2].get<std::string>() == "openpose");
  CHECK(doc["bins"][1].get<double>() == 0.5);
  CHECK(doc["trace"]["width"].get<int>() == 640);
  CHECK(doc["estimator"]["expert_a"]["person_miss_p"].get<double>() == 0.25);
}

TEST_CASE("toml preserves section order") {
  const auto doc = posefuse::toml::parse(R"(
[estimator.zeta]
jitter_sigma = 1.0
[estimator.alpha]
jitter_sigma = 2.0
)");
  std::vector<std::string> names;
  for (const auto& [name, obj] : doc["estimator"].items()) names.push_back(name);
  REQUIRE(names.size() == 2);
  CHECK(names[0] == "zeta");
  CHECK(names[1] == "alpha");
}

TEST_CASE("toml strings with escapes and hash signs") {
  const auto doc = posefuse::toml::parse(R"(path = "out#dir\\x"
note = "line\nbreak")");
  CHECK(doc["path"].get<std::string>() == "out#dir\\x");
  CHECK(doc["note"].get<std::string>() == "line\nbreak");
}

TEST_CASE("toml errors carry the line number") {
  try {
    posefuse::toml::parse("a = 1\nrubbish line\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(posefuse::toml::parse("x = \"unterminated"), Error);
  CHECK_THROWS_AS(posefuse::toml::parse("[bad"), Error);
  CHECK_THROWS_AS(posefuse::toml::parse("k = [1, 2"), Error);
}
