#include <cmath>
#include <cstdio>
#include <fstream>

#include <catch2/catch_amalgamated.hpp>

#include "szq/corpus.hpp"
#include "szq/json_io.hpp"

using namespace szq;

TEST_CASE("potential JSON round trip is bit exact") {
  for (const auto& entry : corpus()) {
    const Json j1 = potential_to_json(entry.potential);
    const Potential p2 = potential_from_json(j1);
    const Json j2 = potential_to_json(p2);
    INFO(entry.name);
    CHECK(j1.dump() == j2.dump());
    CHECK(p2 == entry.potential);
  }
}

TEST_CASE("round trip through a file") {
  const std::string path = "roundtrip_tmp.json";
  const auto p = Potential::scalar_delta(-2.0);
  write_json_file(path, potential_to_json(p));
  const Potential q = potential_from_json(load_json_file(path));
  CHECK(q == p);
  std::remove(path.c_str());
}

TEST_CASE("schema violations name the offending field") {
  auto base = potential_to_json(Potential::scalar_delta(-2.0));

  SECTION("unknown top-level key") {
    Json j = base;
    j["extra"] = 1;
    CHECK_THROWS_WITH(potential_from_json(j),
                      Catch::Matchers::ContainsSubstring("extra"));
  }
  SECTION("missing m") {
    Json j = base;
    j.erase("m");
    CHECK_THROWS_WITH(potential_from_json(j),
                      Catch::Matchers::ContainsSubstring("\"m\""));
  }
  SECTION("nonpositive m") {
    Json j = base;
    j["m"] = 0;
    CHECK_THROWS_WITH(potential_from_json(j),
                      Catch::Matchers::ContainsSubstring("\"m\""));
  }
  SECTION("missing Q") {
    Json j = base;
    j.erase("Q");
    CHECK_THROWS_WITH(potential_from_json(j),
                      Catch::Matchers::ContainsSubstring("\"Q\""));
  }
  SECTION("bad complex entry") {
    Json j = base;
    j["Q"]["pieces"][0][0][0] = Json::array({1.0});
    CHECK_THROWS_AS(potential_from_json(j), ConfigError);
  }
  SECTION("coefficient matrix of the wrong size") {
    Json j = base;
    j["Q"]["pieces"][0][0].push_back(Json::array({0.0, 0.0}));
    CHECK_THROWS_WITH(potential_from_json(j),
                      Catch::Matchers::ContainsSubstring("m*m"));
  }
  SECTION("unknown extension") {
    Json j = base;
    j["Q"]["extension"] = "periodic";
    CHECK_THROWS_AS(potential_from_json(j), ConfigError);
  }
  SECTION("unknown key inside Q") {
    Json j = base;
    j["Q"]["slope"] = 3;
    CHECK_THROWS_WITH(potential_from_json(j),
                      Catch::Matchers::ContainsSubstring("slope"));
  }
}

TEST_CASE("hand-written delta config parses to scalar_delta(-2)") {
  const char* text = R"({
    "m": 1,
    "Q": {
      "breakpoints": [0.0],
      "pieces": [[[[0.0, 0.0]]], [[[-2.0, 0.0]]]]
    },
    "s": {
      "breakpoints": [],
      "pieces": [[[[0.0, 0.0]]]]
    }
  })";
  const Potential p = potential_from_json(Json::parse(text));
  CHECK(p == Potential::scalar_delta(-2.0));
}

TEST_CASE("file errors surface as ConfigError") {
  CHECK_THROWS_AS(load_json_file("no_such_file_here.json"), ConfigError);
  const std::string path = "broken_tmp.json";
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_json_file(path), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("corpus structure") {
  const auto entries = corpus();
  REQUIRE(entries.size() == 9);
  for (const auto& e : entries) {
    INFO(e.name);
    CHECK_FALSE(e.name.empty());
    CHECK(classify_symmetry(e.potential) == e.expected_class);
    CHECK_FALSE(e.expectations.empty());
    for (const auto& x : e.expectations) {
      CHECK_FALSE(x.description.empty());
      CHECK_FALSE(x.provenance.empty());
    }
  }
  // names are unique
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j)
      CHECK(entries[i].name != entries[j].name);
}

TEST_CASE("step well potential shape") {
  const auto p = step_well_potential();
  CHECK(p.Q().jump_points().empty());  // continuous ramp
  CHECK(std::abs(p.Q().eval(-1.0)(0, 0)) < 1e-15);
  CHECK(std::abs(p.Q().eval(0.0)(0, 0) - Complex(-1.5, 0.0)) < 1e-15);
  CHECK(std::abs(p.Q().eval(1.0)(0, 0) - Complex(-3.0, 0.0)) < 1e-15);
  CHECK(std::abs(p.Q().eval(4.0)(0, 0) - Complex(-3.0, 0.0)) < 1e-15);
  const auto d = p.Q().derivative();
  CHECK(std::abs(d.eval(0.3)(0, 0) - Complex(-1.5, 0.0)) < 1e-15);
  CHECK(std::abs(d.eval(-2.0)(0, 0)) < 1e-15);
  CHECK(std::abs(d.eval(2.0)(0, 0)) < 1e-15);
}

TEST_CASE("miura potential approximates q = 1") {
  const auto p = miura_tanh_potential();
  const auto qprime = p.Q().derivative();
  for (int i = 0; i <= 80; ++i) {
    const double x = -4.0 + 8.0 * i / 80.0;
    if (std::abs(x - std::round(x)) < 1e-9) continue;  // skip joints
    const Complex q = qprime.eval(x)(0, 0) + p.s().eval(x)(0, 0);
    CHECK(std::abs(q - Complex(1.0, 0.0)) < 0.02);
  }
  // Q itself tracks tanh closely
  for (double x : {-3.3, -0.7, 0.4, 2.9})
    CHECK(std::abs(p.Q().eval(x)(0, 0) - Complex(std::tanh(x), 0.0)) < 1e-3);
}
