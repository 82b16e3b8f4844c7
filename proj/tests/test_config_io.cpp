#include <doctest.h>

#include <cmath>

#include "apdiff/config.hpp"
#include "apdiff/errors.hpp"
#include "apdiff/io.hpp"

using namespace apdiff;

TEST_CASE("sine preset") {
  const SystemConfig c = load_config(parse_json_text(R"({"preset":"sine","epsilon":0.05,"alpha":"golden4"})"));
  CHECK(c.scheme.internal().torus_dim() == 1);
  CHECK(c.deformation.sup_norm() == doctest::Approx(0.05));
  const auto f = physical_deformation(c);
  REQUIRE(f);
  CHECK(f->vector_value({3.0})[0] == doctest::Approx(0.05 * std::sin(kTwoPi * golden4() * 3)));
}

TEST_CASE("explicit form matches the preset") {
  const SystemConfig e = load_config(parse_json_text(R"({
    "phys_dim": 1,
    "internal": [{"torus": 1}],
    "generators": [{"phys": [1], "internal": [0.25]}],
    "weight": {"family": "constant"},
    "deformation": {"family": "torus_trig",
                    "components": [{"amp": 0.1, "freq": [1], "shape": "sin"}]}
  })"));
  const SystemConfig p = load_config(parse_json_text(R"({"preset":"sine","epsilon":0.1,"alpha":0.25})"));
  CHECK(structurally_equal(e.scheme, p.scheme));
  const InternalPoint y = e.scheme.internal().point({0.1});
  CHECK(e.deformation(y)[0] == doctest::Approx(p.deformation(y)[0]));
}

TEST_CASE("errors carry the field path") {
  auto msg = [](const char* text) {
    try {
      load_config(parse_json_text(text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(msg(R"({"preset":"sine","epsilon":0.05,"alpha":0.1,"bogus":1})").find("bogus") != std::string::npos);
  CHECK(msg(R"({"preset":"nope"})").find("preset") != std::string::npos);
  CHECK(msg(R"({"phys_dim":1,"internal":[{"torus":1}],"generators":[{"phys":[1],"internal":[0.2]}],
                "weight":{"family":"tent"},"deformation":{"family":"zero"}})")
            .find("weight") != std::string::npos);
  CHECK_THROWS_AS(parse_json_text("{\"a\": "), ConfigError);
}

TEST_CASE("canonical dump is stable") {
  const Json j = parse_json_text(R"({"b": 1.5, "a": [1, 2.0, "x"], "c": {"z": 0.1, "y": null}})");
  const std::string once = canonical_dump(j);
  CHECK(canonical_dump(parse_json_text(once)) == once);
  CHECK(once.find("\"a\"") < once.find("\"b\""));
  CHECK(once.find("0.10000000000000001") != std::string::npos);
  CHECK(once.find("2.0") != std::string::npos);
}

TEST_CASE("literal forms") {
  const ApFunction a = parse_scalar_ap(parse_json_text(R"({"frequencies": [[0.5]], "coefficients": [[1, 2]]})"), 1, "f");
  CHECK(std::abs(a.value({0.0}) - Complex(1, 2)) < 1e-15);
  const ApFunction b = parse_scalar_ap(parse_json_text(R"([{"constant": 2}, {"amp": 1, "freq": ["1/3"]}])"), 1, "f");
  CHECK(b.value({0.0}).real() == doctest::Approx(3.0));
  REQUIRE(b.components()[0].size() == 3);
  REQUIRE(b.components()[0][1].exact);
  CHECK((*b.components()[0][1].exact)[0] == Rational(1, 3));
  CHECK((*b.components()[0][2].exact)[0] == Rational(-1, 3));
  CHECK_THROWS_AS(parse_vector_ap(parse_json_text(R"({"components": []})"), 1, 1, "g"), ConfigError);
}

TEST_CASE("modulation folds into a composed scheme") {
  const SystemConfig c = load_config(parse_json_text(R"({"preset":"integers",
      "modulation": {"displacement": {"components": [{"amp": 0.1, "freq": [0.3819660112501051]}]}}})"));
  const EffectiveSystem s = effective_system(c);
  CHECK(s.scheme.internal().torus_dim() == 1);
  CHECK(s.deformation.sup_norm() == doctest::Approx(0.1));
}

TEST_CASE("ideal crystal preset") {
  const SystemConfig c = load_config(parse_json_text(R"({"preset":"ideal_crystal","gamma_basis":[[1]],"offsets":[[0],[0.5]]})"));
  REQUIRE(c.crystal);
  CHECK(c.crystal->offsets().size() == 2);
  CHECK(c.scheme.density() == doctest::Approx(2.0));
}

TEST_CASE("points round trip") {
  const WeightedComb c(2, {{{0.1, -2.0}, Complex(1, -0.5), KLabel{3, -1}}, {{1.0 / 3, 0.0}, 2.0, std::nullopt}},
                       Box::cube(2, 3), Box::cube(2, 2), "abc");
  const std::string csv = points_csv(c);
  CHECK(csv.rfind("x_1,x_2,re_weight,im_weight,k\n", 0) == 0);
  const Json meta = parse_json_text(canonical_dump(points_meta(c)));
  const WeightedComb back = parse_points_csv(csv, &meta);
  REQUIRE(back.size() == 2);
  CHECK(back.atoms()[0].position == c.atoms()[0].position);
  CHECK(back.atoms()[1].position[0] == 1.0 / 3);
  CHECK(back.atoms()[0].weight == c.atoms()[0].weight);
  CHECK(*back.atoms()[0].label == KLabel{3, -1});
  CHECK(back.exhaustive_region() == c.exhaustive_region());
  CHECK(back.fingerprint() == "abc");
  CHECK(points_csv(back) == csv);
}

TEST_CASE("bad points files") {
  CHECK_THROWS_AS(parse_points_csv("a,b\n"), ConfigError);
  CHECK_THROWS_AS(parse_points_csv("x_1,re_weight,im_weight\n1,2\n"), ConfigError);
  CHECK_THROWS_AS(parse_points_csv("x_1,re_weight,im_weight\n1,zz,0\n"), ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_number(M_PI)) == M_PI);
}
