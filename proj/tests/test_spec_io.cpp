#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ebcert/encoding.hpp"
#include "ebcert/random.hpp"

using namespace ebcert;
using nlohmann::json;

namespace {

double action_difference(const Channel& a, const Channel& b, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const ComplexMatrix rho = random_density_matrix(a.dim_in(), rng).matrix();
    worst = std::max(worst, (a.apply_operator(rho) - b.apply_operator(rho)).cwiseAbs().maxCoeff());
  }
  return worst;
}

json valid_holevo() {
  return json::parse(R"({
    "kind": "holevo", "dim_in": 2, "dim_out": 2,
    "pairs": [
      {"R": [[[1,0],[0,0]],[[0,0],[0,0]]], "X": [[[1,0],[0,0]],[[0,0],[0,0]]]},
      {"R": [[[0,0],[0,0]],[[0,0],[1,0]]], "X": [[[0,0],[0,0]],[[0,0],[1,0]]]}
    ]})");
}

std::string invariant_of(const json& j) {
  try {
    decode_channel(j);
  } catch (const Error& e) {
    return e.invariant();
  }
  return "";
}

}  // namespace

TEST_CASE("matrix encoding round-trips exactly") {
  Rng rng(1);
  const ComplexMatrix m = ginibre(2, 3, rng);
  const json j = encode_matrix(m);
  CHECK(j.size() == 2);
  CHECK(j[0].size() == 3);
  CHECK(j[0][1][0].get<double>() == m(0, 1).real());
  CHECK(j[0][1][1].get<double>() == m(0, 1).imag());
  CHECK(decode_matrix(json::parse(j.dump())) == m);

  CHECK_THROWS_WITH_AS(decode_matrix(json::parse("[[1, 2]]")), doctest::Contains("schema"), Error);
  CHECK_THROWS_WITH_AS(decode_matrix(json::parse("[[[1, 0]], [[1, 0], [0, 0]]]")), doctest::Contains("schema"),
                       Error);
  CHECK_THROWS_AS(decode_matrix(json::parse("\"[1,0]\"")), Error);
}

TEST_CASE("channel specs round-trip") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Channel c = trial % 2 ? Channel(random_eb_channel(2 + trial % 3, 1 + trial % 4, 1 + trial % 4, rng()))
                                : Channel(random_channel(2, 2 + trial % 3, 1 + trial % 3, rng()));
    const json j = encode_channel(c);
    const Channel back = decode_channel(json::parse(j.dump()));
    CHECK(back.is_holevo() == c.is_holevo());
    CHECK(action_difference(c, back, rng) <= 1e-12);
    CHECK(encode_channel(back).dump() == j.dump());
  }
  CHECK(decode_channel(valid_holevo()).is_holevo());
}

TEST_CASE("corrupted channel specs name the violated invariant") {
  json j = valid_holevo();
  j["pairs"][1]["X"][1][1] = json::array({0.5, 0.0});
  CHECK(invariant_of(j) == "povm_completeness");

  j = valid_holevo();
  j["pairs"][0]["X"] = json::parse("[[[1.5,0],[0,0]],[[0,0],[0,0]]]");
  j["pairs"][1]["X"] = json::parse("[[[-0.5,0],[0,0]],[[0,0],[1,0]]]");
  CHECK(invariant_of(j) == "povm_psd");

  j = valid_holevo();
  j["pairs"][0]["R"][0][0] = json::array({0.7, 0.0});
  CHECK(invariant_of(j) == "unit_trace");

  j = valid_holevo();
  j["pairs"][0]["X"][0][1] = json::array({0.3, 0.0});
  CHECK(invariant_of(j) == "hermitian");

  j = valid_holevo();
  j["kraus"] = json::array();
  CHECK(invariant_of(j) == "schema");

  j = valid_holevo();
  j["kind"] = "kraus";
  CHECK(invariant_of(j) == "schema");

  j = valid_holevo();
  j.erase("dim_in");
  CHECK(invariant_of(j) == "schema");

  j = valid_holevo();
  j["dim_out"] = 3;
  CHECK(invariant_of(j) == "dimension");

  const json kraus = json::parse(R"({"kind": "kraus", "dim_in": 2, "dim_out": 2,
                                     "kraus": [[[[0.9,0],[0,0]],[[0,0],[0.9,0]]]]})");
  CHECK(invariant_of(kraus) == "trace_preservation");
}

TEST_CASE("state files") {
  Rng rng(3);
  const DensityMatrix rho = random_density_matrix(3, rng);
  const json j = encode_state(rho);
  CHECK(j["dim"] == 3);
  CHECK(decode_state(json::parse(j.dump())).matrix() == rho.matrix());

  json bad = j;
  bad["dim"] = 2;
  CHECK_THROWS_WITH_AS(decode_state(bad), doctest::Contains("dimension"), Error);
  bad = j;
  bad["matrix"][0][0] = json::array({5.0, 0.0});
  CHECK_THROWS_WITH_AS(decode_state(bad), doctest::Contains("unit_trace"), Error);
  CHECK_THROWS_WITH_AS(decode_state(json::parse("[]")), doctest::Contains("schema"), Error);
}
