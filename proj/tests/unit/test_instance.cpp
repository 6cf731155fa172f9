#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "rhgs/errors.hpp"
#include "rhgs/instance.hpp"

using namespace rhgs;

namespace {

const char* kTriangle = R"(NAME : tri
TYPE : CVRP
DIMENSION : 3
EDGE_WEIGHT_TYPE : EUC_2D
CAPACITY : 10
NODE_COORD_SECTION
1 0 0
2 3 4
3 0 5
DEMAND_SECTION
1 0
2 1
3 1
DEPOT_SECTION
1
-1
EOF
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("minimal three-vertex file") {
  Instance inst = parse_cvrplib(kTriangle);
  CHECK(inst.customer_count() == 2);
  CHECK(inst.capacity() == 10);
  CHECK(inst.distance(0, 1) == 5.0);
  CHECK(inst.distance(0, 2) == 5.0);
  CHECK(inst.distance(1, 2) == 3.0);  // sqrt(10) = 3.16 rounds to 3
  CHECK(inst.demand(0) == 0);
  CHECK(inst.name() == "tri");
}

TEST_CASE("depot from DEPOT_SECTION is remapped to vertex 0") {
  std::string text = replace(kTriangle, "DEPOT_SECTION\n1\n", "DEPOT_SECTION\n2\n");
  text = replace(text, "1 0\n2 1\n", "1 1\n2 0\n");
  Instance inst = parse_cvrplib(text);
  CHECK(inst.coords()[0] == Point{3, 4});
  CHECK(inst.coords()[1] == Point{0, 0});
  CHECK(inst.coords()[2] == Point{0, 5});
  CHECK(inst.demand(0) == 0);
}

TEST_CASE("parse errors") {
  SUBCASE("demand above capacity") {
    CHECK_THROWS_AS(parse_cvrplib(replace(kTriangle, "2 1\n3 1", "2 11\n3 1")), ValidationError);
  }
  SUBCASE("missing sections are named") {
    for (auto [cut, name] : {std::pair{"CAPACITY : 10\n", "CAPACITY"}, std::pair{"DIMENSION : 3\n", "DIMENSION"},
                             std::pair{"DEMAND_SECTION\n1 0\n2 1\n3 1\n", "DEMAND_SECTION"},
                             std::pair{"NODE_COORD_SECTION\n1 0 0\n2 3 4\n3 0 5\n", "NODE_COORD_SECTION"}}) {
      try {
        parse_cvrplib(replace(kTriangle, cut, ""));
        FAIL("expected a parse error for missing " << name);
      } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(name) != std::string::npos);
      }
    }
  }
  SUBCASE("non-euclidean weight type") {
    CHECK_THROWS_AS(parse_cvrplib(replace(kTriangle, "EUC_2D", "GEO")), UnsupportedFormatError);
  }
}

TEST_CASE("distance rounding") {
  CHECK(euclidean({0, 0}, {3, 4}, Rounding::Nearest) == 5.0);
  CHECK(euclidean({0, 0}, {1, 1}, Rounding::Nearest) == 1.0);
  CHECK(euclidean({0, 0}, {1, 1}, Rounding::Exact) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("distance is symmetric with zero diagonal on 10000 random pairs") {
  Instance inst = generate_instance(parse_generator_spec("n=200,depot=random,customers=mixed,demand=small,r=8"), 5);
  Rng rng(11);
  for (int k = 0; k < 10000; ++k) {
    int i = static_cast<int>(uniform_int(rng, 0, 200));
    int j = static_cast<int>(uniform_int(rng, 0, 200));
    REQUIRE(inst.distance(i, j) == inst.distance(j, i));
    REQUIRE(inst.distance(i, j) >= 0);
    REQUIRE(inst.distance(i, i) == 0);
  }
}

TEST_CASE("emit/parse round trip") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Instance a = testing::random_instance(1 + trial % 20, 30, 10, rng);
    Instance b = parse_cvrplib(emit_cvrplib(a));
    CHECK(a == b);
    CHECK(emit_cvrplib(b) == emit_cvrplib(a));
  }
  Instance tri = parse_cvrplib(kTriangle);
  CHECK(parse_cvrplib(emit_cvrplib(tri)) == tri);
}

TEST_CASE("generated instances round trip and keep their generator spec") {
  Instance g = generate_instance(parse_generator_spec("n=30,depot=eccentric,customers=clustered,demand=large,r=4"), 9);
  Instance back = parse_cvrplib(emit_cvrplib(g));
  CHECK(back == g);
  REQUIRE(back.generator());
  CHECK(*back.generator() == *g.generator());
}

TEST_CASE("generator: unitary demand gives Q = r") {
  Instance inst = generate_instance(parse_generator_spec("n=100,depot=random,customers=random,demand=unitary,r=10"), 42);
  CHECK(inst.customer_count() == 100);
  CHECK(inst.capacity() == 10);
  for (int i = 1; i <= 100; ++i) CHECK(inst.demand(i) == 1);
}

TEST_CASE("generator: Q from the emitted demand vector") {
  Instance inst = generate_instance(parse_generator_spec("n=100,depot=central,customers=clustered,demand=small,r=5"), 7);
  double mean = 0;
  for (int i = 1; i <= 100; ++i) {
    CHECK(inst.demand(i) >= 1);
    CHECK(inst.demand(i) <= 10);
    mean += inst.demand(i);
  }
  mean /= 100;
  CHECK(inst.capacity() == static_cast<int>(std::ceil(5 * mean - 1e-9)));
  CHECK(inst.coords()[0] == Point{500, 500});
}

TEST_CASE("generator is deterministic and on the integer grid") {
  auto spec = parse_generator_spec("n=100,depot=random,customers=mixed,demand=large,r=3");
  CHECK(emit_cvrplib(generate_instance(spec, 42)) == emit_cvrplib(generate_instance(spec, 42)));
  CHECK(emit_cvrplib(generate_instance(spec, 42)) != emit_cvrplib(generate_instance(spec, 43)));
  const Instance inst = generate_instance(spec, 42);
  for (const auto& p : inst.coords()) {
    CHECK(p.x == std::floor(p.x));
    CHECK(p.x >= 0);
    CHECK(p.x <= 1000);
    CHECK(p.y == std::floor(p.y));
    CHECK(p.y >= 0);
    CHECK(p.y <= 1000);
  }
}

TEST_CASE("generator rejects bad specs") {
  CHECK_THROWS_AS(generate_instance(parse_generator_spec("n=0"), 1), DomainError);
  CHECK_THROWS_AS(generate_instance(parse_generator_spec("n=10,r=0.5"), 1), DomainError);
  CHECK_THROWS_AS(parse_generator_spec("n=10,shape=round"), ParseError);
}

TEST_CASE("bks sidecar") {
  CHECK(parse_bks("27591\n") == 27591);
  CHECK_THROWS(parse_bks("abc"));
  auto dir = std::filesystem::temp_directory_path() / "rhgs_bks_test";
  std::filesystem::create_directories(dir);
  save_cvrplib(parse_cvrplib(kTriangle), (dir / "tri.vrp").string());
  std::ofstream(dir / "tri.bks") << "12\n";
  Instance inst = load_cvrplib((dir / "tri.vrp").string());
  REQUIRE(inst.bks());
  CHECK(*inst.bks() == 12);
  std::filesystem::remove_all(dir);
}
