#include <doctest.h>

#include "flowtest/lattice.hpp"
#include "oracles.hpp"

using namespace flowtest;

TEST_CASE("two-point order") {
  Lattice lat = Lattice::two_point();
  Label L = lat.parse("L"), H = lat.parse("H");
  CHECK(lat.flows_to(L, H));
  CHECK_FALSE(lat.flows_to(H, L));
  CHECK(lat.join(L, H) == H);
  CHECK(lat.join(L, L) == L);
  CHECK(lat.bottom() == L);
  CHECK(lat.top() == H);
}

TEST_CASE("reflexivity on every instance") {
  for (auto name : {"two-point", "diamond", "one-point"}) {
    Lattice lat = Lattice::named(name);
    for (Label x : lat.labels()) CHECK(lat.flows_to(x, x));
  }
}

TEST_CASE("diamond: M1 and M2 are incomparable, join is H") {
  Lattice lat = Lattice::diamond();
  Label M1 = lat.parse("M1"), M2 = lat.parse("M2"), H = lat.parse("H"), L = lat.parse("L");
  CHECK_FALSE(lat.flows_to(M1, M2));
  CHECK_FALSE(lat.flows_to(M2, M1));
  CHECK(lat.flows_to(L, M1));
  CHECK(lat.flows_to(M2, H));
  // expected value computed by the brute-force lub oracle
  std::vector<std::vector<bool>> leq = {
      {true, true, true, true},
      {false, true, false, true},
      {false, false, true, true},
      {false, false, false, true},
  };
  auto lub = oracle::brute_lub(leq, M1.id, M2.id);
  REQUIRE(lub.has_value());
  CHECK(*lub == H);
  CHECK(lat.join(M1, M2) == *lub);
}

TEST_CASE("join table matches the brute-force lub everywhere") {
  std::vector<std::vector<bool>> diamond_leq = {
      {true, true, true, true},
      {false, true, false, true},
      {false, false, true, true},
      {false, false, false, true},
  };
  Lattice lat = Lattice::diamond();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      auto lub = oracle::brute_lub(diamond_leq, a, b);
      REQUIRE(lub.has_value());
      CHECK(lat.join(Label{uint8_t(a)}, Label{uint8_t(b)}) == *lub);
    }
}

TEST_CASE("join laws over all shipped lattices") {
  for (auto name : {"two-point", "diamond", "one-point"}) {
    Lattice lat = Lattice::named(name);
    for (Label a : lat.labels())
      for (Label b : lat.labels()) {
        CHECK(lat.flows_to(a, lat.join(a, b)));
        CHECK(lat.flows_to(b, lat.join(a, b)));
        CHECK(lat.join(a, b) == lat.join(b, a));
        CHECK(lat.join(a, a) == a);
        for (Label c : lat.labels()) {
          CHECK(lat.join(lat.join(a, b), c) == lat.join(a, lat.join(b, c)));
          if (lat.flows_to(a, c) && lat.flows_to(b, c)) CHECK(lat.flows_to(lat.join(a, b), c));
        }
      }
    for (Label x : lat.labels()) CHECK(lat.flows_to(lat.bottom(), x));
  }
}

TEST_CASE("one-point matrix [[true]] gives bottom = top") {
  Lattice lat({"X"}, {{true}});
  CHECK(lat.bottom() == lat.top());
  CHECK(lat.size() == 1);
}

TEST_CASE("construction rejects non-partial-orders") {
  CHECK_THROWS_AS(Lattice({"a", "b"}, {{false, true}, {false, true}}), NotAPartialOrder);
  CHECK_THROWS_AS(Lattice({"a", "b"}, {{true, true}, {true, true}}), NotAPartialOrder);
  // two maximal elements: no unique join
  CHECK_THROWS_AS(Lattice({"a", "b", "c"},
                          {{true, true, true}, {false, true, false}, {false, false, true}}),
                  NoUniqueJoin);
}

TEST_CASE("config text loads with reflexive-transitive closure") {
  Lattice lat = Lattice::from_config("L M1 M2 H\nL <= M1\nL <= M2\nM1 <= H\nM2 <= H\n");
  CHECK(lat.size() == 4);
  CHECK(lat.flows_to(lat.parse("L"), lat.parse("H")));  // via closure
  CHECK(lat.join(lat.parse("M1"), lat.parse("M2")) == lat.parse("H"));
}

TEST_CASE("config text rejects a non-lattice") {
  CHECK_THROWS(Lattice::from_config("a b c\na <= b\na <= c\n"));
}
