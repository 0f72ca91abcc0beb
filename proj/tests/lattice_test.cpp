#include <doctest.h>

#include "chorsec/lattice.hpp"
#include "support.hpp"

using namespace chorsec;
using namespace chorsec::test;

namespace {

Policy recovery_policy() { return parse_policy(read_fixture("recovery.policy")); }

}  // namespace

TEST_CASE("two-point chain parses and joins") {
  Policy pol = parse_policy("element Low\nelement High\nbottom Low\nleq Low High\nlow Low\n");
  CHECK(pol.lattice.join("Low", "High") == "High");
  CHECK(pol.lattice.leq("Low", "Low"));
  CHECK(pol.lattice.leq("Low", "High"));
  CHECK_FALSE(pol.lattice.leq("High", "Low"));
  CHECK(pol.low == "Low");
}

TEST_CASE("diamond join matches the brute-force least upper bound") {
  const std::vector<std::string> elems = {"Low", "A", "B", "Top"};
  const std::vector<std::pair<std::string, std::string>> edges = {
      {"Low", "A"}, {"Low", "B"}, {"A", "Top"}, {"B", "Top"}};
  Lattice lat = Lattice::make(elems, "Low", edges);
  for (const auto& a : elems)
    for (const auto& b : elems) {
      auto expected = brute_force_join(elems, edges, a, b);
      REQUIRE(expected.has_value());
      CHECK(lat.join(a, b) == *expected);
    }
  CHECK(lat.join("A", "B") == "Top");
}

TEST_CASE("policy parse errors") {
  CHECK_THROWS_WITH_AS(parse_policy("element A\nelement A\nbottom A\nlow A\n"),
                       "duplicate element 'A'", PolicyError);
  // bottom not below B: no edge from A to B
  CHECK_THROWS_WITH_AS(parse_policy("element A\nelement B\nbottom A\nlow A\n"),
                       "bottom not below B", PolicyError);
  CHECK_THROWS_AS(parse_policy("element A\nlow A\n"), PolicyError);    // missing bottom
  CHECK_THROWS_AS(parse_policy("element A\nbottom A\n"), PolicyError); // missing low
  CHECK_THROWS_AS(parse_policy("element A\nbottom A\nlow A\nleq A B\n"), PolicyError);
  CHECK_THROWS_AS(parse_policy("element A\nelement B\nbottom A\nleq A B\nleq B A\nlow A\n"),
                  PolicyError);  // cycle among distinct elements
  CHECK_THROWS_AS(parse_policy("element A\nbottom A\nlow A\nnonsense X\n"), PolicyError);
  CHECK_THROWS_AS(parse_policy("element A\nbottom A\nlow A\nlabel noDotHere A\n"), PolicyError);
}

TEST_CASE("orders without unique joins are rejected") {
  // A and B have no common upper bound at all.
  CHECK_THROWS_AS(Lattice::make({"L", "A", "B"}, "L", {{"L", "A"}, {"L", "B"}}), PolicyError);
  // two incomparable minimal upper bounds T1, T2
  CHECK_THROWS_AS(Lattice::make({"L", "A", "B", "T1", "T2"}, "L",
                                {{"L", "A"},
                                 {"L", "B"},
                                 {"A", "T1"},
                                 {"B", "T1"},
                                 {"A", "T2"},
                                 {"B", "T2"}}),
                  PolicyError);
}

TEST_CASE("label lookup: declared, default, strict") {
  Policy pol = recovery_policy();
  CHECK(pol.label_of("s", "email") == "High");
  CHECK_THROWS_AS(pol.label_of("q", "tmp"), PolicyError);
  pol.default_label = "Low";
  CHECK(pol.label_of("q", "tmp") == "Low");
}

TEST_CASE("policy extern declarations") {
  Policy pol =
      parse_policy("element L\nbottom L\nlow L\nextern exists 1 bool\nextern mix 2 int\n");
  REQUIRE(pol.externs.size() == 2);
  CHECK(pol.externs[0].name == "exists");
  CHECK(pol.externs[0].arity == 1);
  CHECK(pol.externs[1].result == ExternDecl::Result::Int);
  CHECK_THROWS_AS(parse_policy("element L\nbottom L\nlow L\nextern f 1 bool\nextern f 2 bool\n"),
                  PolicyError);
  CHECK_THROWS_AS(parse_policy("element L\nbottom L\nlow L\nextern f one bool\n"), PolicyError);
}

TEST_CASE("low equivalence") {
  Policy pol = recovery_policy();
  CStore a;
  a["r"]["email"] = Value::of_str("x@y");
  a["r"]["msg"] = Value::of_str("hello");
  a["s"]["email"] = Value::of_int(1);
  CStore b = a;
  CHECK(low_equiv(pol, a, b));

  SUBCASE("difference on a high variable is invisible") {
    b["s"]["email"] = Value::of_int(2);
    CHECK(low_equiv(pol, a, b));
  }
  SUBCASE("difference on a low variable is visible") {
    b["r"]["msg"] = Value::of_str("bye");
    CHECK_FALSE(low_equiv(pol, a, b));
  }
  SUBCASE("domain mismatch is an error, not a verdict") {
    b["m"]["email"] = Value::of_int(3);
    CHECK_THROWS_AS(low_equiv(pol, a, b), PolicyError);
  }
}

TEST_CASE("low_equiv is an equivalence relation") {
  Policy pol = recovery_policy();
  pol.default_label = "Low";
  SplitMix64 rng(11);
  auto random_store = [&rng]() {
    CStore s;
    for (const char* p : {"r", "s"})
      for (const char* x : {"email", "msg"})
        s[p][x] = Value::of_int(static_cast<std::int64_t>(rng.below(3)));
    return s;
  };
  std::vector<CStore> stores;
  for (int i = 0; i < 12; ++i) stores.push_back(random_store());
  for (const auto& s : stores) CHECK(low_equiv(pol, s, s));
  for (const auto& s1 : stores)
    for (const auto& s2 : stores) {
      CHECK(low_equiv(pol, s1, s2) == low_equiv(pol, s2, s1));
      for (const auto& s3 : stores)
        if (low_equiv(pol, s1, s2) && low_equiv(pol, s2, s3)) CHECK(low_equiv(pol, s1, s3));
    }
}

TEST_CASE("lattice algebra invariants on every test lattice") {
  for (const auto& [name, lat] : test_lattices()) {
    CAPTURE(name);
    const auto& elems = lat.elements();
    for (const auto& a : elems) {
      CHECK(lat.join(lat.bottom(), a) == a);
      CHECK(lat.join(a, a) == a);
      CHECK(lat.leq(lat.bottom(), a));
      for (const auto& b : elems) {
        CHECK(lat.join(a, b) == lat.join(b, a));
        CHECK(lat.leq(a, lat.join(a, b)));
        CHECK(lat.leq(a, b) == (lat.join(a, b) == b));
        for (const auto& c : elems)
          CHECK(lat.join(a, lat.join(b, c)) == lat.join(lat.join(a, b), c));
      }
    }
  }
}
