#include <doctest.h>

#include "nlot/dist.hpp"

// ============================================================================
// Exact rationals, records and finite distributions: the arithmetic floor
// everything else stands on.  All equalities here are exact.
// ============================================================================

namespace {

using namespace nlot;

RecordSchema xy_schema() {
  return RecordSchema{{Field{"x", bit_alphabet()}, Field{"y", bit_alphabet()}}};
}

FiniteDist uniform_xy() {
  return FiniteDist::from_atoms(xy_schema(), {{{0, 0}, rat(1, 4)},
                                              {{0, 1}, rat(1, 4)},
                                              {{1, 0}, rat(1, 4)},
                                              {{1, 1}, rat(1, 4)}});
}

}  // namespace

TEST_CASE("rational constructor canonicalizes and rejects zero denominators") {
  CHECK(rat(2, 4) == rat(1, 2));
  CHECK(rat(-3, -6) == rat(1, 2));
  CHECK(rat(3, -6) == rat(-1, 2));
  CHECK(rat(0, 7) == rat(0));
  CHECK(rat(5) == Rat(5));
  CHECK_THROWS_AS(rat(1, 0), StructuralError);
}

TEST_CASE("rational arithmetic is exact where doubles are not") {
  // 1/10 is not representable in binary floating point; summing ten of them
  // must still give exactly 1 here.
  Rat sum = rat(0);
  for (int i = 0; i < 10; ++i) sum += rat(1, 10);
  CHECK(sum == Rat(1));
  CHECK(rat(1, 3) + rat(1, 6) == rat(1, 2));
  CHECK(rat(1, 3) * rat(3, 5) == rat(1, 5));
  CHECK(rat(1, 2) - rat(1, 2) == rat(0));
  CHECK(is_probability(rat(1, 2)));
  CHECK(is_probability(rat(0)));
  CHECK(is_probability(rat(1)));
  CHECK_FALSE(is_probability(rat(-1, 2)));
  CHECK_FALSE(is_probability(rat(3, 2)));
}

TEST_CASE("rational parsing and printing round-trip") {
  CHECK(rat_parse("3/4") == rat(3, 4));
  CHECK(rat_parse("-3/4") == rat(-3, 4));
  CHECK(rat_parse("6/8") == rat(3, 4));
  CHECK(rat_parse("7") == rat(7));
  CHECK(rat_str(rat(3, 4)) == "3/4");
  CHECK(rat_str(rat(2)) == "2/1");
  CHECK(rat_str(rat(-1, 2)) == "-1/2");
  CHECK(rat_parse(rat_str(rat(22, 7))) == rat(22, 7));
  CHECK(rat_double(rat(1, 4)) == doctest::Approx(0.25));
  CHECK_THROWS_AS(rat_parse("zebra"), StructuralError);
  CHECK_THROWS_AS(rat_parse("1/0"), StructuralError);
}

TEST_CASE("alphabets map symbols to codes and back") {
  CHECK(bit_alphabet().size() == 2);
  CHECK(pair_alphabet().size() == 4);
  CHECK(unit_alphabet().size() == 1);
  CHECK(bit_alphabet().code_of("1") == 1);
  CHECK(pair_alphabet().symbol(2) == "10");
  CHECK(pair_alphabet().code_of("10") == 2);
  CHECK_THROWS_AS(bit_alphabet().code_of("2"), StructuralError);
  CHECK_THROWS_AS(bit_alphabet().symbol(2), StructuralError);
}

TEST_CASE("pair codes put the first slot in the high bit") {
  for (std::uint8_t hi = 0; hi < 2; ++hi)
    for (std::uint8_t lo = 0; lo < 2; ++lo) {
      const std::uint8_t code = pair_code(hi, lo);
      CHECK(pair_hi(code) == hi);
      CHECK(pair_lo(code) == lo);
    }
  CHECK(pair_code(1, 0) == 2);
  CHECK(pair_alphabet().symbol(pair_code(1, 0)) == "10");
}

TEST_CASE("schema field lookup") {
  const RecordSchema s = xy_schema();
  CHECK(s.arity() == 2);
  CHECK(s.index_of("y") == 1);
  CHECK(s.has_field("x"));
  CHECK_FALSE(s.has_field("z"));
  CHECK_THROWS_AS(s.index_of("z"), StructuralError);
}

TEST_CASE("from_atoms validates masses, sums and duplicates") {
  const RecordSchema s = xy_schema();
  CHECK(uniform_xy().support_size() == 4);

  CHECK_THROWS_AS(
      FiniteDist::from_atoms(s, {{{0, 0}, rat(1, 2)}, {{0, 1}, rat(1, 4)}}),
      StructuralError);  // sums to 3/4
  CHECK_THROWS_AS(
      FiniteDist::from_atoms(s, {{{0, 0}, rat(3, 2)}, {{0, 1}, rat(-1, 2)}}),
      StructuralError);  // negative mass
  CHECK_THROWS_AS(
      FiniteDist::from_atoms(s, {{{0, 0}, rat(1, 2)}, {{0, 0}, rat(1, 2)}}),
      StructuralError);  // duplicate record
  CHECK_THROWS_AS(FiniteDist::from_atoms(s, {{{0, 2}, rat(1)}}),
                  StructuralError);  // code outside the bit alphabet
  CHECK_THROWS_AS(FiniteDist::from_atoms(s, {{{0}, rat(1)}}),
                  StructuralError);  // arity mismatch
}

TEST_CASE("from_weighted aggregates duplicates and drops exact zeros") {
  const FiniteDist d = FiniteDist::from_weighted(
      xy_schema(), {{{0, 0}, rat(1, 4)},
                    {{0, 0}, rat(1, 4)},
                    {{1, 1}, rat(1, 2)},
                    {{1, 0}, rat(0)}});
  CHECK(d.support_size() == 2);
  CHECK(d.mass_of({0, 0}) == rat(1, 2));
  CHECK(d.mass_of({1, 1}) == rat(1, 2));
  CHECK(d.mass_of({1, 0}) == rat(0));
  // 1/4 + 1/4 + 1/2 is exactly 1; anything else must throw.
  CHECK_THROWS_AS(FiniteDist::from_weighted(
                      xy_schema(), {{{0, 0}, rat(1, 3)}, {{1, 1}, rat(1, 3)}}),
                  StructuralError);
}

TEST_CASE("atoms are kept in canonical record order") {
  const FiniteDist d = FiniteDist::from_atoms(
      xy_schema(),
      {{{1, 1}, rat(1, 2)}, {{0, 1}, rat(1, 4)}, {{0, 0}, rat(1, 4)}});
  REQUIRE(d.atoms().size() == 3);
  CHECK(d.atoms()[0].first == Record{0, 0});
  CHECK(d.atoms()[1].first == Record{0, 1});
  CHECK(d.atoms()[2].first == Record{1, 1});
}

TEST_CASE("marginal keeps named coordinates") {
  const FiniteDist d = FiniteDist::from_atoms(xy_schema(),
                                              {{{0, 0}, rat(1, 2)},
                                               {{1, 0}, rat(1, 4)},
                                               {{1, 1}, rat(1, 4)}});
  const FiniteDist mx = d.marginal({"x"});
  CHECK(mx.schema().arity() == 1);
  CHECK(mx.mass_of({0}) == rat(1, 2));
  CHECK(mx.mass_of({1}) == rat(1, 2));
  const FiniteDist my = d.marginal({"y"});
  CHECK(my.mass_of({0}) == rat(3, 4));
  CHECK(my.mass_of({1}) == rat(1, 4));
  CHECK_THROWS_AS(d.marginal({"z"}), StructuralError);
}

TEST_CASE("conditioning renormalizes exactly and refuses zero-mass events") {
  const FiniteDist d = FiniteDist::from_atoms(xy_schema(),
                                              {{{0, 0}, rat(1, 6)},
                                               {{0, 1}, rat(1, 3)},
                                               {{1, 1}, rat(1, 2)}});
  const FiniteDist given_y1 = d.condition_eq("y", 1);
  CHECK(given_y1.mass_of({0, 1}) == rat(2, 5));
  CHECK(given_y1.mass_of({1, 1}) == rat(3, 5));
  const FiniteDist given_x0 =
      d.condition([](const Record& r) { return r[0] == 0; });
  CHECK(given_x0.mass_of({0, 0}) == rat(1, 3));
  CHECK(given_x0.mass_of({0, 1}) == rat(2, 3));
  CHECK_THROWS_AS(d.condition([](const Record&) { return false; }),
                  ZeroMassConditionError);
  CHECK_THROWS_AS(
      d.condition([](const Record& r) { return r[0] == 1 && r[1] == 0; }),
      ZeroMassConditionError);
}

TEST_CASE("pushforward maps onto a new schema and merges collisions") {
  const RecordSchema parity{{Field{"x^y", bit_alphabet()}}};
  const FiniteDist d = uniform_xy();
  const FiniteDist p = d.pushforward(parity, [](const Record& r) {
    return Record{static_cast<std::uint8_t>(r[0] ^ r[1])};
  });
  CHECK(p.support_size() == 2);
  CHECK(p.mass_of({0}) == rat(1, 2));
  CHECK(p.mass_of({1}) == rat(1, 2));
}

TEST_CASE("distribution equality is support plus masses plus schema shape") {
  CHECK(uniform_xy() == uniform_xy());
  CHECK(dist_equal(uniform_xy(), uniform_xy()));
  const FiniteDist skew = FiniteDist::from_atoms(xy_schema(),
                                                 {{{0, 0}, rat(1, 2)},
                                                  {{0, 1}, rat(1, 6)},
                                                  {{1, 0}, rat(1, 6)},
                                                  {{1, 1}, rat(1, 6)}});
  CHECK_FALSE(uniform_xy() == skew);
}

TEST_CASE("dist_from_worlds pushes weighted worlds onto records") {
  // Worlds are (id, record); two of the four collapse onto the same record.
  const std::vector<std::pair<int, Record>> worlds{
      {0, {0, 0}}, {1, {0, 0}}, {2, {1, 0}}, {3, {1, 1}}};
  const FiniteDist d = dist_from_worlds<int>(
      xy_schema(), worlds, [](const int&) { return rat(1, 4); });
  CHECK(d.mass_of({0, 0}) == rat(1, 2));
  CHECK(d.mass_of({1, 0}) == rat(1, 4));
  CHECK(d.mass_of({1, 1}) == rat(1, 4));
}

TEST_CASE("record serialization uses field names and symbols") {
  const Json j = record_to_json(xy_schema(), {1, 0});
  CHECK(j["x"] == "1");
  CHECK(j["y"] == "0");
  CHECK_THROWS_AS(record_to_json(xy_schema(), {1}), StructuralError);
}
