#include <doctest.h>

#include "nlot/primitive.hpp"

// ============================================================================
// The five boxes.  Each law is checked against a hand-written oracle built
// from the defining algebra, not against the implementation's own tables.
// ============================================================================

namespace {

using namespace nlot;

/// Mass the transfer law assigns to (outA, outB) given inputs: B must get the
/// slot of A's pair selected by its choice bit, A must get the unit symbol.
Rat ot_oracle(std::uint8_t pair, std::uint8_t choice, const Record& out) {
  const std::uint8_t picked = choice ? pair_lo(pair) : pair_hi(pair);
  return (out[0] == 0 && out[1] == picked) ? rat(1) : rat(0);
}

/// The nonlocal-pair law: outputs uniform among the two pairs with
/// a XOR b = u AND v.
Rat pr_oracle(std::uint8_t u, std::uint8_t v, const Record& out) {
  return ((out[0] ^ out[1]) == (u & v)) ? rat(1, 2) : rat(0);
}

/// The oblivious-key law on pair codes: (X0,X1) and C uniform, Y = X_C.
Rat ok_oracle(const Record& out) {
  const std::uint8_t x0 = pair_hi(out[0]), x1 = pair_lo(out[0]);
  const std::uint8_t c = pair_hi(out[1]), y = pair_lo(out[1]);
  return (y == (c ? x1 : x0)) ? rat(1, 8) : rat(0);
}

/// A deliberately signaling box: B's output copies A's input bit.
Primitive copy_box() {
  Primitive p;
  p.name = "copy";
  p.in_a = bit_alphabet();
  p.in_b = bit_alphabet();
  p.out_a = unit_alphabet();
  p.out_b = bit_alphabet();
  const RecordSchema schema{{Field{"outA", p.out_a}, Field{"outB", p.out_b}}};
  for (std::uint8_t ia = 0; ia < 2; ++ia) {
    p.table.emplace_back();
    for (std::uint8_t ib = 0; ib < 2; ++ib)
      p.table.back().push_back(
          FiniteDist::from_atoms(schema, {{{0, ia}, rat(1)}}));
  }
  return p;
}

}  // namespace

TEST_CASE("transfer box law, A-to-B orientation") {
  const Primitive box = ot();
  CHECK(box.in_a.size() == 4);
  CHECK(box.in_b.size() == 2);
  CHECK(box.out_a.size() == 1);
  CHECK(box.out_b.size() == 2);
  for (std::uint8_t pair = 0; pair < 4; ++pair)
    for (std::uint8_t c = 0; c < 2; ++c) {
      const FiniteDist& row = box.row(pair, c);
      CHECK(row.support_size() == 1);
      for (std::uint8_t oa = 0; oa < 1; ++oa)
        for (std::uint8_t ob = 0; ob < 2; ++ob)
          CHECK(row.mass_of({oa, ob}) == ot_oracle(pair, c, {oa, ob}));
    }
}

TEST_CASE("nonlocal pair law") {
  const Primitive box = pr();
  for (std::uint8_t u = 0; u < 2; ++u)
    for (std::uint8_t v = 0; v < 2; ++v) {
      const FiniteDist& row = box.row(u, v);
      CHECK(row.support_size() == 2);
      for (std::uint8_t a = 0; a < 2; ++a)
        for (std::uint8_t b = 0; b < 2; ++b)
          CHECK(row.mass_of({a, b}) == pr_oracle(u, v, {a, b}));
    }
}

TEST_CASE("oblivious key law") {
  const Primitive box = ok();
  CHECK(box.in_a.size() == 1);
  CHECK(box.in_b.size() == 1);
  const FiniteDist& row = box.row(0, 0);
  CHECK(row.support_size() == 8);
  for (std::uint8_t oa = 0; oa < 4; ++oa)
    for (std::uint8_t ob = 0; ob < 4; ++ob)
      CHECK(row.mass_of({oa, ob}) == ok_oracle({oa, ob}));
}

TEST_CASE("mirrored boxes swap the party roles") {
  const Primitive t = to();
  // to() hands the pair to B and the choice to A, so B's received slot moves
  // to A's output.
  CHECK(t.in_a.size() == 2);
  CHECK(t.in_b.size() == 4);
  for (std::uint8_t d = 0; d < 2; ++d)
    for (std::uint8_t pair = 0; pair < 4; ++pair) {
      const std::uint8_t picked = d ? pair_lo(pair) : pair_hi(pair);
      CHECK(t.row(d, pair).mass_of({picked, 0}) == rat(1));
    }
  CHECK(mirror(ot()).same_behavior(to()));
  CHECK(mirror(to()).same_behavior(ot()));
  CHECK(mirror(ok()).same_behavior(ko()));
  CHECK(mirror(ko()).same_behavior(ok()));
  CHECK(mirror(mirror(pr())).same_behavior(pr()));
  // pr is symmetric under mirroring; the transfer is not.
  CHECK(mirror(pr()).same_behavior(pr()));
  CHECK_FALSE(mirror(ot()).same_behavior(ot()));
}

TEST_CASE("same_behavior ignores names but not tables") {
  Primitive renamed = pr();
  renamed.name = "telepathy";
  CHECK(renamed.same_behavior(pr()));
  CHECK_FALSE(pr().same_behavior(ot()));
  CHECK_FALSE(ok().same_behavior(ko()));
}

TEST_CASE("correlation boxes are non-signaling, transfer boxes are not") {
  // The nonlocal pair and both key boxes hide each side's input (or have
  // none); a transfer hands the chosen slot across by definition, so its
  // receiving side's marginal does depend on the sending side's input.
  CHECK(is_non_signaling(pr()));
  CHECK(is_non_signaling(ok()));
  CHECK(is_non_signaling(ko()));
  CHECK_FALSE(is_non_signaling(ot()));
  CHECK_FALSE(is_non_signaling(to()));
  CHECK_FALSE(is_non_signaling(copy_box()));
}

TEST_CASE("flattened oblivious-key tuple distribution") {
  const FiniteDist d = ok_tuple_dist();
  CHECK(d.schema().arity() == 4);
  CHECK(d.support_size() == 8);
  int checked = 0;
  for (const auto& [rec, mass] : d.atoms()) {
    const std::uint8_t x0 = rec[0], x1 = rec[1], c = rec[2], y = rec[3];
    CHECK(y == (c ? x1 : x0));
    CHECK(mass == rat(1, 8));
    ++checked;
  }
  CHECK(checked == 8);
  // Marginals: each key bit and the choice bit are individually uniform.
  for (const char* field : {"X0", "X1", "C", "Y"}) {
    const FiniteDist m = d.marginal({field});
    CHECK(m.mass_of({0}) == rat(1, 2));
    CHECK(m.mass_of({1}) == rat(1, 2));
  }
}

TEST_CASE("resource selector widths") {
  // Deterministic rows consume no selector bits; pr flips one fair coin per
  // call; the keys are three fair coins.
  CHECK(resource_tape_bits(ot()) == 0);
  CHECK(resource_tape_bits(to()) == 0);
  CHECK(resource_tape_bits(pr()) == 1);
  CHECK(resource_tape_bits(ok()) == 3);
  CHECK(resource_tape_bits(ko()) == 3);
}

TEST_CASE("non-uniform rows cannot be used as a tape-driven resource") {
  Primitive skew;
  skew.name = "skew";
  skew.in_a = unit_alphabet();
  skew.in_b = unit_alphabet();
  skew.out_a = bit_alphabet();
  skew.out_b = unit_alphabet();
  const RecordSchema schema{{Field{"outA", skew.out_a}, Field{"outB", skew.out_b}}};
  skew.table = {{FiniteDist::from_atoms(
      schema, {{{0, 0}, rat(1, 3)}, {{1, 0}, rat(2, 3)}})}};
  CHECK_THROWS_AS(resource_tape_bits(skew), StructuralError);
}

TEST_CASE("behavior tables serialize with input symbols attached") {
  const Json j = pr().to_json();
  CHECK(j["name"] == "pr");
  CHECK(j.contains("rows"));
  CHECK(pr().row(1, 1).to_json().is_object());
}

TEST_CASE("row lookup rejects out-of-range inputs") {
  CHECK_THROWS_AS(pr().row(2, 0), StructuralError);
  CHECK_THROWS_AS(ot().row(4, 0), StructuralError);
  CHECK_THROWS_AS(ot().row(0, 2), StructuralError);
}
