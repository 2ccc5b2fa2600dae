#include "nlot/primitive.hpp"

namespace nlot {

const FiniteDist& Primitive::row(std::uint8_t ia, std::uint8_t ib) const {
  if (ia >= in_a.size() || ib >= in_b.size())
    throw StructuralError("primitive '" + name + "': input code out of range");
  return table[ia][ib];
}

RecordSchema Primitive::out_schema() const {
  return RecordSchema{{Field{"outA", out_a}, Field{"outB", out_b}}};
}

bool Primitive::same_behavior(const Primitive& other) const {
  return in_a == other.in_a && in_b == other.in_b && out_a == other.out_a &&
         out_b == other.out_b && table == other.table;
}

Json Primitive::to_json() const {
  Json rows = Json::array();
  for (std::uint8_t ia = 0; ia < in_a.size(); ++ia)
    for (std::uint8_t ib = 0; ib < in_b.size(); ++ib)
      rows.push_back(Json{{"inA", in_a.symbol(ia)},
                          {"inB", in_b.symbol(ib)},
                          {"outputs", table[ia][ib].to_json()}});
  return Json{{"name", name},
              {"inA", in_a.name},
              {"inB", in_b.name},
              {"outA", out_a.name},
              {"outB", out_b.name},
              {"rows", std::move(rows)}};
}

namespace {

FiniteDist point_mass(const RecordSchema& schema, Record rec) {
  return FiniteDist::from_atoms(schema, {{std::move(rec), Rat(1)}});
}

FiniteDist uniform(const RecordSchema& schema, std::vector<Record> recs) {
  const Rat each = rat(1, static_cast<long long>(recs.size()));
  std::vector<std::pair<Record, Rat>> atoms;
  for (auto& r : recs) atoms.emplace_back(std::move(r), each);
  return FiniteDist::from_atoms(schema, std::move(atoms));
}

}  // namespace

Primitive ot() {
  Primitive p;
  p.name = "ot";
  p.in_a = pair_alphabet();
  p.in_b = bit_alphabet();
  p.out_a = unit_alphabet();
  p.out_b = bit_alphabet();
  const RecordSchema schema = p.out_schema();
  p.table.resize(4);
  for (std::uint8_t pair = 0; pair < 4; ++pair) {
    p.table[pair].resize(2);
    for (std::uint8_t c = 0; c < 2; ++c) {
      const std::uint8_t picked = c == 0 ? pair_hi(pair) : pair_lo(pair);
      p.table[pair][c] = point_mass(schema, Record{0, picked});
    }
  }
  return p;
}

Primitive to() {
  Primitive p = mirror(ot());
  p.name = "to";
  return p;
}

Primitive ok() {
  Primitive p;
  p.name = "ok";
  p.in_a = unit_alphabet();
  p.in_b = unit_alphabet();
  p.out_a = pair_alphabet();  // (X0, X1)
  p.out_b = pair_alphabet();  // (C, X_C)
  const RecordSchema schema = p.out_schema();
  std::vector<Record> recs;
  for (std::uint8_t x0 = 0; x0 < 2; ++x0)
    for (std::uint8_t x1 = 0; x1 < 2; ++x1)
      for (std::uint8_t c = 0; c < 2; ++c) {
        const std::uint8_t y = c == 0 ? x0 : x1;
        recs.push_back(Record{pair_code(x0, x1), pair_code(c, y)});
      }
  p.table = {{uniform(schema, std::move(recs))}};
  return p;
}

Primitive ko() {
  Primitive p = mirror(ok());
  p.name = "ko";
  return p;
}

Primitive pr() {
  Primitive p;
  p.name = "pr";
  p.in_a = bit_alphabet();
  p.in_b = bit_alphabet();
  p.out_a = bit_alphabet();
  p.out_b = bit_alphabet();
  const RecordSchema schema = p.out_schema();
  p.table.resize(2);
  for (std::uint8_t u = 0; u < 2; ++u) {
    p.table[u].resize(2);
    for (std::uint8_t v = 0; v < 2; ++v) {
      const std::uint8_t parity = u & v;
      std::vector<Record> recs;
      for (std::uint8_t a = 0; a < 2; ++a)
        recs.push_back(Record{a, static_cast<std::uint8_t>(a ^ parity)});
      p.table[u][v] = uniform(schema, std::move(recs));
    }
  }
  return p;
}

Primitive mirror(const Primitive& p) {
  Primitive m;
  m.name = p.name + "-mirror";
  m.in_a = p.in_b;
  m.in_b = p.in_a;
  m.out_a = p.out_b;
  m.out_b = p.out_a;
  const RecordSchema schema = m.out_schema();
  m.table.resize(m.in_a.size());
  for (std::uint8_t ia = 0; ia < m.in_a.size(); ++ia) {
    m.table[ia].resize(m.in_b.size());
    for (std::uint8_t ib = 0; ib < m.in_b.size(); ++ib)
      m.table[ia][ib] = p.table[ib][ia].pushforward(
          schema, [](const Record& rec) { return Record{rec[1], rec[0]}; });
  }
  return m;
}

bool is_non_signaling(const Primitive& p) {
  // A's output marginal must not depend on B's input, and vice versa.
  for (std::uint8_t ia = 0; ia < p.in_a.size(); ++ia) {
    const FiniteDist ref = p.table[ia][0].marginal({"outA"});
    for (std::uint8_t ib = 1; ib < p.in_b.size(); ++ib)
      if (p.table[ia][ib].marginal({"outA"}) != ref) return false;
  }
  for (std::uint8_t ib = 0; ib < p.in_b.size(); ++ib) {
    const FiniteDist ref = p.table[0][ib].marginal({"outB"});
    for (std::uint8_t ia = 1; ia < p.in_a.size(); ++ia)
      if (p.table[ia][ib].marginal({"outB"}) != ref) return false;
  }
  return true;
}

FiniteDist ok_tuple_dist() {
  const RecordSchema schema{{Field{"X0", bit_alphabet()},
                             Field{"X1", bit_alphabet()},
                             Field{"C", bit_alphabet()},
                             Field{"Y", bit_alphabet()}}};
  return ok().table[0][0].pushforward(schema, [](const Record& rec) {
    return Record{pair_hi(rec[0]), pair_lo(rec[0]), pair_hi(rec[1]),
                  pair_lo(rec[1])};
  });
}

int resource_tape_bits(const Primitive& p) {
  int bits = -1;
  for (std::uint8_t ia = 0; ia < p.in_a.size(); ++ia)
    for (std::uint8_t ib = 0; ib < p.in_b.size(); ++ib) {
      const auto& row = p.table[ia][ib];
      const std::size_t n = row.support_size();
      if ((n & (n - 1)) != 0)
        throw StructuralError("primitive '" + p.name +
                              "': row support is not a power of two");
      const Rat each = rat(1, static_cast<long long>(n));
      for (const auto& [rec, mass] : row.atoms())
        if (mass != each)
          throw StructuralError("primitive '" + p.name +
                                "': row is not uniform");
      int k = 0;
      for (std::size_t m = n; m > 1; m >>= 1) ++k;
      if (bits == -1) bits = k;
      if (bits != k)
        throw StructuralError("primitive '" + p.name +
                              "': rows need differing selector widths");
    }
  return bits;
}

}  // namespace nlot
