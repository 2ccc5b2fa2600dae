#pragma once

#include <string>
#include <vector>

#include "nlot/dist.hpp"

namespace nlot {

// ============================================================================
// Two-party primitives as exact behavior tables: one output distribution per
// input pair.  These are the boxes protocols consume (resources) and the
// boxes they must realize (targets).
//
//   ot : A inputs (x0,x1), B inputs c;  A gets nothing, B gets x_c.
//   to : ot with the party roles swapped.
//   ok : inputless; A gets uniform (X0,X1), B gets (C, X_C) with C uniform.
//   ko : ok with the party roles swapped.
//   pr : A inputs u, B inputs v; outputs uniform (a,b) with a XOR b = u AND v.
// ============================================================================
struct Primitive {
  std::string name;
  Alphabet in_a, in_b;
  Alphabet out_a, out_b;
  // table[ia][ib] is a FiniteDist over schema {outA: out_a, outB: out_b}
  std::vector<std::vector<FiniteDist>> table;

  const FiniteDist& row(std::uint8_t ia, std::uint8_t ib) const;
  RecordSchema out_schema() const;

  /// Behavioral equality ignoring the name.
  bool same_behavior(const Primitive& other) const;

  Json to_json() const;
};

Primitive ot();
Primitive to();
Primitive ok();
Primitive ko();
Primitive pr();

/// Same box with the party roles swapped.
Primitive mirror(const Primitive& p);

/// True iff each party's output marginal is independent of the other
/// party's input (exact check over the whole table).
bool is_non_signaling(const Primitive& p);

/// The ok() output law flattened to bit coordinates (X0, X1, C, Y);
/// 8 atoms of mass 1/8.
FiniteDist ok_tuple_dist();

/// Number of uniform-selector bits a resource row consumes when executed.
/// Requires every row to be uniform with the same power-of-two support.
int resource_tape_bits(const Primitive& p);

}  // namespace nlot
