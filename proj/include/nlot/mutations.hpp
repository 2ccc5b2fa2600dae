#pragma once

#include "nlot/catalog.hpp"

namespace nlot {

/// A deliberately broken variant of a catalog protocol.  Each mutant flips at
/// least one verifier verdict; the suite is the verifier's sensitivity test.
struct Mutant {
  std::string id;        // "<protocol>:<what-was-broken>"
  std::string base;      // catalog protocol name
  std::string note;      // one-line description of the break
  ProtocolSpec spec;
  // expected verdict flips (at least one true)
  bool breaks_correctness = false;
  bool breaks_privacy_a = false;
  bool breaks_privacy_b = false;
};

/// At least two mutants per catalog protocol.
const std::vector<Mutant>& mutation_catalog();

const Mutant& find_mutant(std::string_view id);

}  // namespace nlot
