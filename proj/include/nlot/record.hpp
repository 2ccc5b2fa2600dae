#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nlot/errors.hpp"

namespace nlot {

// ============================================================================
// Symbols, alphabets and outcome records
//
// Every observable value in the model (inputs, outputs, resource symbols) is
// a code into a small named alphabet.  Outcome records are ordered tuples of
// such codes; their canonical total order is plain lexicographic order on the
// code vectors, which makes every serialization deterministic.
// ============================================================================

struct Alphabet {
  std::string name;
  std::vector<std::string> symbols;

  std::size_t size() const { return symbols.size(); }

  const std::string& symbol(std::uint8_t code) const {
    if (code >= symbols.size())
      throw StructuralError("alphabet '" + name + "': code out of range");
    return symbols[code];
  }

  std::uint8_t code_of(std::string_view sym) const {
    for (std::size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i] == sym) return static_cast<std::uint8_t>(i);
    throw StructuralError("alphabet '" + name + "': unknown symbol '" +
                          std::string(sym) + "'");
  }

  bool operator==(const Alphabet&) const = default;
};

/// {"0","1"}
const Alphabet& bit_alphabet();
/// {"00","01","10","11"}; code = 2*first + second
const Alphabet& pair_alphabet();
/// singleton {"-"}; used both for inputless sides and for null outputs
const Alphabet& unit_alphabet();

inline std::uint8_t pair_code(std::uint8_t hi, std::uint8_t lo) {
  return static_cast<std::uint8_t>((hi << 1) | lo);
}
inline std::uint8_t pair_hi(std::uint8_t code) { return (code >> 1) & 1; }
inline std::uint8_t pair_lo(std::uint8_t code) { return code & 1; }

struct Field {
  std::string name;
  Alphabet alphabet;

  bool operator==(const Field&) const = default;
};

struct RecordSchema {
  std::vector<Field> fields;

  std::size_t arity() const { return fields.size(); }

  std::size_t index_of(std::string_view name) const {
    for (std::size_t i = 0; i < fields.size(); ++i)
      if (fields[i].name == name) return i;
    throw StructuralError("schema has no field '" + std::string(name) + "'");
  }

  bool has_field(std::string_view name) const {
    for (const auto& f : fields)
      if (f.name == name) return true;
    return false;
  }

  bool operator==(const RecordSchema&) const = default;
};

/// One outcome record: codes[i] indexes schema.fields[i].alphabet.
using Record = std::vector<std::uint8_t>;

}  // namespace nlot
