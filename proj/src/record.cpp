#include "nlot/record.hpp"

namespace nlot {

const Alphabet& bit_alphabet() {
  static const Alphabet a{"bit", {"0", "1"}};
  return a;
}

const Alphabet& pair_alphabet() {
  static const Alphabet a{"pair", {"00", "01", "10", "11"}};
  return a;
}

const Alphabet& unit_alphabet() {
  static const Alphabet a{"unit", {"-"}};
  return a;
}

}  // namespace nlot
