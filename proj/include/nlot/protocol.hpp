#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlot/primitive.hpp"

namespace nlot {

enum class Party : std::uint8_t { A = 0, B = 1 };

inline const char* party_name(Party p) { return p == Party::A ? "A" : "B"; }
inline Party other(Party p) { return p == Party::A ? Party::B : Party::A; }

/// Schedule items.  Exactly one Resource step per protocol (single copy).
enum class Step : std::uint8_t { Resource, MsgAtoB, MsgBtoA };

// ============================================================================
// Worlds and views
//
// A world fixes everything random or chosen: both target inputs, both private
// tapes, and the resource selector bits.  Protocol execution is a pure
// function of the world, which is what makes exhaustive verification exact.
// ============================================================================
struct World {
  std::uint8_t in_a = 0, in_b = 0;
  std::vector<std::uint8_t> tape_a, tape_b;
  std::vector<std::uint8_t> res_tape;

  bool operator==(const World&) const = default;
};

/// Everything one party has seen or produced: own input, own tape, the
/// resource interface from its side, and both message directions.
struct PartyView {
  std::uint8_t input = 0;
  std::vector<std::uint8_t> tape;
  std::optional<std::uint8_t> res_in;
  std::optional<std::uint8_t> res_out;
  std::vector<std::uint8_t> msgs_in;
  std::vector<std::uint8_t> msgs_out;
  std::optional<std::uint8_t> output;
};

struct TranscriptEntry {
  Step dir;  // MsgAtoB or MsgBtoA
  std::uint8_t bit;

  bool operator==(const TranscriptEntry&) const = default;
};
using Transcript = std::vector<TranscriptEntry>;

using DecisionFn = std::function<std::uint8_t(const PartyView&)>;

/// One party's program: decision functions over its view-so-far.
struct PartyProgram {
  int tape_len = 0;
  DecisionFn resource_input;            // unused if the resource side is inputless
  std::vector<DecisionFn> messages;     // one per own send slot, schedule order
  DecisionFn output;
};

struct ProtocolSpec {
  std::string name;
  Primitive resource;
  Primitive target;
  PartyProgram prog_a, prog_b;
  std::vector<Step> schedule;
  int comm_bits = 0;

  int res_tape_bits() const { return resource_tape_bits(resource); }
  int msg_slots(Party p) const;
  int total_tape_bits() const;

  /// Structural checks: exactly one resource call, message count matches the
  /// declared communication cost, executable resource rows.
  void validate() const;
};

struct RunResult {
  std::uint8_t out_a = 0, out_b = 0;
  PartyView view_a, view_b;
  Transcript transcript;
};

/// Deterministic single execution in a fixed world.
RunResult run_protocol(const ProtocolSpec& spec, const World& world);

// ---- view records ----------------------------------------------------------

/// Schema of a party's complete view as an outcome record.  Singleton
/// coordinates (unit alphabets, zero-length tapes) are omitted.
RecordSchema view_schema(const ProtocolSpec& spec, Party p, bool with_output = true);

Record view_record(const ProtocolSpec& spec, Party p, const PartyView& view,
                   bool with_output = true);

// ---- serialization ---------------------------------------------------------

Json world_to_json(const ProtocolSpec& spec, const World& w);
Json view_to_json(const ProtocolSpec& spec, Party p, const PartyView& v);
Json run_result_to_json(const ProtocolSpec& spec, const World& w, const RunResult& r);

}  // namespace nlot
