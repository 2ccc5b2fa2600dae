#include "nlot/protocol.hpp"

namespace nlot {

int ProtocolSpec::msg_slots(Party p) const {
  int n = 0;
  for (const Step s : schedule)
    if ((p == Party::A && s == Step::MsgAtoB) ||
        (p == Party::B && s == Step::MsgBtoA))
      ++n;
  return n;
}

int ProtocolSpec::total_tape_bits() const {
  return prog_a.tape_len + prog_b.tape_len + res_tape_bits();
}

void ProtocolSpec::validate() const {
  int resource_calls = 0, msgs = 0;
  for (const Step s : schedule)
    s == Step::Resource ? ++resource_calls : ++msgs;
  if (resource_calls != 1)
    throw StructuralError("protocol '" + name +
                          "': exactly one resource call required");
  if (msgs != comm_bits)
    throw StructuralError("protocol '" + name +
                          "': schedule carries " + std::to_string(msgs) +
                          " message bits, declared " + std::to_string(comm_bits));
  if (static_cast<int>(prog_a.messages.size()) != msg_slots(Party::A) ||
      static_cast<int>(prog_b.messages.size()) != msg_slots(Party::B))
    throw StructuralError("protocol '" + name +
                          "': message functions do not match the schedule");
  if (resource.in_a.size() > 1 && !prog_a.resource_input)
    throw StructuralError("protocol '" + name + "': A must choose a resource input");
  if (resource.in_b.size() > 1 && !prog_b.resource_input)
    throw StructuralError("protocol '" + name + "': B must choose a resource input");
  if (!prog_a.output || !prog_b.output)
    throw StructuralError("protocol '" + name + "': both outputs required");
  resource_tape_bits(resource);  // throws if rows are not uniform dyadic
}

RunResult run_protocol(const ProtocolSpec& spec, const World& world) {
  if (world.in_a >= spec.target.in_a.size() ||
      world.in_b >= spec.target.in_b.size())
    throw StructuralError("protocol '" + spec.name +
                          "': world input out of range");
  if (static_cast<int>(world.tape_a.size()) != spec.prog_a.tape_len ||
      static_cast<int>(world.tape_b.size()) != spec.prog_b.tape_len)
    throw StructuralError("protocol '" + spec.name +
                          "': world tape length mismatch");
  if (static_cast<int>(world.res_tape.size()) != spec.res_tape_bits())
    throw StructuralError("protocol '" + spec.name +
                          "': resource selector length mismatch");
  RunResult r;
  r.view_a.input = world.in_a;
  r.view_a.tape = world.tape_a;
  r.view_b.input = world.in_b;
  r.view_b.tape = world.tape_b;

  std::size_t slot_a = 0, slot_b = 0;
  for (const Step step : spec.schedule) {
    switch (step) {
      case Step::Resource: {
        std::uint8_t ra = 0, rb = 0;
        if (spec.resource.in_a.size() > 1) {
          ra = spec.prog_a.resource_input(r.view_a);
          if (ra >= spec.resource.in_a.size())
            throw StructuralError("protocol '" + spec.name +
                                  "': A resource input out of range");
          r.view_a.res_in = ra;
        }
        if (spec.resource.in_b.size() > 1) {
          rb = spec.prog_b.resource_input(r.view_b);
          if (rb >= spec.resource.in_b.size())
            throw StructuralError("protocol '" + spec.name +
                                  "': B resource input out of range");
          r.view_b.res_in = rb;
        }
        const FiniteDist& row = spec.resource.row(ra, rb);
        std::size_t index = 0;
        for (const std::uint8_t bit : world.res_tape)
          index = (index << 1) | (bit & 1);
        if (index >= row.support_size())
          throw StructuralError("protocol '" + spec.name +
                                "': resource selector out of range");
        const Record& outcome = row.atoms()[index].first;
        if (spec.resource.out_a.size() > 1) r.view_a.res_out = outcome[0];
        if (spec.resource.out_b.size() > 1) r.view_b.res_out = outcome[1];
        break;
      }
      case Step::MsgAtoB: {
        const std::uint8_t bit = spec.prog_a.messages[slot_a++](r.view_a);
        if (bit > 1)
          throw StructuralError("protocol '" + spec.name +
                                "': message bits must be 0 or 1");
        r.view_a.msgs_out.push_back(bit);
        r.view_b.msgs_in.push_back(bit);
        r.transcript.push_back({step, bit});
        break;
      }
      case Step::MsgBtoA: {
        const std::uint8_t bit = spec.prog_b.messages[slot_b++](r.view_b);
        if (bit > 1)
          throw StructuralError("protocol '" + spec.name +
                                "': message bits must be 0 or 1");
        r.view_b.msgs_out.push_back(bit);
        r.view_a.msgs_in.push_back(bit);
        r.transcript.push_back({step, bit});
        break;
      }
    }
  }

  r.out_a = spec.prog_a.output(r.view_a);
  r.out_b = spec.prog_b.output(r.view_b);
  if (r.out_a >= spec.target.out_a.size() || r.out_b >= spec.target.out_b.size())
    throw StructuralError("protocol '" + spec.name + "': output out of range");
  r.view_a.output = r.out_a;
  r.view_b.output = r.out_b;
  return r;
}

// ---- view records ----------------------------------------------------------
//
// A party's view record lists only what it observes: its target input, its
// tape, what the resource handed it, and incoming message bits.  Everything
// it sends or feeds into the resource is a deterministic function of those,
// so the record is a complete and minimal description of the view.

RecordSchema view_schema(const ProtocolSpec& spec, Party p, bool with_output) {
  const bool is_a = p == Party::A;
  const Alphabet& in = is_a ? spec.target.in_a : spec.target.in_b;
  const Alphabet& res_out = is_a ? spec.resource.out_a : spec.resource.out_b;
  const Alphabet& out = is_a ? spec.target.out_a : spec.target.out_b;
  const PartyProgram& prog = is_a ? spec.prog_a : spec.prog_b;

  RecordSchema s;
  if (in.size() > 1) s.fields.push_back(Field{"in", in});
  for (int i = 0; i < prog.tape_len; ++i)
    s.fields.push_back(Field{"tape" + std::to_string(i), bit_alphabet()});
  if (res_out.size() > 1) s.fields.push_back(Field{"resOut", res_out});
  const int incoming = spec.msg_slots(other(p));
  for (int i = 0; i < incoming; ++i)
    s.fields.push_back(Field{"m" + std::to_string(i), bit_alphabet()});
  if (with_output && out.size() > 1) s.fields.push_back(Field{"out", out});
  return s;
}

Record view_record(const ProtocolSpec& spec, Party p, const PartyView& view,
                   bool with_output) {
  const bool is_a = p == Party::A;
  const Alphabet& in = is_a ? spec.target.in_a : spec.target.in_b;
  const Alphabet& res_out = is_a ? spec.resource.out_a : spec.resource.out_b;
  const Alphabet& out = is_a ? spec.target.out_a : spec.target.out_b;

  Record rec;
  if (in.size() > 1) rec.push_back(view.input);
  for (const std::uint8_t bit : view.tape) rec.push_back(bit);
  if (res_out.size() > 1) {
    if (!view.res_out)
      throw StructuralError("view record requested before the resource ran");
    rec.push_back(*view.res_out);
  }
  for (const std::uint8_t bit : view.msgs_in) rec.push_back(bit);
  if (with_output && out.size() > 1) {
    if (!view.output)
      throw StructuralError("view record requested before the output was fixed");
    rec.push_back(*view.output);
  }
  return rec;
}

// ---- serialization ---------------------------------------------------------

namespace {

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
  std::string s;
  for (const std::uint8_t b : bits) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace

Json world_to_json(const ProtocolSpec& spec, const World& w) {
  return Json{{"inA", spec.target.in_a.symbol(w.in_a)},
              {"inB", spec.target.in_b.symbol(w.in_b)},
              {"tapeA", bits_to_string(w.tape_a)},
              {"tapeB", bits_to_string(w.tape_b)},
              {"resourceTape", bits_to_string(w.res_tape)}};
}

Json view_to_json(const ProtocolSpec& spec, Party p, const PartyView& v) {
  const bool is_a = p == Party::A;
  const Alphabet& in = is_a ? spec.target.in_a : spec.target.in_b;
  const Alphabet& res_in = is_a ? spec.resource.in_a : spec.resource.in_b;
  const Alphabet& res_out = is_a ? spec.resource.out_a : spec.resource.out_b;
  const Alphabet& out = is_a ? spec.target.out_a : spec.target.out_b;

  Json j{{"party", party_name(p)}, {"in", in.symbol(v.input)},
         {"tape", bits_to_string(v.tape)}};
  if (v.res_in) j["resourceIn"] = res_in.symbol(*v.res_in);
  if (v.res_out) j["resourceOut"] = res_out.symbol(*v.res_out);
  j["msgsIn"] = bits_to_string(v.msgs_in);
  j["msgsOut"] = bits_to_string(v.msgs_out);
  if (v.output) j["out"] = out.symbol(*v.output);
  return j;
}

Json run_result_to_json(const ProtocolSpec& spec, const World& w,
                        const RunResult& r) {
  Json transcript = Json::array();
  for (const auto& entry : r.transcript)
    transcript.push_back(Json{
        {"dir", entry.dir == Step::MsgAtoB ? "A->B" : "B->A"},
        {"bit", entry.bit ? "1" : "0"}});
  return Json{{"world", world_to_json(spec, w)},
              {"outA", spec.target.out_a.symbol(r.out_a)},
              {"outB", spec.target.out_b.symbol(r.out_b)},
              {"transcript", std::move(transcript)},
              {"viewA", view_to_json(spec, Party::A, r.view_a)},
              {"viewB", view_to_json(spec, Party::B, r.view_b)}};
}

}  // namespace nlot
