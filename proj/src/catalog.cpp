#include "nlot/catalog.hpp"

namespace nlot {

namespace {

std::uint8_t pick(std::uint8_t pair, std::uint8_t which) {
  return which ? pair_lo(pair) : pair_hi(pair);
}

}  // namespace

/// A feeds (a, u^a) into the transfer with a fresh tape bit a; B selects with
/// its own input.  B's received bit then differs from a exactly when both
/// inputs are 1, so (a, received) is a perfectly correlated nonlocal pair and
/// no message is ever sent.
ProtocolSpec pr_from_ot() {
  ProtocolSpec s;
  s.name = "pr-from-ot";
  s.resource = ot();
  s.target = pr();
  s.schedule = {Step::Resource};
  s.comm_bits = 0;

  s.prog_a.tape_len = 1;
  s.prog_a.resource_input = [](const PartyView& v) {
    return pair_code(v.tape[0], v.tape[0] ^ v.input);
  };
  s.prog_a.output = [](const PartyView& v) { return v.tape[0]; };

  s.prog_b.tape_len = 0;
  s.prog_b.resource_input = [](const PartyView& v) { return v.input; };
  s.prog_b.output = [](const PartyView& v) { return *v.res_out; };
  return s;
}

/// Both parties feed fresh tape bits into the nonlocal pair; A's pair is
/// (a, a^x) and B keeps (y, b).  The correlation a^b = x&y makes B's kept bit
/// equal A's slot selected by B's tape bit.
ProtocolSpec ok_from_pr() {
  ProtocolSpec s;
  s.name = "ok-from-pr";
  s.resource = pr();
  s.target = ok();
  s.schedule = {Step::Resource};
  s.comm_bits = 0;

  s.prog_a.tape_len = 1;
  s.prog_a.resource_input = [](const PartyView& v) { return v.tape[0]; };
  s.prog_a.output = [](const PartyView& v) {
    return pair_code(*v.res_out, *v.res_out ^ v.tape[0]);
  };

  s.prog_b.tape_len = 1;
  s.prog_b.resource_input = [](const PartyView& v) { return v.tape[0]; };
  s.prog_b.output = [](const PartyView& v) {
    return pair_code(v.tape[0], *v.res_out);
  };
  return s;
}

/// Run the transfer on fresh tape randomness on both sides and keep the
/// transcript as the key: A keeps its random pair, B keeps its random choice
/// plus the bit it received.
ProtocolSpec ok_from_ot() {
  ProtocolSpec s;
  s.name = "ok-from-ot";
  s.resource = ot();
  s.target = ok();
  s.schedule = {Step::Resource};
  s.comm_bits = 0;

  s.prog_a.tape_len = 2;
  s.prog_a.resource_input = [](const PartyView& v) {
    return pair_code(v.tape[0], v.tape[1]);
  };
  s.prog_a.output = [](const PartyView& v) {
    return pair_code(v.tape[0], v.tape[1]);
  };

  s.prog_b.tape_len = 1;
  s.prog_b.resource_input = [](const PartyView& v) { return v.tape[0]; };
  s.prog_b.output = [](const PartyView& v) {
    return pair_code(v.tape[0], *v.res_out);
  };
  return s;
}

/// A plays the nonlocal pair on x0^x1, B on its choice bit; A then sends the
/// one-time-padded bit x0^a and B unpads with its own share b.
ProtocolSpec ot_from_pr() {
  ProtocolSpec s;
  s.name = "ot-from-pr";
  s.resource = pr();
  s.target = ot();
  s.schedule = {Step::Resource, Step::MsgAtoB};
  s.comm_bits = 1;

  s.prog_a.tape_len = 0;
  s.prog_a.resource_input = [](const PartyView& v) {
    return static_cast<std::uint8_t>(pair_hi(v.input) ^ pair_lo(v.input));
  };
  s.prog_a.messages = {[](const PartyView& v) {
    return static_cast<std::uint8_t>(pair_hi(v.input) ^ *v.res_out);
  }};
  s.prog_a.output = [](const PartyView&) { return std::uint8_t{0}; };

  s.prog_b.tape_len = 0;
  s.prog_b.resource_input = [](const PartyView& v) { return v.input; };
  s.prog_b.output = [](const PartyView& v) {
    return static_cast<std::uint8_t>(v.msgs_in[0] ^ *v.res_out);
  };
  return s;
}

/// Each party folds its input into its half of the key and announces the
/// fold; the cross terms reassemble into a nonlocal pair on (x, y).
ProtocolSpec pr_from_ok() {
  ProtocolSpec s;
  s.name = "pr-from-ok";
  s.resource = ok();
  s.target = pr();
  s.schedule = {Step::Resource, Step::MsgAtoB, Step::MsgBtoA};
  s.comm_bits = 2;

  s.prog_a.tape_len = 0;
  s.prog_a.messages = {[](const PartyView& v) {
    return static_cast<std::uint8_t>(v.input ^ pair_hi(*v.res_out) ^
                                     pair_lo(*v.res_out));
  }};
  s.prog_a.output = [](const PartyView& v) {
    const std::uint8_t x0 = pair_hi(*v.res_out), x1 = pair_lo(*v.res_out);
    const std::uint8_t ma = v.msgs_out[0], mb = v.msgs_in[0];
    return static_cast<std::uint8_t>(x0 ^ ((x0 ^ x1) & mb) ^ (ma & mb));
  };

  s.prog_b.tape_len = 0;
  s.prog_b.messages = {[](const PartyView& v) {
    return static_cast<std::uint8_t>(v.input ^ pair_hi(*v.res_out));
  }};
  s.prog_b.output = [](const PartyView& v) {
    return static_cast<std::uint8_t>(pair_lo(*v.res_out) ^
                                     (pair_hi(*v.res_out) & v.msgs_in[0]));
  };
  return s;
}

/// B realigns the key to its real choice with one announcement; A pads each
/// input slot with the matching key slot and sends both.  B can unpad only
/// the slot its choice selects, the other stays hidden by the unseen key bit.
ProtocolSpec ot_from_ok() {
  ProtocolSpec s;
  s.name = "ot-from-ok";
  s.resource = ok();
  s.target = ot();
  s.schedule = {Step::Resource, Step::MsgBtoA, Step::MsgAtoB, Step::MsgAtoB};
  s.comm_bits = 3;

  s.prog_a.tape_len = 0;
  s.prog_a.messages = {
      [](const PartyView& v) {
        return static_cast<std::uint8_t>(pair_hi(v.input) ^
                                         pick(*v.res_out, v.msgs_in[0]));
      },
      [](const PartyView& v) {
        return static_cast<std::uint8_t>(pair_lo(v.input) ^
                                         pick(*v.res_out, v.msgs_in[0] ^ 1));
      }};
  s.prog_a.output = [](const PartyView&) { return std::uint8_t{0}; };

  s.prog_b.tape_len = 0;
  s.prog_b.messages = {[](const PartyView& v) {
    return static_cast<std::uint8_t>(v.input ^ pair_hi(*v.res_out));
  }};
  s.prog_b.output = [](const PartyView& v) {
    return static_cast<std::uint8_t>(v.msgs_in[v.input] ^ pair_lo(*v.res_out));
  };
  return s;
}

/// The reversed transfer sends a bit from B to A, yet one extra message turns
/// it around: A selects with x0^x1 inside B's random pair (r, r^c), so what A
/// receives pads x0 in a way B can strip exactly at its own choice bit.
ProtocolSpec ot_from_to() {
  ProtocolSpec s;
  s.name = "ot-from-to";
  s.resource = to();
  s.target = ot();
  s.schedule = {Step::Resource, Step::MsgAtoB};
  s.comm_bits = 1;

  s.prog_a.tape_len = 0;
  s.prog_a.resource_input = [](const PartyView& v) {
    return static_cast<std::uint8_t>(pair_hi(v.input) ^ pair_lo(v.input));
  };
  s.prog_a.messages = {[](const PartyView& v) {
    return static_cast<std::uint8_t>(pair_hi(v.input) ^ *v.res_out);
  }};
  s.prog_a.output = [](const PartyView&) { return std::uint8_t{0}; };

  s.prog_b.tape_len = 1;
  s.prog_b.resource_input = [](const PartyView& v) {
    return pair_code(v.tape[0], v.tape[0] ^ v.input);
  };
  s.prog_b.output = [](const PartyView& v) {
    return static_cast<std::uint8_t>(v.tape[0] ^ v.msgs_in[0]);
  };
  return s;
}

/// Silent role reversal: the chooser's half (C, Y) already contains a fresh
/// random pair (Y, Y^C), and the pair holder's half (X0, X1) contains a fresh
/// choice X0^X1 whose selected slot is always X0.
ProtocolSpec ok_from_ko() {
  ProtocolSpec s;
  s.name = "ok-from-ko";
  s.resource = ko();
  s.target = ok();
  s.schedule = {Step::Resource};
  s.comm_bits = 0;

  s.prog_a.tape_len = 0;
  s.prog_a.output = [](const PartyView& v) {
    const std::uint8_t c = pair_hi(*v.res_out), y = pair_lo(*v.res_out);
    return pair_code(y, y ^ c);
  };

  s.prog_b.tape_len = 0;
  s.prog_b.output = [](const PartyView& v) {
    const std::uint8_t x0 = pair_hi(*v.res_out), x1 = pair_lo(*v.res_out);
    return pair_code(x0 ^ x1, x0);
  };
  return s;
}

const std::vector<ProtocolSpec>& catalog() {
  static const std::vector<ProtocolSpec> all = [] {
    std::vector<ProtocolSpec> v{pr_from_ot(), ok_from_pr(), ok_from_ot(),
                                ot_from_pr(), pr_from_ok(), ot_from_ok(),
                                ot_from_to(), ok_from_ko()};
    for (const auto& spec : v) spec.validate();
    return v;
  }();
  return all;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& spec : catalog()) v.push_back(spec.name);
    return v;
  }();
  return names;
}

const ProtocolSpec& find_protocol(std::string_view name) {
  for (const auto& spec : catalog())
    if (spec.name == name) return spec;
  throw StructuralError("unknown protocol '" + std::string(name) + "'");
}

}  // namespace nlot
