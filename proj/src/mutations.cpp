#include "nlot/mutations.hpp"

namespace nlot {

namespace {

Mutant make(std::string id, const ProtocolSpec& base, std::string note,
            bool corr, bool priv_a, bool priv_b,
            const std::function<void(ProtocolSpec&)>& damage) {
  Mutant m;
  m.id = std::move(id);
  m.base = base.name;
  m.note = std::move(note);
  m.spec = base;
  m.spec.name = m.id;
  damage(m.spec);
  m.spec.validate();
  m.breaks_correctness = corr;
  m.breaks_privacy_a = priv_a;
  m.breaks_privacy_b = priv_b;
  return m;
}

std::vector<Mutant> build_catalog() {
  std::vector<Mutant> all;

  // ---- pr-from-ot ----
  all.push_back(make(
      "pr-from-ot:constant-pair", pr_from_ot(),
      "A feeds (a,a) into the transfer, so the shares never anticorrelate",
      true, false, false, [](ProtocolSpec& s) {
        s.prog_a.resource_input = [](const PartyView& v) {
          return pair_code(v.tape[0], v.tape[0]);
        };
      }));
  all.push_back(make(
      "pr-from-ot:pair-echoes-input", pr_from_ot(),
      "A feeds its raw input as a transfer slot and B outputs a constant, "
      "so B's view shows A's input",
      true, false, true, [](ProtocolSpec& s) {
        s.prog_a.resource_input = [](const PartyView& v) {
          return pair_code(v.input, v.tape[0]);
        };
        s.prog_b.output = [](const PartyView&) { return std::uint8_t{0}; };
      }));

  // ---- ok-from-pr ----
  all.push_back(make(
      "ok-from-pr:reuse-share", ok_from_pr(),
      "A keeps (a,a) instead of (a,a^x); its view then still holds x, which "
      "B's key bit correlates with",
      true, true, false, [](ProtocolSpec& s) {
        s.prog_a.output = [](const PartyView& v) {
          return pair_code(*v.res_out, *v.res_out);
        };
      }));
  all.push_back(make(
      "ok-from-pr:fixed-choice", ok_from_pr(),
      "B always plays 0 into the nonlocal pair, so its kept bit matches the "
      "wrong key slot",
      true, false, false, [](ProtocolSpec& s) {
        s.prog_b.resource_input = [](const PartyView&) { return std::uint8_t{0}; };
      }));

  // ---- ok-from-ot ----
  all.push_back(make(
      "ok-from-ot:constant-choice", ok_from_ot(),
      "B selects slot 0 regardless of its tape but still claims its tape as "
      "the choice",
      true, false, false, [](ProtocolSpec& s) {
        s.prog_b.resource_input = [](const PartyView&) { return std::uint8_t{0}; };
      }));
  all.push_back(make(
      "ok-from-ot:duplicate-key-slot", ok_from_ot(),
      "A outputs (x0,x0) while feeding (x0,x1), so its view keeps a slot "
      "that correlates with B's received bit",
      true, true, false, [](ProtocolSpec& s) {
        s.prog_a.output = [](const PartyView& v) {
          return pair_code(v.tape[0], v.tape[0]);
        };
      }));

  // ---- ot-from-pr ----
  all.push_back(make(
      "ot-from-pr:unmasked-message", ot_from_pr(),
      "A sends x0 in the clear; B cannot unpad and both views correlate "
      "with what they must not",
      true, true, true, [](ProtocolSpec& s) {
        s.prog_a.messages = {[](const PartyView& v) { return pair_hi(v.input); }};
      }));
  all.push_back(make(
      "ot-from-pr:wrong-correlation-input", ot_from_pr(),
      "A plays x0 instead of x0^x1 into the nonlocal pair, so B decodes the "
      "wrong slot",
      true, false, false, [](ProtocolSpec& s) {
        s.prog_a.resource_input = [](const PartyView& v) { return pair_hi(v.input); };
      }));

  // ---- pr-from-ok ----
  all.push_back(make(
      "pr-from-ok:skip-fold", pr_from_ok(),
      "A announces X0^X1 without folding in its input, so the pair plays a "
      "fixed 0 on A's side",
      true, false, false, [](ProtocolSpec& s) {
        s.prog_a.messages = {[](const PartyView& v) {
          return static_cast<std::uint8_t>(pair_hi(*v.res_out) ^
                                           pair_lo(*v.res_out));
        }};
      }));
  all.push_back(make(
      "pr-from-ok:echo-input", pr_from_ok(),
      "A announces its input bare instead of key-folded; B reads it off the "
      "wire",
      true, true, true, [](ProtocolSpec& s) {
        s.prog_a.messages = {[](const PartyView& v) { return v.input; }};
      }));

  // ---- ot-from-ok ----
  all.push_back(make(
      "ot-from-ok:no-mask", ot_from_ok(),
      "A sends both inputs bare and B outputs the selected wire directly: "
      "still correct, but B's view holds the other input too",
      false, false, true, [](ProtocolSpec& s) {
        s.prog_a.messages = {
            [](const PartyView& v) { return pair_hi(v.input); },
            [](const PartyView& v) { return pair_lo(v.input); }};
        s.prog_b.output = [](const PartyView& v) { return v.msgs_in[v.input]; };
      }));
  all.push_back(make(
      "ot-from-ok:skip-realign", ot_from_ok(),
      "B announces its choice bare instead of key-shifted, telling A which "
      "slot it wants",
      true, true, true, [](ProtocolSpec& s) {
        s.prog_b.messages = {[](const PartyView& v) { return v.input; }};
      }));

  // ---- ot-from-to ----
  all.push_back(make(
      "ot-from-to:constant-select", ot_from_to(),
      "A always fetches slot 0 of B's pair, so B always decodes x0",
      true, false, false, [](ProtocolSpec& s) {
        s.prog_a.resource_input = [](const PartyView&) { return std::uint8_t{0}; };
      }));
  all.push_back(make(
      "ot-from-to:pair-leaks-choice", ot_from_to(),
      "B loads its raw choice as a transfer slot, handing it straight to A",
      true, true, true, [](ProtocolSpec& s) {
        s.prog_b.resource_input = [](const PartyView& v) {
          return pair_code(v.input, v.tape[0]);
        };
      }));

  // ---- ok-from-ko ----
  all.push_back(make(
      "ok-from-ko:copy-slots", ok_from_ko(),
      "A relabels its half as (Y,Y); the dropped choice bit stays in its "
      "view and correlates with B's output",
      true, true, false, [](ProtocolSpec& s) {
        s.prog_a.output = [](const PartyView& v) {
          return pair_code(pair_lo(*v.res_out), pair_lo(*v.res_out));
        };
      }));
  all.push_back(make(
      "ok-from-ko:forgot-swap", ok_from_ko(),
      "B keeps (X0,X1) as if it were already a choice/value pair",
      true, false, false, [](ProtocolSpec& s) {
        s.prog_b.output = [](const PartyView& v) { return *v.res_out; };
      }));

  return all;
}

}  // namespace

const std::vector<Mutant>& mutation_catalog() {
  static const std::vector<Mutant> all = build_catalog();
  return all;
}

const Mutant& find_mutant(std::string_view id) {
  for (const auto& m : mutation_catalog())
    if (m.id == id) return m;
  throw StructuralError("unknown mutant '" + std::string(id) + "'");
}

}  // namespace nlot
