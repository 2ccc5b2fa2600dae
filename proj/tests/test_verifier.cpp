#include <doctest.h>

#include "nlot/verifier.hpp"

// ============================================================================
// The exhaustive verifier.  World counts and deviation-space sizes are
// checked against closed-form oracles (input cardinalities times 2^tape
// bits; function-space products), and every check is also pointed at inputs
// engineered to fail, so a silent always-pass verifier cannot slip through.
// ============================================================================

namespace {

using namespace nlot;

std::size_t expected_worlds(const ProtocolSpec& spec) {
  return spec.target.in_a.size() * spec.target.in_b.size() *
         (std::size_t(1) << spec.total_tape_bits());
}

/// ot-from-pr with A's pad dropped: the first secret slot crosses the wire
/// in the clear, so receiver-side privacy must fail with a witness.
ProtocolSpec leaky_transfer() {
  ProtocolSpec s = ot_from_pr();
  s.name = "leaky";
  s.prog_a.messages = {[](const PartyView& v) {
    return static_cast<std::uint8_t>(pair_hi(v.input));
  }};
  s.prog_b.output = [](const PartyView& v) {
    return static_cast<std::uint8_t>(v.input ? 0 : v.msgs_in[0]);
  };
  return s;
}

}  // namespace

TEST_CASE("world enumeration sizes follow the tape arithmetic") {
  for (const ProtocolSpec& spec : catalog()) {
    const JointDistribution joint = enumerate_worlds(spec);
    CHECK(joint.worlds_total() == expected_worlds(spec));
    CHECK(joint.world_mass ==
          rat(1, 1LL << spec.total_tape_bits()));
  }
  // Closed forms, spelled out:
  CHECK(enumerate_worlds(find_protocol("pr-from-ot")).worlds_total() == 8);
  CHECK(enumerate_worlds(find_protocol("ok-from-pr")).worlds_total() == 8);
  CHECK(enumerate_worlds(find_protocol("ok-from-ot")).worlds_total() == 8);
  CHECK(enumerate_worlds(find_protocol("ot-from-pr")).worlds_total() == 16);
  CHECK(enumerate_worlds(find_protocol("pr-from-ok")).worlds_total() == 32);
  CHECK(enumerate_worlds(find_protocol("ot-from-ok")).worlds_total() == 64);
  CHECK(enumerate_worlds(find_protocol("ot-from-to")).worlds_total() == 16);
  CHECK(enumerate_worlds(find_protocol("ok-from-ko")).worlds_total() == 8);
}

TEST_CASE("world bit bound refuses oversized enumerations") {
  const ProtocolSpec spec = find_protocol("pr-from-ok");  // 3 selector bits
  CHECK_THROWS_AS(enumerate_worlds(spec, 2), BoundExceededError);
}

TEST_CASE("induced output distributions match the target tables exactly") {
  for (const ProtocolSpec& spec : catalog()) {
    const JointDistribution joint = enumerate_worlds(spec);
    for (std::uint8_t ia = 0; ia < spec.target.in_a.size(); ++ia)
      for (std::uint8_t ib = 0; ib < spec.target.in_b.size(); ++ib)
        CHECK(joint.output_dist(ia, ib) == spec.target.row(ia, ib));
    CHECK(check_correctness(joint).pass);
  }
}

TEST_CASE("view distributions are normalized") {
  const JointDistribution joint = enumerate_worlds(find_protocol("ot-from-ok"));
  for (const Party p : {Party::A, Party::B})
    for (std::uint8_t ia = 0; ia < 4; ++ia)
      for (std::uint8_t ib = 0; ib < 2; ++ib) {
        const FiniteDist v = joint.view_dist(p, ia, ib);
        Rat total(0);
        for (const auto& [rec, mass] : v.atoms()) total += mass;
        CHECK(total == Rat(1));
      }
  // Extending with the counterpart output adds a coordinate.
  const FiniteDist plain = joint.view_dist(Party::A, 2, 1);
  const FiniteDist ext = joint.view_dist(Party::A, 2, 1, true);
  CHECK(ext.schema().arity() == plain.schema().arity() + 1);
  CHECK(ext.schema().has_field("peerOut"));
}

TEST_CASE("privacy holds for both parties of every reduction") {
  for (const ProtocolSpec& spec : catalog()) {
    const JointDistribution joint = enumerate_worlds(spec);
    CHECK(check_privacy(joint, Party::A).pass);
    CHECK(check_privacy(joint, Party::B).pass);
  }
}

TEST_CASE("privacy fails with a counterexample when a secret is on the wire") {
  const ProtocolSpec spec = leaky_transfer();
  const JointDistribution joint = enumerate_worlds(spec);
  // The broken unpad above also wrecks correctness for c=1; privacy for B
  // must flag the cleartext first slot regardless.
  const CheckOutcome priv_b = check_privacy(joint, Party::B);
  CHECK_FALSE(priv_b.pass);
  CHECK(priv_b.detail.is_object());
  CHECK_FALSE(priv_b.detail.empty());
}

TEST_CASE("simulatability accompanies privacy on the catalog") {
  for (const ProtocolSpec& spec : catalog()) {
    const JointDistribution joint = enumerate_worlds(spec);
    CHECK(check_simulatability(joint, Party::A).pass);
    CHECK(check_simulatability(joint, Party::B).pass);
  }
}

TEST_CASE("communication costs match the catalog figures per world") {
  const std::vector<std::pair<std::string, int>> expected{
      {"pr-from-ot", 0}, {"ok-from-pr", 0}, {"ok-from-ot", 0},
      {"ot-from-pr", 1}, {"pr-from-ok", 2}, {"ot-from-ok", 3},
      {"ot-from-to", 1}, {"ok-from-ko", 0}};
  for (const auto& [name, bits] : expected) {
    const JointDistribution joint = enumerate_worlds(find_protocol(name));
    CHECK(comm_cost(joint) == bits);
  }
}

TEST_CASE("decision points expose the substitutable choices in order") {
  // Sender side of the two-bit pair reduction: no resource input (the key is
  // inputless), one message whose visible history is (own input, key half).
  const ProtocolSpec spec = find_protocol("pr-from-ok");
  const auto pts_a = decision_points(spec, Party::A);
  REQUIRE(pts_a.size() == 1);
  CHECK(pts_a[0].kind == DecisionPoint::Kind::Message);
  CHECK(pts_a[0].input_card == 2);
  CHECK(pts_a[0].domain_size() == 8);   // input x key-pair code
  CHECK(pts_a[0].fn_count() == 256);    // 2^8 lookup tables
  CHECK(pts_a[0].feedback_relevant);    // B's reply lands afterwards

  // B answers last and sees nothing after its own message.
  const auto pts_b = decision_points(spec, Party::B);
  REQUIRE(pts_b.size() == 1);
  CHECK_FALSE(pts_b[0].feedback_relevant);

  // The transfer-from-key protocol: B opens (one message, feedback-relevant),
  // then A sends two bits and never hears back.
  const ProtocolSpec bbcs = find_protocol("ot-from-ok");
  const auto bbcs_a = decision_points(bbcs, Party::A);
  REQUIRE(bbcs_a.size() == 2);
  CHECK_FALSE(bbcs_a[0].feedback_relevant);
  CHECK_FALSE(bbcs_a[1].feedback_relevant);
  const auto bbcs_b = decision_points(bbcs, Party::B);
  REQUIRE(bbcs_b.size() == 1);
  CHECK(bbcs_b[0].feedback_relevant);
  CHECK(bbcs_b[0].domain_size() == 8);  // choice bit x key half (C,Y)
}

TEST_CASE("deviation spaces enumerate only feedback-relevant points") {
  // pr-from-ok, party A: one relevant point with 256 tables.
  const DeviationSpace dev_a = deviation_space(find_protocol("pr-from-ok"), Party::A);
  CHECK(dev_a.size() == 256);
  // party B deviates last: nothing it sends changes what it sees.
  const DeviationSpace dev_b = deviation_space(find_protocol("pr-from-ok"), Party::B);
  CHECK(dev_b.size() == 1);
  CHECK(dev_b.points.empty());
  // ot-from-ok, party B: the opening message, 2^8 tables.
  const DeviationSpace bbcs_b = deviation_space(find_protocol("ot-from-ok"), Party::B);
  CHECK(bbcs_b.size() == 256);
  // instantiate() replays a strategy as an executable protocol.
  const ProtocolSpec honest_like = bbcs_b.instantiate(find_protocol("ot-from-ok"), 0);
  CHECK_NOTHROW(honest_like.validate());
  CHECK_NOTHROW(enumerate_worlds(honest_like));
}

TEST_CASE("malicious checks pass for every reduction and both parties") {
  for (const ProtocolSpec& spec : catalog()) {
    CHECK(check_malicious(spec, Party::A).pass);
    CHECK(check_malicious(spec, Party::B).pass);
  }
}

TEST_CASE("deviation bound refuses oversized strategy spaces") {
  VerifyOptions opts;
  opts.deviation_bound = 2;  // pr-from-ok party A has 256 strategies
  CHECK_THROWS_AS(check_malicious(find_protocol("pr-from-ok"), Party::A, opts),
                  BoundExceededError);
}

TEST_CASE("full reports aggregate all five verdicts") {
  const VerificationReport report = verify(find_protocol("ot-from-to"));
  CHECK(report.protocol == "ot-from-to");
  CHECK(report.comm_bits == 1);
  CHECK(report.worlds == 16);
  CHECK(report.all_pass());
  const Json j = report.to_json();
  CHECK(j["allPass"] == true);
  CHECK(j["privacy"]["A"]["pass"] == true);
  CHECK(j["malicious"]["B"]["pass"] == true);

  for (const ProtocolSpec& spec : catalog()) CHECK(verify(spec).all_pass());
}

TEST_CASE("worker count never changes a verdict") {
  VerifyOptions serial, parallel;
  parallel.workers = 4;
  for (const char* name : {"ot-from-ok", "pr-from-ok"}) {
    const Json a = verify(find_protocol(name), serial).to_json();
    const Json b = verify(find_protocol(name), parallel).to_json();
    CHECK(a == b);
  }
}
