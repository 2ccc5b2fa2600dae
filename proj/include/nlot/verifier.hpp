#pragma once

#include <optional>

#include "nlot/catalog.hpp"

namespace nlot {

// ============================================================================
// Exhaustive exact verification.
//
// Everything below enumerates finite world sets and compares exact rational
// distributions; a check either passes, or fails with a concrete replayable
// witness.  There is no sampling and no tolerance anywhere in this module.
// ============================================================================

struct VerifyOptions {
  int world_bit_bound = 20;          // refuse enumerations beyond 2^20 worlds per input pair
  std::uint64_t deviation_bound = std::uint64_t(1) << 24;
  int workers = 1;
};

/// Joint behavior of a protocol: for each input pair, every world with its
/// run result.  Tapes and resource selectors are uniform, so every world of
/// an input pair carries the same mass 1 / 2^(total tape bits).
struct JointDistribution {
  ProtocolSpec spec;
  int tape_bits = 0;   // tape_a + tape_b + resource selector bits
  Rat world_mass;      // 1 / 2^tape_bits
  // indexed [ia][ib]
  std::vector<std::vector<std::vector<std::pair<World, RunResult>>>> runs;

  std::size_t worlds_total() const;

  /// Induced output distribution of one input pair, over the target's
  /// output schema.
  FiniteDist output_dist(std::uint8_t ia, std::uint8_t ib) const;

  /// Distribution of one party's full view (with output), optionally
  /// extended with the counterpart's output as an extra coordinate.
  FiniteDist view_dist(Party p, std::uint8_t ia, std::uint8_t ib,
                       bool with_counter_output = false) const;
};

JointDistribution enumerate_worlds(const ProtocolSpec& spec,
                                   int world_bit_bound = 20);

struct CheckOutcome {
  bool pass = true;
  Json detail;  // counterexample / witness when pass == false
};

/// Exact equality of every induced output distribution with the target row.
CheckOutcome check_correctness(const JointDistribution& joint);

/// Honest-but-curious privacy as exact conditional independence:
///   view_P  independent of  input_Q   given (input_P, output_P), and
///   view_P  independent of  output_Q  given (input_P, input_Q, output_P).
/// The second clause is what gives inputless targets (ok/ko) their teeth.
CheckOutcome check_privacy(const JointDistribution& joint, Party p);

/// Simulatability corollary for passing protocols: each party's view
/// distribution is reconstructible from the (input, output)-indexed family.
CheckOutcome check_simulatability(const JointDistribution& joint, Party p);

/// Asserts the transcript length of every world equals the declared cost,
/// then returns that cost.
int comm_cost(const JointDistribution& joint);

// ---- malicious (deterministic deviations) ----------------------------------

/// One substitutable decision of a party: its resource input or one sent
/// message, viewed as a total function of everything visible at that time.
struct DecisionPoint {
  Party party;
  enum class Kind : std::uint8_t { ResourceInput, Message } kind;
  int msg_slot = -1;        // own send index when kind == Message
  int choices = 2;          // decision alphabet size
  int input_card = 1;
  int tape_bits = 0;
  std::vector<int> obs_cards;    // observations made before this point
  std::vector<int> obs_sources;  // -1 = resource output, k >= 0 = k-th incoming message
  bool feedback_relevant = true;

  std::uint64_t domain_size() const;
  std::uint64_t fn_count() const;
  std::uint64_t history_index(const PartyView& v) const;
};

/// All decision points of a party, schedule order.
std::vector<DecisionPoint> decision_points(const ProtocolSpec& spec, Party p);

/// The deterministic deviation space of one party: total functions at every
/// decision point that still has a later observation (later points cannot
/// change what the deviator sees, hence cannot help it learn more).
struct DeviationSpace {
  Party party;
  std::vector<DecisionPoint> points;

  std::uint64_t size() const;
  /// Replaces the party's decisions with the strategy's lookup tables.
  ProtocolSpec instantiate(const ProtocolSpec& base, std::uint64_t strategy) const;
  Json describe(const ProtocolSpec& base, std::uint64_t strategy) const;
};

DeviationSpace deviation_space(const ProtocolSpec& spec, Party p);

/// For every deterministic deviation of party p, checks the target-specific
/// secrecy property against the honest counterpart:
///   ot/to: deviating sender's view independent of the choice bit;
///          deviating receiver's view leaves some sender bit exactly uniform.
///   pr:    deviator's view independent of the honest input.
///   ok/ko: pair-side deviator leaves C uniform; choice-side deviator leaves
///          some X coordinate exactly uniform.
CheckOutcome check_malicious(const ProtocolSpec& spec, Party p,
                             const VerifyOptions& opts = {});

// ---- full verdict -----------------------------------------------------------

struct VerificationReport {
  std::string protocol;
  CheckOutcome correctness;
  CheckOutcome privacy_a, privacy_b;
  CheckOutcome malicious_a, malicious_b;
  int comm_bits = 0;
  std::size_t worlds = 0;

  bool all_pass() const;
  Json to_json() const;
};

VerificationReport verify(const ProtocolSpec& spec, const VerifyOptions& opts = {});

}  // namespace nlot
