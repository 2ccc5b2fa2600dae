#include <thread>

#include "nlot/verifier.hpp"

namespace nlot {

namespace {

constexpr std::uint64_t kSaturated = ~std::uint64_t{0};

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r = sat_mul(r, base);
    if (r == kSaturated) return kSaturated;
  }
  return r;
}

std::string count_str(std::uint64_t n) {
  return n == kSaturated ? std::string("more than 2^63") : std::to_string(n);
}

}  // namespace

std::uint64_t DecisionPoint::domain_size() const {
  std::uint64_t d = sat_mul(static_cast<std::uint64_t>(input_card),
                            std::uint64_t{1} << tape_bits);
  for (const int card : obs_cards) d = sat_mul(d, static_cast<std::uint64_t>(card));
  return d;
}

std::uint64_t DecisionPoint::fn_count() const {
  return sat_pow(static_cast<std::uint64_t>(choices), domain_size());
}

std::uint64_t DecisionPoint::history_index(const PartyView& v) const {
  std::uint64_t h = v.input;
  for (const std::uint8_t bit : v.tape) h = h * 2 + (bit & 1);
  for (std::size_t i = 0; i < obs_sources.size(); ++i) {
    const int src = obs_sources[i];
    std::uint8_t value;
    if (src < 0) {
      if (!v.res_out)
        throw StructuralError("decision history references a resource output "
                              "that has not happened");
      value = *v.res_out;
    } else {
      value = v.msgs_in.at(static_cast<std::size_t>(src));
    }
    h = h * static_cast<std::uint64_t>(obs_cards[i]) + value;
  }
  return h;
}

std::vector<DecisionPoint> decision_points(const ProtocolSpec& spec, Party p) {
  const bool is_a = p == Party::A;
  const Alphabet& res_in = is_a ? spec.resource.in_a : spec.resource.in_b;
  const Alphabet& res_out = is_a ? spec.resource.out_a : spec.resource.out_b;
  const Alphabet& target_in = is_a ? spec.target.in_a : spec.target.in_b;
  const int tape_len = is_a ? spec.prog_a.tape_len : spec.prog_b.tape_len;

  std::vector<DecisionPoint> points;
  std::vector<int> obs_cards, obs_sources;
  int incoming = 0, own_slot = 0;

  const auto add_point = [&](DecisionPoint::Kind kind, int slot, int choices) {
    DecisionPoint pt;
    pt.party = p;
    pt.kind = kind;
    pt.msg_slot = slot;
    pt.choices = choices;
    pt.input_card = static_cast<int>(target_in.size());
    pt.tape_bits = tape_len;
    pt.obs_cards = obs_cards;
    pt.obs_sources = obs_sources;
    points.push_back(std::move(pt));
  };

  for (const Step step : spec.schedule) {
    switch (step) {
      case Step::Resource:
        if (res_in.size() > 1)
          add_point(DecisionPoint::Kind::ResourceInput, -1,
                    static_cast<int>(res_in.size()));
        if (res_out.size() > 1) {
          obs_cards.push_back(static_cast<int>(res_out.size()));
          obs_sources.push_back(-1);
        }
        break;
      case Step::MsgAtoB:
      case Step::MsgBtoA:
        if ((step == Step::MsgAtoB) == is_a) {
          add_point(DecisionPoint::Kind::Message, own_slot++, 2);
        } else {
          obs_cards.push_back(2);
          obs_sources.push_back(incoming++);
        }
        break;
    }
  }
  // A decision can only help the deviator if something is observed after it.
  for (auto& pt : points)
    pt.feedback_relevant = pt.obs_cards.size() < obs_cards.size();
  return points;
}

std::uint64_t DeviationSpace::size() const {
  std::uint64_t n = 1;
  for (const auto& pt : points) n = sat_mul(n, pt.fn_count());
  return n;
}

ProtocolSpec DeviationSpace::instantiate(const ProtocolSpec& base,
                                         std::uint64_t strategy) const {
  ProtocolSpec spec = base;
  spec.name = base.name + "#dev" + party_name(party) + std::to_string(strategy);
  std::uint64_t rest = strategy;
  for (const auto& pt : points) {
    const std::uint64_t fn = rest % pt.fn_count();
    rest /= pt.fn_count();
    DecisionFn lookup = [pt, fn](const PartyView& v) {
      std::uint64_t digits = fn;
      for (std::uint64_t h = pt.history_index(v); h > 0; --h)
        digits /= static_cast<std::uint64_t>(pt.choices);
      return static_cast<std::uint8_t>(digits %
                                       static_cast<std::uint64_t>(pt.choices));
    };
    PartyProgram& prog = party == Party::A ? spec.prog_a : spec.prog_b;
    if (pt.kind == DecisionPoint::Kind::ResourceInput)
      prog.resource_input = std::move(lookup);
    else
      prog.messages.at(static_cast<std::size_t>(pt.msg_slot)) = std::move(lookup);
  }
  return spec;
}

Json DeviationSpace::describe(const ProtocolSpec& base,
                              std::uint64_t strategy) const {
  Json described = Json::array();
  std::uint64_t rest = strategy;
  for (const auto& pt : points) {
    std::uint64_t fn = rest % pt.fn_count();
    rest /= pt.fn_count();
    Json table = Json::array();
    for (std::uint64_t h = 0; h < pt.domain_size(); ++h) {
      table.push_back(static_cast<int>(fn % pt.choices));
      fn /= static_cast<std::uint64_t>(pt.choices);
    }
    described.push_back(
        Json{{"kind", pt.kind == DecisionPoint::Kind::ResourceInput
                          ? "resourceInput"
                          : "message"},
             {"msgSlot", pt.msg_slot},
             {"choices", pt.choices},
             {"table", std::move(table)}});
  }
  return Json{{"protocol", base.name},
              {"party", party_name(party)},
              {"strategy", strategy},
              {"points", std::move(described)}};
}

DeviationSpace deviation_space(const ProtocolSpec& spec, Party p) {
  DeviationSpace space;
  space.party = p;
  for (auto& pt : decision_points(spec, p))
    if (pt.feedback_relevant) space.points.push_back(std::move(pt));
  return space;
}

// ---- per-target secrecy properties ------------------------------------------

namespace {

/// What the honest counterpart must keep hidden from a deviating party.
enum class SecretKind {
  Independence,       // whole view independent of the honest input
  HonestInputPair,    // some slot of the honest input pair stays uniform
  HonestOutputPair,   // some slot of the honest output pair stays uniform
  HonestOutputChoice  // the honest choice bit stays uniform
};

SecretKind secret_kind(const Primitive& target, Party deviator) {
  const bool dev_a = deviator == Party::A;
  if (target.name == "pr") return SecretKind::Independence;
  if (target.name == "ot")
    return dev_a ? SecretKind::Independence : SecretKind::HonestInputPair;
  if (target.name == "to")
    return dev_a ? SecretKind::HonestInputPair : SecretKind::Independence;
  if (target.name == "ok")
    return dev_a ? SecretKind::HonestOutputChoice : SecretKind::HonestOutputPair;
  if (target.name == "ko")
    return dev_a ? SecretKind::HonestOutputPair : SecretKind::HonestOutputChoice;
  throw StructuralError("no malicious property defined for target '" +
                        target.name + "'");
}

FiniteDist dev_view_dist(const JointDistribution& joint, Party p,
                         std::uint8_t ia, std::uint8_t ib) {
  const RecordSchema schema = view_schema(joint.spec, p, false);
  std::vector<std::pair<Record, Rat>> weighted;
  for (const auto& [world, run] : joint.runs[ia][ib])
    weighted.emplace_back(
        view_record(joint.spec, p, p == Party::A ? run.view_a : run.view_b, false),
        joint.world_mass);
  return FiniteDist::from_weighted(schema, weighted);
}

/// The deviator's view joined with one secret coordinate of the honest party,
/// under a uniform prior over both target inputs.
FiniteDist view_secret_dist(const JointDistribution& joint, Party p,
                            Field secret_field,
                            const std::function<std::uint8_t(
                                const World&, const RunResult&)>& secret) {
  RecordSchema schema = view_schema(joint.spec, p, false);
  schema.fields.push_back(std::move(secret_field));
  const Rat prior = rat(1, static_cast<long long>(joint.spec.target.in_a.size() *
                                            joint.spec.target.in_b.size()));
  std::vector<std::pair<Record, Rat>> weighted;
  for (const auto& row : joint.runs)
    for (const auto& cell : row)
      for (const auto& [world, run] : cell) {
        Record rec = view_record(joint.spec, p,
                                 p == Party::A ? run.view_a : run.view_b, false);
        rec.push_back(secret(world, run));
        weighted.emplace_back(std::move(rec), joint.world_mass * prior);
      }
  return FiniteDist::from_weighted(std::move(schema), std::move(weighted));
}

/// Scans view-groups of a (view..., secret) distribution.  In choice mode the
/// secret bit must be exactly uniform within every group; in pair mode some
/// slot of the secret pair must be exactly uniform within every group.
std::optional<Json> hidden_slot_witness(const FiniteDist& dist, bool pair_mode) {
  const auto& atoms = dist.atoms();
  RecordSchema view_part;
  view_part.fields.assign(dist.schema().fields.begin(),
                          dist.schema().fields.end() - 1);
  std::size_t i = 0;
  while (i < atoms.size()) {
    const Record prefix(atoms[i].first.begin(), atoms[i].first.end() - 1);
    Rat total(0), hi_zero(0), lo_zero(0);
    std::size_t j = i;
    for (; j < atoms.size(); ++j) {
      const Record& rec = atoms[j].first;
      if (!std::equal(prefix.begin(), prefix.end(), rec.begin())) break;
      const std::uint8_t secret = rec.back();
      total += atoms[j].second;
      if (pair_mode) {
        if (pair_hi(secret) == 0) hi_zero += atoms[j].second;
        if (pair_lo(secret) == 0) lo_zero += atoms[j].second;
      } else if (secret == 0) {
        hi_zero += atoms[j].second;
      }
    }
    const bool hidden = pair_mode
                            ? (2 * lo_zero == total || 2 * hi_zero == total)
                            : (2 * hi_zero == total);
    if (!hidden) {
      Json masses = pair_mode
                        ? Json{{"slot0zero", rat_str(hi_zero)},
                               {"slot1zero", rat_str(lo_zero)},
                               {"view", rat_str(total)}}
                        : Json{{"zero", rat_str(hi_zero)}, {"view", rat_str(total)}};
      return Json{{"view", record_to_json(view_part, prefix)},
                  {"masses", std::move(masses)}};
    }
    i = j;
  }
  return std::nullopt;
}

/// Applies the target-specific secrecy property to one deviated protocol.
std::optional<Json> secrecy_violation(const JointDistribution& joint, Party p) {
  const ProtocolSpec& spec = joint.spec;
  const bool is_a = p == Party::A;
  const Primitive& target = spec.target;

  switch (secret_kind(target, p)) {
    case SecretKind::Independence: {
      const Alphabet& own_in = is_a ? target.in_a : target.in_b;
      const Alphabet& peer_in = is_a ? target.in_b : target.in_a;
      for (std::uint8_t u = 0; u < own_in.size(); ++u) {
        std::optional<FiniteDist> reference;
        std::uint8_t reference_q = 0;
        for (std::uint8_t q = 0; q < peer_in.size(); ++q) {
          const auto ia = is_a ? u : q, ib = is_a ? q : u;
          FiniteDist dist = dev_view_dist(joint, p, ia, ib);
          if (!reference) {
            reference = std::move(dist);
            reference_q = q;
          } else if (!(dist == *reference)) {
            return Json{{"property", "view independent of the honest input"},
                        {"ownIn", own_in.symbol(u)},
                        {"peerIn", {peer_in.symbol(reference_q), peer_in.symbol(q)}},
                        {"viewDists", {reference->to_json(), dist.to_json()}}};
          }
        }
      }
      return std::nullopt;
    }
    case SecretKind::HonestInputPair: {
      const auto secret = [is_a](const World& w, const RunResult&) {
        return is_a ? w.in_b : w.in_a;
      };
      auto witness = hidden_slot_witness(
          view_secret_dist(joint, p, Field{"peerPair", pair_alphabet()}, secret),
          true);
      if (witness)
        return Json{{"property", "one honest input slot stays uniform"},
                    {"witness", *witness}};
      return std::nullopt;
    }
    case SecretKind::HonestOutputPair: {
      const auto secret = [is_a](const World&, const RunResult& r) {
        return is_a ? r.out_b : r.out_a;
      };
      auto witness = hidden_slot_witness(
          view_secret_dist(joint, p, Field{"peerPair", pair_alphabet()}, secret),
          true);
      if (witness)
        return Json{{"property", "one honest key slot stays uniform"},
                    {"witness", *witness}};
      return std::nullopt;
    }
    case SecretKind::HonestOutputChoice: {
      const auto secret = [is_a](const World&, const RunResult& r) {
        return pair_hi(is_a ? r.out_b : r.out_a);
      };
      auto witness = hidden_slot_witness(
          view_secret_dist(joint, p, Field{"peerChoice", bit_alphabet()}, secret),
          false);
      if (witness)
        return Json{{"property", "the honest choice bit stays uniform"},
                    {"witness", *witness}};
      return std::nullopt;
    }
  }
  return std::nullopt;
}

struct RangeResult {
  std::optional<std::uint64_t> failing;
  Json violation;
  std::exception_ptr error;
};

void scan_range(const ProtocolSpec& spec, Party p, const DeviationSpace& space,
                std::uint64_t begin, std::uint64_t end, int world_bit_bound,
                RangeResult& out) {
  try {
    for (std::uint64_t s = begin; s < end; ++s) {
      const ProtocolSpec deviated = space.instantiate(spec, s);
      const JointDistribution joint = enumerate_worlds(deviated, world_bit_bound);
      if (auto violation = secrecy_violation(joint, p)) {
        out.failing = s;
        out.violation = std::move(*violation);
        return;
      }
    }
  } catch (...) {
    out.error = std::current_exception();
  }
}

}  // namespace

CheckOutcome check_malicious(const ProtocolSpec& spec, Party p,
                             const VerifyOptions& opts) {
  const DeviationSpace space = deviation_space(spec, p);
  const std::uint64_t total = space.size();
  if (total > opts.deviation_bound)
    throw BoundExceededError("protocol '" + spec.name + "': party " +
                             party_name(p) + " has " + count_str(total) +
                             " deterministic deviations; the bound is " +
                             std::to_string(opts.deviation_bound));

  const int workers =
      std::max(1, std::min<int>(opts.workers, total >= 64 ? opts.workers : 1));
  std::vector<RangeResult> results(workers);
  if (workers == 1) {
    scan_range(spec, p, space, 0, total, opts.world_bit_bound, results[0]);
  } else {
    std::vector<std::thread> threads;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t begin = std::min<std::uint64_t>(w * chunk, total);
      const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, total);
      threads.emplace_back(scan_range, std::cref(spec), p, std::cref(space),
                           begin, end, opts.world_bit_bound,
                           std::ref(results[w]));
    }
    for (auto& t : threads) t.join();
  }

  for (const auto& r : results)
    if (r.error) std::rethrow_exception(r.error);
  for (const auto& r : results)
    if (r.failing)
      return {false, Json{{"check", "malicious"},
                          {"party", party_name(p)},
                          {"strategy", space.describe(spec, *r.failing)},
                          {"violation", r.violation}}};
  return {true, Json{{"check", "malicious"},
                     {"party", party_name(p)},
                     {"strategies", total},
                     {"decisionPoints", space.points.size()}}};
}

}  // namespace nlot
