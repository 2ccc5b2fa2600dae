#include "nlot/verifier.hpp"

namespace nlot {

namespace {

std::vector<std::uint8_t> bits_of(std::uint64_t value, int len) {
  std::vector<std::uint8_t> bits(len);
  for (int i = 0; i < len; ++i)
    bits[i] = static_cast<std::uint8_t>((value >> (len - 1 - i)) & 1);
  return bits;
}

}  // namespace

std::size_t JointDistribution::worlds_total() const {
  std::size_t n = 0;
  for (const auto& row : runs)
    for (const auto& cell : row) n += cell.size();
  return n;
}

FiniteDist JointDistribution::output_dist(std::uint8_t ia, std::uint8_t ib) const {
  std::vector<std::pair<Record, Rat>> weighted;
  for (const auto& [world, run] : runs[ia][ib])
    weighted.emplace_back(Record{run.out_a, run.out_b}, world_mass);
  return FiniteDist::from_weighted(spec.target.out_schema(), std::move(weighted));
}

FiniteDist JointDistribution::view_dist(Party p, std::uint8_t ia, std::uint8_t ib,
                                        bool with_counter_output) const {
  RecordSchema schema = view_schema(spec, p, true);
  const Alphabet& peer_out =
      p == Party::A ? spec.target.out_b : spec.target.out_a;
  const bool add_peer = with_counter_output && peer_out.size() > 1;
  if (add_peer) schema.fields.push_back(Field{"peerOut", peer_out});

  std::vector<std::pair<Record, Rat>> weighted;
  for (const auto& [world, run] : runs[ia][ib]) {
    Record rec = view_record(spec, p,
                             p == Party::A ? run.view_a : run.view_b, true);
    if (add_peer) rec.push_back(p == Party::A ? run.out_b : run.out_a);
    weighted.emplace_back(std::move(rec), world_mass);
  }
  return FiniteDist::from_weighted(std::move(schema), std::move(weighted));
}

JointDistribution enumerate_worlds(const ProtocolSpec& spec, int world_bit_bound) {
  spec.validate();
  JointDistribution j;
  j.spec = spec;
  const int la = spec.prog_a.tape_len;
  const int lb = spec.prog_b.tape_len;
  const int lr = spec.res_tape_bits();
  j.tape_bits = la + lb + lr;
  if (j.tape_bits > world_bit_bound)
    throw BoundExceededError(
        "protocol '" + spec.name + "' needs 2^" + std::to_string(j.tape_bits) +
        " worlds per input pair; the bound is 2^" + std::to_string(world_bit_bound));
  j.world_mass = rat(1, 1LL << j.tape_bits);

  const std::size_t na = spec.target.in_a.size();
  const std::size_t nb = spec.target.in_b.size();
  j.runs.resize(na);
  for (std::size_t ia = 0; ia < na; ++ia) {
    j.runs[ia].resize(nb);
    for (std::size_t ib = 0; ib < nb; ++ib) {
      auto& cell = j.runs[ia][ib];
      cell.reserve(std::size_t{1} << j.tape_bits);
      for (std::uint64_t ta = 0; ta < (std::uint64_t{1} << la); ++ta)
        for (std::uint64_t tb = 0; tb < (std::uint64_t{1} << lb); ++tb)
          for (std::uint64_t tr = 0; tr < (std::uint64_t{1} << lr); ++tr) {
            World w{static_cast<std::uint8_t>(ia), static_cast<std::uint8_t>(ib),
                    bits_of(ta, la), bits_of(tb, lb), bits_of(tr, lr)};
            RunResult r = run_protocol(spec, w);
            cell.emplace_back(std::move(w), std::move(r));
          }
    }
  }
  return j;
}

CheckOutcome check_correctness(const JointDistribution& joint) {
  const Primitive& target = joint.spec.target;
  int pairs = 0;
  for (std::uint8_t ia = 0; ia < target.in_a.size(); ++ia)
    for (std::uint8_t ib = 0; ib < target.in_b.size(); ++ib) {
      const FiniteDist actual = joint.output_dist(ia, ib);
      const FiniteDist& expected = target.row(ia, ib);
      if (!(actual == expected))
        return {false,
                Json{{"check", "correctness"},
                     {"inA", target.in_a.symbol(ia)},
                     {"inB", target.in_b.symbol(ib)},
                     {"expected", expected.to_json()},
                     {"actual", actual.to_json()}}};
      ++pairs;
    }
  return {true, Json{{"check", "correctness"}, {"inputPairs", pairs}}};
}

namespace {

/// All names of a schema except the listed ones, in schema order.
std::vector<std::string> names_except(const RecordSchema& schema,
                                      std::string_view dropped) {
  std::vector<std::string> names;
  for (const auto& f : schema.fields)
    if (f.name != dropped) names.push_back(f.name);
  return names;
}

/// Exact independence of the last coordinate from all the others:
/// every atom mass must equal the product of the two marginal masses.
std::optional<Json> dependence_witness(const FiniteDist& dist,
                                       const std::string& last_field) {
  const auto rest = names_except(dist.schema(), last_field);
  const FiniteDist m_rest = dist.marginal(rest);
  const FiniteDist m_last = dist.marginal({last_field});
  const std::size_t last_idx = dist.schema().index_of(last_field);
  for (const auto& [rec, mass] : dist.atoms()) {
    Record head;
    for (std::size_t i = 0; i < rec.size(); ++i)
      if (i != last_idx) head.push_back(rec[i]);
    const Rat product = m_rest.mass_of(head) * m_last.mass_of({rec[last_idx]});
    if (mass != product)
      return Json{{"atom", record_to_json(dist.schema(), rec)},
                  {"mass", rat_str(mass)},
                  {"productOfMarginals", rat_str(product)}};
  }
  return std::nullopt;
}

}  // namespace

CheckOutcome check_privacy(const JointDistribution& joint, Party p) {
  const ProtocolSpec& spec = joint.spec;
  const bool is_a = p == Party::A;
  const Alphabet& own_in = is_a ? spec.target.in_a : spec.target.in_b;
  const Alphabet& peer_in = is_a ? spec.target.in_b : spec.target.in_a;
  const Alphabet& own_out = is_a ? spec.target.out_a : spec.target.out_b;
  const Alphabet& peer_out = is_a ? spec.target.out_b : spec.target.out_a;
  const auto cell = [&](std::uint8_t u, std::uint8_t q) {
    return is_a ? std::pair<std::uint8_t, std::uint8_t>{u, q}
                : std::pair<std::uint8_t, std::uint8_t>{q, u};
  };
  int conditionals = 0;

  // The view must look the same whatever input the other party used,
  // once the party's own input and output are fixed.
  if (peer_in.size() > 1) {
    for (std::uint8_t u = 0; u < own_in.size(); ++u) {
      const std::size_t out_card = own_out.size() > 1 ? own_out.size() : 1;
      for (std::uint8_t o = 0; o < out_card; ++o) {
        std::optional<FiniteDist> reference;
        std::uint8_t reference_q = 0;
        for (std::uint8_t q = 0; q < peer_in.size(); ++q) {
          const auto [ia, ib] = cell(u, q);
          FiniteDist full = joint.view_dist(p, ia, ib);
          FiniteDist cond = full;
          if (own_out.size() > 1) {
            if (full.marginal({"out"}).mass_of({o}) == 0) continue;
            cond = full.condition_eq("out", o);
          }
          ++conditionals;
          if (!reference) {
            reference = std::move(cond);
            reference_q = q;
          } else if (!(cond == *reference)) {
            return {false,
                    Json{{"check", "privacy"},
                         {"party", party_name(p)},
                         {"clause", "view depends on the other party's input"},
                         {"ownIn", own_in.symbol(u)},
                         {"ownOut", own_out.size() > 1 ? own_out.symbol(o) : "-"},
                         {"peerIn", {peer_in.symbol(reference_q), peer_in.symbol(q)}},
                         {"viewDists", {reference->to_json(), cond.to_json()}}}};
          }
        }
      }
    }
  }

  // The view must also carry nothing about the other party's *output* beyond
  // what the party's own input and output already determine.
  if (peer_out.size() > 1) {
    for (std::uint8_t u = 0; u < own_in.size(); ++u)
      for (std::uint8_t q = 0; q < peer_in.size(); ++q) {
        const auto [ia, ib] = cell(u, q);
        const FiniteDist full = joint.view_dist(p, ia, ib, true);
        const std::size_t out_card = own_out.size() > 1 ? own_out.size() : 1;
        for (std::uint8_t o = 0; o < out_card; ++o) {
          FiniteDist cond = full;
          if (own_out.size() > 1) {
            if (full.marginal({"out"}).mass_of({o}) == 0) continue;
            cond = full.condition_eq("out", o);
          }
          ++conditionals;
          if (const auto witness = dependence_witness(cond, "peerOut"))
            return {false,
                    Json{{"check", "privacy"},
                         {"party", party_name(p)},
                         {"clause", "view depends on the other party's output"},
                         {"ownIn", own_in.symbol(u)},
                         {"peerIn", peer_in.symbol(q)},
                         {"ownOut", own_out.size() > 1 ? own_out.symbol(o) : "-"},
                         {"witness", *witness}}};
        }
      }
  }

  return {true, Json{{"check", "privacy"},
                     {"party", party_name(p)},
                     {"conditionals", conditionals}}};
}

CheckOutcome check_simulatability(const JointDistribution& joint, Party p) {
  const ProtocolSpec& spec = joint.spec;
  const bool is_a = p == Party::A;
  const Alphabet& own_in = is_a ? spec.target.in_a : spec.target.in_b;
  const Alphabet& peer_in = is_a ? spec.target.in_b : spec.target.in_a;
  const Alphabet& own_out = is_a ? spec.target.out_a : spec.target.out_b;
  const std::size_t out_card = own_out.size() > 1 ? own_out.size() : 1;

  // Build the simulator: one view distribution per (own input, own output),
  // taken from whichever counterpart input first realizes that output.
  std::vector<std::vector<std::optional<FiniteDist>>> simulator(
      own_in.size(), std::vector<std::optional<FiniteDist>>(out_card));
  for (std::uint8_t u = 0; u < own_in.size(); ++u)
    for (std::uint8_t q = 0; q < peer_in.size(); ++q) {
      const auto ia = is_a ? u : q, ib = is_a ? q : u;
      const FiniteDist full = joint.view_dist(p, ia, ib);
      for (std::uint8_t o = 0; o < out_card; ++o) {
        if (own_out.size() > 1 && full.marginal({"out"}).mass_of({o}) == 0)
          continue;
        if (!simulator[u][o])
          simulator[u][o] =
              own_out.size() > 1 ? full.condition_eq("out", o) : full;
      }
    }

  // Replay: mixing the simulator by the real output frequencies must
  // reproduce the exact view distribution for every input pair.
  for (std::uint8_t u = 0; u < own_in.size(); ++u)
    for (std::uint8_t q = 0; q < peer_in.size(); ++q) {
      const auto ia = is_a ? u : q, ib = is_a ? q : u;
      const FiniteDist full = joint.view_dist(p, ia, ib);
      std::vector<std::pair<Record, Rat>> weighted;
      for (std::uint8_t o = 0; o < out_card; ++o) {
        const Rat weight = own_out.size() > 1
                               ? full.marginal({"out"}).mass_of({o})
                               : Rat(1);
        if (weight == 0) continue;
        for (const auto& [rec, mass] : simulator[u][o]->atoms())
          weighted.emplace_back(rec, mass * weight);
      }
      const FiniteDist replay =
          FiniteDist::from_weighted(full.schema(), std::move(weighted));
      if (!(replay == full))
        return {false, Json{{"check", "simulatability"},
                            {"party", party_name(p)},
                            {"ownIn", own_in.symbol(u)},
                            {"peerIn", peer_in.symbol(q)},
                            {"actual", full.to_json()},
                            {"replayed", replay.to_json()}}};
    }
  return {true, Json{{"check", "simulatability"}, {"party", party_name(p)}}};
}

int comm_cost(const JointDistribution& joint) {
  for (const auto& row : joint.runs)
    for (const auto& cell : row)
      for (const auto& [world, run] : cell)
        if (run.transcript.size() !=
            static_cast<std::size_t>(joint.spec.comm_bits))
          throw StructuralError("protocol '" + joint.spec.name +
                                "': transcript length differs from the declared cost");
  return joint.spec.comm_bits;
}

bool VerificationReport::all_pass() const {
  return correctness.pass && privacy_a.pass && privacy_b.pass &&
         malicious_a.pass && malicious_b.pass;
}

Json VerificationReport::to_json() const {
  const auto outcome = [](const CheckOutcome& c) {
    return Json{{"pass", c.pass}, {"detail", c.detail}};
  };
  return Json{{"protocol", protocol},
              {"worlds", worlds},
              {"commBits", comm_bits},
              {"correctness", outcome(correctness)},
              {"privacy", Json{{"A", outcome(privacy_a)}, {"B", outcome(privacy_b)}}},
              {"malicious", Json{{"A", outcome(malicious_a)}, {"B", outcome(malicious_b)}}},
              {"allPass", all_pass()}};
}

VerificationReport verify(const ProtocolSpec& spec, const VerifyOptions& opts) {
  const JointDistribution joint = enumerate_worlds(spec, opts.world_bit_bound);
  VerificationReport report;
  report.protocol = spec.name;
  report.correctness = check_correctness(joint);
  report.privacy_a = check_privacy(joint, Party::A);
  report.privacy_b = check_privacy(joint, Party::B);
  report.malicious_a = check_malicious(spec, Party::A, opts);
  report.malicious_b = check_malicious(spec, Party::B, opts);
  report.comm_bits = comm_cost(joint);
  report.worlds = joint.worlds_total();
  return report;
}

}  // namespace nlot
