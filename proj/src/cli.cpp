#include "nlot/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>

#include "nlot/mutations.hpp"
#include "nlot/nonlocality.hpp"
#include "nlot/optimality.hpp"
#include "nlot/verifier.hpp"
#include "nlot/version.hpp"

namespace nlot {

namespace {

// ---- demo-run randomness (never used by verification paths) ----------------

std::uint64_t next_raw(std::uint64_t& s) {
  s ^= s >> 12;
  s ^= s << 25;
  s ^= s >> 27;
  return s * 0x2545F4914F6CDD1DULL;
}

std::uint8_t next_bit(std::uint64_t& s) {
  return static_cast<std::uint8_t>(next_raw(s) >> 63);
}

std::vector<std::uint8_t> random_bits(std::uint64_t& s, int len) {
  std::vector<std::uint8_t> out(len);
  for (auto& b : out) b = next_bit(s);
  return out;
}

// ---- small shared helpers ----------------------------------------------------

void emit_json(const Json& doc, const std::string& out_path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file)
    throw StructuralError("cannot open output file '" + out_path + "'");
  file << text;
}

/// Prepends a version field to an already-built document.
Json with_version(const Json& payload) {
  Json doc{{"version", kVersion}};
  for (const auto& [key, value] : payload.items()) doc[key] = value;
  return doc;
}

int resolve_workers(const CLI::Option* opt, int flag_value) {
  if (opt != nullptr && opt->count() > 0) return flag_value;
  if (const char* env = std::getenv("NONLOCAL_OT_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw StructuralError("NONLOCAL_OT_WORKERS must be a positive integer");
  }
  return 1;
}

std::vector<std::uint8_t> parse_bits(const std::string& s, int expected,
                                     const std::string& what) {
  if (static_cast<int>(s.size()) != expected)
    throw StructuralError(what + " must be exactly " + std::to_string(expected) +
                          (expected == 1 ? " bit, got '" : " bits, got '") + s + "'");
  std::vector<std::uint8_t> out;
  for (const char c : s) {
    if (c != '0' && c != '1')
      throw StructuralError(what + " must be a bit string, got '" + s + "'");
    out.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

std::map<std::string, std::uint8_t> parse_assignments(
    const std::vector<std::string>& kvs) {
  std::map<std::string, std::uint8_t> out;
  for (const std::string& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw StructuralError("input assignments look like name=bit, got '" + kv +
                            "'");
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (value != "0" && value != "1")
      throw StructuralError("input '" + key + "' must be a bit, got '" + value +
                            "'");
    if (!out.emplace(key, static_cast<std::uint8_t>(value == "1")).second)
      throw StructuralError("input '" + key + "' assigned twice");
  }
  return out;
}

/// Input bit names: transfer-shaped targets use x0/x1 for the pair side and
/// c for the choice side; pair-output targets use x (A) and y (B).
std::string input_name_list(const Primitive& target) {
  std::vector<std::string> names;
  const auto add = [&](const Alphabet& alpha, Party side) {
    if (alpha.size() == 4) {
      names.push_back("x0");
      names.push_back("x1");
    } else if (alpha.size() == 2) {
      names.push_back(target.same_behavior(pr()) ? (side == Party::A ? "x" : "y")
                                                 : "c");
    }
  };
  add(target.in_a, Party::A);
  add(target.in_b, Party::B);
  if (names.empty()) return "";
  std::string joined = names.front();
  for (std::size_t i = 1; i < names.size(); ++i) joined += ", " + names[i];
  return joined;
}

std::uint8_t side_input(const Primitive& target, Party side,
                        std::map<std::string, std::uint8_t>& kv,
                        std::set<std::string>& used, std::uint64_t& rng) {
  const Alphabet& alpha = side == Party::A ? target.in_a : target.in_b;
  const auto take = [&](const std::string& key) -> std::uint8_t {
    const auto it = kv.find(key);
    if (it == kv.end()) return next_bit(rng);
    used.insert(key);
    return it->second;
  };
  if (alpha.size() == 1) return 0;
  if (alpha.size() == 4) return pair_code(take("x0"), take("x1"));
  if (target.same_behavior(pr())) return take(side == Party::A ? "x" : "y");
  return take("c");
}

// ---- subcommands -------------------------------------------------------------

int cmd_list(std::ostream& out) {
  for (const ProtocolSpec& spec : catalog())
    out << spec.name << ": " << spec.comm_bits
        << (spec.comm_bits == 1 ? " bit" : " bits") << "  (" << spec.resource.name
        << " -> " << spec.target.name << ")\n";
  return 0;
}

struct RunFlags {
  std::string protocol;
  std::vector<std::string> inputs;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string tape_a, tape_b, res_tape;  // explicit bit strings, demo only
};

int cmd_run(const RunFlags& flags, std::ostream& out) {
  const ProtocolSpec& spec = find_protocol(flags.protocol);
  std::uint64_t rng = flags.seed + 0x9E3779B97F4A7C15ULL;
  if (rng == 0) rng = 0x9E3779B97F4A7C15ULL;

  auto kv = parse_assignments(flags.inputs);
  std::set<std::string> used;
  World w;
  w.in_a = side_input(spec.target, Party::A, kv, used, rng);
  w.in_b = side_input(spec.target, Party::B, kv, used, rng);
  for (const auto& [key, value] : kv)
    if (!used.count(key)) {
      const std::string expected = input_name_list(spec.target);
      throw StructuralError("protocol '" + spec.name + "' has no input '" + key +
                            (expected.empty() ? "' (it takes no inputs)"
                                              : "' (expected: " + expected + ")"));
    }
  w.tape_a = flags.tape_a.empty()
                 ? random_bits(rng, spec.prog_a.tape_len)
                 : parse_bits(flags.tape_a, spec.prog_a.tape_len, "--tape-a");
  w.tape_b = flags.tape_b.empty()
                 ? random_bits(rng, spec.prog_b.tape_len)
                 : parse_bits(flags.tape_b, spec.prog_b.tape_len, "--tape-b");
  w.res_tape = flags.res_tape.empty()
                   ? random_bits(rng, spec.res_tape_bits())
                   : parse_bits(flags.res_tape, spec.res_tape_bits(),
                                "--res-tape");

  const RunResult rr = run_protocol(spec, w);
  emit_json(with_version(Json{{"protocol", spec.name},
                              {"seed", flags.seed},
                              {"run", run_result_to_json(spec, w, rr)}}),
            flags.out_path, out);
  return 0;
}

struct VerifyFlags {
  std::string protocol;
  std::string mutant;
  bool all = false;
  int workers = 1;
  std::string out_path;
};

int cmd_verify(const VerifyFlags& flags, std::ostream& out) {
  VerifyOptions opts;
  opts.workers = flags.workers;

  std::vector<const ProtocolSpec*> specs;
  if (flags.all) {
    for (const ProtocolSpec& spec : catalog()) specs.push_back(&spec);
  } else if (!flags.mutant.empty()) {
    specs.push_back(&find_mutant(flags.mutant).spec);
  } else if (!flags.protocol.empty()) {
    specs.push_back(&find_protocol(flags.protocol));
  } else {
    throw StructuralError("verify needs --protocol NAME, --mutant ID or --all");
  }

  Json reports = Json::array();
  bool all_pass = true;
  for (const ProtocolSpec* spec : specs) {
    const VerificationReport report = verify(*spec, opts);
    all_pass = all_pass && report.all_pass();
    reports.push_back(report.to_json());
  }
  emit_json(
      with_version(Json{{"budgets",
                         Json{{"worldBitBound", opts.world_bit_bound},
                              {"deviationBound", opts.deviation_bound}}},
                        {"reports", std::move(reports)},
                        {"allPass", all_pass}}),
      flags.out_path, out);
  return all_pass ? 0 : 1;
}

struct SearchFlags {
  std::string space;
  int bits = 1;
  bool one_way = false;
  int tape_budget = 0;
  int tape_a = -1, tape_b = -1;
  std::uint64_t witness_cap = 0;
  bool cap_given = false;
  std::uint64_t node_budget = 0;
  int workers = 1;
  std::string out_path;
};

int cmd_search(const SearchFlags& flags, std::ostream& out) {
  namespace sr = nlot::search;
  sr::SearchSpace space;
  const auto presets = sr::preset_names();
  if (std::find(presets.begin(), presets.end(), flags.space) != presets.end()) {
    space = sr::preset(flags.space);
  } else {
    auto [target, resource] = sr::parse_reduction(flags.space);
    space.name = flags.space;
    space.target = std::move(target);
    space.resource = std::move(resource);
    space.templates = sr::all_templates(flags.bits, flags.one_way);
    space.tape_a = flags.tape_a >= 0 ? flags.tape_a : flags.tape_budget;
    space.tape_b = flags.tape_b >= 0 ? flags.tape_b : flags.tape_budget;
  }
  if (flags.cap_given) space.witness_cap = flags.witness_cap;
  if (flags.node_budget > 0) space.node_budget = flags.node_budget;

  if (!space.witness_protocol.empty()) {
    const Json membership =
        sr::witness_membership(find_protocol(space.witness_protocol), space);
    const bool pass = membership.at("withinSpace").get<bool>() &&
                      membership.at("report").at("allPass").get<bool>();
    emit_json(with_version(membership), flags.out_path, out);
    return pass ? 0 : 1;
  }

  const sr::SearchResult result = sr::run_search(space, flags.workers);
  emit_json(with_version(result.to_json()), flags.out_path, out);
  return 0;
}

struct ChshFlags {
  std::string behavior = "singlet";
  std::string out_path;
};

int cmd_chsh(const ChshFlags& flags, std::ostream& out) {
  Json doc{{"behavior", flags.behavior}};
  bool violates_local = false, violates_quantum = false;

  const auto exact_fields = [&](const EqualStats& s) {
    doc["p_stats"] = Json::array({Json::array({rat_str(s.p[0][0]), rat_str(s.p[0][1])}),
                                  Json::array({rat_str(s.p[1][0]), rat_str(s.p[1][1])})});
    const Rat pv = chsh_p_value(s);
    const Rat corr = chsh_correlator(s);
    doc["p_value"] = rat_str(pv);
    doc["correlator"] = rat_str(corr);
    violates_local = pv > Rat(0);
    violates_quantum =
        rat_double(corr) > tsirelson_bound() + 1e-9;
  };

  if (flags.behavior == "singlet") {
    const MeasurementAngles ang = quarter_table_angles();
    doc["angles"] = Json{{"a", Json::array({ang.a[0], ang.a[1]})},
                         {"b", Json::array({ang.b[0], ang.b[1]})}};
    const EqualStatsReal s = singlet_stats(ang);
    doc["p_stats"] = Json::array({Json::array({s.p[0][0], s.p[0][1]}),
                                  Json::array({s.p[1][0], s.p[1][1]})});
    const double pv = chsh_p_value(s);
    const double corr = chsh_correlator(s);
    doc["p_value"] = pv;
    doc["correlator"] = corr;
    violates_local = pv > 1e-9;
    violates_quantum = corr > tsirelson_bound() + 1e-9;
  } else if (flags.behavior == "pr") {
    exact_fields(equal_stats(pr()));
  } else if (flags.behavior == "pr-variant") {
    exact_fields(equal_stats(pr_variant()));
  } else if (flags.behavior == "local-best") {
    EqualStats best = local_strategy_stats({0, 0}, {0, 0});
    for (int a0 = 0; a0 < 2; ++a0)
      for (int a1 = 0; a1 < 2; ++a1)
        for (int b0 = 0; b0 < 2; ++b0)
          for (int b1 = 0; b1 < 2; ++b1) {
            const EqualStats s = local_strategy_stats(
                {static_cast<std::uint8_t>(a0), static_cast<std::uint8_t>(a1)},
                {static_cast<std::uint8_t>(b0), static_cast<std::uint8_t>(b1)});
            if (chsh_p_value(s) > chsh_p_value(best)) best = s;
          }
    exact_fields(best);
  } else {
    throw StructuralError(
        "unknown behavior '" + flags.behavior +
        "' (expected singlet, pr, pr-variant, or local-best)");
  }

  doc["local_bound"] = 2;
  doc["tsirelson"] = tsirelson_bound();
  doc["violates_local"] = violates_local;
  doc["violates_quantum"] = violates_quantum;
  emit_json(doc, flags.out_path, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exact simulator, verifier and bounded optimality search for "
               "two-party correlation reductions"};
  app.name("nonlocal-ot");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CLI::App* list = app.add_subcommand("list", "print the protocol catalog");

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "execute one world of a protocol");
  run->add_option("protocol,--protocol", run_flags.protocol,
                  "catalog protocol name")
      ->required();
  run->add_option("--inputs", run_flags.inputs,
                  "input bits as name=bit (e.g. x0=1 x1=0 c=1)");
  run->add_option("--seed", run_flags.seed, "demo tape seed");
  run->add_option("--out", run_flags.out_path, "write JSON here");
  run->add_option("--tape-a", run_flags.tape_a)->group("");
  run->add_option("--tape-b", run_flags.tape_b)->group("");
  run->add_option("--res-tape", run_flags.res_tape)->group("");

  VerifyFlags verify_flags;
  CLI::App* ver = app.add_subcommand("verify", "exhaustively verify protocols");
  ver->add_option("protocol,--protocol", verify_flags.protocol,
                  "catalog protocol name");
  ver->add_option("--mutant", verify_flags.mutant, "broken-variant id");
  ver->add_flag("--all", verify_flags.all, "verify the whole catalog");
  CLI::Option* ver_workers =
      ver->add_option("--workers", verify_flags.workers, "worker threads");
  ver->add_option("--out", verify_flags.out_path, "write JSON here");

  SearchFlags search_flags;
  CLI::App* search = app.add_subcommand(
      "search", "bounded exhaustive search over candidate protocols");
  search
      ->add_option("space", search_flags.space,
                   "preset name or <target>-from-<resource>")
      ->required();
  search->add_option("--bits", search_flags.bits,
                     "max communication bits for ad-hoc spaces");
  search->add_flag("--one-way", search_flags.one_way,
                   "restrict ad-hoc spaces to A->B messages");
  search->add_option("--tape-budget", search_flags.tape_budget,
                     "private tape bits per party for ad-hoc spaces");
  search->add_option("--tape-a", search_flags.tape_a)->group("");
  search->add_option("--tape-b", search_flags.tape_b)->group("");
  CLI::Option* cap_opt = search->add_option(
      "--witness-cap", search_flags.witness_cap,
      "stop after this many correct private candidates (0 = exhaust)");
  search->add_option("--node-budget", search_flags.node_budget)->group("");
  CLI::Option* search_workers =
      search->add_option("--workers", search_flags.workers, "worker threads");
  search->add_option("--out", search_flags.out_path, "write JSON here");

  ChshFlags chsh_flags;
  CLI::App* chsh = app.add_subcommand(
      "chsh", "equal-outcome statistics and the CHSH quantities");
  chsh->add_option("behavior", chsh_flags.behavior,
                   "singlet | pr | pr-variant | local-best");
  chsh->add_option("--out", chsh_flags.out_path, "write JSON here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (list->parsed()) return cmd_list(out);
    if (run->parsed()) return cmd_run(run_flags, out);
    if (ver->parsed()) {
      verify_flags.workers = resolve_workers(ver_workers, verify_flags.workers);
      return cmd_verify(verify_flags, out);
    }
    if (search->parsed()) {
      search_flags.cap_given = cap_opt->count() > 0;
      search_flags.workers =
          resolve_workers(search_workers, search_flags.workers);
      return cmd_search(search_flags, out);
    }
    if (chsh->parsed()) return cmd_chsh(chsh_flags, out);
    throw StructuralError("no subcommand selected");
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace nlot
