#pragma once

#include "nlot/verifier.hpp"

namespace nlot::search {

// ============================================================================
// Bounded exhaustive protocol search.
//
// A search space fixes a resource, a target (ot- or pr-shaped), a set of
// message schedule templates (resource call first, then the listed message
// directions) and per-party tape budgets.  The engine walks candidate party
// programs with a world-driven DFS: decisions are assigned lazily per
// reachable view, the receiver-side output is forced by correctness, and a
// view forced to two different outputs prunes the subtree.  Candidates are
// therefore counted extensionally -- programs differing only on unreachable
// views are the same candidate.
// ============================================================================

struct SearchSpace {
  std::string name;            // preset name, or "" for an ad-hoc space
  Primitive resource;
  Primitive target;
  std::vector<std::string> templates;  // e.g. "", "A", "BA"; 'A' = A->B bit
  int tape_a = 0, tape_b = 0;
  std::uint64_t node_budget = std::uint64_t(1) << 26;
  std::uint64_t witness_cap = 0;  // 0 = exhaust the space
  int world_bit_bound = 20;
  // Set on witness-only presets: the space exists to host this catalog
  // protocol, and is checked by membership, not by blind search.
  std::string witness_protocol;

  Json to_json() const;
};

struct TemplateResult {
  std::string tmpl;
  std::string space_size;        // exact when it fits, else "2^k"
  std::uint64_t nodes = 0;       // DFS assignments tried
  std::uint64_t candidates = 0;  // complete consistent assignments reached
  std::uint64_t correct = 0;
  std::uint64_t correct_private = 0;
  bool exhausted = true;
};

struct FoundWitness {
  std::string tmpl;
  Json program;        // decision tables, replayable
  std::string name;
};

struct SearchResult {
  SearchSpace space;
  std::vector<TemplateResult> per_template;
  std::uint64_t candidates = 0;
  std::uint64_t correct = 0;
  std::uint64_t correct_private = 0;
  bool exhausted = true;
  std::uint64_t nodes = 0;
  std::vector<FoundWitness> witnesses;
  // pr-target one-way spaces: the forced receiver-side identity
  // beta(y=1,.) XOR beta(y=0,.) = x, checked on every correct candidate.
  std::uint64_t leak_checked = 0, leak_holds = 0;
  std::int64_t elapsed_ms = 0;

  Json to_json() const;
};

SearchResult run_search(const SearchSpace& space, int workers = 1);

/// Preset spaces used by the acceptance claims.
std::vector<std::string> preset_names();
SearchSpace preset(std::string_view name);

/// Parses "<target>-from-<resource>" into primitives.
std::pair<Primitive, Primitive> parse_reduction(std::string_view name);

/// All direction strings over {A,B} with length <= bits
/// (A-only when one_way).
std::vector<std::string> all_templates(int bits, bool one_way);

/// Confirms the catalog protocol sits inside the given space (same boxes,
/// schedule template listed, tapes within budget) and passes the full
/// verifier: the constructive side of the optimality claims.
Json witness_membership(const ProtocolSpec& spec, const SearchSpace& space);

/// Runs the one-way pr-from-ok preset and reports the leak certificate.
Json one_way_leak_certificate();

}  // namespace nlot::search
