#pragma once

#include <algorithm>
#include <functional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nlot/rational.hpp"
#include "nlot/record.hpp"

namespace nlot {

using Json = nlohmann::ordered_json;

Json record_to_json(const RecordSchema& schema, const Record& rec);

// ============================================================================
// FiniteDist: an exact finitely supported probability distribution over
// outcome records.  Atoms are kept sorted in canonical record order, every
// mass is a positive rational and the masses sum to exactly 1.
// ============================================================================
class FiniteDist {
 public:
  FiniteDist() = default;

  /// Atoms must be over distinct records; aggregation is the caller's job
  /// (use from_weighted for that).  Validates masses and the exact-sum rule.
  static FiniteDist from_atoms(RecordSchema schema,
                               std::vector<std::pair<Record, Rat>> atoms);

  /// Aggregates duplicate records, drops exact zeros, validates the sum.
  static FiniteDist from_weighted(RecordSchema schema,
                                  std::vector<std::pair<Record, Rat>> weighted);

  const RecordSchema& schema() const { return schema_; }
  const std::vector<std::pair<Record, Rat>>& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }

  /// Exact mass of a record; 0 for records outside the support.
  Rat mass_of(const Record& rec) const;

  /// Keeps the named coordinates (in the order given).
  FiniteDist marginal(const std::vector<std::string>& keep) const;

  /// Exact conditioning.  Throws ZeroMassConditionError if the event has
  /// mass zero -- a zero-mass conditional is undefined, never silent.
  FiniteDist condition(const std::function<bool(const Record&)>& pred) const;
  FiniteDist condition_eq(std::string_view field, std::uint8_t value) const;

  /// Pushforward under a record map into a new schema.
  FiniteDist pushforward(RecordSchema target,
                         const std::function<Record(const Record&)>& fn) const;

  /// Exact equality: same schema shape, same support, same masses.
  bool operator==(const FiniteDist& other) const = default;

  Json to_json() const;

 private:
  RecordSchema schema_;
  std::vector<std::pair<Record, Rat>> atoms_;
};

inline bool dist_equal(const FiniteDist& a, const FiniteDist& b) { return a == b; }

/// Pushforward of a weighted world list onto outcome records.  Worlds carry
/// provenance only; the distribution is over the records.
template <typename W>
FiniteDist dist_from_worlds(RecordSchema schema,
                            const std::vector<std::pair<W, Record>>& worlds,
                            const std::function<Rat(const W&)>& weight) {
  std::vector<std::pair<Record, Rat>> weighted;
  weighted.reserve(worlds.size());
  for (const auto& [world, rec] : worlds) weighted.emplace_back(rec, weight(world));
  return FiniteDist::from_weighted(std::move(schema), std::move(weighted));
}

}  // namespace nlot
