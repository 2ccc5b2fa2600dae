#include "nlot/dist.hpp"

#include <map>
#include <sstream>

namespace nlot {

Rat rat_parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return rat(std::stoll(text));
    const long long num = std::stoll(text.substr(0, slash));
    const long long den = std::stoll(text.substr(slash + 1));
    return rat(num, den);
  } catch (const StructuralError&) {
    throw;
  } catch (const std::exception&) {
    throw StructuralError("not a rational: '" + text + "'");
  }
}

Json record_to_json(const RecordSchema& schema, const Record& rec) {
  if (rec.size() != schema.arity())
    throw StructuralError("record arity does not match schema");
  Json j = Json::object();
  for (std::size_t i = 0; i < rec.size(); ++i)
    j[schema.fields[i].name] = schema.fields[i].alphabet.symbol(rec[i]);
  return j;
}

namespace {

void check_record(const RecordSchema& schema, const Record& rec) {
  if (rec.size() != schema.arity())
    throw StructuralError("record arity does not match schema");
  for (std::size_t i = 0; i < rec.size(); ++i)
    if (rec[i] >= schema.fields[i].alphabet.size())
      throw StructuralError("record code out of range for field '" +
                            schema.fields[i].name + "'");
}

}  // namespace

FiniteDist FiniteDist::from_atoms(RecordSchema schema,
                                  std::vector<std::pair<Record, Rat>> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  Rat total(0);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    check_record(schema, atoms[i].first);
    if (i > 0 && atoms[i].first == atoms[i - 1].first)
      throw StructuralError("duplicate atom record");
    if (atoms[i].second <= 0)
      throw StructuralError("atom mass must be positive");
    total += atoms[i].second;
  }
  if (total != Rat(1))
    throw StructuralError("atom masses sum to " + rat_str(total) + ", not 1");
  FiniteDist d;
  d.schema_ = std::move(schema);
  d.atoms_ = std::move(atoms);
  return d;
}

FiniteDist FiniteDist::from_weighted(
    RecordSchema schema, std::vector<std::pair<Record, Rat>> weighted) {
  std::map<Record, Rat> acc;
  for (auto& [rec, w] : weighted) {
    check_record(schema, rec);
    if (w < 0) throw StructuralError("negative weight");
    if (w == 0) continue;
    acc[rec] += w;
  }
  std::vector<std::pair<Record, Rat>> atoms;
  atoms.reserve(acc.size());
  for (auto& [rec, w] : acc)
    if (w != 0) atoms.emplace_back(rec, w);
  return from_atoms(std::move(schema), std::move(atoms));
}

Rat FiniteDist::mass_of(const Record& rec) const {
  const auto it = std::lower_bound(
      atoms_.begin(), atoms_.end(), rec,
      [](const auto& atom, const Record& key) { return atom.first < key; });
  if (it != atoms_.end() && it->first == rec) return it->second;
  return Rat(0);
}

FiniteDist FiniteDist::marginal(const std::vector<std::string>& keep) const {
  RecordSchema target;
  std::vector<std::size_t> idx;
  for (const auto& name : keep) {
    const std::size_t i = schema_.index_of(name);
    target.fields.push_back(schema_.fields[i]);
    idx.push_back(i);
  }
  std::vector<std::pair<Record, Rat>> weighted;
  weighted.reserve(atoms_.size());
  for (const auto& [rec, mass] : atoms_) {
    Record projected(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) projected[k] = rec[idx[k]];
    weighted.emplace_back(std::move(projected), mass);
  }
  return from_weighted(std::move(target), std::move(weighted));
}

FiniteDist FiniteDist::condition(
    const std::function<bool(const Record&)>& pred) const {
  std::vector<std::pair<Record, Rat>> kept;
  Rat total(0);
  for (const auto& [rec, mass] : atoms_) {
    if (!pred(rec)) continue;
    kept.emplace_back(rec, mass);
    total += mass;
  }
  if (total == 0)
    throw ZeroMassConditionError("conditioning on a zero-mass event");
  for (auto& [rec, mass] : kept) mass /= total;
  return from_atoms(schema_, std::move(kept));
}

FiniteDist FiniteDist::condition_eq(std::string_view field,
                                    std::uint8_t value) const {
  const std::size_t i = schema_.index_of(field);
  return condition([i, value](const Record& rec) { return rec[i] == value; });
}

FiniteDist FiniteDist::pushforward(
    RecordSchema target, const std::function<Record(const Record&)>& fn) const {
  std::vector<std::pair<Record, Rat>> weighted;
  weighted.reserve(atoms_.size());
  for (const auto& [rec, mass] : atoms_) weighted.emplace_back(fn(rec), mass);
  return from_weighted(std::move(target), std::move(weighted));
}

Json FiniteDist::to_json() const {
  Json atoms = Json::array();
  for (const auto& [rec, mass] : atoms_)
    atoms.push_back(
        Json{{"record", record_to_json(schema_, rec)}, {"mass", rat_str(mass)}});
  return Json{{"atoms", std::move(atoms)}};
}

}  // namespace nlot
