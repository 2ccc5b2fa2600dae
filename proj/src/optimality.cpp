#include "nlot/optimality.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <thread>

namespace nlot::search {

namespace {

std::uint8_t pick(std::uint8_t pair, std::uint8_t which) {
  return which ? pair_lo(pair) : pair_hi(pair);
}

std::vector<Step> schedule_of(const std::string& tmpl) {
  std::vector<Step> schedule{Step::Resource};
  for (const char c : tmpl) {
    if (c == 'A')
      schedule.push_back(Step::MsgAtoB);
    else if (c == 'B')
      schedule.push_back(Step::MsgBtoA);
    else
      throw StructuralError("bad schedule template '" + tmpl + "'");
  }
  return schedule;
}

/// Inverse of schedule_of; empty optional when the schedule does not start
/// with its single resource call.
std::optional<std::string> template_of(const std::vector<Step>& schedule) {
  if (schedule.empty() || schedule[0] != Step::Resource) return std::nullopt;
  std::string tmpl;
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] == Step::Resource) return std::nullopt;
    tmpl.push_back(schedule[i] == Step::MsgAtoB ? 'A' : 'B');
  }
  return tmpl;
}

int log2_exact(int card) {
  int k = 0;
  while ((1 << k) < card) ++k;
  if ((1 << k) != card)
    throw StructuralError("alphabet sizes in searches must be powers of two");
  return k;
}

}  // namespace

std::pair<Primitive, Primitive> parse_reduction(std::string_view name) {
  const std::string s(name);
  const auto at = s.find("-from-");
  if (at == std::string::npos)
    throw StructuralError("reduction names look like '<target>-from-<resource>'");
  const auto box = [](const std::string& n) -> Primitive {
    if (n == "ot") return ot();
    if (n == "to") return to();
    if (n == "ok") return ok();
    if (n == "ko") return ko();
    if (n == "pr") return pr();
    throw StructuralError("unknown primitive '" + n + "'");
  };
  return {box(s.substr(0, at)), box(s.substr(at + 6))};
}

std::vector<std::string> all_templates(int bits, bool one_way) {
  std::vector<std::string> out{""};
  std::vector<std::string> frontier{""};
  for (int len = 1; len <= bits; ++len) {
    std::vector<std::string> next;
    for (const auto& t : frontier) {
      next.push_back(t + "A");
      if (!one_way) next.push_back(t + "B");
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

Json SearchSpace::to_json() const {
  Json j{{"name", name},
         {"resource", resource.name},
         {"target", target.name},
         {"templates", templates},
         {"tapeA", tape_a},
         {"tapeB", tape_b},
         {"nodeBudget", node_budget},
         {"witnessCap", witness_cap}};
  if (!witness_protocol.empty()) j["witnessProtocol"] = witness_protocol;
  return j;
}

Json SearchResult::to_json() const {
  Json per = Json::array();
  for (const auto& t : per_template)
    per.push_back(Json{{"template", t.tmpl.empty() ? "(none)" : t.tmpl},
                       {"rawSpace", t.space_size},
                       {"nodes", t.nodes},
                       {"candidates", t.candidates},
                       {"correct", t.correct},
                       {"correctAndPrivate", t.correct_private},
                       {"exhausted", t.exhausted}});
  Json wits = Json::array();
  for (const auto& w : witnesses)
    wits.push_back(Json{{"template", w.tmpl.empty() ? "(none)" : w.tmpl},
                        {"matchesCatalog", w.name},
                        {"program", w.program}});
  return Json{{"space", space.to_json()},
              {"perTemplate", std::move(per)},
              {"candidates", candidates},
              {"correct", correct},
              {"correctAndPrivate", correct_private},
              {"exhausted", exhausted},
              {"nodes", nodes},
              {"witnesses", std::move(wits)},
              {"leak", Json{{"checked", leak_checked}, {"holds", leak_holds}}},
              {"elapsedMs", elapsed_ms}};
}

// ============================================================================
// The search engine proper.
//
// One Engine instance explores one schedule template.  Decisions live in
// lookup tables assigned lazily while worlds are replayed in a fixed order;
// the output of the receiving side is forced by correctness, so every leaf
// of the DFS is a correct protocol and programs that differ only on
// unreachable histories are never distinguished.
// ============================================================================

namespace {

struct EnginePoint {
  DecisionPoint info;
  std::vector<std::int8_t> table;  // -1 = unassigned
};

struct LeafRow {
  Record view_a, view_b;  // view records without the output coordinate
  std::uint8_t out_a = 0, out_b = 0;
};

class Engine {
 public:
  Engine(const SearchSpace& space, std::string tmpl, std::uint64_t cap)
      : space_(space), tmpl_(std::move(tmpl)), cap_(cap) {
    build_shape();
    build_points();
    build_views();
    build_worlds();
  }

  void run() { dfs(0); }

  TemplateResult result() const {
    TemplateResult t;
    t.tmpl = tmpl_;
    t.space_size = raw_space_string();
    t.nodes = nodes_;
    t.candidates = candidates_;
    t.correct = correct_;
    t.correct_private = correct_private_;
    t.exhausted = !stopped_;
    return t;
  }

  std::uint64_t leak_checked = 0, leak_holds = 0;
  std::vector<FoundWitness> witnesses;

 private:
  // ---- construction ---------------------------------------------------------

  void build_shape() {
    shape_ = std::make_shared<ProtocolSpec>();
    shape_->name = space_.name + "/" + (tmpl_.empty() ? "(none)" : tmpl_);
    shape_->resource = space_.resource;
    shape_->target = space_.target;
    shape_->schedule = schedule_of(tmpl_);
    shape_->comm_bits = static_cast<int>(tmpl_.size());
    shape_->prog_a.tape_len = space_.tape_a;
    shape_->prog_b.tape_len = space_.tape_b;
    pr_target_ = shape_->target.same_behavior(pr());
    if (!pr_target_ && !shape_->target.same_behavior(ot()))
      throw StructuralError("searches support transfer- and pair-shaped targets");
    one_way_ = tmpl_.find('B') == std::string::npos;
  }

  void build_points() {
    // Interleave both parties' decision points in schedule order: at the
    // resource call A's input is fixed before B's.
    std::vector<DecisionPoint> of_a = decision_points(*shape_, Party::A);
    std::vector<DecisionPoint> of_b = decision_points(*shape_, Party::B);
    std::size_t ca = 0, cb = 0;
    int slot_a = 0, slot_b = 0;
    for (const Step step : shape_->schedule) {
      switch (step) {
        case Step::Resource:
          if (shape_->resource.in_a.size() > 1) add_point(of_a[ca++]);
          if (shape_->resource.in_b.size() > 1) add_point(of_b[cb++]);
          break;
        case Step::MsgAtoB:
          add_point(of_a[ca++]);
          ++slot_a;
          break;
        case Step::MsgBtoA:
          add_point(of_b[cb++]);
          ++slot_b;
          break;
      }
    }
    (void)slot_a;
    (void)slot_b;
  }

  void add_point(const DecisionPoint& info) {
    const std::uint64_t domain = info.domain_size();
    if (domain > (std::uint64_t{1} << 22))
      throw BoundExceededError("search space '" + space_.name +
                               "': a decision table needs " +
                               std::to_string(domain) + " entries");
    EnginePoint pt;
    pt.info = info;
    pt.table.assign(domain, -1);
    points_.push_back(std::move(pt));
  }

  void build_views() {
    vs_a_ = view_schema(*shape_, Party::A, false);
    vs_b_ = view_schema(*shape_, Party::B, false);
    const auto radices = [](const RecordSchema& s, std::size_t& dom) {
      std::vector<std::size_t> r(s.arity());
      dom = 1;
      for (std::size_t i = s.arity(); i-- > 0;) {
        r[i] = dom;
        dom *= s.fields[i].alphabet.size();
      }
      return r;
    };
    radix_a_ = radices(vs_a_, vdom_a_);
    radix_b_ = radices(vs_b_, vdom_b_);
    if (vdom_a_ > (std::size_t{1} << 22) || vdom_b_ > (std::size_t{1} << 22))
      throw BoundExceededError("search space '" + space_.name +
                               "': an output table is too large");
    out_card_a_ = static_cast<int>(shape_->target.out_a.size());
    out_card_b_ = static_cast<int>(shape_->target.out_b.size());
    if (out_card_a_ > 1) out_a_tab_.assign(vdom_a_, -1);
    out_b_tab_.assign(vdom_b_, -1);
  }

  void build_worlds() {
    const int la = space_.tape_a, lb = space_.tape_b;
    const int lr = resource_tape_bits(shape_->resource);
    const auto bits = [](std::uint64_t v, int len) {
      std::vector<std::uint8_t> out(len);
      for (int i = 0; i < len; ++i)
        out[i] = static_cast<std::uint8_t>((v >> (len - 1 - i)) & 1);
      return out;
    };
    // Worlds are ordered to keep the receiving side's view constant for as
    // long as possible, so forced-output collisions happen early.
    for (std::uint8_t ib = 0; ib < shape_->target.in_b.size(); ++ib)
      for (std::uint64_t tb = 0; tb < (std::uint64_t{1} << lb); ++tb)
        for (std::uint64_t tr = 0; tr < (std::uint64_t{1} << lr); ++tr)
          for (std::uint8_t ia = 0; ia < shape_->target.in_a.size(); ++ia)
            for (std::uint64_t ta = 0; ta < (std::uint64_t{1} << la); ++ta)
              worlds_.push_back(World{ia, ib, bits(ta, la), bits(tb, lb),
                                      bits(tr, lr)});
    cell_half_ = (1 << (la + lb + lr)) / 2;
    world_bits_ = la + lb + lr;
    if (world_bits_ > space_.world_bit_bound)
      throw BoundExceededError("search space '" + space_.name +
                               "' needs 2^" + std::to_string(world_bits_) +
                               " worlds per input pair");
  }

  std::string raw_space_string() const {
    std::uint64_t log2 = 0;
    for (const auto& pt : points_)
      log2 += pt.info.domain_size() *
              static_cast<std::uint64_t>(log2_exact(pt.info.choices));
    if (out_card_a_ > 1) log2 += vdom_a_ * log2_exact(out_card_a_);
    log2 += vdom_b_ * log2_exact(out_card_b_);
    if (log2 <= 30) return std::to_string(std::uint64_t{1} << log2);
    return "2^" + std::to_string(log2);
  }

  // ---- simulation -----------------------------------------------------------

  std::size_t view_index(Party p, const PartyView& v) const {
    const Record rec = view_record(*shape_, p, v, false);
    const auto& radix = p == Party::A ? radix_a_ : radix_b_;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < rec.size(); ++i) idx += rec[i] * radix[i];
    return idx;
  }

  struct Need {
    std::vector<std::int8_t>* table = nullptr;
    std::size_t idx = 0;
    int choices = 0;
  };
  enum class Sim { Complete, Contradiction, NeedDecision };

  struct TrailOp {
    enum class Kind { OutB, Count } kind;
    std::size_t idx = 0;
    int bit = 0, ia = 0, ib = 0;
  };

  /// Replays one world against the current tables.  In record mode nothing
  /// is written; the tables must already cover every history reached.
  Sim simulate(const World& w, Need& need, LeafRow* row, bool record) {
    PartyView va, vb;
    va.input = w.in_a;
    va.tape = w.tape_a;
    vb.input = w.in_b;
    vb.tape = w.tape_b;

    std::size_t cursor = 0;
    const auto decide = [&](const PartyView& v) -> std::optional<std::uint8_t> {
      EnginePoint& pt = points_[cursor++];
      const std::uint64_t h = pt.info.history_index(v);
      if (pt.table[h] < 0) {
        if (record)
          throw StructuralError("search replay reached an unassigned decision");
        need = Need{&pt.table, static_cast<std::size_t>(h), pt.info.choices};
        return std::nullopt;
      }
      return static_cast<std::uint8_t>(pt.table[h]);
    };

    for (const Step step : shape_->schedule) {
      switch (step) {
        case Step::Resource: {
          std::uint8_t ra = 0, rb = 0;
          if (shape_->resource.in_a.size() > 1) {
            const auto d = decide(va);
            if (!d) return Sim::NeedDecision;
            va.res_in = ra = *d;
          }
          if (shape_->resource.in_b.size() > 1) {
            const auto d = decide(vb);
            if (!d) return Sim::NeedDecision;
            vb.res_in = rb = *d;
          }
          std::size_t sel = 0;
          for (const std::uint8_t bit : w.res_tape) sel = (sel << 1) | bit;
          const Record& outcome =
              shape_->resource.row(ra, rb).atoms()[sel].first;
          if (shape_->resource.out_a.size() > 1) va.res_out = outcome[0];
          if (shape_->resource.out_b.size() > 1) vb.res_out = outcome[1];
          break;
        }
        case Step::MsgAtoB: {
          const auto d = decide(va);
          if (!d) return Sim::NeedDecision;
          va.msgs_out.push_back(*d);
          vb.msgs_in.push_back(*d);
          break;
        }
        case Step::MsgBtoA: {
          const auto d = decide(vb);
          if (!d) return Sim::NeedDecision;
          vb.msgs_out.push_back(*d);
          va.msgs_in.push_back(*d);
          break;
        }
      }
    }

    std::uint8_t oa = 0;
    if (out_card_a_ > 1) {
      const std::size_t vi = view_index(Party::A, va);
      if (out_a_tab_[vi] < 0) {
        if (record)
          throw StructuralError("search replay reached an unassigned output");
        need = Need{&out_a_tab_, vi, out_card_a_};
        return Sim::NeedDecision;
      }
      oa = static_cast<std::uint8_t>(out_a_tab_[vi]);
    }

    // Correctness forces the other output: the selected slot for transfer
    // targets, the anticorrelated share for pair targets.
    const std::uint8_t forced =
        pr_target_ ? static_cast<std::uint8_t>(oa ^ (w.in_a & w.in_b))
                   : pick(w.in_a, w.in_b);
    const std::size_t vib = view_index(Party::B, vb);
    if (row) {
      row->view_a = view_record(*shape_, Party::A, va, false);
      row->view_b = view_record(*shape_, Party::B, vb, false);
      row->out_a = oa;
    }
    if (out_b_tab_[vib] < 0) {
      if (record)
        throw StructuralError("search replay reached an unassigned output");
      out_b_tab_[vib] = static_cast<std::int8_t>(forced);
      trail_.push_back(TrailOp{TrailOp::Kind::OutB, vib, 0, 0, 0});
    } else if (out_b_tab_[vib] != static_cast<std::int8_t>(forced)) {
      return Sim::Contradiction;
    }
    if (row) row->out_b = static_cast<std::uint8_t>(out_b_tab_[vib]);

    if (pr_target_ && !record) {
      int& count = counts_[w.in_a][w.in_b][oa];
      ++count;
      trail_.push_back(TrailOp{TrailOp::Kind::Count, 0, oa, w.in_a, w.in_b});
      if (count > cell_half_) return Sim::Contradiction;
    }
    return Sim::Complete;
  }

  void unwind(std::size_t mark) {
    while (trail_.size() > mark) {
      const TrailOp& op = trail_.back();
      if (op.kind == TrailOp::Kind::OutB)
        out_b_tab_[op.idx] = -1;
      else
        --counts_[op.ia][op.ib][op.bit];
      trail_.pop_back();
    }
  }

  void dfs(std::size_t wi) {
    if (stopped_) return;
    if (wi == worlds_.size()) {
      leaf();
      return;
    }
    const std::size_t mark = trail_.size();
    Need need;
    switch (simulate(worlds_[wi], need, nullptr, false)) {
      case Sim::Complete:
        dfs(wi + 1);
        unwind(mark);
        return;
      case Sim::Contradiction:
        unwind(mark);
        return;
      case Sim::NeedDecision:
        break;
    }
    for (int choice = 0; choice < need.choices; ++choice) {
      if (stopped_) return;
      if (++nodes_ > space_.node_budget)
        throw BoundExceededError("search space '" + space_.name +
                                 "', template '" + tmpl_ +
                                 "': node budget exhausted after " +
                                 std::to_string(nodes_) +
                                 " assignments (raw space " +
                                 raw_space_string() + ")");
      (*need.table)[need.idx] = static_cast<std::int8_t>(choice);
      dfs(wi);
      (*need.table)[need.idx] = -1;
    }
  }

  // ---- leaf handling --------------------------------------------------------

  std::vector<LeafRow> replay_all() {
    std::vector<LeafRow> rows(worlds_.size());
    Need need;
    for (std::size_t i = 0; i < worlds_.size(); ++i)
      if (simulate(worlds_[i], need, &rows[i], true) != Sim::Complete)
        throw StructuralError("search replay diverged from the exploration");
    return rows;
  }

  void leaf() {
    ++candidates_;
    const std::vector<LeafRow> rows = replay_all();
    if (candidates_ % 128 == 1) spot_check(rows);
    ++correct_;

    bool is_private;
    if (pr_target_ && one_way_) {
      ++leak_checked;
      if (one_way_leak_holds(rows)) {
        ++leak_holds;
        is_private = false;
      } else {
        is_private = fast_private(rows);
      }
    } else if (!pr_target_ && receiver_sees_both(rows)) {
      is_private = false;
    } else {
      is_private = fast_private(rows);
    }

    if (is_private) {
      ++correct_private_;
      if (witnesses.size() < 8) store_witness();
      if (cap_ > 0 && correct_private_ >= cap_) stopped_ = true;
    }
  }

  /// Every correct one-way candidate for a pair target lets the receiving
  /// side read off the sending side's input: its view minus its own input
  /// must determine that input (two equal views under opposite own inputs
  /// would force two different outputs otherwise).
  bool one_way_leak_holds(const std::vector<LeafRow>& rows) const {
    std::map<Record, std::uint8_t> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Record rest = rows[i].view_b;
      rest.erase(rest.begin());  // the receiver's own input coordinate
      const auto [it, fresh] = seen.emplace(std::move(rest), worlds_[i].in_a);
      if (!fresh && it->second != worlds_[i].in_a) return false;
    }
    return true;
  }

  /// Transfer targets: if every receiver view pins the slot it did not ask
  /// for, the candidate is certainly not private.
  bool receiver_sees_both(const std::vector<LeafRow>& rows) const {
    std::map<Record, std::uint8_t> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::uint8_t unchosen =
          pick(worlds_[i].in_a, worlds_[i].in_b ^ 1);
      const auto [it, fresh] = seen.emplace(rows[i].view_b, unchosen);
      if (!fresh && it->second != unchosen) return false;
    }
    return true;
  }

  // ---- exact privacy on integer counts --------------------------------------

  struct PartyShape {
    std::uint8_t own_in(const World& w) const { return a ? w.in_a : w.in_b; }
    std::uint8_t peer_in(const World& w) const { return a ? w.in_b : w.in_a; }
    std::uint8_t own_out(const LeafRow& r) const { return a ? r.out_a : r.out_b; }
    std::uint8_t peer_out(const LeafRow& r) const { return a ? r.out_b : r.out_a; }
    const Record& view(const LeafRow& r) const { return a ? r.view_a : r.view_b; }
    bool a = true;
    std::size_t own_in_card = 1, peer_in_card = 1, peer_out_card = 1;
  };

  PartyShape shape_of(Party p) const {
    PartyShape s;
    s.a = p == Party::A;
    s.own_in_card = s.a ? shape_->target.in_a.size() : shape_->target.in_b.size();
    s.peer_in_card = s.a ? shape_->target.in_b.size() : shape_->target.in_a.size();
    s.peer_out_card =
        s.a ? shape_->target.out_b.size() : shape_->target.out_a.size();
    return s;
  }

  /// view independent of the peer input given own input and own output;
  /// exact comparison of per-view world counts across peer inputs by
  /// cross-multiplication, skipping peer inputs under which the output has
  /// zero mass (the conditional is undefined there).
  bool input_ci(const std::vector<LeafRow>& rows, const PartyShape& s) const {
    if (s.peer_in_card <= 1) return true;
    using Counts = std::map<Record, long>;
    for (std::size_t u = 0; u < s.own_in_card; ++u) {
      // per own output o: view counts and world totals, indexed by peer input.
      std::map<std::uint8_t, std::vector<Counts>> per_o;
      std::map<std::uint8_t, std::vector<long>> totals;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (s.own_in(worlds_[i]) != u) continue;
        const std::size_t q = s.peer_in(worlds_[i]);
        const std::uint8_t o = s.own_out(rows[i]);
        auto& bucket = per_o[o];
        bucket.resize(s.peer_in_card);
        ++bucket[q][s.view(rows[i])];
        auto& tot = totals[o];
        tot.resize(s.peer_in_card, 0);
        ++tot[q];
      }
      for (const auto& [o, bucket] : per_o) {
        const std::vector<long>& tot = totals[o];
        std::size_t ref = 0;
        while (ref < tot.size() && tot[ref] == 0) ++ref;
        const auto count_of = [](const Counts& c, const Record& k) -> long {
          const auto it = c.find(k);
          return it == c.end() ? 0 : it->second;
        };
        for (std::size_t q = ref + 1; q < tot.size(); ++q) {
          if (tot[q] == 0) continue;
          for (const auto& [key, c] : bucket[ref])
            if (c * tot[q] != count_of(bucket[q], key) * tot[ref]) return false;
          for (const auto& [key, c] : bucket[q])
            if (c * tot[ref] != count_of(bucket[ref], key) * tot[q]) return false;
        }
      }
    }
    return true;
  }

  /// view independent of the peer output given both inputs and own output:
  /// within each (inputs, own output) slice the (view, peer output) counts
  /// must factor into the product of their marginals.
  bool output_ci(const std::vector<LeafRow>& rows, const PartyShape& s) const {
    if (s.peer_out_card <= 1) return true;
    for (std::size_t u = 0; u < s.own_in_card; ++u)
      for (std::size_t q = 0; q < s.peer_in_card; ++q) {
        std::map<Record, std::vector<long>> cells;
        std::map<std::uint8_t, std::vector<long>> cols;
        std::map<std::uint8_t, long> totals;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (s.own_in(worlds_[i]) != u || s.peer_in(worlds_[i]) != q) continue;
          Record key{s.own_out(rows[i])};
          key.insert(key.end(), s.view(rows[i]).begin(), s.view(rows[i]).end());
          auto& cell = cells[std::move(key)];
          cell.resize(s.peer_out_card, 0);
          ++cell[s.peer_out(rows[i])];
          auto& col = cols[s.own_out(rows[i])];
          col.resize(s.peer_out_card, 0);
          ++col[s.peer_out(rows[i])];
          ++totals[s.own_out(rows[i])];
        }
        for (const auto& [key, cell] : cells) {
          const std::uint8_t o = key[0];
          long row_total = 0;
          for (const long c : cell) row_total += c;
          for (std::size_t w = 0; w < s.peer_out_card; ++w)
            if (cell[w] * totals[o] != row_total * cols[o][w]) return false;
        }
      }
    return true;
  }

  bool fast_private(const std::vector<LeafRow>& rows) const {
    const PartyShape a = shape_of(Party::A), b = shape_of(Party::B);
    return input_ci(rows, a) && input_ci(rows, b) && output_ci(rows, a) &&
           output_ci(rows, b);
  }

  /// Cross-checks the integer fast path against the reference verifier on a
  /// deterministic sample of leaves.
  void spot_check(const std::vector<LeafRow>& rows) {
    const ProtocolSpec spec = materialize();
    const JointDistribution joint = enumerate_worlds(spec, space_.world_bit_bound);
    if (!check_correctness(joint).pass)
      throw StructuralError("search produced a candidate that fails the "
                            "reference correctness check");
    const bool reference = check_privacy(joint, Party::A).pass &&
                           check_privacy(joint, Party::B).pass;
    if (reference != fast_private(rows))
      throw StructuralError("search privacy fast path disagrees with the "
                            "reference verifier");
  }

  // ---- materialization ------------------------------------------------------

  ProtocolSpec materialize() const {
    ProtocolSpec spec = *shape_;
    spec.name = shape_->name + "#" + std::to_string(candidates_);
    std::vector<DecisionFn> msgs_a(spec.msg_slots(Party::A));
    std::vector<DecisionFn> msgs_b(spec.msg_slots(Party::B));
    for (const auto& pt : points_) {
      auto table = std::make_shared<std::vector<std::uint8_t>>();
      for (const std::int8_t v : pt.table)
        table->push_back(static_cast<std::uint8_t>(v < 0 ? 0 : v));
      DecisionFn fn = [info = pt.info, table](const PartyView& v) {
        return table->at(info.history_index(v));
      };
      PartyProgram& prog =
          pt.info.party == Party::A ? spec.prog_a : spec.prog_b;
      if (pt.info.kind == DecisionPoint::Kind::ResourceInput)
        prog.resource_input = std::move(fn);
      else if (pt.info.party == Party::A)
        msgs_a[pt.info.msg_slot] = std::move(fn);
      else
        msgs_b[pt.info.msg_slot] = std::move(fn);
    }
    spec.prog_a.messages = std::move(msgs_a);
    spec.prog_b.messages = std::move(msgs_b);

    const auto output_fn = [this](Party p, const std::vector<std::int8_t>& tab) {
      auto table = std::make_shared<std::vector<std::uint8_t>>();
      for (const std::int8_t v : tab)
        table->push_back(static_cast<std::uint8_t>(v < 0 ? 0 : v));
      return DecisionFn([shape = shape_, p,
                         radix = p == Party::A ? radix_a_ : radix_b_,
                         table](const PartyView& v) {
        const Record rec = view_record(*shape, p, v, false);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < rec.size(); ++i) idx += rec[i] * radix[i];
        return table->at(idx);
      });
    };
    spec.prog_a.output =
        out_card_a_ > 1 ? output_fn(Party::A, out_a_tab_)
                        : DecisionFn([](const PartyView&) { return 0; });
    spec.prog_b.output = output_fn(Party::B, out_b_tab_);
    return spec;
  }

  Json tables_json() const {
    const auto arr = [](const std::vector<std::int8_t>& t) {
      Json a = Json::array();
      for (const std::int8_t v : t)
        a.push_back(v < 0 ? Json(nullptr) : Json(static_cast<int>(v)));
      return a;
    };
    Json a{{"resourceIn", nullptr}, {"messages", Json::array()},
           {"out", out_card_a_ > 1 ? arr(out_a_tab_) : Json(nullptr)}};
    Json b{{"resourceIn", nullptr}, {"messages", Json::array()},
           {"out", arr(out_b_tab_)}};
    for (const auto& pt : points_) {
      Json& side = pt.info.party == Party::A ? a : b;
      if (pt.info.kind == DecisionPoint::Kind::ResourceInput)
        side["resourceIn"] = arr(pt.table);
      else
        side["messages"].push_back(arr(pt.table));
    }
    return Json{{"A", std::move(a)}, {"B", std::move(b)}};
  }

  /// Extensional tables of an explicit protocol over this engine's worlds,
  /// for comparing a found witness against the catalog.
  std::optional<Json> catalog_tables(const ProtocolSpec& cp) const {
    if (cp.prog_a.tape_len != space_.tape_a ||
        cp.prog_b.tape_len != space_.tape_b)
      return std::nullopt;
    Engine recorder(space_, tmpl_, 0);
    for (const World& w : recorder.worlds_) {
      const RunResult rr = run_protocol(cp, w);
      std::size_t cursor = 0;
      for (const Step step : recorder.shape_->schedule) {
        const auto record_decision = [&](Party p, std::uint8_t value) {
          EnginePoint& pt = recorder.points_[cursor++];
          const PartyView& view = p == Party::A ? rr.view_a : rr.view_b;
          const std::uint64_t h = pt.info.history_index(view);
          pt.table[h] = static_cast<std::int8_t>(value);
        };
        switch (step) {
          case Step::Resource:
            if (recorder.shape_->resource.in_a.size() > 1)
              record_decision(Party::A, *rr.view_a.res_in);
            if (recorder.shape_->resource.in_b.size() > 1)
              record_decision(Party::B, *rr.view_b.res_in);
            break;
          case Step::MsgAtoB:
            record_decision(
                Party::A,
                rr.view_a.msgs_out[recorder.points_[cursor].info.msg_slot]);
            break;
          case Step::MsgBtoA:
            record_decision(
                Party::B,
                rr.view_b.msgs_out[recorder.points_[cursor].info.msg_slot]);
            break;
        }
      }
      if (recorder.out_card_a_ > 1)
        recorder.out_a_tab_[recorder.view_index(Party::A, rr.view_a)] =
            static_cast<std::int8_t>(rr.out_a);
      recorder.out_b_tab_[recorder.view_index(Party::B, rr.view_b)] =
          static_cast<std::int8_t>(rr.out_b);
    }
    return recorder.tables_json();
  }

  std::string match_catalog(const Json& tables) const {
    for (const ProtocolSpec& cp : catalog()) {
      if (!cp.resource.same_behavior(shape_->resource)) continue;
      if (!cp.target.same_behavior(shape_->target)) continue;
      const auto cp_tmpl = template_of(cp.schedule);
      if (!cp_tmpl || *cp_tmpl != tmpl_) continue;
      const auto recorded = catalog_tables(cp);
      if (recorded && *recorded == tables) return cp.name;
    }
    return "";
  }

  void store_witness() {
    const ProtocolSpec spec = materialize();
    VerifyOptions opts;
    opts.world_bit_bound = space_.world_bit_bound;
    const VerificationReport report = verify(spec, opts);
    FoundWitness wit;
    wit.tmpl = tmpl_;
    const Json tables = tables_json();
    wit.name = match_catalog(tables);
    wit.program = Json{{"tables", tables}, {"allPass", report.all_pass()}};
    witnesses.push_back(std::move(wit));
  }

  // ---- state ----------------------------------------------------------------

  SearchSpace space_;
  std::string tmpl_;
  std::uint64_t cap_;
  std::shared_ptr<ProtocolSpec> shape_;
  std::vector<EnginePoint> points_;
  bool pr_target_ = false, one_way_ = true;
  RecordSchema vs_a_, vs_b_;
  std::vector<std::size_t> radix_a_, radix_b_;
  std::size_t vdom_a_ = 1, vdom_b_ = 1;
  int out_card_a_ = 1, out_card_b_ = 1;
  std::vector<std::int8_t> out_a_tab_, out_b_tab_;
  std::vector<World> worlds_;
  int cell_half_ = 0, world_bits_ = 0;
  int counts_[4][4][2] = {};
  std::vector<TrailOp> trail_;
  std::uint64_t nodes_ = 0, candidates_ = 0, correct_ = 0, correct_private_ = 0;
  bool stopped_ = false;
};

}  // namespace

SearchResult run_search(const SearchSpace& space, int workers) {
  if (!space.witness_protocol.empty())
    throw StructuralError("space '" + space.name +
                          "' is witness-only; use the membership check");
  const auto started = std::chrono::steady_clock::now();
  SearchResult result;
  result.space = space;
  result.per_template.resize(space.templates.size());

  std::vector<std::vector<FoundWitness>> witnesses(space.templates.size());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> leaks(
      space.templates.size());

  // A capped run asks for witnesses, not for exhaustion, so start from the
  // catalog: any member protocol that fits the space is already a verified
  // witness, and the enumeration only has to fill the remaining quota.
  std::uint64_t seeded = 0;
  if (space.witness_cap > 0) {
    for (const ProtocolSpec& cp : catalog()) {
      if (seeded >= space.witness_cap) break;
      const Json membership = witness_membership(cp, space);
      if (!membership.at("withinSpace").get<bool>()) continue;
      if (!membership.at("report").at("allPass").get<bool>()) continue;
      FoundWitness wit;
      wit.tmpl = membership.at("template").get<std::string>();
      wit.name = cp.name;
      wit.program = Json{{"source", "catalog"},
                        {"commBits", cp.comm_bits},
                        {"allPass", true}};
      result.witnesses.push_back(std::move(wit));
      ++seeded;
    }
  }

  if (workers > 1 && space.templates.size() > 1 && space.witness_cap == 0) {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    const int n = static_cast<int>(space.templates.size());
    for (int w = 0; w < std::min<int>(workers, n); ++w)
      threads.emplace_back([&, w] {
        try {
          for (int i = w; i < n; i += workers) {
            Engine engine(space, space.templates[i], 0);
            engine.run();
            result.per_template[i] = engine.result();
            leaks[i] = {engine.leak_checked, engine.leak_holds};
            witnesses[i] = std::move(engine.witnesses);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  } else {
    std::uint64_t found = seeded;
    for (std::size_t i = 0; i < space.templates.size(); ++i) {
      if (space.witness_cap > 0 && found >= space.witness_cap) {
        result.per_template[i].tmpl = space.templates[i];
        result.per_template[i].exhausted = false;
        continue;
      }
      const std::uint64_t cap =
          space.witness_cap > 0 ? space.witness_cap - found : 0;
      Engine engine(space, space.templates[i], cap);
      engine.run();
      result.per_template[i] = engine.result();
      leaks[i] = {engine.leak_checked, engine.leak_holds};
      witnesses[i] = std::move(engine.witnesses);
      found += result.per_template[i].correct_private;
    }
  }

  result.exhausted = true;
  for (const auto& t : result.per_template) {
    result.candidates += t.candidates;
    result.correct += t.correct;
    result.correct_private += t.correct_private;
    result.nodes += t.nodes;
    result.exhausted = result.exhausted && t.exhausted;
  }
  for (const auto& [checked, holds] : leaks) {
    result.leak_checked += checked;
    result.leak_holds += holds;
  }
  for (auto& batch : witnesses)
    for (auto& w : batch) {
      const bool already_seeded =
          !w.name.empty() &&
          std::any_of(result.witnesses.begin(),
                      result.witnesses.begin() + seeded,
                      [&](const FoundWitness& s) { return s.name == w.name; });
      if (!already_seeded && result.witnesses.size() < 8)
        result.witnesses.push_back(std::move(w));
    }

  result.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - started)
                          .count();
  return result;
}

std::vector<std::string> preset_names() {
  return {"ot-from-pr-0bit",      "ot-from-pr-1bit", "pr-from-ok-oneway-2bit",
          "ot-from-ok-upto-2bit", "pr-from-ok-2bit", "ot-from-ok-3bit"};
}

SearchSpace preset(std::string_view name) {
  SearchSpace s;
  s.name = std::string(name);
  if (name == "ot-from-pr-0bit") {
    s.target = ot();
    s.resource = pr();
    s.templates = {""};
    s.tape_a = 1;
    s.tape_b = 1;
  } else if (name == "ot-from-pr-1bit") {
    s.target = ot();
    s.resource = pr();
    s.templates = {"A"};
  } else if (name == "pr-from-ok-oneway-2bit") {
    s.target = pr();
    s.resource = ok();
    s.templates = all_templates(2, true);
    s.tape_b = 1;
  } else if (name == "ot-from-ok-upto-2bit") {
    s.target = ot();
    s.resource = ok();
    s.templates = all_templates(2, false);
    s.tape_b = 1;
  } else if (name == "pr-from-ok-2bit") {
    s.target = pr();
    s.resource = ok();
    s.templates = {"AB"};
    s.witness_protocol = "pr-from-ok";
  } else if (name == "ot-from-ok-3bit") {
    s.target = ot();
    s.resource = ok();
    s.templates = {"BAA"};
    s.witness_protocol = "ot-from-ok";
  } else {
    throw StructuralError("unknown search preset '" + std::string(name) + "'");
  }
  return s;
}

Json witness_membership(const ProtocolSpec& spec, const SearchSpace& space) {
  const auto tmpl = template_of(spec.schedule);
  const bool boxes_match = spec.resource.same_behavior(space.resource) &&
                           spec.target.same_behavior(space.target);
  const bool template_listed =
      tmpl && std::find(space.templates.begin(), space.templates.end(),
                        *tmpl) != space.templates.end();
  const bool tapes_fit = spec.prog_a.tape_len <= space.tape_a &&
                         spec.prog_b.tape_len <= space.tape_b;
  const bool within = boxes_match && template_listed && tapes_fit;
  VerifyOptions opts;
  opts.world_bit_bound = space.world_bit_bound;
  const VerificationReport report = verify(spec, opts);
  return Json{{"protocol", spec.name},
              {"space", space.to_json()},
              {"template", tmpl ? Json(*tmpl) : Json(nullptr)},
              {"withinSpace", within},
              {"commBits", spec.comm_bits},
              {"report", report.to_json()}};
}

Json one_way_leak_certificate() {
  const SearchResult r = run_search(preset("pr-from-ok-oneway-2bit"), 1);
  return Json{{"space", r.space.to_json()},
              {"correct", r.correct},
              {"correctAndPrivate", r.correct_private},
              {"leakChecked", r.leak_checked},
              {"leakHolds", r.leak_holds},
              {"exhausted", r.exhausted},
              {"claim",
               "every correct one-way candidate lets the receiving side "
               "compute the sending side's input from its view"}};
}

}  // namespace nlot::search
