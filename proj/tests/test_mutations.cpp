#include <doctest.h>

#include <map>
#include <set>

#include "nlot/mutations.hpp"
#include "nlot/verifier.hpp"

// ============================================================================
// Sensitivity suite: every deliberately broken variant must flip exactly the
// verdicts its record claims, and every failed check must carry a concrete
// counterexample.  This is what stops the verifier from degenerating into an
// always-green rubber stamp.
// ============================================================================

namespace {
using namespace nlot;
}

TEST_CASE("the mutation catalog covers every reduction at least twice") {
  const auto& all = mutation_catalog();
  CHECK(all.size() == 16);

  std::set<std::string> ids;
  std::map<std::string, int> per_base;
  for (const Mutant& m : all) {
    CHECK(ids.insert(m.id).second);        // ids unique
    CHECK(m.id.rfind(m.base + ":", 0) == 0);
    CHECK_FALSE(m.note.empty());
    CHECK_NOTHROW(find_protocol(m.base));  // base really is a catalog entry
    ++per_base[m.base];
  }
  CHECK(per_base.size() == 8);
  for (const auto& [base, count] : per_base) {
    INFO("protocol ", base);
    CHECK(count >= 2);
  }
}

TEST_CASE("every mutant claims at least one break and flips exactly those") {
  for (const Mutant& m : mutation_catalog()) {
    INFO("mutant ", m.id);
    CHECK((m.breaks_correctness || m.breaks_privacy_a || m.breaks_privacy_b));

    const VerificationReport rep = verify(m.spec);
    CHECK(rep.correctness.pass == !m.breaks_correctness);
    CHECK(rep.privacy_a.pass == !m.breaks_privacy_a);
    CHECK(rep.privacy_b.pass == !m.breaks_privacy_b);
    CHECK_FALSE(rep.all_pass());
  }
}

TEST_CASE("failed checks carry a replayable counterexample") {
  for (const Mutant& m : mutation_catalog()) {
    INFO("mutant ", m.id);
    const VerificationReport rep = verify(m.spec);
    for (const CheckOutcome* c :
         {&rep.correctness, &rep.privacy_a, &rep.privacy_b}) {
      if (c->pass) continue;
      CHECK(c->detail.is_object());
      CHECK_FALSE(c->detail.empty());
    }
    // A broken output table must name the offending input pair.
    if (!rep.correctness.pass) {
      CHECK(rep.correctness.detail.contains("inA"));
      CHECK(rep.correctness.detail.contains("inB"));
    }
  }
}

TEST_CASE("spot checks pin the direction of specific breaks") {
  // Sending both secrets bare keeps the receiver's output right but exposes
  // the unpicked one: correct, sender-private, receiver-side leak.
  const Mutant& bare = find_mutant("ot-from-ok:no-mask");
  CHECK_FALSE(bare.breaks_correctness);
  CHECK_FALSE(bare.breaks_privacy_a);
  CHECK(bare.breaks_privacy_b);
  const VerificationReport rep = verify(bare.spec);
  CHECK(rep.correctness.pass);
  CHECK_FALSE(rep.privacy_b.pass);

  // Echoing the raw input through the announcement breaks everything at once.
  const Mutant& echo = find_mutant("pr-from-ok:echo-input");
  CHECK(echo.breaks_correctness);
  CHECK(echo.breaks_privacy_a);
  CHECK(echo.breaks_privacy_b);

  // A wrong resource play is a pure correctness bug: nothing new leaks.
  const Mutant& wrong = find_mutant("ot-from-pr:wrong-correlation-input");
  CHECK(wrong.breaks_correctness);
  CHECK_FALSE(wrong.breaks_privacy_a);
  CHECK_FALSE(wrong.breaks_privacy_b);
}

TEST_CASE("mutants still satisfy the structural contract") {
  for (const Mutant& m : mutation_catalog()) {
    INFO("mutant ", m.id);
    CHECK_NOTHROW(m.spec.validate());
    CHECK(m.spec.name == m.id);
    // Damage rewires decisions, never the declared wire format.
    const ProtocolSpec& base = find_protocol(m.base);
    CHECK(m.spec.comm_bits == base.comm_bits);
    CHECK(m.spec.schedule == base.schedule);
  }
}

TEST_CASE("lookup by id is exact") {
  CHECK(find_mutant("ok-from-ko:forgot-swap").base == "ok-from-ko");
  CHECK_THROWS_AS(find_mutant("ok-from-ko:ate-the-key"), StructuralError);
  CHECK_THROWS_AS(find_mutant(""), StructuralError);
}
