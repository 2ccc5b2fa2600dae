#include <doctest.h>

#include <cmath>

#include "nlot/nonlocality.hpp"

// ============================================================================
// Equal-outcome statistics and the CHSH quantities.  The state-vector path is
// checked against the closed form sin^2((alpha - beta) / 2), which the
// implementation deliberately does not use; the rational path is checked by
// exhausting all sixteen deterministic local strategies.
// ============================================================================

namespace {

using namespace nlot;

constexpr double kTol = 1e-9;
constexpr double kPi = 3.14159265358979323846;

double closed_form_equal_prob(double alpha, double beta) {
  const double s = std::sin((alpha - beta) / 2.0);
  return s * s;
}

}  // namespace

TEST_CASE("singlet state is normalized and antisymmetric") {
  const StateVector2Q psi = singlet_state();
  CHECK_NOTHROW(psi.check_norm());
  CHECK(std::abs(psi.amp[0]) < kTol);                    // |00> absent
  CHECK(std::abs(psi.amp[3]) < kTol);                    // |11> absent
  CHECK(std::abs(psi.amp[1] + psi.amp[2]) < kTol);       // opposite signs
}

TEST_CASE("projector arithmetic matches the closed form on a dense grid") {
  const StateVector2Q psi = singlet_state();
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double alpha = -kPi + (2 * kPi * i) / 10.0 + 0.05;
      const double beta = -kPi + (2 * kPi * j) / 10.0 + 0.13;
      CHECK(equal_prob(psi, alpha, beta) ==
            doctest::Approx(closed_form_equal_prob(alpha, beta)).epsilon(kTol));
    }
  // Equal settings never agree on the singlet.
  CHECK(equal_prob(psi, 0.7, 0.7) == doctest::Approx(0.0).epsilon(kTol));
  // Orthogonal settings agree half the time.
  CHECK(equal_prob(psi, 0.0, kPi / 2) == doctest::Approx(0.5).epsilon(kTol));
}

TEST_CASE("the chosen angles hit the quarter table") {
  const MeasurementAngles ang = quarter_table_angles();
  CHECK(ang.a[0] == doctest::Approx(0.0));
  CHECK(ang.a[1] == doctest::Approx(kPi / 3).epsilon(1e-12));
  CHECK(ang.b[1] == doctest::Approx(-kPi / 3).epsilon(1e-12));

  const EqualStatsReal s = singlet_stats(ang);
  CHECK(s.p[0][0] == doctest::Approx(0.0).epsilon(kTol));
  CHECK(s.p[0][1] == doctest::Approx(0.25).epsilon(kTol));
  CHECK(s.p[1][0] == doctest::Approx(0.25).epsilon(kTol));
  CHECK(s.p[1][1] == doctest::Approx(0.75).epsilon(kTol));

  CHECK(chsh_p_value(s) == doctest::Approx(0.25).epsilon(kTol));
  CHECK(chsh_correlator(s) == doctest::Approx(2.5).epsilon(kTol));
  CHECK(chsh_correlator(s) <= tsirelson_bound() + kTol);
}

TEST_CASE("swapping both settings transposes the singlet table") {
  MeasurementAngles ang;
  ang.a = {0.3, 1.1};
  ang.b = {-0.4, 0.9};
  MeasurementAngles swapped;
  swapped.a = {ang.a[1], ang.a[0]};
  swapped.b = {ang.b[1], ang.b[0]};
  const EqualStatsReal s = singlet_stats(ang);
  const EqualStatsReal t = singlet_stats(swapped);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(s.p[i][j] == doctest::Approx(t.p[1 - i][1 - j]).epsilon(kTol));
}

TEST_CASE("all sixteen deterministic local strategies obey the inequality") {
  Rat best_p(-100);
  Rat best_corr(-100);
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a1 = 0; a1 < 2; ++a1)
      for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1) {
          const EqualStats s = local_strategy_stats(
              {std::uint8_t(a0), std::uint8_t(a1)},
              {std::uint8_t(b0), std::uint8_t(b1)});
          const Rat p = chsh_p_value(s);
          const Rat corr = chsh_correlator(s);
          CHECK(p <= Rat(0));                       // the exact local bound
          CHECK(corr == 2 * p + 2);                 // affine identity
          CHECK(corr >= Rat(-4));
          CHECK(corr <= Rat(2));
          best_p = std::max(best_p, p);
          best_corr = std::max(best_corr, corr);
        }
  CHECK(best_p == Rat(0));      // attained, e.g. by constants
  CHECK(best_corr == Rat(2));   // the classical CHSH bound, exactly
}

TEST_CASE("boxes reproduce their defining equal-outcome tables") {
  const EqualStats plain = equal_stats(pr());
  CHECK(plain.p[0][0] == Rat(1));
  CHECK(plain.p[0][1] == Rat(1));
  CHECK(plain.p[1][0] == Rat(1));
  CHECK(plain.p[1][1] == Rat(0));
  // Equal-on-AND orientation: agreement exactly when both settings are 1.
  const EqualStats flipped = equal_stats(pr_variant());
  CHECK(flipped.p[0][0] == Rat(0));
  CHECK(flipped.p[0][1] == Rat(0));
  CHECK(flipped.p[1][0] == Rat(0));
  CHECK(flipped.p[1][1] == Rat(1));
}

TEST_CASE("the flipped pair box is maximally nonlocal yet non-signaling") {
  const Primitive box = pr_variant();
  CHECK(is_non_signaling(box));
  const EqualStats s = equal_stats(box);
  CHECK(chsh_p_value(s) == Rat(1));        // the algebraic maximum
  CHECK(chsh_correlator(s) == Rat(4));
  CHECK(chsh_correlator(s) == 2 * chsh_p_value(s) + 2);
  CHECK(rat_double(chsh_correlator(s)) > tsirelson_bound());
}

TEST_CASE("the plain pair box sits on the other side of the one-sided test") {
  // With agreement on AND = 0, the one-sided p-value is deeply negative:
  // this orientation does not witness a violation.
  const EqualStats s = equal_stats(pr());
  CHECK(chsh_p_value(s) == Rat(-3));
  CHECK(chsh_correlator(s) == Rat(-4));
  CHECK(chsh_correlator(s) == 2 * chsh_p_value(s) + 2);
}

TEST_CASE("affine identity also holds on the quantum side") {
  MeasurementAngles ang;
  ang.a = {0.2, 1.4};
  ang.b = {-0.6, 0.5};
  const EqualStatsReal s = singlet_stats(ang);
  CHECK(chsh_correlator(s) ==
        doctest::Approx(2 * chsh_p_value(s) + 2).epsilon(kTol));
}
