#pragma once

#include <array>
#include <complex>

#include "nlot/primitive.hpp"

namespace nlot {

// ============================================================================
// Equal-outcome statistics and the CHSH quantities.
//
// p[i][j] = Prob[outputs equal | settings (i,j)].  Exact rationals when the
// numbers come from a behavior table; doubles (with stated tolerance) when
// they come from the quantum state-vector path.
// ============================================================================

struct EqualStats {
  std::array<std::array<Rat, 2>, 2> p;
};

struct EqualStatsReal {
  std::array<std::array<double, 2>, 2> p;
};

/// Reads the equal-outcome probabilities off a bit-output box, treating the
/// inputs as measurement settings.
EqualStats equal_stats(const Primitive& box);

/// The pr() box with B's output flipped: outputs agree iff u AND v = 1,
/// i.e. equal-outcome stats (0, 0, 0, 1).
Primitive pr_variant();

/// Deterministic local strategy: A answers a[i] on setting i, B answers b[j].
EqualStats local_strategy_stats(const std::array<std::uint8_t, 2>& a,
                                const std::array<std::uint8_t, 2>& b);

/// p11 - (p00 + p01 + p10); positive certifies a CHSH violation.
Rat chsh_p_value(const EqualStats& s);
double chsh_p_value(const EqualStatsReal& s);

/// E11 - E10 - E01 - E00 with E = 2p - 1.  Local bound 2, Tsirelson 2*sqrt(2).
Rat chsh_correlator(const EqualStats& s);
double chsh_correlator(const EqualStatsReal& s);

inline double tsirelson_bound() { return 2.0 * std::sqrt(2.0); }

// ---- quantum side -----------------------------------------------------------

/// Measurement directions in the x-z plane, in radians, one per setting.
struct MeasurementAngles {
  std::array<double, 2> a;
  std::array<double, 2> b;
};

/// Settings that reproduce the equal-outcome row (0, 1/4, 1/4, 3/4) on the
/// singlet: a = (0, 60deg), b = (0, -60deg).
MeasurementAngles quarter_table_angles();

/// Two-qubit pure state; norm must be within 1e-12 of 1.
struct StateVector2Q {
  std::array<std::complex<double>, 4> amp;

  void check_norm() const;
};

StateVector2Q singlet_state();

/// Prob[equal] for measurements of `state` along angles (alpha, beta),
/// computed by explicit state-vector arithmetic (projectors, no closed form).
double equal_prob(const StateVector2Q& state, double alpha, double beta);

/// The 2x2 equal-outcome table of the singlet under the given settings.
EqualStatsReal singlet_stats(const MeasurementAngles& ang);

}  // namespace nlot
