#include "nlot/nonlocality.hpp"

#include <cmath>

namespace nlot {

EqualStats equal_stats(const Primitive& box) {
  if (box.in_a.size() != 2 || box.in_b.size() != 2 || box.out_a.size() != 2 ||
      box.out_b.size() != 2)
    throw StructuralError("equal-outcome statistics need a binary box");
  EqualStats s;
  for (std::uint8_t i = 0; i < 2; ++i)
    for (std::uint8_t j = 0; j < 2; ++j) {
      Rat equal(0);
      for (const auto& [rec, mass] : box.row(i, j).atoms())
        if (rec[0] == rec[1]) equal += mass;
      s.p[i][j] = equal;
    }
  return s;
}

Primitive pr_variant() {
  Primitive p = pr();
  p.name = "pr-variant";
  const RecordSchema schema = p.out_schema();
  for (auto& row : p.table)
    for (auto& cell : row)
      cell = cell.pushforward(schema, [](const Record& rec) {
        return Record{rec[0], static_cast<std::uint8_t>(rec[1] ^ 1)};
      });
  return p;
}

EqualStats local_strategy_stats(const std::array<std::uint8_t, 2>& a,
                                const std::array<std::uint8_t, 2>& b) {
  EqualStats s;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s.p[i][j] = a[i] == b[j] ? Rat(1) : Rat(0);
  return s;
}

Rat chsh_p_value(const EqualStats& s) {
  return s.p[1][1] - s.p[0][0] - s.p[0][1] - s.p[1][0];
}

double chsh_p_value(const EqualStatsReal& s) {
  return s.p[1][1] - s.p[0][0] - s.p[0][1] - s.p[1][0];
}

namespace {

template <typename T>
T correlator_sum(const std::array<std::array<T, 2>, 2>& p) {
  const auto corr = [](const T& v) -> T { return 2 * v - 1; };
  return corr(p[1][1]) - corr(p[1][0]) - corr(p[0][1]) - corr(p[0][0]);
}

}  // namespace

Rat chsh_correlator(const EqualStats& s) { return correlator_sum(s.p); }

double chsh_correlator(const EqualStatsReal& s) { return correlator_sum(s.p); }

// ---- quantum side -----------------------------------------------------------

MeasurementAngles quarter_table_angles() {
  const double deg60 = M_PI / 3.0;
  return MeasurementAngles{{0.0, deg60}, {0.0, -deg60}};
}

void StateVector2Q::check_norm() const {
  double norm = 0.0;
  for (const auto& a : amp) norm += std::norm(a);
  if (std::abs(norm - 1.0) > 1e-12)
    throw StructuralError("state vector is not normalized");
}

StateVector2Q singlet_state() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return StateVector2Q{{0.0, inv_sqrt2, -inv_sqrt2, 0.0}};
}

namespace {

using Cx = std::complex<double>;
using Mat2 = std::array<std::array<Cx, 2>, 2>;

/// (I + sign * n.sigma) / 2 for the direction n = (sin t, 0, cos t).
Mat2 outcome_projector(double theta, double sign) {
  return Mat2{{{Cx{(1.0 + sign * std::cos(theta)) / 2.0},
                Cx{sign * std::sin(theta) / 2.0}},
               {Cx{sign * std::sin(theta) / 2.0},
                Cx{(1.0 - sign * std::cos(theta)) / 2.0}}}};
}

}  // namespace

double equal_prob(const StateVector2Q& state, double alpha, double beta) {
  state.check_norm();
  double prob = 0.0;
  for (const double sign : {+1.0, -1.0}) {
    const Mat2 pa = outcome_projector(alpha, sign);
    const Mat2 pb = outcome_projector(beta, sign);
    std::array<Cx, 4> image{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            image[2 * i + j] += pa[i][k] * pb[j][l] * state.amp[2 * k + l];
    Cx overlap{};
    for (int idx = 0; idx < 4; ++idx)
      overlap += std::conj(state.amp[idx]) * image[idx];
    prob += overlap.real();
  }
  return prob;
}

EqualStatsReal singlet_stats(const MeasurementAngles& ang) {
  const StateVector2Q psi = singlet_state();
  EqualStatsReal s;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s.p[i][j] = equal_prob(psi, ang.a[i], ang.b[j]);
  return s;
}

}  // namespace nlot
