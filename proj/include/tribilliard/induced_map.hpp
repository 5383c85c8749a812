// First-return dynamics on the base at the launch angle phi_star.
//
// Every regular orbit started on side 1 at angle phi_star comes back to
// side 1 at the same angle after ten or four bounces, and the return map of
// the base coordinate is the two-branch interval exchange
//   x -> x + (1 - x_d)   on (0, x_d),
//   x -> x - x_d         on (x_d, 1),
// i.e. rotation by omega = 1 - x_d on the circle of circumference 1.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "tribilliard/billiard.hpp"
#include "tribilliard/critical_angles.hpp"
#include "tribilliard/geometry.hpp"

namespace tribilliard {

/// Analytic form of the induced base map.
struct IETSpec {
  double breakpoint = 0.0;                 // x_d
  std::array<double, 2> translations{};    // on (0, breakpoint) and (breakpoint, 1)
  std::array<int, 2> return_times{};       // bounces until return per branch
  double omega = 0.0;                      // rotation number

  double apply(double x) const {
    const double y = x < breakpoint ? x + translations[0] : x + translations[1];
    return y;
  }
};

inline IETSpec analytic_iet(double alpha) {
  const AngleReport rep = angle_report(alpha);
  IETSpec iet;
  iet.breakpoint = rep.x_d;
  iet.translations = {1.0 - rep.x_d, -rep.x_d};
  iet.return_times = {10, 4};
  iet.omega = rep.omega;
  return iet;
}

struct FirstReturn {
  bool singular = false;
  double x = std::numeric_limits<double>::quiet_NaN();
  int steps = 0;
  SingularHit hit{};
};

/// Follow the orbit from [1, phi_ref, x] until it bounces on side 1 at angle
/// phi_ref again (within angle_tol). Hitting a vertex is reported, not thrown.
inline FirstReturn first_return(const TriangleParams& tri, const PlanarEmbedding& emb,
                                double phi_ref, double x, double angle_tol = tol::return_angle,
                                int max_steps = 64) {
  PhaseState st{1, phi_ref, x};
  for (int t = 1; t <= max_steps; ++t) {
    const StepResult r = step_geometric(tri, emb, st);
    if (is_singular(r)) {
      FirstReturn out;
      out.singular = true;
      out.steps = t;
      out.hit = std::get<SingularHit>(r);
      return out;
    }
    st = std::get<RegularStep>(r).next;
    if (st.side == 1 && std::abs(st.phi - phi_ref) <= angle_tol) {
      FirstReturn out;
      out.x = st.x;
      out.steps = t;
      return out;
    }
  }
  throw std::runtime_error("first_return: no return to the base within " +
                           std::to_string(max_steps) + " bounces");
}

/// Partial quotients of x in (0, 1): x = 1/(a_1 + 1/(a_2 + ...)). The
/// expansion of a double is finite; it stops at max_terms or when the
/// remainder is exhausted.
inline std::vector<long long> continued_fraction(double x, int max_terms = 24) {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::domain_error("continued_fraction: x must lie in (0, 1); got " + std::to_string(x));
  }
  std::vector<long long> terms;
  double frac = x;
  for (int i = 0; i < max_terms; ++i) {
    const double inv = 1.0 / frac;
    if (!(inv < 9.0e18)) break;  // remainder numerically zero
    const double floor_inv = std::floor(inv);
    terms.push_back(static_cast<long long>(floor_inv));
    frac = inv - floor_inv;
    if (frac <= 0.0) break;
  }
  return terms;
}

struct RotationEstimate {
  double omega_hat = 0.0;
  long long n = 0;                 // returns actually accumulated
  double error_bound = 0.0;        // |omega_hat - analytic omega|
  std::vector<long long> cf;       // partial quotients of omega_hat
  bool singular_stop = false;      // orbit hit a vertex before n returns
  SingularHit hit{};
};

/// Average lifted translation per return over n_returns first returns
/// started at x0 on the base.
inline RotationEstimate rotation_estimate(const TriangleParams& tri, const PlanarEmbedding& emb,
                                          double x0, long long n_returns,
                                          double angle_tol = tol::return_angle) {
  if (n_returns < 1) throw std::invalid_argument("rotation_estimate: n_returns must be >= 1");
  const AngleReport rep = angle_report(tri.alpha);
  RotationEstimate est;
  double x = x0;
  double sum = 0.0;
  for (long long i = 0; i < n_returns; ++i) {
    const FirstReturn fr = first_return(tri, emb, rep.phi_star, x, angle_tol);
    if (fr.singular) {
      est.singular_stop = true;
      est.hit = fr.hit;
      break;
    }
    double lift = fr.x - x;
    if (lift < 0.0) lift += 1.0;  // the base has circumference s_1 = 1
    sum += lift;
    x = fr.x;
    ++est.n;
  }
  est.omega_hat = est.n > 0 ? sum / static_cast<double>(est.n) : 0.0;
  est.error_bound = std::abs(est.omega_hat - rep.omega);
  if (est.n > 0) est.cf = continued_fraction(est.omega_hat);
  return est;
}

enum class RationalityVerdict { rational, likely_irrational, inconclusive };

struct RationalityProbe {
  RationalityVerdict verdict = RationalityVerdict::inconclusive;
  long long p = 0;  // matched or best convergent
  long long q = 0;
  double error = std::numeric_limits<double>::infinity();
};

/// Heuristic rationality check through continued-fraction convergents.
/// Policy: a convergent p/q with q <= q_max and |x - p/q| <= 1e-14 counts as
/// rational, but only while q stays at or below 1e7. Past that every double
/// is within 1e-14 of some convergent, so neither a match nor its absence
/// carries information and the verdict degrades to inconclusive. Below the
/// limit a miss is reported as likely_irrational.
inline RationalityProbe rationality_probe(double x, long long q_max) {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::domain_error("rationality_probe: x must lie in (0, 1); got " + std::to_string(x));
  }
  if (q_max < 2) throw std::invalid_argument("rationality_probe: q_max must be >= 2");
  constexpr double match_tol = 1e-14;
  constexpr long long resolution_limit = 10'000'000;

  const std::vector<long long> terms = continued_fraction(x, 40);
  RationalityProbe probe;
  long long p_prev = 1, q_prev = 0;  // convergents of [0; a1, a2, ...]
  long long p_cur = 0, q_cur = 1;
  for (long long a : terms) {
    if (a > (std::numeric_limits<long long>::max() - q_prev) / q_cur) break;
    const long long p_next = a * p_cur + p_prev;
    const long long q_next = a * q_cur + q_prev;
    if (q_next > q_max) break;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    const double err = std::abs(x - static_cast<double>(p_cur) / static_cast<double>(q_cur));
    if (err < probe.error) {
      probe.error = err;
      probe.p = p_cur;
      probe.q = q_cur;
    }
    if (err <= match_tol) {
      probe.verdict = q_cur <= resolution_limit ? RationalityVerdict::rational
                                                : RationalityVerdict::inconclusive;
      return probe;
    }
  }
  probe.verdict = q_max > resolution_limit ? RationalityVerdict::inconclusive
                                           : RationalityVerdict::likely_irrational;
  return probe;
}

/// Distances of a long orbit from the legs' far ends plus the base return
/// coordinates, for checking the excluded tip region and equidistribution.
struct GapStats {
  double min_margin_side2 = std::numeric_limits<double>::infinity();  // s_2 - x on side 2
  double min_margin_side3 = std::numeric_limits<double>::infinity();  // x on side 3
  double epsilon_ref = 0.0;
  std::vector<double> base_positions;  // sorted return coordinates on side 1
};

inline GapStats gap_stats(const TriangleParams& tri, const Orbit& orbit,
                          double angle_tol = tol::return_angle) {
  if (orbit.states.empty()) throw std::invalid_argument("gap_stats: empty orbit");
  if (orbit.states[0].side != 1) {
    throw std::invalid_argument("gap_stats: orbit must start on the base");
  }
  const double phi_ref = orbit.states[0].phi;
  GapStats stats;
  stats.epsilon_ref = angle_report(tri.alpha).epsilon;
  for (const PhaseState& st : orbit.states) {
    if (st.side == 2) {
      stats.min_margin_side2 = std::min(stats.min_margin_side2, tri.s[1] - st.x);
    } else if (st.side == 3) {
      stats.min_margin_side3 = std::min(stats.min_margin_side3, st.x);
    } else if (std::abs(st.phi - phi_ref) <= angle_tol) {
      stats.base_positions.push_back(st.x);
    }
  }
  std::sort(stats.base_positions.begin(), stats.base_positions.end());
  return stats;
}

/// Occupancy counts of positions in [0, 1] over equal-width bins. Raw
/// counts only: density inside the cylinders has no quantitative bound to
/// check against, so coverage is reported without a pass/fail verdict.
inline std::vector<std::size_t> coverage_histogram(const std::vector<double>& positions,
                                                   std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("coverage_histogram: bins must be >= 1");
  std::vector<std::size_t> counts(bins, 0);
  for (double p : positions) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::domain_error("coverage_histogram: position outside [0, 1]");
    }
    std::size_t b = static_cast<std::size_t>(p * static_cast<double>(bins));
    if (b >= bins) b = bins - 1;
    ++counts[b];
  }
  return counts;
}

/// Chord intersections with the tip triangle cut off at distance eps from
/// the apex along both legs. Chords are clipped against the region; a
/// positive clipped length with penetration depth above depth_tol counts.
struct TipExclusionReport {
  std::size_t chords_checked = 0;
  std::size_t chords_intersecting = 0;
  double max_penetration = 0.0;  // worst depth past the tip cut line
  double cut_height = 0.0;       // y of the cut line in the embedding
};

inline TipExclusionReport tip_exclusion(const TriangleParams& tri, const PlanarEmbedding& emb,
                                        const Orbit& orbit, double eps,
                                        double depth_tol = tol::tip_depth) {
  if (!(eps > 0.0 && eps < tri.s[1])) {
    throw std::domain_error("tip_exclusion: eps must lie in (0, s_2)");
  }
  // Tip region corners, counterclockwise.
  const Vec2 c_left = boundary_to_plane(tri, emb, {3, eps});
  const Vec2 c_right = boundary_to_plane(tri, emb, {2, tri.s[1] - eps});
  const Vec2 apex = emb.vertex(3);
  const std::array<Vec2, 3> poly{c_left, c_right, apex};

  TipExclusionReport rep;
  rep.cut_height = 0.5 * (c_left.y + c_right.y);

  std::vector<Vec2> pts;
  pts.reserve(orbit.states.size());
  for (const PhaseState& st : orbit.states) {
    pts.push_back(boundary_to_plane(tri, emb, {st.side, st.x}));
  }
  const Vec2 cut_dir = normalized(c_right - c_left);

  for (std::size_t t = 0; t + 1 < pts.size(); ++t) {
    ++rep.chords_checked;
    // Clip the chord against the three half-planes of the tip triangle.
    double t_lo = 0.0, t_hi = 1.0;
    const Vec2 d = pts[t + 1] - pts[t];
    bool empty = false;
    for (std::size_t e = 0; e < poly.size() && !empty; ++e) {
      const Vec2 a = poly[e];
      const Vec2 edge = poly[(e + 1) % poly.size()] - a;
      // Inside is the left of each ccw edge: cross(edge, p - a) >= 0.
      const double f0 = cross(edge, pts[t] - a);
      const double df = cross(edge, d);
      if (std::abs(df) < 1e-300) {
        if (f0 < 0.0) empty = true;
        continue;
      }
      const double tc = -f0 / df;
      if (df > 0.0) {
        t_lo = std::max(t_lo, tc);
      } else {
        t_hi = std::min(t_hi, tc);
      }
      if (t_lo > t_hi) empty = true;
    }
    if (empty || t_lo > t_hi) continue;
    // Penetration: height above the cut line, linear in the chord parameter,
    // so extremal at the clipped endpoints.
    const auto depth = [&](double tc) {
      const Vec2 p = pts[t] + tc * d;
      return cross(cut_dir, p - c_left);
    };
    const double pen = std::max(depth(t_lo), depth(t_hi));
    rep.max_penetration = std::max(rep.max_penetration, pen);
    if (pen > depth_tol) ++rep.chords_intersecting;
  }
  return rep;
}

}  // namespace tribilliard
