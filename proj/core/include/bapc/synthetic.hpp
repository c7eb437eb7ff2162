#pragma once

#include "bapc/time_series.hpp"

namespace bapc {

/// The four closed-form solutions sampled as synthetic inputs:
///   Step    u(t) = u0 + F H(t - t*)
///   Ramp    u(t) = u0 + v0 t + F (t - t*) H(t - t*)   (impulse on velocity)
///   SinACP  u(t) = u0 cos(w t) + H(t - t*) (F/w) sin(w (t - t*))
///   SinFCP  u(t) = u0 cos(w t) for t <= t*, u0 cos(nu t + (w - nu) t*) after
enum class SyntheticKind { Step, Ramp, SinAcp, SinFcp };

std::string synthetic_kind_name(SyntheticKind kind);
SyntheticKind synthetic_kind_from_string(const std::string& name);

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::Step;
  double u0 = 0.0;
  double v0 = 0.0;
  double force = 0.0;   // F
  double t_star = 0.0;  // impulse/switch time of the continuous solution
  double omega = 0.0;
  double nu = 0.0;
  int n = 0;
  /// First sample index affected by the change. The default grid anchors the
  /// change here; with raw_grid the series is sampled as y_t = u(t-1) with
  /// the literal t_star and H(0) = 1, and change_index is ignored.
  int change_index = 0;
  bool raw_grid = false;

  static SyntheticSpec defaults(SyntheticKind kind);
  void validate() const;
};

/// Index of the first sample whose value the change can affect under the
/// spec's grid convention.
int effective_change_index(const SyntheticSpec& spec);

TimeSeries generate(const SyntheticSpec& spec);

/// For SinACP/SinFCP: largest violation of the segment-wise AR(2) recursion
/// (coefficients 2 cos(w_segment), -1), scaled by max |y|. Rows straddling
/// the change are excluded.
double verify_dynamics(const TimeSeries& series, const SyntheticSpec& spec);

}  // namespace bapc
