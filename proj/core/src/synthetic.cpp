#include "bapc/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "bapc/errors.hpp"

namespace bapc {

namespace {

constexpr double kPi = std::numbers::pi;

// Right-continuous Heaviside: H(0) = 1.
double heaviside(double x) { return x >= 0.0 ? 1.0 : 0.0; }

}  // namespace

std::string synthetic_kind_name(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::Step: return "step";
    case SyntheticKind::Ramp: return "ramp";
    case SyntheticKind::SinAcp: return "sinacp";
    case SyntheticKind::SinFcp: return "sinfcp";
  }
  throw ConfigError("unknown synthetic kind");
}

SyntheticKind synthetic_kind_from_string(const std::string& name) {
  if (name == "step") return SyntheticKind::Step;
  if (name == "ramp") return SyntheticKind::Ramp;
  if (name == "sinacp") return SyntheticKind::SinAcp;
  if (name == "sinfcp") return SyntheticKind::SinFcp;
  throw ConfigError("unknown synthetic kind '" + name + "'");
}

SyntheticSpec SyntheticSpec::defaults(SyntheticKind kind) {
  SyntheticSpec spec;
  spec.kind = kind;
  switch (kind) {
    case SyntheticKind::Step:
      spec.u0 = -1.0;
      spec.force = 2.0;
      spec.t_star = 48.5;
      spec.n = 96;
      spec.change_index = 49;
      break;
    case SyntheticKind::Ramp:
      spec.u0 = 23.5;
      spec.v0 = -1.0;
      spec.force = 2.0;
      spec.t_star = 48.5;
      spec.n = 96;
      spec.change_index = 49;
      break;
    case SyntheticKind::SinAcp:
      spec.u0 = 1.0;
      spec.omega = 2.0 * kPi / 24.0;
      spec.force = -2.0 * kPi / 24.0;  // F = -omega
      spec.t_star = 55.0;
      spec.n = 96;
      spec.change_index = 55;
      break;
    case SyntheticKind::SinFcp:
      spec.u0 = 1.0;
      spec.omega = 2.0 * kPi / 40.0;
      spec.nu = 4.0 * kPi / 40.0;  // nu = 2 omega
      spec.t_star = 81.0;
      spec.n = 160;
      spec.change_index = 81;
      break;
  }
  return spec;
}

void SyntheticSpec::validate() const {
  if (n < 1) throw ConfigError("synthetic spec: n must be positive");
  if (kind == SyntheticKind::SinAcp || kind == SyntheticKind::SinFcp) {
    if (!(omega > 0.0)) throw ConfigError("synthetic spec: omega must be positive");
  }
  if (kind == SyntheticKind::SinFcp && !(nu > 0.0)) {
    throw ConfigError("synthetic spec: nu must be positive");
  }
  if (!raw_grid && (change_index < 1 || change_index > n + 1)) {
    throw ConfigError("synthetic spec: change_index outside 1..n+1");
  }
}

int effective_change_index(const SyntheticSpec& spec) {
  if (!spec.raw_grid) return spec.change_index;
  if (spec.kind == SyntheticKind::SinFcp) {
    // branch split is t <= t_star vs t > t_star
    return static_cast<int>(std::floor(spec.t_star)) + 2;
  }
  // y_t = u(t-1): the first sample with t-1 >= t_star (H(0) = 1)
  return static_cast<int>(std::ceil(spec.t_star)) + 1;
}

TimeSeries generate(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<double> values(static_cast<std::size_t>(spec.n));
  const int c = effective_change_index(spec);
  for (int t = 1; t <= spec.n; ++t) {
    const double tau = static_cast<double>(t - 1);
    double y = 0.0;
    switch (spec.kind) {
      case SyntheticKind::Step:
        if (spec.raw_grid) {
          y = spec.u0 + spec.force * heaviside(tau - spec.t_star);
        } else {
          y = spec.u0 + (t >= c ? spec.force : 0.0);
        }
        break;
      case SyntheticKind::Ramp:
        if (spec.raw_grid) {
          y = spec.u0 + spec.v0 * tau +
              spec.force * (tau - spec.t_star) * heaviside(tau - spec.t_star);
        } else {
          // slope v0 + F takes effect on the step into sample c
          y = spec.u0 + spec.v0 * tau +
              (t >= c ? spec.force * static_cast<double>(t - c + 1) : 0.0);
        }
        break;
      case SyntheticKind::SinAcp: {
        const double base = spec.u0 * std::cos(spec.omega * tau);
        if (spec.raw_grid) {
          y = base + heaviside(tau - spec.t_star) * (spec.force / spec.omega) *
                         std::sin(spec.omega * (tau - spec.t_star));
        } else {
          y = base + (t >= c ? (spec.force / spec.omega) *
                                   std::sin(spec.omega * static_cast<double>(t - c))
                             : 0.0);
        }
        break;
      }
      case SyntheticKind::SinFcp: {
        if (spec.raw_grid) {
          y = tau <= spec.t_star
                  ? spec.u0 * std::cos(spec.omega * tau)
                  : spec.u0 * std::cos(spec.nu * tau + (spec.omega - spec.nu) * spec.t_star);
        } else {
          const double switch_tau = static_cast<double>(c - 1);
          y = t < c ? spec.u0 * std::cos(spec.omega * tau)
                    : spec.u0 * std::cos(spec.nu * tau + (spec.omega - spec.nu) * switch_tau);
        }
        break;
      }
    }
    values[static_cast<std::size_t>(t - 1)] = y;
  }
  return TimeSeries(std::move(values), 1);
}

double verify_dynamics(const TimeSeries& series, const SyntheticSpec& spec) {
  if (spec.kind != SyntheticKind::SinAcp && spec.kind != SyntheticKind::SinFcp) {
    throw ConfigError("verify_dynamics applies to SinACP and SinFCP only");
  }
  const int c = effective_change_index(spec);
  double max_abs = 0.0;
  for (double v : series.values()) max_abs = std::max(max_abs, std::fabs(v));
  if (max_abs == 0.0) max_abs = 1.0;

  const auto segment_violation = [&](int first_row, int last_row, double omega) {
    const double phi1 = 2.0 * std::cos(omega);
    const double phi2 = -1.0;
    double worst = 0.0;
    for (int t = first_row; t <= last_row; ++t) {
      const double r = series.at(t) - phi1 * series.at(t - 1) - phi2 * series.at(t - 2);
      worst = std::max(worst, std::fabs(r));
    }
    return worst;
  };

  double worst = 0.0;
  const int start = series.start_index();
  const int last = series.last_index();
  const int pre_last = std::min(last, c - 1);
  if (pre_last >= start + 2) {
    worst = std::max(worst, segment_violation(start + 2, pre_last, spec.omega));
  }
  const double post_omega = spec.kind == SyntheticKind::SinFcp ? spec.nu : spec.omega;
  if (last >= c + 2) {
    worst = std::max(worst, segment_violation(c + 2, last, post_omega));
  }
  return worst / max_abs;
}

}  // namespace bapc
