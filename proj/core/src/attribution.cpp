#include "bapc/attribution.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "bapc/ar2.hpp"
#include "bapc/errors.hpp"
#include "bapc/quadrature.hpp"
#include "quad_float.hpp"

namespace bapc {

namespace {

constexpr double kDenominatorFallback = 1e-9;

void check_pair(const BaseModel& theta0, const BaseModel& theta_r, Family family) {
  if (theta0.family != family || theta_r.family != family) {
    throw ConfigError("attribution: models are not both of the expected family");
  }
  if (family == Family::PolySeasonal && theta0.period != theta_r.period) {
    throw ConfigError("attribution: seasonal periods differ between endpoints");
  }
}

void finish(Attribution* out) {
  out->completeness_residual = std::fabs(out->sum() - out->delta_f);
}

// ---------------------------------------------------------------------------
// quadrature partials
// ---------------------------------------------------------------------------

// d f / d theta_k at one parameter point. AR2 partials come from the
// differentiated recursion: sensitivities follow the same second-order
// recurrence driven by the lagged sequence values.
std::vector<double> partials_at(Family family, const std::vector<double>& p, double period,
                                double t) {
  switch (family) {
    case Family::Constant:
      return {1.0};
    case Family::Linear:
      return {1.0, t};
    case Family::PolySeasonal: {
      const double omega = 2.0 * std::numbers::pi / period;
      const double angle = omega * t + p[4];
      return {1.0, t, t * t, std::cos(angle), -p[3] * std::sin(angle)};
    }
    case Family::DampedSinusoid: {
      const double decay = std::exp(-p[1] * t);
      const double angle = p[2] * t + p[3];
      const double c = std::cos(angle);
      const double s = std::sin(angle);
      return {decay * c, -t * p[0] * decay * c, -t * p[0] * decay * s, -p[0] * decay * s};
    }
    case Family::AR2: {
      const int ti = static_cast<int>(std::nearbyint(t));
      if (std::fabs(t - ti) > 1e-9 || ti < 1) {
        throw ConfigError("AR2 attribution needs integer t >= 1");
      }
      const double y1 = p[0], y2 = p[1], p1 = p[2], p2 = p[3];
      if (ti == 1) return {1.0, 0.0, 0.0, 0.0};
      if (ti == 2) return {0.0, 1.0, 0.0, 0.0};
      // a = d y/d y1 (Phi2), b = d y/d y2 (Phi1), u = d y/d phi1, v = d y/d phi2
      double y_prev2 = y1, y_prev = y2;
      double a_prev2 = 1.0, a_prev = 0.0;
      double b_prev2 = 0.0, b_prev = 1.0;
      double u_prev2 = 0.0, u_prev = 0.0;
      double v_prev2 = 0.0, v_prev = 0.0;
      for (int k = 3; k <= ti; ++k) {
        const double y = p1 * y_prev + p2 * y_prev2;
        const double a = p1 * a_prev + p2 * a_prev2;
        const double b = p1 * b_prev + p2 * b_prev2;
        const double u = y_prev + p1 * u_prev + p2 * u_prev2;
        const double v = y_prev2 + p1 * v_prev + p2 * v_prev2;
        y_prev2 = y_prev; y_prev = y;
        a_prev2 = a_prev; a_prev = a;
        b_prev2 = b_prev; b_prev = b;
        u_prev2 = u_prev; u_prev = u;
        v_prev2 = v_prev; v_prev = v;
      }
      return {a_prev, b_prev, u_prev, v_prev};
    }
  }
  throw ConfigError("unknown family");
}

std::vector<double> quadrature_pass(const BaseModel& theta0, const BaseModel& theta_r,
                                    double t, int nodes) {
  const QuadratureRule& rule = gauss_legendre(nodes);
  const std::size_t q = theta0.params.size();
  std::vector<double> acc(q, 0.0);
  std::vector<double> point(q);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double h = rule.nodes[i];
    for (std::size_t k = 0; k < q; ++k) {
      point[k] = theta_r.params[k] + h * (theta0.params[k] - theta_r.params[k]);
    }
    const auto partials = partials_at(theta0.family, point, theta0.period, t);
    for (std::size_t k = 0; k < q; ++k) {
      if (!std::isfinite(partials[k])) {
        throw NumericError("non-finite integrand in ig_quadrature");
      }
      acc[k] += rule.weights[i] * partials[k];
    }
  }
  for (std::size_t k = 0; k < q; ++k) {
    acc[k] *= theta0.params[k] - theta_r.params[k];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// AR2 closed form: Gamma double sums (quad precision, heavy cancellation)
// ---------------------------------------------------------------------------

// Gamma^m_n = int_0^1 gamma1(h)^m gamma2(h)^n dh expanded binomially around
// the step endpoint (phi_r, with increments delta = phi0 - phi_r).
QuadFloat gamma_moment(int m, int n, QuadFloat p1r, QuadFloat d1, QuadFloat p2r,
                       QuadFloat d2) {
  if (m < 0 || n < 0) return QuadFloat(0);
  QuadFloat acc(0);
  for (int j = 0; j <= m; ++j) {
    const QuadFloat left = binomial_quad(m, j) * pow_int(p1r, m - j) * pow_int(d1, j);
    for (int k = 0; k <= n; ++k) {
      acc = acc + left * binomial_quad(n, k) * pow_int(p2r, n - k) * pow_int(d2, k) /
                      QuadFloat(j + k + 1);
    }
  }
  return acc;
}

// phibar1(T, j) / delta_phi1 and phibar2(T, j) / delta_phi2 from the
// termwise-differentiated binomial expansion of Phi.
QuadFloat phibar1_factor(int T, int j, QuadFloat p1r, QuadFloat d1, QuadFloat p2r,
                         QuadFloat d2) {
  if (T < 0) return QuadFloat(0);
  QuadFloat acc(0);
  for (int k = 0; k <= T / 2; ++k) {
    const int weight = T - 2 * k;
    if (weight == 0) continue;
    acc = acc + binomial_quad(T - k, k) * QuadFloat(weight) *
                    gamma_moment(T - 1 - 2 * k, k + j, p1r, d1, p2r, d2);
  }
  return acc;
}

QuadFloat phibar2_factor(int T, int j, QuadFloat p1r, QuadFloat d1, QuadFloat p2r,
                         QuadFloat d2) {
  if (T < 0) return QuadFloat(0);
  QuadFloat acc(0);
  for (int k = 0; k <= T / 2; ++k) {
    const int weight = k + j;
    if (weight == 0) continue;
    acc = acc + binomial_quad(T - k, k) * QuadFloat(weight) *
                    gamma_moment(T - 2 * k, k - 1 + j, p1r, d1, p2r, d2);
  }
  return acc;
}

}  // namespace

std::vector<double> model_partials(const BaseModel& model, double t) {
  return partials_at(model.family, model.params, model.period, t);
}

std::vector<double> SegmentPath::at(double h) const {
  if (from.size() != to.size()) {
    throw ConfigError("segment path endpoints differ in dimension");
  }
  std::vector<double> out(from.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = from[k] + h * (to[k] - from[k]);
  }
  return out;
}

double Attribution::sum() const {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

Attribution ig_linear(const std::vector<std::string>& names,
                      const std::vector<double>& delta_theta,
                      const std::vector<double>& basis, double t) {
  if (names.size() != delta_theta.size() || basis.size() != delta_theta.size()) {
    throw ConfigError("ig_linear: mismatched vector lengths");
  }
  Attribution out;
  out.names = names;
  out.eval_time = t;
  out.values.resize(delta_theta.size());
  for (std::size_t k = 0; k < delta_theta.size(); ++k) {
    if (!std::isfinite(basis[k])) {
      throw NumericError("ig_linear: non-finite basis value");
    }
    out.values[k] = delta_theta[k] * basis[k];
  }
  out.delta_f = out.sum();
  finish(&out);
  return out;
}

Attribution ig_damped_sinusoid(const BaseModel& theta0, const BaseModel& theta_r, double t) {
  check_pair(theta0, theta_r, Family::DampedSinusoid);
  const double a0 = theta0.params[0], b0 = theta0.params[1], w0 = theta0.params[2],
               f0 = theta0.params[3];
  const double ar = theta_r.params[0], br = theta_r.params[1], wr = theta_r.params[2],
               fr = theta_r.params[3];
  const double da = a0 - ar, db = b0 - br, dw = w0 - wr, df = f0 - fr;

  const std::complex<double> denom(-db * t, dw * t + df);
  if (std::abs(denom) < kDenominatorFallback) {
    Attribution out = ig_quadrature(theta0, theta_r, t);
    out.delta_f = eval(theta0, t) - eval(theta_r, t);
    finish(&out);
    return out;
  }

  const std::complex<double> e0 = std::exp(std::complex<double>(-b0 * t, w0 * t + f0));
  const std::complex<double> er = std::exp(std::complex<double>(-br * t, wr * t + fr));
  const std::complex<double> delta_g = (e0 - er) / denom;
  const std::complex<double> delta_f_complex = a0 * e0 - ar * er;
  const std::complex<double> rest = delta_f_complex - da * delta_g;
  const std::complex<double> i_unit(0.0, 1.0);

  Attribution out;
  out.names = param_names(Family::DampedSinusoid);
  out.eval_time = t;
  out.values = {
      (da * delta_g).real(),
      (std::complex<double>(-db * t, 0.0) / denom * rest).real(),
      (i_unit * (dw * t) / denom * rest).real(),
      (i_unit * df / denom * rest).real(),
  };
  out.delta_f = eval(theta0, t) - eval(theta_r, t);
  finish(&out);
  return out;
}

Attribution ig_poly_seasonal(const BaseModel& theta0, const BaseModel& theta_r, double t) {
  check_pair(theta0, theta_r, Family::PolySeasonal);
  const double dphi = theta0.params[4] - theta_r.params[4];
  if (std::fabs(dphi) < kDenominatorFallback && dphi != 0.0) {
    Attribution out = ig_quadrature(theta0, theta_r, t);
    out.delta_f = eval(theta0, t) - eval(theta_r, t);
    finish(&out);
    return out;
  }
  const double omega = 2.0 * std::numbers::pi / theta0.period;
  const double a0 = theta0.params[3], f0 = theta0.params[4];
  const double ar = theta_r.params[3], fr = theta_r.params[4];
  const std::complex<double> e0 = std::exp(std::complex<double>(0.0, omega * t + f0));
  const std::complex<double> er = std::exp(std::complex<double>(0.0, omega * t + fr));

  double ig_alpha;
  double ig_phi;
  if (dphi == 0.0) {
    // constant integrand in the trig block
    ig_alpha = (a0 - ar) * std::cos(omega * t + f0);
    ig_phi = 0.0;
  } else {
    const std::complex<double> denom(0.0, dphi);
    const std::complex<double> delta_g = (e0 - er) / denom;
    const std::complex<double> rest = a0 * e0 - ar * er - (a0 - ar) * delta_g;
    ig_alpha = ((a0 - ar) * delta_g).real();
    ig_phi = rest.real();
  }

  Attribution out;
  out.names = param_names(Family::PolySeasonal);
  out.eval_time = t;
  out.values = {
      theta0.params[0] - theta_r.params[0],
      (theta0.params[1] - theta_r.params[1]) * t,
      (theta0.params[2] - theta_r.params[2]) * t * t,
      ig_alpha,
      ig_phi,
  };
  out.delta_f = eval(theta0, t) - eval(theta_r, t);
  finish(&out);
  return out;
}

Attribution ig_ar2(double phi1_0, double phi2_0, double phi1_r, double phi2_r, double y1,
                   double y2, int t) {
  if (t < 1) {
    throw ConfigError("ig_ar2 requires t >= 1");
  }
  if (t > kPhiClosedFormMaxT) {
    throw NumericError("ig_ar2 is precision-guarded to t <= 60; use ig_quadrature");
  }
  Attribution out;
  out.names = {"phi1", "phi2"};
  out.eval_time = t;
  if (t <= 2) {
    out.values = {0.0, 0.0};
    out.delta_f = 0.0;
    finish(&out);
    return out;
  }
  const QuadFloat p1r(phi1_r), p2r(phi2_r);
  const QuadFloat d1(phi1_0 - phi1_r), d2(phi2_0 - phi2_r);
  const QuadFloat ig1 = d1 * (phibar1_factor(t - 2, 0, p1r, d1, p2r, d2) * QuadFloat(y2) +
                              phibar1_factor(t - 3, 1, p1r, d1, p2r, d2) * QuadFloat(y1));
  const QuadFloat ig2 = d2 * (phibar2_factor(t - 2, 0, p1r, d1, p2r, d2) * QuadFloat(y2) +
                              phibar2_factor(t - 3, 1, p1r, d1, p2r, d2) * QuadFloat(y1));
  out.values = {static_cast<double>(ig1.value), static_cast<double>(ig2.value)};
  out.delta_f = ar2_closed_form(y1, y2, phi1_0, phi2_0, t) -
                ar2_closed_form(y1, y2, phi1_r, phi2_r, t);
  finish(&out);
  return out;
}

Attribution ig_quadrature(const BaseModel& theta0, const BaseModel& theta_r, double t,
                          int nodes) {
  check_pair(theta0, theta_r, theta0.family);
  if (theta0.params.size() != theta_r.params.size()) {
    throw ConfigError("ig_quadrature: endpoint dimensions differ");
  }
  const auto coarse = quadrature_pass(theta0, theta_r, t, nodes);
  const auto fine = quadrature_pass(theta0, theta_r, t, 2 * nodes);
  double error = 0.0;
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    error = std::max(error, std::fabs(fine[k] - coarse[k]));
  }
  Attribution out;
  out.names = param_names(theta0.family);
  out.eval_time = t;
  out.values = fine;
  out.quadrature_error = error;
  out.delta_f = eval(theta0, t) - eval(theta_r, t);
  finish(&out);
  return out;
}

Attribution attribute(const BapcResult& result, double t) {
  const BaseModel& theta0 = result.theta0;
  const BaseModel& theta_r = result.theta_r;
  Attribution out;
  switch (result.base_family) {
    case Family::Constant:
      out = ig_linear(param_names(Family::Constant), result.delta_theta, {1.0}, t);
      break;
    case Family::Linear:
      out = ig_linear(param_names(Family::Linear), result.delta_theta, {1.0, t}, t);
      break;
    case Family::PolySeasonal:
      out = ig_poly_seasonal(theta0, theta_r, t);
      break;
    case Family::DampedSinusoid:
      out = ig_damped_sinusoid(theta0, theta_r, t);
      break;
    case Family::AR2: {
      const double rel = t - static_cast<double>(result.start_index) + 1.0;
      const int rel_t = static_cast<int>(std::nearbyint(rel));
      if (std::fabs(rel - rel_t) > 1e-9 || rel_t < 1) {
        throw ConfigError("AR2 attribution needs an integer index inside the window");
      }
      const bool same_seed = theta0.params[0] == theta_r.params[0] &&
                             theta0.params[1] == theta_r.params[1];
      if (same_seed && rel_t <= kPhiClosedFormMaxT) {
        const Attribution core =
            ig_ar2(theta0.params[2], theta0.params[3], theta_r.params[2], theta_r.params[3],
                   theta0.params[0], theta0.params[1], rel_t);
        out.names = param_names(Family::AR2);
        out.values = {0.0, 0.0, core.values[0], core.values[1]};
        out.eval_time = t;
      } else {
        out = ig_quadrature(theta0, theta_r, rel);
      }
      break;
    }
  }
  out.eval_time = t;
  out.delta_f = surrogate_correction(result, t);
  finish(&out);
  return out;
}

IgHeatmaps ig_heatmaps(const SbapcResult& sweep) {
  IgHeatmaps out;
  out.names = param_names(sweep.base_family);
  out.anchors = sweep.anchors;
  out.train_size = sweep.train_size;
  const std::size_t q = out.names.size();
  const auto rows = sweep.anchors.size();
  const auto cols = static_cast<std::size_t>(sweep.train_size);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.per_param.assign(q, std::vector<std::vector<double>>(rows, std::vector<double>(cols, nan)));
  out.completeness.assign(rows, std::vector<double>(cols, nan));

  std::vector<std::vector<std::string>> failures(rows);
  parallel_for_index(static_cast<int>(rows), [&](int i) {
    const auto row = static_cast<std::size_t>(i);
    const auto& result = sweep.per_anchor[row];
    if (!result) {
      failures[row].push_back("anchor " + std::to_string(sweep.anchors[row]) +
                              ": no BAPC result");
      return;
    }
    const int s = sweep.anchors[row];
    for (std::size_t j = 0; j < cols; ++j) {
      const double t = static_cast<double>(s - sweep.train_size + 1 + static_cast<int>(j));
      try {
        const Attribution cell = attribute(*result, t);
        for (std::size_t k = 0; k < q; ++k) {
          out.per_param[k][row][j] = cell.values[k];
        }
        out.completeness[row][j] = cell.completeness_residual;
      } catch (const std::exception& e) {
        failures[row].push_back("cell (" + std::to_string(s) + ", " +
                                std::to_string(static_cast<int>(t)) + "): " + e.what());
      }
    }
  });
  for (auto& list : failures) {
    for (auto& message : list) out.cell_failures.push_back(std::move(message));
  }
  return out;
}

}  // namespace bapc
