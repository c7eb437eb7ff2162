#pragma once

#include <string>
#include <vector>

namespace bapc {

/// Parametric interpretable model families.
///
///   Constant        f(t) = a
///   Linear          f(t) = a + b t
///   PolySeasonal    f(t) = a + b t + c t^2 + alpha cos(2 pi t / P + phi)
///   DampedSinusoid  f(t) = alpha exp(-beta t) cos(omega t + phi)
///   AR2             y_t = phi1 y_{t-1} + phi2 y_{t-2}, seeded by (y1, y2);
///                   evaluated through its closed form for integer t >= 1
enum class Family { Constant, Linear, PolySeasonal, DampedSinusoid, AR2 };

std::size_t param_count(Family family);
const std::vector<std::string>& param_names(Family family);
std::string family_name(Family family);
Family family_from_string(const std::string& name);

struct BaseModel {
  Family family = Family::Constant;
  std::vector<double> params;
  double period = 12.0;  // PolySeasonal seasonal period in samples

  double param(const std::string& name) const;
};

/// Checked constructor: validates parameter count, finiteness, and the
/// family invariants (DampedSinusoid: alpha > 0, omega > 0, phi wrapped
/// into [0, 2pi)).
BaseModel make_model(Family family, std::vector<double> params, double period = 12.0);

/// f_theta(t). AR2 requires integer t >= 1 and rejects other arguments.
double eval(const BaseModel& model, double t);

/// Wrap an angle into [0, 2pi).
double normalize_angle(double phi);

/// {"family": ..., "params": {name: value}, "period": ...} with
/// 17-significant-digit numbers.
std::string to_json(const BaseModel& model);

}  // namespace bapc
