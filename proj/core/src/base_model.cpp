#include "bapc/base_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "bapc/ar2.hpp"
#include "bapc/errors.hpp"

namespace bapc {

namespace {

const std::vector<std::string> kConstantNames = {"a"};
const std::vector<std::string> kLinearNames = {"a", "b"};
const std::vector<std::string> kPolySeasonalNames = {"a", "b", "c", "alpha", "phi"};
const std::vector<std::string> kDampedNames = {"alpha", "beta", "omega", "phi"};
const std::vector<std::string> kAr2Names = {"y1", "y2", "phi1", "phi2"};

}  // namespace

std::size_t param_count(Family family) {
  switch (family) {
    case Family::Constant: return 1;
    case Family::Linear: return 2;
    case Family::PolySeasonal: return 5;
    case Family::DampedSinusoid: return 4;
    case Family::AR2: return 4;
  }
  throw ConfigError("unknown family");
}

const std::vector<std::string>& param_names(Family family) {
  switch (family) {
    case Family::Constant: return kConstantNames;
    case Family::Linear: return kLinearNames;
    case Family::PolySeasonal: return kPolySeasonalNames;
    case Family::DampedSinusoid: return kDampedNames;
    case Family::AR2: return kAr2Names;
  }
  throw ConfigError("unknown family");
}

std::string family_name(Family family) {
  switch (family) {
    case Family::Constant: return "constant";
    case Family::Linear: return "linear";
    case Family::PolySeasonal: return "polyseasonal";
    case Family::DampedSinusoid: return "sinusoid";
    case Family::AR2: return "ar2";
  }
  throw ConfigError("unknown family");
}

Family family_from_string(const std::string& name) {
  static const std::map<std::string, Family> lookup = {
      {"constant", Family::Constant},       {"linear", Family::Linear},
      {"polyseasonal", Family::PolySeasonal}, {"sinusoid", Family::DampedSinusoid},
      {"damped-sinusoid", Family::DampedSinusoid}, {"ar2", Family::AR2},
      {"ar2-robust", Family::AR2}};
  const auto it = lookup.find(name);
  if (it == lookup.end()) {
    throw ConfigError("unknown base family '" + name + "'");
  }
  return it->second;
}

double BaseModel::param(const std::string& name) const {
  const auto& names = param_names(family);
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw ConfigError("family " + family_name(family) + " has no parameter '" + name + "'");
  }
  return params[static_cast<std::size_t>(it - names.begin())];
}

double normalize_angle(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  double out = std::fmod(phi, two_pi);
  if (out < 0.0) out += two_pi;
  if (out >= two_pi) out = 0.0;
  return out;
}

BaseModel make_model(Family family, std::vector<double> params, double period) {
  if (params.size() != param_count(family)) {
    throw ConfigError("family " + family_name(family) + " expects " +
                      std::to_string(param_count(family)) + " parameters, got " +
                      std::to_string(params.size()));
  }
  for (double p : params) {
    if (!std::isfinite(p)) {
      throw ConfigError("non-finite model parameter");
    }
  }
  if (family == Family::PolySeasonal) {
    if (!(period > 0.0)) {
      throw ConfigError("seasonal period must be positive");
    }
    params[4] = normalize_angle(params[4]);
  }
  if (family == Family::DampedSinusoid) {
    if (!(params[0] > 0.0)) {
      throw ConfigError("damped sinusoid requires alpha > 0");
    }
    if (!(params[2] > 0.0)) {
      throw ConfigError("damped sinusoid requires omega > 0");
    }
    params[3] = normalize_angle(params[3]);
  }
  BaseModel model;
  model.family = family;
  model.params = std::move(params);
  model.period = period;
  return model;
}

double eval(const BaseModel& model, double t) {
  const auto& p = model.params;
  switch (model.family) {
    case Family::Constant:
      return p[0];
    case Family::Linear:
      return p[0] + p[1] * t;
    case Family::PolySeasonal: {
      const double omega = 2.0 * std::numbers::pi / model.period;
      return p[0] + p[1] * t + p[2] * t * t + p[3] * std::cos(omega * t + p[4]);
    }
    case Family::DampedSinusoid:
      return p[0] * std::exp(-p[1] * t) * std::cos(p[2] * t + p[3]);
    case Family::AR2: {
      const double rounded = std::nearbyint(t);
      if (std::fabs(t - rounded) > 1e-9 || rounded < 1.0) {
        throw ConfigError("AR2 models are defined on integer t >= 1");
      }
      return ar2_closed_form(p[0], p[1], p[2], p[3], static_cast<int>(rounded));
    }
  }
  throw ConfigError("unknown family");
}

std::string to_json(const BaseModel& model) {
  char buf[40];
  std::string out = "{\"family\": \"" + family_name(model.family) + "\", \"params\": {";
  const auto& names = param_names(model.family);
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", model.params[i]);
    out += "\"" + names[i] + "\": " + buf;
    if (i + 1 < names.size()) out += ", ";
  }
  out += "}";
  if (model.family == Family::PolySeasonal) {
    std::snprintf(buf, sizeof(buf), "%.17g", model.period);
    out += ", \"period\": ";
    out += buf;
  }
  out += "}";
  return out;
}

}  // namespace bapc
