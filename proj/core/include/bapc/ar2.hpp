#pragma once

namespace bapc {

struct Ar2Params {
  double y1 = 0, y2 = 0, phi1 = 0, phi2 = 0;
};

struct SinusoidParams {
  double alpha = 0, beta = 0, omega = 0, phi = 0;
};

/// Coefficients of the AR(2) sequence generated by sampling
/// y_t = alpha exp(-beta (t-1)) cos(omega (t-1) + phi) at t = 1, 2, ...
/// Requires alpha > 0 and omega > 0.
Ar2Params sin_to_ar2(double alpha, double beta, double omega, double phi);

/// Inverse conversion for phi2 < 0. beta = -ln(-phi2)/2 and
/// omega = arccos(phi1 exp(beta)/2); (alpha, phi) are resolved so that
/// alpha cos(phi) = y1 and alpha exp(-beta) cos(omega + phi) = y2, with
/// alpha > 0 and phi in [0, 2pi).
SinusoidParams ar2_to_sin(double y1, double y2, double phi1, double phi2);

/// Closed-form evaluation limit for the combinatorial sums; beyond this the
/// recursion is used instead.
inline constexpr int kPhiClosedFormMaxT = 60;

/// Phi(t) = sum_k C(t-k, k) phi1^(t-2k) phi2^k, the weight sequence with
/// Phi(0) = 1, Phi(1) = phi1 and Phi(t) = phi1 Phi(t-1) + phi2 Phi(t-2).
/// Compensated summation for t <= kPhiClosedFormMaxT, recursion beyond.
double phi(int t, double phi1, double phi2);

/// y_t = Phi1(t) y2 + Phi2(t) y1 with Phi1(t) = Phi(t-2), Phi2(t) = phi2 Phi(t-3)
/// for t >= 3 and base cases y_1 = y1, y_2 = y2.
double ar2_closed_form(double y1, double y2, double phi1, double phi2, int t);

/// Exact binomial coefficient as long double (valid for n <= 66).
long double binomial(int n, int k);

}  // namespace bapc
