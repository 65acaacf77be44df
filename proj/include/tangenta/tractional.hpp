#ifndef TANGENTA_TRACTIONAL_HPP
#define TANGENTA_TRACTIONAL_HPP

#include <string>
#include <vector>

#include "tangenta/curve.hpp"
#include "tangenta/quadrature.hpp"

namespace tangenta {

// Kinematic parameters of the string-and-cam integrator. U is the total
// string length; sign fixes the pull direction of dz/dx = sign * CR / TR
// (default -1, the tractrix-like pull toward the axis).
struct DeviceConfig {
  double U = 0;
  double h = 1e-4;
  int sign = -1;
  double x0 = 0;  // TR at the start; must be > 0 (slope singular at TR = 0)
  double z0 = 0;
  double x1 = 0;
};

// Cam profile: cylinder height ET as a curve over the device abscissa
// x = TR, with the shared string length U.
struct CamCurve {
  PlaneCurve et;
  double U = 0;
};

struct DeviceState {
  double x = 0;   // TR
  double z = 0;   // pen ordinate
  double et = 0;  // cylinder height
  double tc = 0;  // in-plane string segment, U - ET
  double cr = 0;  // sqrt(TC^2 - x^2)
  double slope = 0;
};

struct DeviceTrace {
  std::vector<DeviceState> states;
  bool truncated = false;      // stopped short of x1 at a singular end
  std::string stop_reason;

  std::string csv() const;  // header "x,z,ET,TC,CR,slope"
};

// ET(x) = U - x * sqrt(1 + w(x)^2); checks feasibility (ET >= 0 and
// U - ET >= x) over the slope law's domain.
CamCurve cam_from_slope_law(const PlaneCurve& w, double U);

// Constant cam ET = c over [lo, hi]; the implied trace is the tractrix
// with parameter a = U - c.
CamCurve constant_cam(double U, double et, double lo, double hi);

// Fixed-step RK4 on dz/dx = sign * sqrt((U - ET)^2 - x^2) / x, one
// step-halving Richardson check per 100 steps (throws Error(accuracy)
// past 1e-6 * scale). Stops 10 h short of a feasibility boundary and
// marks the trace truncated.
DeviceTrace simulate_device(const CamCurve& cam, const DeviceConfig& cfg);

// z(x) = a ln((a + sqrt(a^2 - x^2)) / x) - sqrt(a^2 - x^2), with z(a) = 0.
double tractrix_closed_form(double a, double x);

// Convenience: constant cam with U = 2a, start ordinate from the closed
// form, sign -1.
DeviceTrace simulate_tractrix(double a, double from, double to, double h);

// Builds the cam for w = f / a_const, simulates with sign +1, and
// compares the trace against the quadratrix of f node-wise.
TheoremReport verify_device_quadrature(const PlaneCurve& f, double a_const, double U, double lo,
                                       double hi, double tol, double h = 1e-3);

}  // namespace tangenta

#endif
