#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "msd/bloch.hpp"
#include "msd/protocols.hpp"

namespace msd {

struct TrajectoryStep {
  BlochVector r;
  double p_success;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;  // steps[0] is the input, p_success = 1
  std::string label;
  int iterations = 0;

  // n^m ideal-postselection resource count
  double resources(int n_inputs) const { return std::pow(n_inputs, iterations); }
};

inline Trajectory iterate(const Protocol& p, const BlochVector& r0, int m_max,
                          double conv_tol = 1e-9,
                          const ReferenceStateSet& refs = combined_reference_states(),
                          double classify_tol = 1e-3) {
  Trajectory traj;
  traj.steps.push_back({r0, 1.0});
  BlochVector r = r0;
  for (int m = 0; m < m_max; ++m) {
    DistillStep step;
    try {
      step = p.apply(r);
    } catch (const ZeroProbabilityError&) {
      traj.label = "bad";
      return traj;
    }
    traj.steps.push_back({step.r, step.p_success});
    ++traj.iterations;
    if (distance(step.r, r) < conv_tol) {
      r = step.r;
      break;
    }
    r = step.r;
  }
  traj.label = classify_state(r, refs, classify_tol);
  return traj;
}

enum class JacobianMethod { Direct, Chain };

struct JacobianReport {
  Eigen::Matrix3d jacobian = Eigen::Matrix3d::Zero();
  double spectral_norm = 0.0;
  JacobianMethod method = JacobianMethod::Direct;
  bool bad = false;  // a stencil point hit zero probability
};

namespace detail {

inline std::optional<BlochVector> map_m(const Protocol& p, BlochVector r, int m) {
  try {
    for (int i = 0; i < m; ++i) r = p.apply(r).r;
    return r;
  } catch (const ZeroProbabilityError&) {
    return std::nullopt;
  }
}

inline std::optional<Eigen::Matrix3d> central_jacobian(const Protocol& p, const BlochVector& r,
                                                       int m, double eps) {
  Eigen::Matrix3d j;
  const BlochVector unit[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int axis = 0; axis < 3; ++axis) {
    auto plus = map_m(p, r + unit[axis] * eps, m);
    auto minus = map_m(p, r - unit[axis] * eps, m);
    if (!plus || !minus) return std::nullopt;
    BlochVector d = (*plus - *minus) * (0.5 / eps);
    j(0, axis) = d.x;
    j(1, axis) = d.y;
    j(2, axis) = d.z;
  }
  return j;
}

}  // namespace detail

// Finite-difference Jacobian of the m-fold map; spectral norm = largest
// singular value. Chain mode multiplies per-step Jacobians along the
// trajectory. Any zero-probability stencil point poisons the report.
inline JacobianReport jacobian(const Protocol& p, const BlochVector& r, int m,
                               double eps = 1e-5,
                               JacobianMethod method = JacobianMethod::Direct) {
  JacobianReport rep;
  rep.method = method;
  std::optional<Eigen::Matrix3d> j;
  if (method == JacobianMethod::Direct) {
    j = detail::central_jacobian(p, r, m, eps);
  } else {
    Eigen::Matrix3d acc = Eigen::Matrix3d::Identity();
    BlochVector cur = r;
    bool ok = true;
    for (int step = 0; step < m; ++step) {
      auto jstep = detail::central_jacobian(p, cur, 1, eps);
      auto next = detail::map_m(p, cur, 1);
      if (!jstep || !next) {
        ok = false;
        break;
      }
      acc = *jstep * acc;
      cur = *next;
    }
    if (ok) j = acc;
  }
  if (!j) {
    rep.bad = true;
    return rep;
  }
  rep.jacobian = *j;
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(*j);
  rep.spectral_norm = svd.singularValues()(0);
  return rep;
}

struct CurveSample {
  double f;
  double f_prime;   // family axis fidelity of the m-fold image
  double df_prime;  // central difference on the sample grid
  bool bad = false;
};

inline std::vector<CurveSample> curve_sweep(const Protocol& p, Family family, double f_lo,
                                            double f_hi, int samples, int m) {
  if (samples < 2) throw std::domain_error("curve_sweep: need at least 2 samples");
  std::vector<CurveSample> out(samples);
  for (int i = 0; i < samples; ++i) {
    double f = f_lo + (f_hi - f_lo) * i / (samples - 1);
    out[i].f = f;
    auto img = detail::map_m(p, family_state(family, f), m);
    if (!img) {
      out[i].bad = true;
      out[i].f_prime = std::numeric_limits<double>::quiet_NaN();
    } else {
      out[i].f_prime = axis_fidelity(*img, family).f;
    }
  }
  for (int i = 0; i < samples; ++i) {
    int lo = std::max(0, i - 1), hi = std::min(samples - 1, i + 1);
    if (out[lo].bad || out[hi].bad || lo == hi) {
      out[i].df_prime = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    out[i].df_prime = (out[hi].f_prime - out[lo].f_prime) / (out[hi].f - out[lo].f);
  }
  return out;
}

struct BracketError : std::runtime_error {
  explicit BracketError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bisection on the family axis between a diverging and a converging probe.
inline double threshold_bisect(const Protocol& p, Family family, double f_lo, double f_hi,
                               int m_probe = 30, int iters = 40,
                               const ReferenceStateSet& refs = combined_reference_states()) {
  auto converges_to_magic = [&](double f) {
    Trajectory t = iterate(p, family_state(family, f), m_probe, 1e-9, refs, 1e-2);
    return t.label != "I/2" && t.label != "bad" && t.label != "unconverged" &&
           t.label != "|0>" && t.label != "|1>" && t.label != "|+>" && t.label != "|->" &&
           t.label != "|i>" && t.label != "|-i>";
  };
  if (converges_to_magic(f_lo))
    throw BracketError("threshold_bisect: lower probe already distills");
  if (!converges_to_magic(f_hi))
    throw BracketError("threshold_bisect: upper probe does not distill");
  for (int i = 0; i < iters; ++i) {
    double mid = 0.5 * (f_lo + f_hi);
    if (converges_to_magic(mid)) f_hi = mid;
    else f_lo = mid;
  }
  return 0.5 * (f_lo + f_hi);
}

inline constexpr int kSpeedSentinel = std::numeric_limits<int>::max();

struct SpeedPair {
  int m_twirl = kSpeedSentinel;
  int m_no_twirl = kSpeedSentinel;
};

// Minimum iteration counts to reach family axis fidelity > f_target, with
// the twirl applied every step vs only before the final fidelity read.
inline SpeedPair speed_maps(const Protocol& p, const BlochVector& r0, int m_max,
                            double f_target = 0.99) {
  SpeedPair out;
  Family fam = p.twirl_family;
  auto twirl = [&](const BlochVector& r) {
    AxisFidelity af = axis_fidelity(r, fam);
    return af.axis * af.f;
  };
  // The twirled branch twirls the inputs as well: every copy consumed by the
  // first round is already axis-projected.
  BlochVector r = twirl(r0);
  for (int m = 1; m <= m_max; ++m) {
    try {
      r = twirl(p.map(r).r);
    } catch (const ZeroProbabilityError&) {
      break;
    }
    if (axis_fidelity(r, fam).f > f_target) {
      out.m_twirl = m;
      break;
    }
  }
  r = r0;
  for (int m = 1; m <= m_max; ++m) {
    try {
      r = p.map(r).r;
    } catch (const ZeroProbabilityError&) {
      break;
    }
    if (axis_fidelity(r, fam).f > f_target) {
      out.m_no_twirl = m;
      break;
    }
  }
  return out;
}

}  // namespace msd
