#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace msd {

inline constexpr double kPhysicalSlack = 1e-12;

// Point in the 2x2x2 cube; the state of the iterated dynamical system.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm2() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  bool physical() const { return norm2() <= 1.0 + kPhysicalSlack; }
  bool renderable() const {
    return std::abs(x) <= 1.0 && std::abs(y) <= 1.0 && std::abs(z) <= 1.0;
  }

  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
  BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
};

inline double distance(const BlochVector& a, const BlochVector& b) {
  return (a - b).norm();
}

enum class Family { T, H };

// rho_T(f) = f|T><T| + (1-f)I/2 and the H analogue, as Bloch vectors.
inline BlochVector family_state(Family family, double f) {
  if (f < 0.0 || f > 1.0) throw std::domain_error("family_state: f outside [0,1]");
  const double s3 = 1.0 / std::sqrt(3.0);
  const double s2 = 1.0 / std::sqrt(2.0);
  if (family == Family::T) return {f * s3, f * s3, f * s3};
  return {f * s2, 0.0, f * s2};
}

// One of the 24 proper rotations of the octahedral group, stored as a signed
// axis permutation with determinant +1.
struct CliffordRotation {
  // row-major 3x3, entries in {-1,0,+1}
  std::array<std::array<int, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

  BlochVector apply(const BlochVector& r) const {
    const double v[3] = {r.x, r.y, r.z};
    double out[3];
    for (int i = 0; i < 3; ++i)
      out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    return {out[0], out[1], out[2]};
  }

  CliffordRotation compose(const CliffordRotation& o) const {
    CliffordRotation c;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        int s = 0;
        for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
        c.m[i][j] = s;
      }
    return c;
  }

  CliffordRotation inverse() const {
    CliffordRotation c;  // transpose (orthogonal matrix)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c.m[i][j] = m[j][i];
    return c;
  }

  int det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }

  bool operator==(const CliffordRotation& o) const { return m == o.m; }
};

// H acts on Bloch vectors as (x,y,z) -> (z,-y,x).
inline CliffordRotation clifford_h() {
  CliffordRotation c;
  c.m = {{{0, 0, 1}, {0, -1, 0}, {1, 0, 0}}};
  return c;
}

// S is fixed so that the composite H*S is the cyclic shift (x,y,z) -> (z,x,y),
// which fixes the (1,1,1)/sqrt(3) axis.
inline CliffordRotation clifford_s() {
  CliffordRotation c;
  c.m = {{{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}}};
  return c;
}

inline CliffordRotation clifford_hs() { return clifford_h().compose(clifford_s()); }

// All 24 signed permutation matrices with determinant +1, generated by closure.
inline const std::vector<CliffordRotation>& clifford_group() {
  static const std::vector<CliffordRotation> group = [] {
    std::vector<CliffordRotation> g;
    g.push_back(CliffordRotation{});
    std::vector<CliffordRotation> gens = {clifford_h(), clifford_s()};
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t i = 0; i < g.size(); ++i)
        for (const auto& gen : gens) {
          CliffordRotation c = g[i].compose(gen);
          bool found = false;
          for (const auto& e : g)
            if (e == c) { found = true; break; }
          if (!found) {
            g.push_back(c);
            grew = true;
          }
        }
    }
    return g;
  }();
  return group;
}

// Average of r and H r: projection onto the (1,0,1) axis plane.
inline BlochVector h_twirl(const BlochVector& r) {
  const double a = 0.5 * (r.x + r.z);
  return {a, 0.0, a};
}

// Average of r, HS r and (HS)^-1 r: projection onto the (1,1,1) axis.
inline BlochVector t_twirl(const BlochVector& r) {
  const double a = (r.x + r.y + r.z) / 3.0;
  return {a, a, a};
}

inline bool polytope_contains(const BlochVector& r) {
  return std::abs(r.x) + std::abs(r.y) + std::abs(r.z) <= 1.0 + kPhysicalSlack;
}

// Signed unit axes of the magic families: the 8 cube diagonals for T, the 12
// edge midpoint directions for H.
inline const std::vector<BlochVector>& family_axes(Family family) {
  static const std::vector<BlochVector> t_axes = [] {
    std::vector<BlochVector> v;
    const double s = 1.0 / std::sqrt(3.0);
    for (int sx : {-1, 1})
      for (int sy : {-1, 1})
        for (int sz : {-1, 1}) v.push_back({sx * s, sy * s, sz * s});
    return v;
  }();
  static const std::vector<BlochVector> h_axes = [] {
    std::vector<BlochVector> v;
    const double s = 1.0 / std::sqrt(2.0);
    for (int sa : {-1, 1})
      for (int sb : {-1, 1}) {
        v.push_back({sa * s, sb * s, 0.0});
        v.push_back({sa * s, 0.0, sb * s});
        v.push_back({0.0, sa * s, sb * s});
      }
    return v;
  }();
  return family == Family::T ? t_axes : h_axes;
}

struct AxisFidelity {
  double f;
  BlochVector axis;
};

// Best projection of r onto the family's signed axes. Ties break toward the
// lexicographically smallest axis so the result is deterministic.
inline AxisFidelity axis_fidelity(const BlochVector& r, Family family) {
  const auto& axes = family_axes(family);
  bool have = false;
  AxisFidelity best{0.0, {}};
  auto lex_less = [](const BlochVector& a, const BlochVector& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
  };
  for (const auto& axis : axes) {
    double f = r.dot(axis);
    if (!have || f > best.f + 1e-15 ||
        (std::abs(f - best.f) <= 1e-15 && lex_less(axis, best.axis))) {
      best = {f, axis};
      have = true;
    }
  }
  return best;
}

struct ReferenceState {
  std::string label;
  BlochVector r;
};

using ReferenceStateSet = std::vector<ReferenceState>;

// The maximally mixed state plus the 8 Clifford rotations of |T>. Labels and
// vectors follow the published color table: each listed rgb swatch determines
// its Bloch vector via c = (v+1)/2.
inline const ReferenceStateSet& t_reference_states() {
  static const ReferenceStateSet refs = [] {
    const double s = 1.0 / std::sqrt(3.0);
    return ReferenceStateSet{
        {"I/2", {0, 0, 0}},
        {"|T>", {s, s, s}},
        {"S|T>", {-s, s, s}},
        {"Z|T>", {-s, -s, s}},
        {"S+|T>", {s, -s, s}},
        {"S+X|T>", {-s, -s, -s}},
        {"X|T>", {s, -s, -s}},
        {"SX|T>", {s, s, -s}},
        {"ZX|T>", {-s, s, -s}},
    };
  }();
  return refs;
}

// The six stabilizer states plus the 4 Z-plane rotations of |A> = T|+>.
inline const ReferenceStateSet& stabilizer_reference_states() {
  static const ReferenceStateSet refs = [] {
    const double s = 1.0 / std::sqrt(2.0);
    return ReferenceStateSet{
        {"|0>", {0, 0, 1}},
        {"|1>", {0, 0, -1}},
        {"|+>", {1, 0, 0}},
        {"|->", {-1, 0, 0}},
        {"|i>", {0, 1, 0}},
        {"|-i>", {0, -1, 0}},
        {"|A>", {s, s, 0}},
        {"S|A>", {-s, s, 0}},
        {"Z|A>", {-s, -s, 0}},
        {"S+|A>", {s, -s, 0}},
    };
  }();
  return refs;
}

// The 8 Clifford rotations of |H> outside the z = 0 plane (the 4 in-plane
// ones are the |A> rotations above).
inline const ReferenceStateSet& h_reference_states() {
  static const ReferenceStateSet refs = [] {
    const double s = 1.0 / std::sqrt(2.0);
    return ReferenceStateSet{
        {"|H>", {s, 0, s}},
        {"X|H>", {s, 0, -s}},
        {"Z|H>", {-s, 0, s}},
        {"Y|H>", {-s, 0, -s}},
        {"S|H>", {0, -s, s}},
        {"SX|H>", {0, -s, -s}},
        {"SZ|H>", {0, s, s}},
        {"SY|H>", {0, s, -s}},
    };
  }();
  return refs;
}

inline const ReferenceStateSet& combined_reference_states() {
  static const ReferenceStateSet refs = [] {
    ReferenceStateSet all = t_reference_states();
    const auto& st = stabilizer_reference_states();
    all.insert(all.end(), st.begin(), st.end());
    const auto& hs = h_reference_states();
    all.insert(all.end(), hs.begin(), hs.end());
    return all;
  }();
  return refs;
}

// Label of the unique reference within tol; "unconverged" if none. Two
// references within tol means the set is too dense for the tolerance.
inline std::string classify_state(const BlochVector& r, const ReferenceStateSet& refs,
                                  double tol = 1e-3) {
  if (tol <= 0.0) throw std::domain_error("classify_state: tol must be positive");
  const ReferenceState* hit = nullptr;
  for (const auto& ref : refs) {
    if (distance(r, ref.r) < tol) {
      if (hit)
        throw std::runtime_error("classify_state: ambiguous match between '" + hit->label +
                                 "' and '" + ref.label + "'");
      hit = &ref;
    }
  }
  return hit ? hit->label : "unconverged";
}

struct Rgb {
  unsigned char r, g, b;
  bool operator==(const Rgb&) const = default;
};

// Channel = round(255 * (c+1)/2) per coordinate. Caller must ensure each
// coordinate lies in [-1,1]; out-of-cube points are rendered black upstream.
inline Rgb color_of(const BlochVector& r) {
  auto chan = [](double c) {
    return static_cast<unsigned char>(std::floor(255.0 * (c + 1.0) / 2.0 + 0.5));
  };
  return {chan(r.x), chan(r.y), chan(r.z)};
}

}  // namespace msd
