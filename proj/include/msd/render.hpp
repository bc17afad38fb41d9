#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "msd/bloch.hpp"
#include "msd/dynamics.hpp"
#include "msd/protocols.hpp"

namespace msd {

// 2D affine slice of Bloch space; pixel (i,j) maps to the pixel center, with
// the top row on the +v edge.
struct SlicePlane {
  BlochVector origin{0, 0, 0};
  BlochVector u_axis{1, 0, 0};
  BlochVector v_axis{0, 1, 0};
  double half_extent = 1.0;
  int width = 0;
  int height = 0;

  void validate() const {
    if (width <= 0 || height <= 0) throw std::domain_error("SlicePlane: empty pixel grid");
    if (std::abs(u_axis.norm() - 1.0) > 1e-12 || std::abs(v_axis.norm() - 1.0) > 1e-12)
      throw std::domain_error("SlicePlane: axes must be unit length");
    if (std::abs(u_axis.dot(v_axis)) > 1e-12)
      throw std::domain_error("SlicePlane: axes must be orthogonal");
  }

  BlochVector pixel_center(int i, int j) const {
    double s = ((2.0 * i + 1.0) / width - 1.0) * half_extent;
    double t = (1.0 - (2.0 * j + 1.0) / height) * half_extent;  // top row = +v
    return origin + u_axis * s + v_axis * t;
  }
};

struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> bytes;  // 3 per pixel, row-major, top row first

  ImageBuffer() = default;
  ImageBuffer(int w, int h) : width(w), height(h), bytes(3 * w * h, 0) {}

  void set(int i, int j, Rgb c) {
    std::size_t at = 3 * (static_cast<std::size_t>(j) * width + i);
    bytes[at] = c.r;
    bytes[at + 1] = c.g;
    bytes[at + 2] = c.b;
  }
};

namespace detail {

// Deterministic parallel sweep: pixels are pure functions of their center
// coordinate, so the worker count never changes the output bytes.
template <typename PixelFn>
void parallel_rows(int width, int height, int workers, PixelFn fn) {
  workers = std::max(1, workers);
  std::atomic<int> next_row{0};
  auto work = [&] {
    for (;;) {
      int j = next_row.fetch_add(1);
      if (j >= height) return;
      for (int i = 0; i < width; ++i) fn(i, j);
    }
  };
  if (workers == 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
}

}  // namespace detail

inline constexpr Rgb kBadInputColor{0, 0, 0};

// Convergence color map: iterate m steps and color the final state; points
// outside the unit ball and zero-probability failures render black.
inline ImageBuffer render_fatou(const Protocol& p, const SlicePlane& plane, int m,
                                int workers = 1) {
  plane.validate();
  if (m < 1) throw std::domain_error("render_fatou: m must be >= 1");
  ImageBuffer img(plane.width, plane.height);
  detail::parallel_rows(plane.width, plane.height, workers, [&](int i, int j) {
    BlochVector r = plane.pixel_center(i, j);
    if (r.norm2() > 1.0) {
      img.set(i, j, kBadInputColor);
      return;
    }
    auto out = detail::map_m(p, r, m);
    img.set(i, j, out ? color_of(*out) : kBadInputColor);
  });
  return img;
}

struct JuliaRender {
  ImageBuffer image;
  double scale_cap = 0.0;  // resolved cap actually used
};

// Spectral-norm sketch of the Julia set: dark = high ||grad D^m||. When
// scale_cap <= 0 the cap resolves to the 99th percentile of the frame's
// finite norms.
inline JuliaRender render_julia(const Protocol& p, const SlicePlane& plane, int m,
                                double eps = 1e-5, double scale_cap = 0.0, int workers = 1) {
  plane.validate();
  if (m < 1 || eps <= 0.0) throw std::domain_error("render_julia: bad m or eps");
  const double bad = -1.0;
  std::vector<double> norms(static_cast<std::size_t>(plane.width) * plane.height, bad);
  detail::parallel_rows(plane.width, plane.height, workers, [&](int i, int j) {
    BlochVector r = plane.pixel_center(i, j);
    if (r.norm2() > 1.0) return;
    JacobianReport rep = jacobian(p, r, m, eps, JacobianMethod::Direct);
    if (!rep.bad) norms[static_cast<std::size_t>(j) * plane.width + i] = rep.spectral_norm;
  });
  if (scale_cap <= 0.0) {
    std::vector<double> finite;
    finite.reserve(norms.size());
    for (double v : norms)
      if (v >= 0.0) finite.push_back(v);
    if (finite.empty()) throw std::runtime_error("render_julia: entire frame is bad");
    std::size_t at = static_cast<std::size_t>(0.99 * (finite.size() - 1));
    std::nth_element(finite.begin(), finite.begin() + at, finite.end());
    scale_cap = std::max(finite[at], 1e-12);
  }
  JuliaRender out;
  out.scale_cap = scale_cap;
  out.image = ImageBuffer(plane.width, plane.height);
  for (int j = 0; j < plane.height; ++j)
    for (int i = 0; i < plane.width; ++i) {
      double v = norms[static_cast<std::size_t>(j) * plane.width + i];
      if (v < 0.0) {
        out.image.set(i, j, kBadInputColor);
        continue;
      }
      double g = 1.0 - std::min(1.0, std::log1p(v) / std::log1p(scale_cap));
      auto byte = static_cast<unsigned char>(std::floor(255.0 * g + 0.5));
      out.image.set(i, j, {byte, byte, byte});
    }
  return out;
}

// Twirl speed comparison: green where twirling every step is slower, red
// where it is faster, white where equal, black where neither reaches the
// target.
inline ImageBuffer render_speed_diff(const Protocol& p, const SlicePlane& plane, int m_max,
                                     double f_target = 0.99, int delta_ref = 5,
                                     int workers = 1) {
  plane.validate();
  if (m_max < 1) throw std::domain_error("render_speed_diff: m_max must be >= 1");
  ImageBuffer img(plane.width, plane.height);
  detail::parallel_rows(plane.width, plane.height, workers, [&](int i, int j) {
    BlochVector r = plane.pixel_center(i, j);
    if (r.norm2() > 1.0) {
      img.set(i, j, kBadInputColor);
      return;
    }
    SpeedPair sp = speed_maps(p, r, m_max, f_target);
    bool t_inf = sp.m_twirl == kSpeedSentinel, n_inf = sp.m_no_twirl == kSpeedSentinel;
    if (t_inf && n_inf) {
      img.set(i, j, kBadInputColor);
    } else if (!t_inf && !n_inf && sp.m_twirl == sp.m_no_twirl) {
      img.set(i, j, {255, 255, 255});
    } else {
      int delta = (t_inf || n_inf) ? delta_ref : std::abs(sp.m_twirl - sp.m_no_twirl);
      double scale = std::min(1.0, static_cast<double>(delta) / delta_ref);
      auto byte = static_cast<unsigned char>(std::floor(255.0 * scale + 0.5));
      bool twirl_slower = n_inf ? false : (t_inf ? true : sp.m_twirl > sp.m_no_twirl);
      img.set(i, j, twirl_slower ? Rgb{0, byte, 0} : Rgb{byte, 0, 0});
    }
  });
  return img;
}

}  // namespace msd
