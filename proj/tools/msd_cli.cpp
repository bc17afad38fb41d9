// Command-line front end: catalogue validation, figure renders, curve and
// threshold exports, single-trajectory inspection.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "msd/catalogue.hpp"
#include "msd/config.hpp"
#include "msd/dynamics.hpp"
#include "msd/image_io.hpp"
#include "msd/protocols.hpp"
#include "msd/render.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitDegenerate = 4;

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

msd::Config load_config(const std::string& path) {
  if (!std::filesystem::exists(path)) throw CliError(kExitIo, "no such config file: " + path);
  try {
    return msd::Config::load(path);
  } catch (const std::exception& e) {
    throw CliError(kExitConfig, e.what());
  }
}

msd::Catalogue load_codes(const msd::Config& cfg) {
  std::string path = cfg.get_or("run.codes", "data/codes.txt");
  if (!std::filesystem::exists(path)) throw CliError(kExitIo, "no such catalogue file: " + path);
  try {
    return msd::load_catalogue(path);
  } catch (const std::exception& e) {
    throw CliError(kExitConfig, e.what());
  }
}

msd::Family family_of(const std::string& s) {
  if (s == "T" || s == "t") return msd::Family::T;
  if (s == "H" || s == "h") return msd::Family::H;
  throw CliError(kExitConfig, "family must be T or H, got '" + s + "'");
}

msd::Protocol protocol_from(const msd::Config& cfg, const msd::Catalogue& cat) {
  std::string name = cfg.get_or("run.protocol", "");
  if (name.empty()) throw CliError(kExitConfig, "missing run.protocol");
  msd::Protocol p;
  try {
    p = msd::make_protocol(name, cat);
  } catch (const std::exception& e) {
    throw CliError(kExitConfig, e.what());
  }
  std::string twirl = cfg.get_or("run.twirl", "none");
  msd::TwirlMode mode;
  if (twirl == "none") mode = msd::TwirlMode::None;
  else if (twirl == "every_step") mode = msd::TwirlMode::EveryStep;
  else if (twirl == "final_only") mode = msd::TwirlMode::FinalOnly;
  else throw CliError(kExitConfig, "run.twirl must be none, every_step or final_only");
  msd::Family fam = cfg.has("run.family") ? family_of(cfg.get("run.family")) : p.twirl_family;
  return msd::with_twirl(p, mode, fam);
}

msd::SlicePlane plane_from(const msd::Config& cfg) {
  try {
    msd::SlicePlane plane = msd::plane_from_config(cfg);
    plane.validate();
    return plane;
  } catch (const std::exception& e) {
    throw CliError(kExitConfig, e.what());
  }
}

// The sidecar echoes the fully resolved configuration and is itself a valid
// config file reproducing the run.
void write_sidecar(const msd::Config& resolved, const std::string& image_path) {
  std::string path = image_path + ".meta.txt";
  std::ofstream out(path);
  if (!out) throw CliError(kExitIo, "cannot write sidecar: " + path);
  out << resolved.serialize();
  if (!out) throw CliError(kExitIo, "sidecar write failed: " + path);
}

void echo_plane(msd::Config& cfg, const msd::SlicePlane& plane) {
  auto vec = [](const msd::BlochVector& r) {
    std::ostringstream ss;
    ss.precision(17);
    ss << r.x << " " << r.y << " " << r.z;
    return ss.str();
  };
  cfg.set("plane.origin", vec(plane.origin));
  cfg.set("plane.u", vec(plane.u_axis));
  cfg.set("plane.v", vec(plane.v_axis));
  std::ostringstream ext;
  ext.precision(17);
  ext << plane.half_extent;
  cfg.set("plane.extent", ext.str());
  cfg.set("plane.width", std::to_string(plane.width));
  cfg.set("plane.height", std::to_string(plane.height));
}

int cmd_validate(const msd::Config& cfg) {
  auto cat = load_codes(cfg);
  bool all_ok = true;
  for (const auto& e : cat.entries) {
    if (e.code) {
      auto rep = msd::validate_code(*e.code);
      std::printf("code %-16s %s\n", e.name.c_str(), rep.ok ? "ok" : "FAIL");
      for (const auto& f : rep.failures) std::printf("  %s\n", f.c_str());
      all_ok = all_ok && rep.ok;
    }
    if (e.matrix) {
      auto rep = msd::validate_triorthogonal(*e.matrix);
      std::printf("matrix %-14s %s\n", e.name.c_str(), rep.ok ? "ok" : "FAIL");
      for (const auto& f : rep.failures) std::printf("  %s\n", f.c_str());
      all_ok = all_ok && rep.ok;
    }
  }
  return all_ok ? kExitOk : kExitConfig;
}

bool frame_all_bad(const msd::ImageBuffer& img) {
  for (unsigned char b : img.bytes)
    if (b != 0) return false;
  return true;
}

int cmd_render(const std::string& kind, msd::Config cfg, const std::string& out_path,
               int workers) {
  auto cat = load_codes(cfg);
  msd::Protocol proto = protocol_from(cfg, cat);
  msd::SlicePlane plane = plane_from(cfg);
  int m = cfg.get_int_or("render.m", 12);
  std::string format = cfg.get_or("run.format", "ppm");

  msd::ImageBuffer img;
  if (kind == "fatou") {
    img = msd::render_fatou(proto, plane, m, workers);
    if (frame_all_bad(img)) {
      std::fprintf(stderr, "render: every pixel failed\n");
      return kExitDegenerate;
    }
  } else if (kind == "julia") {
    double eps = cfg.get_double_or("render.eps", 1e-5);
    double cap = cfg.get_double_or("render.scale_cap", 0.0);
    msd::JuliaRender jr;
    try {
      jr = msd::render_julia(proto, plane, m, eps, cap, workers);
    } catch (const std::runtime_error& e) {
      std::fprintf(stderr, "render: %s\n", e.what());
      return kExitDegenerate;
    }
    img = std::move(jr.image);
    std::ostringstream capss;
    capss.precision(17);
    capss << jr.scale_cap;
    cfg.set("render.eps", [&] {
      std::ostringstream ss;
      ss.precision(17);
      ss << eps;
      return ss.str();
    }());
    cfg.set("render.scale_cap", capss.str());
  } else if (kind == "speed") {
    int m_max = cfg.get_int_or("render.m_max", 15);
    double f_target = cfg.get_double_or("render.f_target", 0.99);
    int delta_ref = cfg.get_int_or("render.delta_ref", 5);
    img = msd::render_speed_diff(proto, plane, m_max, f_target, delta_ref, workers);
  } else {
    throw CliError(kExitConfig, "render kind must be fatou, julia or speed");
  }

  cfg.set("run.kind", kind);
  cfg.set("render.m", std::to_string(m));
  cfg.set("run.format", format);
  echo_plane(cfg, plane);
  try {
    msd::write_image(img, out_path, format);
  } catch (const std::exception& e) {
    throw CliError(kExitIo, e.what());
  }
  write_sidecar(cfg, out_path);
  std::printf("wrote %s\n", out_path.c_str());
  return kExitOk;
}

int cmd_curve(const msd::Config& cfg, const std::string& out_path) {
  auto cat = load_codes(cfg);
  msd::Protocol proto = protocol_from(cfg, cat);
  msd::Family fam =
      cfg.has("curve.family") ? family_of(cfg.get("curve.family")) : proto.twirl_family;
  double f_lo = cfg.get_double_or("curve.f_lo", 0.0);
  double f_hi = cfg.get_double_or("curve.f_hi", 1.0);
  int samples = cfg.get_int_or("curve.samples", 201);
  int m = cfg.get_int_or("curve.m", 1);
  std::vector<msd::CurveSample> curve;
  try {
    curve = msd::curve_sweep(proto, fam, f_lo, f_hi, samples, m);
  } catch (const std::exception& e) {
    throw CliError(kExitConfig, e.what());
  }
  std::ofstream out(out_path);
  if (!out) throw CliError(kExitIo, "cannot open output: " + out_path);
  out << "f,fprime,dfprime\n";
  out.precision(17);
  for (const auto& s : curve) out << s.f << "," << s.f_prime << "," << s.df_prime << "\n";
  if (!out) throw CliError(kExitIo, "write failed: " + out_path);
  std::printf("wrote %s\n", out_path.c_str());
  return kExitOk;
}

int cmd_threshold(const msd::Config& cfg) {
  auto cat = load_codes(cfg);
  msd::Protocol proto = protocol_from(cfg, cat);
  msd::Family fam =
      cfg.has("threshold.family") ? family_of(cfg.get("threshold.family")) : proto.twirl_family;
  double f_lo = cfg.get_double_or("threshold.f_lo", 0.5);
  double f_hi = cfg.get_double_or("threshold.f_hi", 0.99);
  int m_probe = cfg.get_int_or("threshold.m_probe", 30);
  int iters = cfg.get_int_or("threshold.iters", 40);
  try {
    double f_star = msd::threshold_bisect(proto, fam, f_lo, f_hi, m_probe, iters);
    std::printf("threshold %.12f\n", f_star);
  } catch (const msd::BracketError& e) {
    std::fprintf(stderr, "threshold: %s\n", e.what());
    return kExitDegenerate;
  }
  return kExitOk;
}

int cmd_point(const msd::Config& cfg, const std::string& r_arg) {
  auto cat = load_codes(cfg);
  msd::Protocol proto = protocol_from(cfg, cat);
  msd::BlochVector r;
  std::string spec = r_arg.empty() ? cfg.get_or("point.r", "") : r_arg;
  if (spec.empty()) throw CliError(kExitConfig, "missing point.r (or --r \"x y z\")");
  std::istringstream ss(spec);
  if (!(ss >> r.x >> r.y >> r.z)) throw CliError(kExitConfig, "point.r needs three numbers");
  if (r.norm2() > 1.0 + 1e-12) throw CliError(kExitConfig, "point outside the unit ball");
  int m_max = cfg.get_int_or("point.m_max", 15);
  msd::Trajectory traj = msd::iterate(proto, r, m_max);
  for (std::size_t i = 0; i < traj.steps.size(); ++i) {
    const auto& s = traj.steps[i];
    std::printf("step %2zu  r = (%+.12f, %+.12f, %+.12f)  p = %.6e  resources = %.6e\n", i,
                s.r.x, s.r.y, s.r.z, s.p_success,
                std::pow(proto.n_inputs, static_cast<double>(i)));
  }
  std::printf("label %s\n", traj.label.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magic state distillation maps on the Bloch ball"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path, r_arg, render_kind;
  int workers = 1;
  app.add_option("--config", config_path, "config file path")->expected(1);
  app.add_option("--out", out_path, "output file path");
  app.add_option("--workers", workers, "worker threads (render speed only)");

  auto* validate = app.add_subcommand("validate", "validate the code catalogue");
  auto* render = app.add_subcommand("render", "render a Bloch-slice image");
  render->add_option("kind", render_kind, "fatou, julia or speed")->required();
  auto* curve = app.add_subcommand("curve", "export a family-axis curve as CSV");
  auto* threshold = app.add_subcommand("threshold", "bisect the family-axis threshold");
  auto* point = app.add_subcommand("point", "print one trajectory");
  point->add_option("--r", r_arg, "input Bloch vector \"x y z\"");

  // convenience overrides applied on top of the config file
  std::string o_protocol, o_plane, o_family, o_format;
  int o_m = -1, o_size = -1;
  double o_extent = 0;
  app.add_option("--protocol", o_protocol, "protocol name");
  app.add_option("--plane", o_plane, "plane preset (z0, xz, diag_z, hz)");
  app.add_option("--family", o_family, "family axis (T or H)");
  app.add_option("--format", o_format, "image format (ppm or png)");
  app.add_option("--m", o_m, "iteration count");
  app.add_option("--size", o_size, "square image size in pixels");
  app.add_option("--extent", o_extent, "plane half-extent");

  CLI11_PARSE(app, argc, argv);

  try {
    msd::Config cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!o_protocol.empty()) cfg.set("run.protocol", o_protocol);
    if (!o_plane.empty()) cfg.set("plane.preset", o_plane);
    if (!o_family.empty()) cfg.set("run.family", o_family);
    if (!o_format.empty()) cfg.set("run.format", o_format);
    if (o_m >= 0) cfg.set("render.m", std::to_string(o_m));
    if (o_m >= 0) cfg.set("curve.m", std::to_string(o_m));
    if (o_size > 0) cfg.set("plane.size", std::to_string(o_size));
    if (o_extent > 0) {
      std::ostringstream ss;
      ss.precision(17);
      ss << o_extent;
      cfg.set("plane.extent", ss.str());
    }

    if (validate->parsed()) return cmd_validate(cfg);
    if (render->parsed()) {
      if (out_path.empty()) throw CliError(kExitConfig, "render needs --out");
      return cmd_render(render_kind, cfg, out_path, workers);
    }
    if (curve->parsed()) {
      if (out_path.empty()) throw CliError(kExitConfig, "curve needs --out");
      return cmd_curve(cfg, out_path);
    }
    if (threshold->parsed()) return cmd_threshold(cfg);
    if (point->parsed()) return cmd_point(cfg, r_arg);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
