#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "msd/catalogue.hpp"
#include "msd/config.hpp"
#include "msd/image_io.hpp"
#include "msd/protocols.hpp"
#include "msd/render.hpp"

using namespace msd;

namespace {

const Catalogue& cat() {
  static const Catalogue c = load_catalogue("data/codes.txt");
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_path(const char* name) {
  return std::string("/tmp/msd_test_") + name;
}

}  // namespace

TEST_CASE("slice plane pixel geometry", "[render]") {
  SlicePlane plane;
  plane.origin = {0, 0, 0};
  plane.u_axis = {1, 0, 0};
  plane.v_axis = {0, 0, 1};
  plane.half_extent = 1.0;
  plane.width = plane.height = 4;
  // top-left pixel center: u = -3/4, v = +3/4
  BlochVector tl = plane.pixel_center(0, 0);
  CHECK(tl.x == Catch::Approx(-0.75));
  CHECK(tl.z == Catch::Approx(0.75));
  BlochVector br = plane.pixel_center(3, 3);
  CHECK(br.x == Catch::Approx(0.75));
  CHECK(br.z == Catch::Approx(-0.75));
}

TEST_CASE("plane presets resolve and custom keys override", "[render]") {
  std::istringstream in("[plane]\npreset = diag_z\nextent = 0.5\nsize = 8\n");
  Config cfg = Config::parse(in);
  SlicePlane plane = plane_from_config(cfg);
  const double s2 = 1.0 / std::sqrt(2.0);
  CHECK(plane.u_axis.x == Catch::Approx(s2));
  CHECK(plane.u_axis.y == Catch::Approx(s2));
  CHECK(plane.v_axis.z == Catch::Approx(1.0));
  CHECK(plane.half_extent == 0.5);
  CHECK(plane.width == 8);

  std::istringstream in2(
      "[plane]\norigin = 0.1 0 0\nu = 0 1 0\nv = 0 0 1\nextent = 1\nsize = 4\n");
  SlicePlane custom = plane_from_config(Config::parse(in2));
  CHECK(custom.origin.x == Catch::Approx(0.1));
  CHECK(custom.u_axis.y == Catch::Approx(1.0));
}

TEST_CASE("fatou render is deterministic across worker counts", "[render]") {
  Protocol p = make_protocol("five_qubit", cat());
  SlicePlane plane;
  plane.origin = {0, 0, 0};
  plane.u_axis = {1, 0, 0};
  plane.v_axis = {0, 1, 0};
  plane.half_extent = 1.0;
  plane.width = plane.height = 24;
  ImageBuffer one = render_fatou(p, plane, 6, 1);
  ImageBuffer eight = render_fatou(p, plane, 6, 8);
  REQUIRE(one.bytes.size() == eight.bytes.size());
  CHECK(one.bytes == eight.bytes);
  // out-of-ball corner pixels are black
  CHECK(one.bytes[0] == 0);
  CHECK(one.bytes[1] == 0);
  CHECK(one.bytes[2] == 0);
}

TEST_CASE("julia render scales and stays deterministic", "[render]") {
  Protocol p = make_protocol("five_qubit", cat());
  SlicePlane plane;
  plane.origin = {0, 0, 0};
  plane.u_axis = {1, 0, 0};
  plane.v_axis = {0, 1, 0};
  plane.half_extent = 0.9;
  plane.width = plane.height = 12;
  JuliaRender a = render_julia(p, plane, 4, 1e-5, 0.0, 1);
  JuliaRender b = render_julia(p, plane, 4, 1e-5, 0.0, 8);
  CHECK(a.scale_cap == b.scale_cap);
  CHECK(a.image.bytes == b.image.bytes);
  CHECK(a.scale_cap > 0.0);
  // reusing the cap reproduces the image exactly
  JuliaRender c = render_julia(p, plane, 4, 1e-5, a.scale_cap, 3);
  CHECK(c.image.bytes == a.image.bytes);
}

TEST_CASE("speed render marks untwirled wins in green", "[render]") {
  Protocol p = make_protocol("five_qubit", cat());
  SlicePlane plane;
  plane.origin = {0, 0, 0};
  const double s2 = 1.0 / std::sqrt(2.0);
  plane.u_axis = {s2, s2, 0};
  plane.v_axis = {0, 0, 1};
  plane.half_extent = 1.0;
  plane.width = plane.height = 16;
  ImageBuffer one = render_speed_diff(p, plane, 12, 0.99, 5, 1);
  ImageBuffer four = render_speed_diff(p, plane, 12, 0.99, 5, 4);
  CHECK(one.bytes == four.bytes);
  bool any_green = false;
  for (std::size_t i = 0; i + 2 < one.bytes.size(); i += 3)
    if (one.bytes[i + 1] > one.bytes[i] && one.bytes[i + 1] > one.bytes[i + 2]) any_green = true;
  CHECK(any_green);
}

TEST_CASE("ppm bytes are exact", "[render]") {
  ImageBuffer img(2, 2);
  img.set(0, 0, {1, 2, 3});
  img.set(1, 0, {4, 5, 6});
  img.set(0, 1, {7, 8, 9});
  img.set(1, 1, {250, 251, 252});
  std::string path = tmp_path("exact.ppm");
  write_ppm(img, path);
  std::string data = slurp(path);
  std::string expect = "P6\n2 2\n255\n";
  expect += std::string("\x01\x02\x03\x04\x05\x06\x07\x08\x09", 9);
  expect += std::string("\xfa\xfb\xfc", 3);
  CHECK(data == expect);
  std::remove(path.c_str());
}

TEST_CASE("png writer emits a decodable signature and chunks", "[render]") {
  ImageBuffer img(3, 2);
  img.set(1, 0, {200, 100, 50});
  std::string path = tmp_path("small.png");
  write_png(img, path);
  std::string data = slurp(path);
  const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  REQUIRE(data.size() > 8);
  CHECK(std::equal(sig, sig + 8, reinterpret_cast<const unsigned char*>(data.data())));
  CHECK(data.find("IHDR") != std::string::npos);
  CHECK(data.find("IDAT") != std::string::npos);
  CHECK(data.find("IEND") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("write_image dispatches on format", "[render]") {
  ImageBuffer img(1, 1);
  std::string p1 = tmp_path("fmt.ppm"), p2 = tmp_path("fmt.png");
  write_image(img, p1, "ppm");
  write_image(img, p2, "png");
  CHECK(slurp(p1).substr(0, 2) == "P6");
  CHECK_THROWS(write_image(img, tmp_path("fmt.x"), "gif"));
  std::remove(p1.c_str());
  std::remove(p2.c_str());
  CHECK_THROWS(write_ppm(img, "/nonexistent_dir/x.ppm"));
}
