#include "gvl/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "gvl/errors.hpp"
#include "gvl/png_io.hpp"
#include "gvl/resample.hpp"
#include "gvl/rng.hpp"
#include "gvl/trainer.hpp"

namespace gvl {

namespace {

using Color = std::array<Real, 3>;

// Colours are snapped to 8-bit levels so the written PNG equals the render.
Color random_color(Rng& rng) {
  Color c;
  for (auto& v : c) v = static_cast<Real>(rng.uniform_int(0, 255) / 255.0);
  return c;
}

Real luma(const Color& c) { return kLumaR * c[0] + kLumaG * c[1] + kLumaB * c[2]; }

void put(Image& img, int y, int x, const Color& c) {
  if (y < 0 || x < 0 || y >= img.height() || x >= img.width()) return;
  for (int ch = 0; ch < 3; ++ch) img.at(ch, y, x) = c[ch];
}

void fill_rect(Image& img, int y0, int x0, int y1, int x1, const Color& c) {
  for (int y = std::max(0, y0); y < std::min(img.height(), y1); ++y)
    for (int x = std::max(0, x0); x < std::min(img.width(), x1); ++x) put(img, y, x, c);
}

void fill_ellipse(Image& img, double cy, double cx, double ry, double rx, const Color& c) {
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const double dy = (y + 0.5 - cy) / ry;
      const double dx = (x + 0.5 - cx) / rx;
      if (dy * dy + dx * dx <= 1.0) put(img, y, x, c);
    }
}

// Pixels whose centre lies within half_width of the segment.
void draw_segment(Image& img, double y0, double x0, double y1, double x1, double half_width,
                  const Color& c) {
  const double vy = y1 - y0, vx = x1 - x0;
  const double len2 = std::max(vy * vy + vx * vx, 1e-12);
  const int ylo = static_cast<int>(std::floor(std::min(y0, y1) - half_width - 1));
  const int yhi = static_cast<int>(std::ceil(std::max(y0, y1) + half_width + 1));
  const int xlo = static_cast<int>(std::floor(std::min(x0, x1) - half_width - 1));
  const int xhi = static_cast<int>(std::ceil(std::max(x0, x1) + half_width + 1));
  for (int y = ylo; y <= yhi; ++y)
    for (int x = xlo; x <= xhi; ++x) {
      const double py = y + 0.5 - y0, px = x + 0.5 - x0;
      const double t = std::clamp((py * vy + px * vx) / len2, 0.0, 1.0);
      const double dy = py - t * vy, dx = px - t * vx;
      if (dy * dy + dx * dx <= half_width * half_width) put(img, y, x, c);
    }
}

// A few connected short strokes, like a handwritten glyph.
void draw_glyph(Image& img, Rng& rng, const Color& c) {
  const double size = rng.uniform(8, 20);
  const double oy = rng.uniform(0, img.height() - size);
  const double ox = rng.uniform(0, img.width() - size);
  const double hw = rng.uniform(0.6, 1.6);
  double y = oy + rng.uniform(0, size), x = ox + rng.uniform(0, size);
  const int strokes = rng.uniform_int(2, 5);
  for (int s = 0; s < strokes; ++s) {
    const double ny = oy + rng.uniform(0, size);
    const double nx = ox + rng.uniform(0, size);
    draw_segment(img, y, x, ny, nx, hw, c);
    y = ny;
    x = nx;
  }
}

}  // namespace

Image render_synthetic(const SyntheticSetSpec& spec, int index) {
  if (spec.height < 8 || spec.width < 8) {
    throw ValidationError("synthetic images must be at least 8x8");
  }
  Rng rng(derive_seed(spec.seed, 0x5f3700ull + static_cast<std::uint64_t>(index)));
  const int h = spec.height, w = spec.width;
  Image img(3, h, w);
  fill_rect(img, 0, 0, h, w, random_color(rng));

  const int shapes = rng.uniform_int(spec.min_shapes, std::max(spec.min_shapes, spec.max_shapes));
  for (int s = 0; s < shapes; ++s) {
    const Color c = random_color(rng);
    switch (rng.uniform_int(0, 3)) {
      case 0: {
        const int rh = rng.uniform_int(4, h / 2), rw = rng.uniform_int(4, w / 2);
        const int y0 = rng.uniform_int(-rh / 2, h - rh / 2), x0 = rng.uniform_int(-rw / 2, w - rw / 2);
        fill_rect(img, y0, x0, y0 + rh, x0 + rw, c);
        break;
      }
      case 1:
        fill_ellipse(img, rng.uniform(0, h), rng.uniform(0, w), rng.uniform(3, h / 4.0),
                     rng.uniform(3, w / 4.0), c);
        break;
      case 2:
        draw_segment(img, rng.uniform(0, h), rng.uniform(0, w), rng.uniform(0, h),
                     rng.uniform(0, w), rng.uniform(0.7, 3.0), c);
        break;
      default:
        draw_glyph(img, rng, c);
        break;
    }
  }

  // Marker rectangle: drawn last so its left edge is guaranteed visible.
  const int rh = rng.uniform_int(6, std::max(6, h / 3));
  const int rw = rng.uniform_int(6, std::max(6, w / 3));
  const int y0 = rng.uniform_int(1, h - rh - 1);
  const int x0 = rng.uniform_int(2, w - rw - 1);
  const int mid = y0 + rh / 2;
  Color left;
  for (int ch = 0; ch < 3; ++ch) left[ch] = img.at(ch, mid, x0 - 1);
  const Color marker = luma(left) < Real(0.5) ? Color{1, 1, 1} : Color{0, 0, 0};
  fill_rect(img, y0, x0, y0 + rh, x0 + rw, marker);
  return img;
}

SyntheticManifest make_synthetic_dataset(const SyntheticSetSpec& spec,
                                         const std::filesystem::path& dir) {
  if (spec.count < 0) throw ValidationError("synthetic set: count must be >= 0");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  SyntheticManifest manifest;
  manifest.seed = spec.seed;
  for (int i = 0; i < spec.count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "synth_%05d.png", i);
    const auto path = dir / name;
    save_png(render_synthetic(spec, i), path);
    manifest.files.push_back(path);
  }

  const auto mpath = dir / "manifest.txt";
  std::ofstream out(mpath, std::ios::binary);
  if (!out) throw IoError("cannot write '" + mpath.string() + "'");
  out << "# synthetic HR set\n"
      << "seed = " << spec.seed << '\n'
      << "count = " << spec.count << '\n'
      << "height = " << spec.height << '\n'
      << "width = " << spec.width << '\n'
      << "shapes = " << spec.min_shapes << ".." << spec.max_shapes << '\n';
  for (const auto& f : manifest.files) out << "file = " << f.filename().string() << '\n';
  out.close();
  if (!out) throw IoError("failed writing '" + mpath.string() + "'");
  return manifest;
}

}  // namespace gvl
