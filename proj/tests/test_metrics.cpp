#include <doctest.h>

#include <cmath>

#include "gvl/errors.hpp"
#include "gvl/losses.hpp"
#include "gvl/metrics.hpp"
#include "gvl/patches.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using gvl::Image;

TEST_SUITE("metrics") {

TEST_CASE("psnr fixtures") {
  gvl::Rng rng(1);
  const Image a = oracle::random_image(rng, 3, 20, 20, 0, 0.8);
  CHECK(gvl::psnr(a, a, 2) == gvl::kPsnrInfinity);
  CHECK(gvl::psnr(a, gvl::shifted(a, 0.1), 0) == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(std::abs(gvl::psnr(a, gvl::shifted(a, 0.1), 2) - 20.0) <= 1e-6);
  CHECK_THROWS_AS(gvl::psnr(a, Image(3, 20, 19), 0), gvl::ValidationError);
}

TEST_CASE("psnr border crop excludes edge corruption") {
  gvl::Rng rng(2);
  const Image a = oracle::random_image(rng, 1, 16, 16, 0.2, 0.8);
  Image b = a;
  b.at(0, 0, 5) += 0.3;
  b.at(0, 15, 3) -= 0.2;
  b.at(0, 7, 7) += 0.01;
  const double full = gvl::psnr(a, b, 0);
  const double cropped = gvl::psnr(a, b, 2);
  CHECK(cropped > full);
  CHECK(std::isfinite(cropped));
}

TEST_CASE("psnr symmetric and decreasing in noise amplitude") {
  gvl::Rng rng(3);
  const Image a = oracle::random_image(rng, 3, 16, 16, 0.2, 0.8);
  const Image noise = oracle::random_image(rng, 3, 16, 16, -1, 1);
  double prev = gvl::kPsnrInfinity;
  for (double amp : {0.01, 0.05, 0.15}) {
    const Image b = a + amp * noise;
    const double p = gvl::psnr(a, b, 0);
    CHECK(p == gvl::psnr(b, a, 0));
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("ssim fixtures") {
  gvl::Rng rng(4);
  const Image a = oracle::random_image(rng, 3, 16, 16);
  const Image b = oracle::random_image(rng, 3, 16, 16);
  CHECK(gvl::ssim(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gvl::ssim(a, b) == gvl::ssim(b, a));
  CHECK(1 - gvl::ssim(a, b) == gvl::ssim_loss(a, b).value);
  CHECK_THROWS_AS(gvl::ssim(Image(1, 10, 10), Image(1, 10, 10)), gvl::ValidationError);
}

TEST_CASE("ssim of a binary image and its inverse is negative") {
  gvl::Rng rng(5);
  Image a(1, 12, 12);
  for (auto& v : a.data()) v = rng.uniform_int(0, 1);
  Image inv = a;
  for (auto& v : inv.data()) v = 1 - v;
  CHECK(gvl::ssim(a, inv) < 0);
}

TEST_CASE("variance profile of a constant image") {
  const auto p = gvl::variance_profile(Image(3, 32, 32, 0.4), 8);
  CHECK(p.vx.size() == 16);
  for (double v : p.vx) CHECK(v == 0);
  int occupied = 0;
  for (long c : p.count_x) occupied += c > 0;
  CHECK(occupied == 1);
}

TEST_CASE("variance profile conservation and shared path") {
  gvl::Rng rng(6);
  const Image img = oracle::random_image(rng, 3, 40, 48);
  const auto p = gvl::variance_profile(img, 8);
  CHECK(p.grid_rows == 5);
  CHECK(p.grid_cols == 6);
  long sx = 0, sy = 0;
  for (long c : p.count_x) sx += c;
  for (long c : p.count_y) sy += c;
  CHECK(sx == 30);
  CHECK(sy == 30);
  CHECK(p.edges.size() == gvl::kHistogramBins + 1);
  for (std::size_t i = 1; i < p.edges.size(); ++i) CHECK(p.edges[i] > p.edges[i - 1]);

  const auto gv = gvl::gradient_variance(img, 8);
  for (std::size_t i = 0; i < p.vx.size(); ++i) {
    CHECK(p.vx[i] == gv.vx.values[i]);
    CHECK(p.vy[i] == gv.vy.values[i]);
  }
}

TEST_CASE("variance profile crops to a multiple of n") {
  gvl::Rng rng(7);
  const auto p = gvl::variance_profile(oracle::random_image(rng, 1, 21, 35), 8);
  CHECK(p.grid_rows == 2);
  CHECK(p.grid_cols == 4);
  CHECK_THROWS_AS(gvl::variance_profile(Image(1, 6, 20), 8), gvl::ValidationError);
}

TEST_CASE("sharper image has the heavier variance tail") {
  gvl::Rng rng(8);
  const Image sharp = oracle::random_image(rng, 3, 32, 32);
  const auto ps = gvl::variance_profile(sharp, 8);
  const auto pb = gvl::variance_profile(oracle::blur(sharp), 8);
  CHECK(ps.mean_vx() > pb.mean_vx());
  CHECK(ps.mean_vy() > pb.mean_vy());
}

TEST_CASE("report writers") {
  testutil::TempDir tmp;
  gvl::MetricReport rep;
  rep.rows = {{"a.png", 30.5, 0.9}, {"b.png", 29.5, 0.8}};
  rep.finalize();
  CHECK(rep.mean_psnr_db == 30.0);
  gvl::write_metric_csv(rep, tmp / "m.csv");
  CHECK(testutil::read_bytes(tmp / "m.csv") ==
        "path,psnr_db,ssim\na.png,30.5,0.9\nb.png,29.5,0.8\nMEAN,30,0.85\n");

  gvl::Rng rng(9);
  const auto p = gvl::variance_profile(oracle::random_image(rng, 1, 16, 16), 8);
  gvl::write_variance_csv(p, tmp / "v.csv");
  gvl::write_histogram_csv(p, tmp / "h.csv");
  gvl::write_histogram_svg({{"img", &p}}, tmp / "h.svg");
  const std::string v = testutil::read_bytes(tmp / "v.csv");
  CHECK(v.rfind("patch_index,vx,vy\n0,", 0) == 0);
  CHECK(std::count(v.begin(), v.end(), '\n') == 5);
  const std::string h = testutil::read_bytes(tmp / "h.csv");
  CHECK(std::count(h.begin(), h.end(), '\n') == gvl::kHistogramBins + 1);
  CHECK(testutil::read_bytes(tmp / "h.svg").find("<svg") == 0);

  CHECK(gvl::format_number(gvl::kPsnrInfinity) == "inf");
}

}  // TEST_SUITE
