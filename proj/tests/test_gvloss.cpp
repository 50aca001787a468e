#include <doctest.h>

#include <algorithm>

#include "gvl/errors.hpp"
#include "gvl/losses.hpp"
#include "gvl/patches.hpp"
#include "oracles.hpp"

using gvl::Image;

namespace {

gvl::UnfoldedPatches single_column(std::vector<double> values, int n) {
  gvl::UnfoldedPatches p;
  p.patch_size = n;
  p.grid_rows = p.grid_cols = 1;
  p.values.assign(values.begin(), values.end());
  return p;
}

}  // namespace

TEST_SUITE("gvloss") {

TEST_CASE("unfold shapes and layout") {
  gvl::Rng rng(1);
  const Image m8 = oracle::random_image(rng, 1, 8, 8);
  const auto p8 = gvl::unfold(m8, 8);
  CHECK(p8.rows() == 64);
  CHECK(p8.cols() == 1);

  const Image m16 = oracle::random_image(rng, 1, 16, 16);
  const auto p16 = gvl::unfold(m16, 8);
  CHECK(p16.rows() == 64);
  CHECK(p16.cols() == 4);
  // Column 1 is the top-right patch; its first entry is pixel (0, 8).
  CHECK(p16.column(1)[0] == m16.at(0, 0, 8));
  CHECK(p16.column(2)[9] == m16.at(0, 9, 1));
  CHECK(gvl::fold(p16) == m16);

  CHECK_THROWS_AS(gvl::unfold(m8, 3), gvl::ValidationError);
}

TEST_CASE("fold inverts unfold on random shapes") {
  gvl::Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const int n = rng.uniform_int(2, 5);
    const Image m = oracle::random_image(rng, 1, n * rng.uniform_int(1, 4), n * rng.uniform_int(1, 4));
    CHECK(gvl::fold(gvl::unfold(m, n)) == m);
  }
}

TEST_CASE("patch variance fixtures") {
  CHECK(gvl::patch_variance(single_column({0.3, 0.3, 0.3, 0.3}, 2)).values[0] == 0);
  CHECK(gvl::patch_variance(single_column({0, 0, 0, 1}, 2)).values[0] == 0.25);
  CHECK_THROWS_AS(gvl::patch_variance(single_column({1}, 1)), gvl::ValidationError);
}

TEST_CASE("patch variance homogeneity and permutation invariance") {
  gvl::Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> v(16);
    for (auto& x : v) x = rng.uniform(-3, 3);
    const double base = gvl::patch_variance(single_column(v, 4)).values[0];

    const double alpha = rng.uniform(-4, 4);
    std::vector<double> scaled = v;
    for (auto& x : scaled) x *= alpha;
    CHECK(gvl::patch_variance(single_column(scaled, 4)).values[0] ==
          doctest::Approx(alpha * alpha * base).epsilon(1e-13));

    std::vector<double> perm = v;
    rng.shuffle(perm);
    CHECK(gvl::patch_variance(single_column(perm, 4)).values[0] ==
          doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("gv_loss of identical images is exactly zero") {
  gvl::Rng rng(4);
  const Image img = oracle::random_image(rng, 3, 16, 24);
  const auto r = gvl::gv_loss(img, img, 8);
  CHECK(r.value == 0);
  for (auto g : r.grad_sr.data()) CHECK(g == 0);
}

TEST_CASE("gv_loss equals the naive per-block oracle") {
  gvl::Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const int n = rng.uniform_int(2, 8);
    const int c = rng.uniform_int(0, 1) ? 3 : 1;
    const int h = n * rng.uniform_int(1, 32 / n), w = n * rng.uniform_int(1, 32 / n);
    if (h < 3 || w < 3) continue;
    const Image sr = oracle::random_image(rng, c, h, w);
    const Image hr = oracle::random_image(rng, c, h, w);
    const double expected = oracle::naive_gv(sr, hr, n);
    CHECK(gvl::gv_loss(sr, hr, n).value == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("gv_loss is blind to constant offsets") {
  gvl::Rng rng(6);
  const Image sr = oracle::random_image(rng, 3, 16, 16);
  const Image hr = oracle::random_image(rng, 3, 16, 16);
  const double base = gvl::gv_loss(sr, hr, 8).value;
  const double shifted_sr = gvl::gv_loss(gvl::shifted(sr, 0.125), hr, 8).value;
  const double shifted_hr = gvl::gv_loss(sr, gvl::shifted(hr, 0.3), 8).value;
  CHECK(oracle::ulp_distance(base, shifted_sr) <= 4);
  CHECK(shifted_hr == doctest::Approx(base).epsilon(1e-13));
}

TEST_CASE("blurring a textured image raises gv_loss above zero") {
  gvl::Rng rng(7);
  for (int t = 0; t < 5; ++t) {
    const Image hr = oracle::random_image(rng, 3, 16, 16);
    const Image sr = oracle::blur(hr);
    const double expected = oracle::naive_gv(sr, hr, 8);
    CHECK(expected > 0);
    CHECK(gvl::gv_loss(sr, hr, 8).value == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("gv_loss errors") {
  CHECK_THROWS_AS(gvl::gv_loss(Image(1, 16, 16), Image(1, 16, 8), 8), gvl::ValidationError);
  CHECK_THROWS_AS(gvl::gv_loss(Image(1, 12, 12), Image(1, 12, 12), 8), gvl::ValidationError);
  CHECK_THROWS_AS(gvl::gv_loss(Image(1, 8, 8), Image(1, 8, 8), 1), gvl::ValidationError);
}

TEST_CASE("euclidean gv variant") {
  gvl::Rng rng(8);
  const Image sr = oracle::random_image(rng, 1, 16, 16);
  const Image hr = oracle::random_image(rng, 1, 16, 16);
  const auto mse = gvl::gv_loss(sr, hr, 8, gvl::GvNorm::kMeanSquared);
  const auto l2 = gvl::gv_loss(sr, hr, 8, gvl::GvNorm::kEuclidean);
  CHECK(l2.value > 0);
  CHECK(mse.value > 0);
  auto f = [&](const Image& x) { return double(gvl::gv_loss(x, hr, 8, gvl::GvNorm::kEuclidean).value); };
  CHECK(oracle::max_rel_error(l2.grad_sr.data(), oracle::fd_gradient(f, sr).data()) <= 1e-6);
  const auto zero = gvl::gv_loss(sr, sr, 8, gvl::GvNorm::kEuclidean);
  CHECK(zero.value == 0);
  for (auto g : zero.grad_sr.data()) CHECK(g == 0);
}

TEST_CASE("pixel losses") {
  gvl::Rng rng(9);
  const Image hr = oracle::random_image(rng, 3, 5, 6, 0, 0.8);
  const Image sr = gvl::shifted(hr, 0.1);

  const auto l2 = gvl::l2_loss(sr, hr);
  const auto l1 = gvl::l1_loss(sr, hr);
  CHECK(l2.value == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(l1.value == doctest::Approx(0.1).epsilon(1e-12));
  const double count = static_cast<double>(hr.size());
  for (std::size_t i = 0; i < hr.size(); ++i) {
    CHECK(l2.grad_sr.data()[i] == doctest::Approx(2 * (sr.data()[i] - hr.data()[i]) / count));
  }
  const auto z1 = gvl::l1_loss(hr, hr);
  const auto z2 = gvl::l2_loss(hr, hr);
  CHECK(z1.value == 0);
  CHECK(z2.value == 0);
  for (auto g : z1.grad_sr.data()) CHECK(g == 0);
  for (auto g : z2.grad_sr.data()) CHECK(g == 0);
  CHECK_THROWS_AS(gvl::l1_loss(sr, Image(3, 5, 5)), gvl::ValidationError);
}

TEST_CASE("tv loss") {
  CHECK(gvl::tv_loss(Image(3, 4, 4, 0.6)).value == 0);

  Image pair(1, 1, 2);
  pair.at(0, 0, 1) = 1;
  const auto r = gvl::tv_loss(pair);
  // One horizontal difference of 1, no vertical pairs.
  CHECK(r.value == 1);
  CHECK(r.grad_sr.at(0, 0, 0) == -2);
  CHECK(r.grad_sr.at(0, 0, 1) == 2);

  Image checker(1, 8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) checker.at(0, y, x) = (x + y) % 2;
  CHECK(gvl::tv_loss(checker).value > gvl::tv_loss(oracle::blur(checker)).value);

  CHECK_THROWS_AS(gvl::tv_loss(Image(1, 1, 1)), gvl::ValidationError);
}

TEST_CASE("ssim loss") {
  gvl::Rng rng(10);
  const Image a = oracle::random_image(rng, 3, 16, 16);
  const Image b = oracle::random_image(rng, 3, 16, 16);
  CHECK(gvl::ssim_loss(a, a).value == doctest::Approx(0).epsilon(1e-15));
  const auto r = gvl::ssim_loss(a, b);
  CHECK(r.value >= 0);
  CHECK(r.value <= 2);
  CHECK_THROWS_AS(gvl::ssim_loss(Image(1, 10, 20), Image(1, 10, 20)), gvl::ValidationError);
}

TEST_CASE("composite loss") {
  gvl::Rng rng(11);
  const Image sr = oracle::random_image(rng, 3, 16, 16);
  const Image hr = oracle::random_image(rng, 3, 16, 16);

  gvl::CompositeLossSpec spec;
  spec.base = gvl::BaseLoss::kL2;
  spec.regularizer = gvl::Regularizer::kGv;
  spec.reg_weight = 0;
  const auto base = gvl::l2_loss(sr, hr);
  const auto zero_w = gvl::composite_loss(spec, sr, hr);
  CHECK(zero_w.value == base.value);
  CHECK(zero_w.grad_sr == base.grad_sr);

  spec.reg_weight = 1;
  CHECK(gvl::composite_loss(spec, hr, hr).value == 0);

  for (auto reg : {gvl::Regularizer::kTv, gvl::Regularizer::kGv}) {
    spec.regularizer = reg;
    spec.reg_weight = 0.37;
    const auto total = gvl::composite_loss(spec, sr, hr);
    const auto r = reg == gvl::Regularizer::kTv ? gvl::tv_loss(sr) : gvl::gv_loss(sr, hr, 8);
    Image expected = base.grad_sr;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      expected.data()[i] += spec.reg_weight * r.grad_sr.data()[i];
    }
    CHECK(total.grad_sr == expected);
    CHECK(total.value == base.value + spec.reg_weight * r.value);
  }

  spec.reg_weight = -1;
  CHECK_THROWS_AS(gvl::composite_loss(spec, sr, hr), gvl::ValidationError);
}

TEST_CASE("loss labels") {
  const auto s = gvl::parse_loss_label("l2+gv", 0.5, 16);
  CHECK(s.base == gvl::BaseLoss::kL2);
  CHECK(s.regularizer == gvl::Regularizer::kGv);
  CHECK(s.label() == "L2+GV");
  CHECK(gvl::parse_loss_label("SSIM").label() == "SSIM");
  CHECK_THROWS_AS(gvl::parse_loss_label("l3"), gvl::ValidationError);
  CHECK_THROWS_AS(gvl::parse_loss_label("l1+xx"), gvl::ValidationError);
}

}  // TEST_SUITE
