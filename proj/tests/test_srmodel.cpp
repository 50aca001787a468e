#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "gradcheck.hpp"
#include "gvl/checkpoint.hpp"
#include "gvl/errors.hpp"
#include "gvl/model.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using gvl::Image;

TEST_SUITE("srmodel") {

TEST_CASE("pixel shuffle places channel dy*2+dx at (2y+dy, 2x+dx)") {
  Image t(4, 2, 2);
  for (int c = 0; c < 4; ++c)
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 2; ++x) t.at(c, y, x) = 100 * c + 10 * y + x;
  const Image out = gvl::pixel_shuffle(t, 2);
  REQUIRE(out.channels() == 1);
  REQUIRE(out.height() == 4);
  REQUIRE(out.width() == 4);
  // All 16 positions, enumerated.
  const double expected[4][4] = {{0, 100, 1, 101},
                                 {200, 300, 201, 301},
                                 {10, 110, 11, 111},
                                 {210, 310, 211, 311}};
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) CHECK(out.at(0, y, x) == expected[y][x]);
}

TEST_CASE("pixel shuffle is a bijection") {
  gvl::Rng rng(1);
  const Image t = oracle::random_image(rng, 12, 5, 7, -1, 1);
  CHECK(gvl::pixel_shuffle(t, 1) == t);
  const Image s = gvl::pixel_shuffle(t, 2);
  CHECK(gvl::pixel_unshuffle(s, 2) == t);
  CHECK(gvl::dot(s, s) == doctest::Approx(gvl::dot(t, t)).epsilon(1e-15));
  // Same multiset of samples, so the sorted sums of squares agree exactly.
  auto sq = [](const Image& a) {
    std::vector<double> v(a.data().begin(), a.data().end());
    for (auto& x : v) x *= x;
    std::sort(v.begin(), v.end());
    return std::accumulate(v.begin(), v.end(), 0.0);
  };
  CHECK(sq(s) == sq(t));
  CHECK(gvl::pixel_shuffle(Image(9, 3, 3, 0.5), 3) == Image(1, 9, 9, 0.5));
  CHECK_THROWS_AS(gvl::pixel_shuffle(Image(5, 2, 2), 2), gvl::ValidationError);
}

TEST_CASE("forward shapes and zero model") {
  const auto spec = gvl::ModelSpec::espcn(3, 2);
  const auto zero = gvl::ModelParams::zeros(spec);
  gvl::Rng rng(2);
  const Image lr = oracle::random_image(rng, 3, 16, 16);
  const auto res = gvl::forward(zero, lr);
  CHECK(res.sr.channels() == 3);
  CHECK(res.sr.height() == 32);
  CHECK(res.sr.width() == 32);
  for (auto v : res.sr.data()) CHECK(v == 0);
  CHECK_THROWS_AS(gvl::forward(zero, Image(1, 16, 16)), gvl::ValidationError);
}

TEST_CASE("forward is deterministic") {
  const auto params = gvl::ModelParams::init(gvl::ModelSpec::espcn(3, 3), 9);
  gvl::Rng rng(3);
  const Image lr = oracle::random_image(rng, 3, 10, 9);
  CHECK(gvl::forward(params, lr).sr == gvl::forward(params, lr).sr);
  CHECK(gvl::forward(params, lr).sr.height() == 30);
}

TEST_CASE("init is seeded and bounded") {
  const auto spec = gvl::ModelSpec::espcn(3, 2);
  const auto a = gvl::ModelParams::init(spec, 5);
  const auto b = gvl::ModelParams::init(spec, 5);
  const auto c = gvl::ModelParams::init(spec, 6);
  CHECK(a.values == b.values);
  CHECK(a.checksum() == b.checksum());
  CHECK(a.values != c.values);
  const double bound0 = 1.0 / std::sqrt(3.0 * 25);
  for (std::size_t i = 0; i < spec.layers[0].param_count(); ++i) {
    CHECK(std::abs(a.values[i]) <= bound0);
  }
}

TEST_CASE("backward: zero cotangent and final bias") {
  const auto params = gvl::ModelParams::init(gradcheck::tiny_spec(), 3);
  gvl::Rng rng(4);
  const auto fwd = gvl::forward(params, oracle::random_image(rng, 3, 8, 8));
  const auto zero = gvl::backward(params, fwd.tape, Image(3, 16, 16));
  for (auto g : zero.values) CHECK(g == 0);

  const Image cot = oracle::random_image(rng, 3, 16, 16, -1, 1);
  const auto grads = gvl::backward(params, fwd.tape, cot);
  const Image unshuffled = gvl::pixel_unshuffle(cot, 2);
  const std::size_t bias = params.bias_offset(1);
  for (int c = 0; c < 12; ++c) {
    double sum = 0;
    for (auto v : unshuffled.plane(c)) sum += v;
    CHECK(grads.values[bias + c] == doctest::Approx(sum).epsilon(1e-13));
  }
}

TEST_CASE("backward rejects mismatched tapes") {
  auto params = gvl::ModelParams::init(gradcheck::tiny_spec(), 3);
  gvl::Rng rng(5);
  auto fwd = gvl::forward(params, oracle::random_image(rng, 3, 8, 8));
  CHECK_THROWS_AS(gvl::backward(params, fwd.tape, Image(3, 8, 8)), gvl::ValidationError);
  gvl::adam_step(params, gvl::ParamGrads{std::vector<gvl::Real>(params.values.size(), 0.1)});
  CHECK_THROWS_AS(gvl::backward(params, fwd.tape, Image(3, 16, 16)), gvl::ValidationError);
  fwd.tape.clear();
  CHECK_THROWS_AS(gvl::backward(params, fwd.tape, Image(3, 16, 16)), gvl::ValidationError);
}

TEST_CASE("replicate padding adjoint") {
  gvl::Rng rng(6);
  const Image x = oracle::random_image(rng, 2, 5, 6, -1, 1);
  const Image c = oracle::random_image(rng, 2, 9, 10, -1, 1);
  const double lhs = gvl::dot(gvl::pad_replicate(x, 2), c);
  const double rhs = gvl::dot(x, gvl::pad_replicate_backward(c, 2));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("adam") {
  auto params = gvl::ModelParams::init(gradcheck::tiny_spec(), 1);
  const auto before = params.values;
  gvl::adam_step(params, gvl::ParamGrads{std::vector<gvl::Real>(before.size(), 0)});
  CHECK(params.values == before);
  CHECK(params.adam.step == 1);

  auto fresh = gvl::ModelParams::init(gradcheck::tiny_spec(), 1);
  gvl::Rng rng(7);
  gvl::ParamGrads g{std::vector<gvl::Real>(before.size())};
  for (auto& v : g.values) v = rng.uniform(-2, 2);
  gvl::AdamConfig cfg;
  cfg.learning_rate = 0.01;
  gvl::adam_step(fresh, g, cfg);
  for (std::size_t i = 0; i < before.size(); ++i) {
    const double expected = before[i] - 0.01 * (g.values[i] > 0 ? 1 : -1);
    CHECK(fresh.values[i] == doctest::Approx(expected).epsilon(1e-6));
  }

  g.values[3] = std::numeric_limits<double>::quiet_NaN();
  const auto snapshot = fresh.values;
  CHECK_THROWS_AS(gvl::adam_step(fresh, g), gvl::NumericError);
  CHECK(fresh.values == snapshot);
}

TEST_CASE("adam runs are bit-identical") {
  auto run = [] {
    auto p = gvl::ModelParams::init(gradcheck::tiny_spec(), 11);
    gvl::Rng rng(12);
    for (int s = 0; s < 5; ++s) {
      gvl::ParamGrads g{std::vector<gvl::Real>(p.values.size())};
      for (auto& v : g.values) v = rng.uniform(-1, 1);
      gvl::adam_step(p, g);
    }
    return p;
  };
  const auto a = run();
  const auto b = run();
  CHECK(a.values == b.values);
  CHECK(a.adam.m == b.adam.m);
  CHECK(a.adam.v == b.adam.v);
}

TEST_CASE("checkpoint round trip and errors") {
  testutil::TempDir tmp;
  auto params = gvl::ModelParams::init(gvl::ModelSpec::espcn(3, 2, 8), 21);
  gvl::adam_step(params, gvl::ParamGrads{std::vector<gvl::Real>(params.values.size(), 0.5)});
  gvl::save_checkpoint(params, tmp / "c.bin");
  const auto back = gvl::load_checkpoint(tmp / "c.bin");
  CHECK(back.spec == params.spec);
  CHECK(back.values == params.values);
  CHECK(back.adam.m == params.adam.m);
  CHECK(back.adam.v == params.adam.v);
  CHECK(back.adam.step == 1);

  const std::string bytes = testutil::read_bytes(tmp / "c.bin");
  CHECK(bytes.substr(0, 8) == std::string("GVLCKPT\0", 8));
  CHECK(bytes.size() == 8 + 4 * 4 + 3 * 16 + 8 + 8 + 3 * 8 * params.values.size());

  CHECK_THROWS_AS(gvl::load_checkpoint(tmp / "missing.bin"), gvl::IoError);
  {
    std::ofstream out(tmp / "trunc.bin", std::ios::binary);
    out.write(bytes.data(), 100);
  }
  CHECK_THROWS_AS(gvl::load_checkpoint(tmp / "trunc.bin"), gvl::IoError);
  {
    std::ofstream out(tmp / "bad.bin", std::ios::binary);
    out << "NOTACKPT" << bytes.substr(8);
  }
  CHECK_THROWS_AS(gvl::load_checkpoint(tmp / "bad.bin"), gvl::IoError);
}

TEST_CASE("model spec validation") {
  auto spec = gvl::ModelSpec::espcn(3, 2);
  CHECK_NOTHROW(spec.validate());
  spec.layers[1].kernel = 4;
  CHECK_THROWS_AS(spec.validate(), gvl::ValidationError);
  spec = gvl::ModelSpec::espcn(3, 2);
  spec.layers.back().out_ch = 6;
  CHECK_THROWS_AS(spec.validate(), gvl::ValidationError);
}

}  // TEST_SUITE
