#include <doctest.h>

#include "gradcheck.hpp"

TEST_SUITE("gradcheck") {

TEST_CASE("loss gradients match central differences") {
  gvl::Rng rng(2024);
  for (auto k : {gradcheck::LossKind::kL2, gradcheck::LossKind::kL1, gradcheck::LossKind::kTv,
                 gradcheck::LossKind::kSsim, gradcheck::LossKind::kGv}) {
    for (int t = 0; t < 4; ++t) {
      CAPTURE(gradcheck::name(k));
      CHECK(gradcheck::loss_instance(k, rng) <= 1e-6);
    }
  }
}

TEST_CASE("model + loss gradients match central differences") {
  gvl::Rng rng(77);
  for (const auto& loss : gradcheck::model_losses()) {
    CAPTURE(loss.label());
    CHECK(gradcheck::model_instance(loss, rng) <= 1e-6);
  }
}

TEST_CASE("relu model gradients") {
  gvl::Rng rng(78);
  auto spec = gradcheck::tiny_spec();
  spec.layers[0].act = gvl::Activation::kRelu;
  CHECK(gradcheck::model_instance(gvl::parse_loss_label("L2"), rng, spec) <= 1e-6);
}

}  // TEST_SUITE
