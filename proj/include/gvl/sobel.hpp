#pragma once

#include "gvl/image.hpp"

namespace gvl {

/// Horizontal and vertical Sobel responses of a 1-channel image.
struct GradientPair {
  Image gx;
  Image gy;
};

/// Cross-correlation with Kx = [[-1,0,1],[-2,0,2],[-1,0,1]] and Ky = Kx^T.
/// The input is edge-replicated by one pixel, so outputs keep its size.
/// Requires a 1-channel image of at least 3x3.
GradientPair sobel_forward(const Image& gray);

/// Vector-Jacobian product of sobel_forward. Cotangent mass that lands on
/// the replicated border is folded back onto the edge pixel it copied.
Image sobel_backward(const GradientPair& cot);

}  // namespace gvl
