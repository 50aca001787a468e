#pragma once

#include <vector>

#include "gvl/image.hpp"
#include "gvl/sobel.hpp"

namespace gvl {

/// n*n x P matrix of non-overlapping n x n patches, stored column-major:
/// column j is the j-th patch in row-major scan order, and within a column
/// the patch pixels are also row-major.
struct UnfoldedPatches {
  int patch_size = 0;
  int grid_rows = 0;  // h / n
  int grid_cols = 0;  // w / n
  std::vector<Real> values;

  int rows() const { return patch_size * patch_size; }
  int cols() const { return grid_rows * grid_cols; }
  const Real* column(int j) const { return values.data() + static_cast<std::size_t>(j) * rows(); }
  Real* column(int j) { return values.data() + static_cast<std::size_t>(j) * rows(); }
};

/// One unbiased variance per patch, laid out as a (h/n) x (w/n) grid.
struct VarianceMap {
  int grid_rows = 0;
  int grid_cols = 0;
  std::vector<Real> values;

  std::size_t size() const { return values.size(); }
};

/// Rearranges a 1-channel map into patch columns. Requires h and w to be
/// multiples of n.
UnfoldedPatches unfold(const Image& map, int n);

/// Inverse of unfold.
Image fold(const UnfoldedPatches& patches);

/// v_i = sum_j (x_ij - mean_i)^2 / (n^2 - 1), two-pass per column.
VarianceMap patch_variance(const UnfoldedPatches& patches);

/// Cotangent of patch_variance w.r.t. the patch values.
UnfoldedPatches patch_variance_backward(const UnfoldedPatches& patches,
                                        const std::vector<Real>& variance_cot);

/// Intermediate results of gray -> Sobel -> unfold -> variance.
struct GradientVariance {
  Image gray;
  GradientPair gradients;
  UnfoldedPatches patches_x;
  UnfoldedPatches patches_y;
  VarianceMap vx;
  VarianceMap vy;
};

/// Runs the full variance pipeline on a 1- or 3-channel image.
GradientVariance gradient_variance(const Image& img, int n);

}  // namespace gvl
