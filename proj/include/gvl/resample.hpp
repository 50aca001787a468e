#pragma once

#include "gvl/image.hpp"

namespace gvl {

/// BT.601 luma weights.
inline constexpr Real kLumaR = Real(0.299);
inline constexpr Real kLumaG = Real(0.587);
inline constexpr Real kLumaB = Real(0.114);

/// y = 0.299 R + 0.587 G + 0.114 B; a 1-channel input is copied.
Image to_grayscale(const Image& img);

/// Adjoint of to_grayscale: spreads a 1-channel cotangent back to `channels`.
Image grayscale_backward(const Image& gray_cot, int channels);

/// Cubic-convolution kernel with a = -0.5.
Real cubic_kernel(Real x);

/// Separable cubic resampling, half-pixel centers, edge replication.
/// The kernel is not widened when downscaling. Output is not clamped.
Image bicubic_resize(const Image& img, int out_height, int out_width);

/// Largest centered crop whose sides are multiples of `multiple`.
Image center_crop_to_multiple(const Image& img, int multiple);

/// Center crop to an exact size.
Image center_crop(const Image& img, int height, int width);

/// Bicubic degradation by an integer factor s >= 2 after center-cropping to
/// multiples of s.
Image make_lr(const Image& hr, int scale);

/// Removes `px` pixels from each side.
Image crop_border(const Image& img, int px);

}  // namespace gvl
