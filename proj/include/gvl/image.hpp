#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gvl {

#ifdef GVL_SINGLE_PRECISION
using Real = float;
#else
using Real = double;
#endif

/// Planar floating-point raster, channel-major (c, y, x). Nominal range [0,1]
/// but intermediate results (SR outputs, cotangents) may leave it.
class Image {
 public:
  Image() = default;
  Image(int channels, int height, int width, Real fill = Real(0));
  Image(int channels, int height, int width, std::vector<Real> data);

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  bool empty() const { return data_.empty(); }

  Real& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  Real at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  std::span<Real> plane(int c) { return {data_.data() + c * plane_size(), plane_size()}; }
  std::span<const Real> plane(int c) const {
    return {data_.data() + c * plane_size(), plane_size()};
  }

  std::span<Real> data() { return data_; }
  std::span<const Real> data() const { return data_; }
  std::vector<Real>& storage() { return data_; }

  bool same_shape(const Image& other) const {
    return channels_ == other.channels_ && height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<Real> data_;
};

/// Throws ValidationError unless a and b have identical shape.
void require_same_shape(const Image& a, const Image& b, const char* what);

/// Throws NumericError if any sample is NaN or infinite.
void require_finite(const Image& img, const char* what);

Image operator+(const Image& a, const Image& b);
Image operator-(const Image& a, const Image& b);
Image operator*(Real s, const Image& a);
Image& operator+=(Image& a, const Image& b);

/// Adds a constant to every sample.
Image shifted(const Image& a, Real offset);

/// Elementwise clamp to [lo, hi].
Image clamped(const Image& a, Real lo = 0, Real hi = 1);

/// Returns a copy with the (y0, x0) corner and the given size.
Image crop(const Image& img, int y0, int x0, int height, int width);

/// Sum of a_i * b_i in index order.
double dot(const Image& a, const Image& b);

}  // namespace gvl
