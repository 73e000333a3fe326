#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace sdrecon {

/// Row-major grayscale image with values nominally in [0, 1].
struct ImageGrid {
  int rows = 0;
  int cols = 0;
  std::vector<double> pixels;
  int bit_depth = 8;  ///< of the source file

  ImageGrid() = default;
  ImageGrid(int r, int c, double fill = 0.0);

  double& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * cols + c]; }
};

ImageGrid read_pgm(const std::string& path);
/// Writes 8-bit P5; values are clamped to [0, 1] and rounded.
void write_pgm(const std::string& path, const ImageGrid& img);

constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// Peak signal-to-noise ratio with peak 1.0; +infinity for identical images.
double psnr(const ImageGrid& a, const ImageGrid& b);
/// Mean SSIM over the valid region of an 11x11 Gaussian window (sigma 1.5).
double ssim(const ImageGrid& a, const ImageGrid& b);

ImageGrid transpose(const ImageGrid& img);

/// Keeps every factor-th pixel along both axes (no prefilter).
ImageGrid decimate(const ImageGrid& img, int factor);

using LineOp = std::function<std::vector<double>(const std::vector<double>&)>;

enum class Order { rows_first, cols_first };

/// Applies a 1-D operation to every row and then every column (or the
/// reverse).
ImageGrid separable(const ImageGrid& img, const LineOp& op, Order order = Order::rows_first);

/// Lanczos (a = 3) interpolation of one line by an integer factor. Output
/// sample j is taken at source position j / factor; mirror boundary.
std::vector<double> lanczos_line(const std::vector<double>& x, int factor);

/// Sampled-data interpolation of one line: mirror extension, zero
/// insertion, FIR filtering with `taps` (the fast-rate impulse response of
/// K), removal of `delay` fast samples, and cropping to factor * size.
std::vector<double> sampled_data_line(const std::vector<double>& x, int factor,
                                      const std::vector<double>& taps, long delay);

ImageGrid lanczos_resize(const ImageGrid& img, int factor);
ImageGrid sampled_data_resize(const ImageGrid& img, int factor, const std::vector<double>& taps,
                              long delay);

}  // namespace sdrecon
