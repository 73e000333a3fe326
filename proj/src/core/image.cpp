#include "image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "linalg.hpp"

namespace sdrecon {

namespace {

// Skips whitespace and '#' comments in a PNM header.
void skip_header_space(std::istream& in) {
  while (in) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
}

long mirror(long i, long n) {
  if (n == 1) return 0;
  const long period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

std::vector<double> gaussian_window() {
  std::vector<double> g(11);
  double sum = 0.0;
  for (int i = 0; i < 11; ++i) {
    g[static_cast<std::size_t>(i)] = std::exp(-(i - 5) * (i - 5) / (2.0 * 1.5 * 1.5));
    sum += g[static_cast<std::size_t>(i)];
  }
  for (double& v : g) v /= sum;
  return g;
}

// Valid-mode separable Gaussian blur of a rows x cols field.
std::vector<double> blur_valid(const std::vector<double>& f, int rows, int cols) {
  const std::vector<double> g = gaussian_window();
  const int vr = rows - 10, vc = cols - 10;
  std::vector<double> tmp(static_cast<std::size_t>(rows) * vc, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < vc; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 11; ++k) acc += g[static_cast<std::size_t>(k)] * f[static_cast<std::size_t>(r) * cols + c + k];
      tmp[static_cast<std::size_t>(r) * vc + c] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(vr) * vc, 0.0);
  for (int r = 0; r < vr; ++r) {
    for (int c = 0; c < vc; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 11; ++k) acc += g[static_cast<std::size_t>(k)] * tmp[static_cast<std::size_t>(r + k) * vc + c];
      out[static_cast<std::size_t>(r) * vc + c] = acc;
    }
  }
  return out;
}

void check_same_shape(const ImageGrid& a, const ImageGrid& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw DimensionError("image dimensions differ");
  if (a.rows < 1 || a.cols < 1) throw DimensionError("empty image");
}

}  // namespace

ImageGrid::ImageGrid(int r, int c, double fill) : rows(r), cols(c) {
  if (r < 1 || c < 1) throw DimensionError("image dimensions must be >= 1");
  pixels.assign(static_cast<std::size_t>(r) * c, fill);
}

ImageGrid read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_pgm: cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw UnsupportedError("read_pgm: only binary P5 files are supported");
  int cols = 0, rows = 0, maxval = 0;
  skip_header_space(in);
  in >> cols;
  skip_header_space(in);
  in >> rows;
  skip_header_space(in);
  in >> maxval;
  in.get();
  if (!in || cols < 1 || rows < 1 || maxval < 1 || maxval > 65535) {
    throw ParameterError("read_pgm: malformed header in " + path);
  }
  ImageGrid img(rows, cols);
  const bool wide = maxval > 255;
  img.bit_depth = wide ? 16 : 8;
  const std::size_t count = img.pixels.size();
  std::vector<unsigned char> raw(count * (wide ? 2 : 1));
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw ParameterError("read_pgm: truncated pixel data in " + path);
  }
  for (std::size_t i = 0; i < count; ++i) {
    const int v = wide ? (raw[2 * i] << 8) | raw[2 * i + 1] : raw[i];
    img.pixels[i] = static_cast<double>(v) / maxval;
  }
  return img;
}

void write_pgm(const std::string& path, const ImageGrid& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_pgm: cannot open " + path);
  out << "P5\n" << img.cols << " " << img.rows << "\n255\n";
  std::vector<unsigned char> raw(img.pixels.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = static_cast<unsigned char>(std::lround(std::clamp(img.pixels[i], 0.0, 1.0) * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("write_pgm: write failed for " + path);
}

double psnr(const ImageGrid& a, const ImageGrid& b) {
  check_same_shape(a, b);
  double mse = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = a.pixels[i] - b.pixels[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.pixels.size());
  if (mse == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const ImageGrid& a, const ImageGrid& b) {
  check_same_shape(a, b);
  if (a.rows < 11 || a.cols < 11) throw DimensionError("ssim: image smaller than the window");
  const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  const std::size_t n = a.pixels.size();
  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    aa[i] = a.pixels[i] * a.pixels[i];
    bb[i] = b.pixels[i] * b.pixels[i];
    ab[i] = a.pixels[i] * b.pixels[i];
  }
  const auto mu_a = blur_valid(a.pixels, a.rows, a.cols);
  const auto mu_b = blur_valid(b.pixels, a.rows, a.cols);
  const auto s_aa = blur_valid(aa, a.rows, a.cols);
  const auto s_bb = blur_valid(bb, a.rows, a.cols);
  const auto s_ab = blur_valid(ab, a.rows, a.cols);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double va = s_aa[i] - mu_a[i] * mu_a[i];
    const double vb = s_bb[i] - mu_b[i] * mu_b[i];
    const double cov = s_ab[i] - mu_a[i] * mu_b[i];
    total += ((2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2)) /
             ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2));
  }
  return total / static_cast<double>(mu_a.size());
}

ImageGrid transpose(const ImageGrid& img) {
  ImageGrid out(img.cols, img.rows);
  out.bit_depth = img.bit_depth;
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) out.at(c, r) = img.at(r, c);
  }
  return out;
}

ImageGrid decimate(const ImageGrid& img, int factor) {
  if (factor < 1) throw ParameterError("decimate: factor must be >= 1");
  const int rows = (img.rows + factor - 1) / factor, cols = (img.cols + factor - 1) / factor;
  ImageGrid out(rows, cols);
  out.bit_depth = img.bit_depth;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out.at(r, c) = img.at(r * factor, c * factor);
  }
  return out;
}

namespace {

ImageGrid apply_rows(const ImageGrid& img, const LineOp& op) {
  std::vector<std::vector<double>> lines(static_cast<std::size_t>(img.rows));
  for (int r = 0; r < img.rows; ++r) {
    std::vector<double> line(img.pixels.begin() + static_cast<std::ptrdiff_t>(r) * img.cols,
                             img.pixels.begin() + static_cast<std::ptrdiff_t>(r + 1) * img.cols);
    lines[static_cast<std::size_t>(r)] = op(line);
  }
  const int cols = static_cast<int>(lines.front().size());
  ImageGrid out(img.rows, cols);
  out.bit_depth = img.bit_depth;
  for (int r = 0; r < img.rows; ++r) {
    if (static_cast<int>(lines[static_cast<std::size_t>(r)].size()) != cols) {
      throw DimensionError("separable: line operation changed length inconsistently");
    }
    std::copy(lines[static_cast<std::size_t>(r)].begin(), lines[static_cast<std::size_t>(r)].end(),
              out.pixels.begin() + static_cast<std::ptrdiff_t>(r) * cols);
  }
  return out;
}

}  // namespace

ImageGrid separable(const ImageGrid& img, const LineOp& op, Order order) {
  if (order == Order::rows_first) {
    return transpose(apply_rows(transpose(apply_rows(img, op)), op));
  }
  return apply_rows(transpose(apply_rows(transpose(img), op)), op);
}

std::vector<double> lanczos_line(const std::vector<double>& x, int factor) {
  if (factor < 1) throw ParameterError("lanczos: factor must be >= 1");
  constexpr int a = 3;
  const long n = static_cast<long>(x.size());
  std::vector<double> out(x.size() * static_cast<std::size_t>(factor));
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (j % static_cast<std::size_t>(factor) == 0) {
      out[j] = x[j / static_cast<std::size_t>(factor)];
      continue;
    }
    const double pos = static_cast<double>(j) / factor;
    const long base = static_cast<long>(std::floor(pos));
    double acc = 0.0, wsum = 0.0;
    for (long i = base - a + 1; i <= base + a; ++i) {
      const double d = pos - static_cast<double>(i);
      const double w = sinc(d) * sinc(d / a);
      acc += w * x[static_cast<std::size_t>(mirror(i, n))];
      wsum += w;
    }
    out[j] = acc / wsum;
  }
  return out;
}

std::vector<double> sampled_data_line(const std::vector<double>& x, int factor,
                                      const std::vector<double>& taps, long delay) {
  if (factor < 1) throw ParameterError("sampled_data_line: factor must be >= 1");
  if (delay < 0) throw ParameterError("sampled_data_line: delay must be >= 0");
  const long n = static_cast<long>(x.size());
  const long memory = static_cast<long>(taps.size()) / factor + delay / factor + 2;
  const long ext = n + 2 * memory;
  std::vector<double> up(static_cast<std::size_t>(ext * factor), 0.0);
  for (long i = 0; i < ext; ++i) {
    up[static_cast<std::size_t>(i * factor)] = x[static_cast<std::size_t>(mirror(i - memory, n))];
  }
  std::vector<double> out(static_cast<std::size_t>(n * factor));
  const long offset = memory * factor + delay;
  for (long j = 0; j < n * factor; ++j) {
    const long t = j + offset;
    double acc = 0.0;
    // Only every factor-th input is nonzero.
    long first = t % factor;
    for (long k = first; k < static_cast<long>(taps.size()) && k <= t; k += factor) {
      acc += taps[static_cast<std::size_t>(k)] * up[static_cast<std::size_t>(t - k)];
    }
    out[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

ImageGrid lanczos_resize(const ImageGrid& img, int factor) {
  return separable(img, [factor](const std::vector<double>& x) { return lanczos_line(x, factor); });
}

ImageGrid sampled_data_resize(const ImageGrid& img, int factor, const std::vector<double>& taps,
                              long delay) {
  return separable(img, [&](const std::vector<double>& x) {
    return sampled_data_line(x, factor, taps, delay);
  });
}

}  // namespace sdrecon
