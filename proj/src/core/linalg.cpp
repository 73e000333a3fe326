#include "linalg.hpp"

#include <algorithm>
#include <cmath>

#include <lapacke.h>

namespace sdrecon {

namespace {

constexpr double kPade13Theta = 5.371920351148152;
constexpr double kPade13[14] = {64764752532480000.0,
                                32382376266240000.0,
                                7771770303897600.0,
                                1187353796428800.0,
                                129060195264000.0,
                                10559470521600.0,
                                670442572800.0,
                                33522128640.0,
                                1323241920.0,
                                40840800.0,
                                960960.0,
                                16380.0,
                                182.0,
                                1.0};

lapack_logical select_left_half(const double* wr, const double* /*wi*/) { return *wr < 0.0; }

lapack_logical select_unit_disk(const double* wr, const double* wi) {
  return std::hypot(*wr, *wi) < 1.0;
}

}  // namespace

Matrix mat_exp(const Matrix& a, double t) {
  if (a.rows() != a.cols()) throw DimensionError("mat_exp: matrix must be square");
  if (t < 0.0) throw ParameterError("mat_exp: t must be nonnegative");
  if (!all_finite(a)) throw ParameterError("mat_exp: non-finite entry");
  const Eigen::Index n = a.rows();
  if (n == 0) return Matrix(0, 0);

  Matrix x = a * t;
  const double norm1 = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kPade13Theta) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kPade13Theta)));
    x /= std::ldexp(1.0, squarings);
  }

  const Matrix ident = Matrix::Identity(n, n);
  const Matrix x2 = x * x;
  const Matrix x4 = x2 * x2;
  const Matrix x6 = x4 * x2;
  const double* b = kPade13;
  const Matrix u_inner = x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 +
                         b[3] * x2 + b[1] * ident;
  const Matrix u = x * u_inner;
  const Matrix v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 +
                   b[2] * x2 + b[0] * ident;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

Matrix stable_invariant_subspace(const Matrix& m, bool continuous, int* count,
                                 CVector* eigenvalues) {
  if (m.rows() != m.cols()) throw DimensionError("stable_invariant_subspace: not square");
  const lapack_int n = static_cast<lapack_int>(m.rows());
  Matrix t = m;
  Matrix vs(n, n);
  std::vector<double> wr(n), wi(n);
  lapack_int sdim = 0;
  const lapack_int info =
      LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', continuous ? select_left_half : select_unit_disk,
                    n, t.data(), n, &sdim, wr.data(), wi.data(), vs.data(), n);
  if (info != 0) {
    throw NumericalError("dgees failed with info=" + std::to_string(info));
  }
  if (eigenvalues != nullptr) {
    eigenvalues->resize(n);
    for (lapack_int i = 0; i < n; ++i) (*eigenvalues)(i) = Complex(wr[i], wi[i]);
  }
  *count = sdim;
  return vs.leftCols(sdim);
}

std::vector<double> poly_from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c{Complex(1.0, 0.0)};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = std::move(next);
  }
  std::vector<double> out(c.size());
  std::transform(c.begin(), c.end(), out.begin(), [](Complex z) { return z.real(); });
  return out;
}

void generalized_eigenvalues(const Matrix& a, const Matrix& e, CVector* alpha, Vector* beta) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || e.rows() != n || e.cols() != n) {
    throw DimensionError("generalized_eigenvalues: square pencil of equal sizes required");
  }
  Matrix aa = a, ee = e;
  Vector ar(n), ai(n), b(n);
  double dummy = 0.0;
  const lapack_int info = LAPACKE_dggev(LAPACK_COL_MAJOR, 'N', 'N', static_cast<lapack_int>(n), aa.data(),
                                        static_cast<lapack_int>(n), ee.data(), static_cast<lapack_int>(n),
                                        ar.data(), ai.data(), b.data(), &dummy, 1, &dummy, 1);
  if (info != 0) throw NumericalError("generalized_eigenvalues: dggev failed");
  alpha->resize(n);
  for (Eigen::Index i = 0; i < n; ++i) (*alpha)(i) = Complex(ar(i), ai(i));
  *beta = b;
}

std::vector<double> charpoly(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("charpoly: not square");
  if (a.rows() == 0) return {1.0};
  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) throw NumericalError("charpoly: eigenvalue solver failed");
  std::vector<Complex> roots(es.eigenvalues().data(),
                             es.eigenvalues().data() + es.eigenvalues().size());
  return poly_from_roots(roots);
}

std::vector<Complex> poly_roots(const std::vector<double>& coeffs) {
  std::size_t first = 0;
  while (first < coeffs.size() && coeffs[first] == 0.0) ++first;
  if (coeffs.size() - first <= 1) return {};
  const std::size_t deg = coeffs.size() - first - 1;
  // Trailing zeros are exact roots at the origin.
  std::size_t last = coeffs.size();
  std::size_t zero_roots = 0;
  while (last - first > 1 && coeffs[last - 1] == 0.0) {
    --last;
    ++zero_roots;
  }
  std::vector<Complex> roots(zero_roots, Complex(0.0, 0.0));
  const std::size_t reduced = deg - zero_roots;
  if (reduced > 0) {
    Matrix comp = Matrix::Zero(static_cast<Eigen::Index>(reduced),
                               static_cast<Eigen::Index>(reduced));
    for (std::size_t j = 0; j < reduced; ++j) {
      comp(0, static_cast<Eigen::Index>(j)) = -coeffs[first + 1 + j] / coeffs[first];
    }
    for (std::size_t i = 1; i < reduced; ++i) {
      comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    Eigen::EigenSolver<Matrix> es(comp, false);
    if (es.info() != Eigen::Success) throw NumericalError("poly_roots: eigenvalue solver failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      roots.push_back(es.eigenvalues()(i));
    }
  }
  return roots;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Complex poly_eval(const std::vector<double>& coeffs, Complex z) {
  Complex acc(0.0, 0.0);
  for (double c : coeffs) acc = acc * z + c;
  return acc;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

double sigma_max(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double sigma_max(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace sdrecon
