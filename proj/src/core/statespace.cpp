#include "statespace.hpp"

#include <algorithm>
#include <cmath>

namespace sdrecon {

namespace {

void check_conformable(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
  if (a.rows() != a.cols()) throw DimensionError("state matrix A must be square");
  if (b.rows() != a.rows()) throw DimensionError("B must have as many rows as A");
  if (c.cols() != a.cols()) throw DimensionError("C must have as many columns as A");
  if (d.rows() != c.rows() || d.cols() != b.cols()) {
    throw DimensionError("D must be outputs x inputs");
  }
}

std::vector<double> strip_leading_zeros(std::vector<double> p) {
  auto it = std::find_if(p.begin(), p.end(), [](double v) { return v != 0.0; });
  if (it == p.end()) return {0.0};
  p.erase(p.begin(), it);
  return p;
}

Matrix orth_krylov(const Matrix& a, const Matrix& b, double tol) {
  const Eigen::Index n = a.rows();
  Matrix basis(n, 0);
  if (n == 0) return basis;
  const double scale = std::max(1.0, std::max(a.norm(), b.norm()));
  Matrix frontier = b;
  for (Eigen::Index iter = 0; iter <= n && frontier.cols() > 0 && basis.cols() < n; ++iter) {
    Matrix added(n, 0);
    for (Eigen::Index j = 0; j < frontier.cols(); ++j) {
      Vector v = frontier.col(j);
      for (int pass = 0; pass < 2; ++pass) {
        if (basis.cols() > 0) v -= basis * (basis.transpose() * v);
        if (added.cols() > 0) v -= added * (added.transpose() * v);
      }
      const double nv = v.norm();
      if (nv > tol * scale) {
        added.conservativeResize(n, added.cols() + 1);
        added.col(added.cols() - 1) = v / nv;
      }
    }
    if (added.cols() == 0) break;
    Matrix merged(n, basis.cols() + added.cols());
    merged << basis, added;
    basis = std::move(merged);
    frontier = a * added;
  }
  return basis;
}

}  // namespace

Realization::Realization(Matrix a, Matrix b, Matrix c, Matrix d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  check_conformable(a_, b_, c_, d_);
  if (!a_.allFinite() || !b_.allFinite() || !c_.allFinite() || !d_.allFinite()) {
    throw ParameterError("state-space matrices must be finite");
  }
}

ContinuousSS ContinuousSS::gain(const Matrix& d) {
  return ContinuousSS(Matrix(0, 0), Matrix(0, d.cols()), Matrix(d.rows(), 0), d);
}

DiscreteSS::DiscreteSS(Matrix a, Matrix b, Matrix c, Matrix d, double sample_period)
    : Realization(std::move(a), std::move(b), std::move(c), std::move(d)),
      sample_period_(sample_period) {
  if (!(sample_period > 0.0) || !std::isfinite(sample_period)) {
    throw ParameterError("sample period must be positive");
  }
}

DiscreteSS DiscreteSS::gain(const Matrix& d, double sample_period) {
  return DiscreteSS(Matrix(0, 0), Matrix(0, d.cols()), Matrix(d.rows(), 0), d, sample_period);
}

RationalTF::RationalTF(std::vector<double> numerator, std::vector<double> denominator,
                       double period)
    : num(std::move(numerator)), den(std::move(denominator)), sample_period(period) {
  if (den.empty() || den.front() == 0.0) {
    throw ParameterError("denominator leading coefficient must be nonzero");
  }
  if (num.empty()) num = {0.0};
}

Complex RationalTF::evaluate(Complex z) const { return poly_eval(num, z) / poly_eval(den, z); }

int RationalTF::relative_degree() const {
  const auto n = strip_leading_zeros(num);
  const auto d = strip_leading_zeros(den);
  return static_cast<int>(d.size()) - static_cast<int>(n.size());
}

DiscreteSS c2d_step_invariant(const ContinuousSS& sys, double h) {
  if (!(h > 0.0)) throw ParameterError("c2d_step_invariant: h must be positive");
  const Eigen::Index n = sys.states();
  const Eigen::Index m = sys.inputs();
  // exp([[A, B], [0, 0]] h) = [[A_d, B_d], [0, I]]
  Matrix aug = Matrix::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = sys.a();
  aug.topRightCorner(n, m) = sys.b();
  const Matrix phi = mat_exp(aug, h);
  return DiscreteSS(phi.topLeftCorner(n, n), phi.topRightCorner(n, m), sys.c(), sys.d(), h);
}

RationalTF to_tf(const DiscreteSS& sys) {
  if (!sys.is_siso()) throw UnsupportedError("to_tf: SISO systems only");
  // det(zI - A + BC) = det(zI - A) (1 + C (zI - A)^{-1} B)
  const std::vector<double> den = charpoly(sys.a());
  const std::vector<double> closed = charpoly(sys.a() - sys.b() * sys.c());
  const double d = sys.d()(0, 0);
  std::vector<double> num(den.size());
  for (std::size_t i = 0; i < den.size(); ++i) num[i] = d * den[i] + closed[i] - den[i];
  return RationalTF(num, den, sys.sample_period());
}

DiscreteSS to_ss(const RationalTF& tf) {
  const std::vector<double> den = strip_leading_zeros(tf.den);
  std::vector<double> num = strip_leading_zeros(tf.num);
  if (num.size() > den.size()) throw ParameterError("to_ss: improper transfer function");
  const Eigen::Index n = static_cast<Eigen::Index>(den.size()) - 1;
  const double lead = den.front();
  std::vector<double> padded(den.size(), 0.0);
  std::copy(num.begin(), num.end(), padded.end() - static_cast<std::ptrdiff_t>(num.size()));
  const double d = padded[0] / lead;
  Matrix a = Matrix::Zero(n, n);
  Matrix b = Matrix::Zero(n, 1);
  Matrix c = Matrix::Zero(1, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    a(0, j) = -den[static_cast<std::size_t>(j + 1)] / lead;
    c(0, j) = padded[static_cast<std::size_t>(j + 1)] / lead - d * den[static_cast<std::size_t>(j + 1)] / lead;
  }
  for (Eigen::Index i = 1; i < n; ++i) a(i, i - 1) = 1.0;
  if (n > 0) b(0, 0) = 1.0;
  return DiscreteSS(a, b, c, Matrix::Constant(1, 1, d), tf.sample_period);
}

namespace {

struct Blocks {
  Matrix a, b, c, d;
};

Blocks series_blocks(const Realization& g1, const Realization& g2) {
  if (g1.outputs() != g2.inputs()) throw DimensionError("series: g1 outputs != g2 inputs");
  const Eigen::Index n1 = g1.states(), n2 = g2.states();
  Blocks s;
  s.a = Matrix::Zero(n1 + n2, n1 + n2);
  s.a.topLeftCorner(n1, n1) = g1.a();
  s.a.bottomLeftCorner(n2, n1) = g2.b() * g1.c();
  s.a.bottomRightCorner(n2, n2) = g2.a();
  s.b = Matrix(n1 + n2, g1.inputs());
  s.b << g1.b(), g2.b() * g1.d();
  s.c = Matrix(g2.outputs(), n1 + n2);
  s.c << g2.d() * g1.c(), g2.c();
  s.d = g2.d() * g1.d();
  return s;
}

void check_same_period(const DiscreteSS& g1, const DiscreteSS& g2) {
  if (std::abs(g1.sample_period() - g2.sample_period()) >
      1e-12 * std::max(g1.sample_period(), g2.sample_period())) {
    throw DimensionError("sample periods differ");
  }
}

}  // namespace

ContinuousSS series(const ContinuousSS& g1, const ContinuousSS& g2) {
  Blocks s = series_blocks(g1, g2);
  return ContinuousSS(std::move(s.a), std::move(s.b), std::move(s.c), std::move(s.d));
}

DiscreteSS series(const DiscreteSS& g1, const DiscreteSS& g2) {
  check_same_period(g1, g2);
  Blocks s = series_blocks(g1, g2);
  return DiscreteSS(std::move(s.a), std::move(s.b), std::move(s.c), std::move(s.d),
                    g1.sample_period());
}

DiscreteSS parallel(const DiscreteSS& g1, const DiscreteSS& g2, double sign) {
  check_same_period(g1, g2);
  if (g1.inputs() != g2.inputs() || g1.outputs() != g2.outputs()) {
    throw DimensionError("parallel: dimension mismatch");
  }
  const Eigen::Index n1 = g1.states(), n2 = g2.states();
  Matrix a = Matrix::Zero(n1 + n2, n1 + n2);
  a.topLeftCorner(n1, n1) = g1.a();
  a.bottomRightCorner(n2, n2) = g2.a();
  Matrix b(n1 + n2, g1.inputs());
  b << g1.b(), g2.b();
  Matrix c(g1.outputs(), n1 + n2);
  c << g1.c(), sign * g2.c();
  return DiscreteSS(a, b, c, g1.d() + sign * g2.d(), g1.sample_period());
}

DiscreteSS scale(const DiscreteSS& g, double alpha) {
  return DiscreteSS(g.a(), g.b(), alpha * g.c(), alpha * g.d(), g.sample_period());
}

DiscreteSS hstack(const DiscreteSS& g1, const DiscreteSS& g2) {
  check_same_period(g1, g2);
  if (g1.outputs() != g2.outputs()) throw DimensionError("hstack: output mismatch");
  const Eigen::Index n1 = g1.states(), n2 = g2.states();
  Matrix a = Matrix::Zero(n1 + n2, n1 + n2);
  a.topLeftCorner(n1, n1) = g1.a();
  a.bottomRightCorner(n2, n2) = g2.a();
  Matrix b = Matrix::Zero(n1 + n2, g1.inputs() + g2.inputs());
  b.topLeftCorner(n1, g1.inputs()) = g1.b();
  b.bottomRightCorner(n2, g2.inputs()) = g2.b();
  Matrix c(g1.outputs(), n1 + n2);
  c << g1.c(), g2.c();
  Matrix d(g1.outputs(), g1.inputs() + g2.inputs());
  d << g1.d(), g2.d();
  return DiscreteSS(a, b, c, d, g1.sample_period());
}

FrequencyResponse freq_response_at(const Realization& sys, Complex point) {
  FrequencyResponse out;
  out.value = sys.d().cast<Complex>();
  const Eigen::Index n = sys.states();
  if (n == 0) return out;
  CMatrix resolvent = point * CMatrix::Identity(n, n) - sys.a().cast<Complex>();
  Eigen::PartialPivLU<CMatrix> lu(resolvent);
  const double rcond = lu.rcond();
  out.ill_conditioned = !(rcond > 1e-13);
  out.value += sys.c().cast<Complex>() * lu.solve(sys.b().cast<Complex>());
  return out;
}

FrequencyResponse freq_response(const DiscreteSS& sys, double omega) {
  return freq_response_at(sys, std::polar(1.0, omega * sys.sample_period()));
}

std::vector<Complex> poles(const Realization& sys) {
  if (sys.states() == 0) return {};
  Eigen::EigenSolver<Matrix> es(sys.a(), false);
  if (es.info() != Eigen::Success) throw NumericalError("poles: eigenvalue solver failed");
  const auto& ev = es.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

std::vector<Complex> zeros(const Realization& sys) {
  if (!sys.is_siso()) throw UnsupportedError("zeros: SISO systems only");
  const Eigen::Index n = sys.states();
  Matrix m(n + 1, n + 1);
  m << sys.a(), sys.b(), sys.c(), sys.d();
  Matrix e = Matrix::Zero(n + 1, n + 1);
  e.topLeftCorner(n, n).setIdentity();
  if (n == 0) return {};
  CVector alphas;
  Vector betas;
  generalized_eigenvalues(m, e, &alphas, &betas);
  const double scale = std::max(1.0, m.norm());
  std::vector<Complex> out;
  for (Eigen::Index i = 0; i < n + 1; ++i) {
    const Complex alpha = alphas(i);
    const double beta = betas(i);
    if (std::abs(alpha) < 1e-13 * scale && std::abs(beta) < 1e-13) {
      throw NumericalError("zeros: degenerate (singular) system pencil");
    }
    if (std::abs(beta) > 1e-10 * std::abs(alpha) && std::abs(beta) > 1e-14 * scale) {
      out.push_back(alpha / beta);
    }
  }
  return out;
}

double spectral_radius(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) throw NumericalError("spectral_radius: eigen solver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stable(const DiscreteSS& sys) {
  return spectral_radius(sys.a()) < 1.0 - kStabilityTolerance;
}

bool is_stable(const ContinuousSS& sys) {
  if (sys.states() == 0) return true;
  Eigen::EigenSolver<Matrix> es(sys.a(), false);
  if (es.info() != Eigen::Success) throw NumericalError("is_stable: eigen solver failed");
  return es.eigenvalues().real().maxCoeff() < -kStabilityTolerance;
}

DiscreteSS minimal_realization(const DiscreteSS& sys, double tol) {
  const Matrix qc = orth_krylov(sys.a(), sys.b(), tol);
  const Matrix ac = qc.transpose() * sys.a() * qc;
  const Matrix bc = qc.transpose() * sys.b();
  const Matrix cc = sys.c() * qc;
  const Matrix qo = orth_krylov(ac.transpose(), cc.transpose(), tol);
  return DiscreteSS(qo.transpose() * ac * qo, qo.transpose() * bc, cc * qo, sys.d(),
                    sys.sample_period());
}

Matrix simulate(const DiscreteSS& sys, const Matrix& inputs) {
  if (inputs.rows() != sys.inputs()) throw DimensionError("simulate: input row count");
  const Eigen::Index steps = inputs.cols();
  Matrix out(sys.outputs(), steps);
  Vector x = Vector::Zero(sys.states());
  for (Eigen::Index k = 0; k < steps; ++k) {
    out.col(k) = sys.c() * x + sys.d() * inputs.col(k);
    x = sys.a() * x + sys.b() * inputs.col(k);
  }
  return out;
}

std::vector<double> impulse_response(const DiscreteSS& sys, std::size_t max_len, double tol) {
  if (!sys.is_siso()) throw UnsupportedError("impulse_response: SISO systems only");
  std::vector<double> h;
  h.reserve(std::min<std::size_t>(max_len, 4096));
  h.push_back(sys.d()(0, 0));
  Vector x = sys.b().col(0);
  const double cnorm = sys.c().norm();
  double peak = std::abs(h[0]);
  while (h.size() < max_len) {
    const double y = (sys.c() * x)(0, 0);
    h.push_back(y);
    peak = std::max(peak, std::abs(y));
    x = sys.a() * x;
    if (h.size() > static_cast<std::size_t>(sys.states()) + 1 &&
        cnorm * x.norm() <= tol * std::max(peak, 1e-300)) {
      break;
    }
  }
  return h;
}

}  // namespace sdrecon
