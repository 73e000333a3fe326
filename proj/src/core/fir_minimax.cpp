#include "fir_minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdrecon {

namespace {

struct GridPoint {
  double omega;
  CMatrix t11;  // e^{-j w m} F_N
  CMatrix t12;  // -P_N H
  CVector t21;  // (S F_N)^T, N entries
};

class Objective {
 public:
  Objective(std::vector<GridPoint> points, int taps, Eigen::Index outputs)
      : points_(std::move(points)), taps_(taps), outputs_(outputs) {}

  Eigen::Index dimension() const { return taps_ * outputs_; }

  // Per-point sigma_max; when grads is non-null, also d sigma / d c for each point.
  void sigmas(const Vector& c, std::vector<double>* sig, std::vector<Vector>* grads) const {
    sig->resize(points_.size());
    if (grads != nullptr) grads->assign(points_.size(), Vector::Zero(dimension()));
    for (std::size_t k = 0; k < points_.size(); ++k) {
      const GridPoint& g = points_[k];
      CVector kw = CVector::Zero(outputs_);
      for (int t = 0; t < taps_; ++t) {
        const Complex e = std::polar(1.0, -g.omega * t);
        for (Eigen::Index i = 0; i < outputs_; ++i) kw(i) += c(t * outputs_ + i) * e;
      }
      const CMatrix m = g.t11 + (g.t12 * kw) * g.t21.transpose();
      Eigen::SelfAdjointEigenSolver<CMatrix> es(m.adjoint() * m);
      const Eigen::Index top = es.eigenvalues().size() - 1;
      const double s = std::sqrt(std::max(0.0, es.eigenvalues()(top)));
      (*sig)[k] = s;
      if (grads == nullptr || s == 0.0) continue;
      const CVector v = es.eigenvectors().col(top);
      const CVector u = m * v / s;
      const CVector alpha = g.t12.adjoint() * u;  // conj(u^H a_i) per column
      const Complex beta = g.t21.cwiseProduct(v).sum();  // b v
      Vector& gr = (*grads)[k];
      for (int t = 0; t < taps_; ++t) {
        const Complex e = std::polar(1.0, -g.omega * t);
        for (Eigen::Index i = 0; i < outputs_; ++i) {
          gr(t * outputs_ + i) = (e * std::conj(alpha(i)) * beta).real();
        }
      }
    }
  }

  // Soft-max of the grid sigmas; returns the smoothed value, sets the true max.
  double smoothed(const Vector& c, double tau, double* max_value, Vector* grad) const {
    std::vector<double> sig;
    std::vector<Vector> grads;
    sigmas(c, &sig, grad != nullptr ? &grads : nullptr);
    const double top = *std::max_element(sig.begin(), sig.end());
    *max_value = top;
    double total = 0.0;
    std::vector<double> w(sig.size());
    for (std::size_t k = 0; k < sig.size(); ++k) {
      w[k] = std::exp((sig[k] - top) / tau);
      total += w[k];
    }
    if (grad != nullptr) {
      grad->setZero(dimension());
      for (std::size_t k = 0; k < sig.size(); ++k) *grad += (w[k] / total) * grads[k];
    }
    return top + tau * std::log(total);
  }

  // Least-squares start: minimize the sum over the grid of squared Frobenius norms.
  Vector least_squares_start() const {
    const Eigen::Index dim = dimension();
    Matrix normal = Matrix::Zero(dim, dim);
    Vector rhs = Vector::Zero(dim);
    for (const GridPoint& g : points_) {
      const Eigen::Index n = g.t11.size();
      CMatrix cols(n, dim);
      for (int t = 0; t < taps_; ++t) {
        const Complex e = std::polar(1.0, -g.omega * t);
        for (Eigen::Index i = 0; i < outputs_; ++i) {
          const CMatrix rank1 = e * g.t12.col(i) * g.t21.transpose();
          cols.col(t * outputs_ + i) = rank1.reshaped();
        }
      }
      const CMatrix t11 = g.t11;
      const CVector base = t11.reshaped();
      normal += (cols.adjoint() * cols).real();
      rhs -= (cols.adjoint() * base).real();
    }
    normal += 1e-12 * std::max(1.0, normal.diagonal().maxCoeff()) * Matrix::Identity(dim, dim);
    return normal.ldlt().solve(rhs);
  }

 private:
  std::vector<GridPoint> points_;
  int taps_;
  Eigen::Index outputs_;
};

}  // namespace

DiscreteSS fir_realization(const Matrix& coefficients, double sample_period) {
  const Eigen::Index taps = coefficients.cols();
  if (taps < 1) throw ParameterError("fir_realization: need at least one tap");
  const Eigen::Index n = taps - 1;
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) a(i, i - 1) = 1.0;
  Matrix b = Matrix::Zero(n, 1);
  if (n > 0) b(0, 0) = 1.0;
  return DiscreteSS(a, b, coefficients.rightCols(n), coefficients.leftCols(1), sample_period);
}

FirMinimaxResult fir_minimax(const DesignSpec& spec, int taps, const std::vector<double>& grid,
                             const FirMinimaxOptions& options) {
  if (taps < 1) throw ParameterError("fir_minimax: taps must be >= 1");
  if (grid.empty()) throw ParameterError("fir_minimax: empty frequency grid");
  const LiftedBlocks blk = lift_blocks(spec);
  const Eigen::Index ell = spec.upsample_L;
  const DiscreteSS reference_delay = lifted_delay(spec.fsfh_N, spec.total_delay(), spec.h);

  std::vector<GridPoint> points;
  points.reserve(grid.size());
  for (double w : grid) {
    const CMatrix fn = freq_response(blk.f_n, w).value;
    const CMatrix pn = freq_response(blk.p_n, w).value;
    const CMatrix delay = freq_response(reference_delay, w).value;
    const CMatrix t21 = blk.s_mat.cast<Complex>() * fn;
    points.push_back(GridPoint{w * spec.h, delay * fn, -pn * blk.h_mat.cast<Complex>(),
                               t21.transpose()});
  }
  const Objective obj(std::move(points), taps, ell);
  const Eigen::Index dim = obj.dimension();

  Vector c = obj.least_squares_start();
  double best_value = 0.0;
  obj.smoothed(c, 1.0, &best_value, nullptr);
  Vector best = c;
  {
    double zero_value = 0.0;
    obj.smoothed(Vector::Zero(dim), 1.0, &zero_value, nullptr);
    if (zero_value < best_value) {
      best_value = zero_value;
      best = c = Vector::Zero(dim);
    }
  }

  const int stages = std::max(1, static_cast<int>(std::ceil(
                                     std::log10(options.tau_start / options.tau_end) * 2.0)) + 1);
  const int per_stage = std::max(1, options.max_iterations / stages);
  int iterations = 0;
  bool converged = false;

  for (int stage = 0; stage < stages; ++stage) {
    const double frac = stages == 1 ? 1.0 : static_cast<double>(stage) / (stages - 1);
    const double tau_rel =
        options.tau_start * std::pow(options.tau_end / options.tau_start, frac);
    const double tau = std::max(tau_rel * best_value, 1e-300);
    Vector g;
    double top = 0.0;
    double f = obj.smoothed(c, tau, &top, &g);
    Matrix hinv = Matrix::Identity(dim, dim);
    bool scaled = false;
    bool stage_done = false;
    for (int it = 0; it < per_stage && iterations < options.max_iterations; ++it, ++iterations) {
      Vector d = -hinv * g;
      if (d.dot(g) >= 0.0) {
        hinv.setIdentity();
        scaled = false;
        d = -g;
      }
      if (!scaled) d *= 0.01 * std::max(f, 1e-12) / std::max(g.squaredNorm(), 1e-300);
      double step = 1.0;
      Vector cn, gn;
      double fn = 0.0, topn = 0.0;
      bool accepted = false;
      for (int ls = 0; ls < 40; ++ls) {
        cn = c + step * d;
        fn = obj.smoothed(cn, tau, &topn, &gn);
        if (fn <= f + 1e-4 * step * g.dot(d)) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        stage_done = true;
        break;
      }
      const Vector s = cn - c;
      const Vector y = gn - g;
      const double sy = s.dot(y);
      if (sy > 1e-300) {
        if (!scaled) {
          hinv *= sy / y.squaredNorm();
          scaled = true;
        }
        const double rho = 1.0 / sy;
        const Matrix ident = Matrix::Identity(dim, dim);
        hinv = (ident - rho * s * y.transpose()) * hinv * (ident - rho * y * s.transpose()) +
               rho * s * s.transpose();
      }
      const double progress = f - fn;
      c = cn;
      g = gn;
      f = fn;
      if (topn < best_value) {
        best_value = topn;
        best = c;
      }
      if (progress <= 1e-13 * std::max(f, 1e-300)) {
        stage_done = true;
        break;
      }
    }
    converged = stage_done;
  }

  Matrix coeff(ell, taps);
  for (int t = 0; t < taps; ++t) coeff.col(t) = best.segment(t * ell, ell);
  return FirMinimaxResult{fir_realization(coeff, spec.h), coeff, best_value, iterations, converged};
}

}  // namespace sdrecon
