#include "hinf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sdrecon {

namespace {

Matrix solve(const Matrix& lhs, const Matrix& rhs) { return lhs.partialPivLu().solve(rhs); }

Matrix inverse(const Matrix& m) { return solve(m, Matrix::Identity(m.rows(), m.cols())); }

// Reciprocal condition estimate via SVD; fine for the small blocks used here.
double rcond(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

CMatrix continuous_response(const ContinuousSS& sys, double omega) {
  return freq_response_at(sys, Complex(0.0, omega)).value;
}

// Frequencies w > 0 with j*w (numerically) an eigenvalue of the Hamiltonian.
std::vector<double> imaginary_crossings(const ContinuousSS& sys, double gamma) {
  const Matrix& a = sys.a();
  const Matrix& b = sys.b();
  const Matrix& c = sys.c();
  const Matrix& d = sys.d();
  const Eigen::Index n = a.rows();
  const Matrix r = gamma * gamma * Matrix::Identity(d.cols(), d.cols()) - d.transpose() * d;
  const Matrix r_inv = inverse(r);
  const Matrix ae = a + b * r_inv * d.transpose() * c;
  Matrix ham(2 * n, 2 * n);
  ham << ae, b * r_inv * b.transpose(),
      -c.transpose() * (Matrix::Identity(d.rows(), d.rows()) + d * r_inv * d.transpose()) * c,
      -ae.transpose();
  Eigen::EigenSolver<Matrix> es(ham, false);
  if (es.info() != Eigen::Success) throw NumericalError("hinf_norm: Hamiltonian eigensolver failed");
  const double scale = std::max(1.0, ham.cwiseAbs().maxCoeff());
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex lam = es.eigenvalues()(i);
    if (std::abs(lam.real()) < 1e-8 * scale * (1.0 + std::abs(lam)) && lam.imag() >= 0.0) {
      out.push_back(lam.imag());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Continuous generalized plant partition used internally by synthesis.
struct CPlant {
  Matrix a, b1, b2, c1, c2, d11, d12, d21, d22;
};

CPlant partition(const ContinuousSS& sys, const GeneralizedPlant& p) {
  const Eigen::Index nw = p.n_w(), nu = p.n_u(), ne = p.n_e(), ny = p.n_y();
  return CPlant{sys.a(),
                sys.b().leftCols(nw),
                sys.b().rightCols(nu),
                sys.c().topRows(ne),
                sys.c().bottomRows(ny),
                sys.d().topLeftCorner(ne, nw),
                sys.d().topRightCorner(ne, nu),
                sys.d().bottomLeftCorner(ny, nw),
                sys.d().bottomRightCorner(ny, nu)};
}

struct Riccati {
  Matrix x;
  bool ok = false;
  std::string reason;
};

Riccati solve_hamiltonian(const Matrix& ham) {
  const Eigen::Index n = ham.rows() / 2;
  int count = 0;
  CVector eig;
  const Matrix basis = stable_invariant_subspace(ham, true, &count, &eig);
  Riccati out;
  const double scale = std::max(1.0, ham.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (std::abs(eig(i).real()) < 1e-10 * scale) {
      out.reason = "Hamiltonian has eigenvalues on the imaginary axis";
      return out;
    }
  }
  if (count != n) {
    out.reason = "stable subspace has wrong dimension";
    return out;
  }
  const Matrix x1 = basis.topRows(n);
  const Matrix x2 = basis.bottomRows(n);
  if (rcond(x1) < 1e-12) {
    out.reason = "Riccati solution does not exist (X1 singular)";
    return out;
  }
  const Matrix x = solve(x1.transpose(), x2.transpose()).transpose();
  out.x = 0.5 * (x + x.transpose());
  out.ok = true;
  return out;
}

bool positive_semidefinite(const Matrix& x) {
  if (x.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() >= -1e-8 * scale;
}

// Cholesky-like factor: returns M with M M^T = s (s symmetric positive definite).
Matrix spd_factor(const Matrix& s) {
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) throw NumericalError("synthesize: factorization failed");
  return llt.matrixL();
}

// Orthogonal Q with Q^T m = [0; R], R square upper triangular (m tall, full column rank).
void tall_normalizer(const Matrix& m, Matrix* theta, Matrix* r) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::HouseholderQR<Matrix> qr(m);
  const Matrix q = qr.householderQ() * Matrix::Identity(rows, rows);
  Matrix reordered(rows, rows);
  reordered << q.rightCols(rows - cols), q.leftCols(cols);
  *theta = reordered;
  *r = q.leftCols(cols).transpose() * m;
}

struct CentralController {
  std::optional<ContinuousSS> k;
  std::string reason;
};

// General-case central controller for a plant already normalized to
// D12 = [0; I], D21 = [0, I], D22 = 0.
CentralController central_controller(const CPlant& p, double gamma) {
  const Eigen::Index n = p.a.rows();
  const Eigen::Index m1 = p.b1.cols(), m2 = p.b2.cols();
  const Eigen::Index p1 = p.c1.rows(), p2 = p.c2.rows();
  const double g2 = gamma * gamma;
  CentralController out;

  const Matrix d1111 = p.d11.topLeftCorner(p1 - m2, m1 - p2);
  const Matrix d1112 = p.d11.topRightCorner(p1 - m2, p2);
  const Matrix d1121 = p.d11.bottomLeftCorner(m2, m1 - p2);
  const Matrix d1122 = p.d11.bottomRightCorner(m2, p2);
  Matrix row_block(p1 - m2, m1);
  row_block << d1111, d1112;
  Matrix col_block(p1, m1 - p2);
  col_block << d1111, d1121;
  if (gamma <= std::max(sigma_max(row_block), sigma_max(col_block)) * (1.0 + 1e-12)) {
    out.reason = "gamma below feedthrough bound";
    return out;
  }

  Matrix b(n, m1 + m2);
  b << p.b1, p.b2;
  Matrix c(p1 + p2, n);
  c << p.c1, p.c2;
  Matrix d1dot(p1, m1 + m2);
  d1dot << p.d11, p.d12;
  Matrix ddot1(p1 + p2, m1);
  ddot1 << p.d11, p.d21;

  Matrix r = d1dot.transpose() * d1dot;
  r.topLeftCorner(m1, m1) -= g2 * Matrix::Identity(m1, m1);
  Matrix rt = ddot1 * ddot1.transpose();
  rt.topLeftCorner(p1, p1) -= g2 * Matrix::Identity(p1, p1);
  const Matrix r_inv = inverse(r);
  const Matrix rt_inv = inverse(rt);

  Matrix hx(2 * n, 2 * n);
  {
    const Matrix a11 = p.a - b * r_inv * d1dot.transpose() * p.c1;
    hx << a11, -b * r_inv * b.transpose(),
        -p.c1.transpose() * p.c1 + p.c1.transpose() * d1dot * r_inv * d1dot.transpose() * p.c1,
        -a11.transpose();
  }
  Matrix jy(2 * n, 2 * n);
  {
    const Matrix a11 = p.a.transpose() - c.transpose() * rt_inv * ddot1 * p.b1.transpose();
    jy << a11, -c.transpose() * rt_inv * c,
        -p.b1 * p.b1.transpose() + p.b1 * ddot1.transpose() * rt_inv * ddot1 * p.b1.transpose(),
        -a11.transpose();
  }
  const Riccati rx = solve_hamiltonian(hx);
  if (!rx.ok) {
    out.reason = "X: " + rx.reason;
    return out;
  }
  const Riccati ry = solve_hamiltonian(jy);
  if (!ry.ok) {
    out.reason = "Y: " + ry.reason;
    return out;
  }
  if (!positive_semidefinite(rx.x) || !positive_semidefinite(ry.x)) {
    out.reason = "Riccati solution not positive semidefinite";
    return out;
  }
  const Matrix xy = rx.x * ry.x;
  if (n > 0) {
    Eigen::EigenSolver<Matrix> es(xy, false);
    if (es.eigenvalues().cwiseAbs().maxCoeff() >= g2) {
      out.reason = "spectral radius condition violated";
      return out;
    }
  }

  const Matrix f = -r_inv * (d1dot.transpose() * p.c1 + b.transpose() * rx.x);
  const Matrix l = -(p.b1 * ddot1.transpose() + ry.x * c.transpose()) * rt_inv;
  const Matrix f12 = f.middleRows(m1 - p2, p2);
  const Matrix f2 = f.bottomRows(m2);
  const Matrix l12 = l.middleCols(p1 - m2, m2);
  const Matrix l2 = l.rightCols(p2);
  const Matrix z = inverse(Matrix::Identity(n, n) - ry.x * rx.x / g2);

  const Matrix g_row = inverse(g2 * Matrix::Identity(p1 - m2, p1 - m2) - d1111 * d1111.transpose());
  const Matrix g_col = inverse(g2 * Matrix::Identity(m1 - p2, m1 - p2) - d1111.transpose() * d1111);
  const Matrix dh11 = -d1121 * d1111.transpose() * g_row * d1112 - d1122;
  const Matrix dh12 = spd_factor(Matrix::Identity(m2, m2) - d1121 * g_col * d1121.transpose());
  const Matrix dh21 =
      spd_factor(Matrix::Identity(p2, p2) - d1112.transpose() * g_row * d1112).transpose();

  const Matrix bh2 = z * (p.b2 + l12) * dh12;
  const Matrix ch2 = -dh21 * (p.c2 + f12);
  const Matrix bh1 = -z * l2 + bh2 * solve(dh12, dh11);
  const Matrix ch1 = f2 + dh11 * solve(dh21, ch2);
  const Matrix ah = p.a + b * f + bh1 * solve(dh21, ch2);
  if (!all_finite(ah) || !all_finite(bh1) || !all_finite(ch1)) {
    out.reason = "controller has non-finite entries";
    return out;
  }
  out.k = ContinuousSS(ah, bh1, ch1, dh11);
  return out;
}

}  // namespace

ContinuousSS bilinear_to_continuous(const DiscreteSS& sys, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("bilinear: alpha must be positive");
  const Eigen::Index n = sys.states();
  const Matrix ap = sys.a() + Matrix::Identity(n, n);
  if (n > 0 && rcond(ap) < 1e-13) throw NumericalError("bilinear: pole at z = -1");
  const double k = std::sqrt(2.0 * alpha);
  const Matrix inv = inverse(ap);
  return ContinuousSS(alpha * inv * (sys.a() - Matrix::Identity(n, n)), k * inv * sys.b(),
                      k * sys.c() * inv, sys.d() - sys.c() * inv * sys.b());
}

DiscreteSS bilinear_to_discrete(const ContinuousSS& sys, double sample_period, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("bilinear: alpha must be positive");
  const Eigen::Index n = sys.states();
  const Matrix am = alpha * Matrix::Identity(n, n) - sys.a();
  if (n > 0 && rcond(am) < 1e-13) throw NumericalError("bilinear: pole at s = alpha");
  const double k = std::sqrt(2.0 * alpha);
  const Matrix inv = inverse(am);
  return DiscreteSS((alpha * Matrix::Identity(n, n) + sys.a()) * inv, k * inv * sys.b(),
                    k * sys.c() * inv, sys.d() + sys.c() * inv * sys.b(), sample_period);
}

double hinf_norm(const ContinuousSS& sys, double tol, double* peak_frequency) {
  if (!(tol > 0.0)) throw ParameterError("hinf_norm: tol must be positive");
  if (!is_stable(sys)) throw ParameterError("hinf_norm: system is not stable");
  double peak = sigma_max(sys.d());
  double where = std::numeric_limits<double>::infinity();
  if (sys.states() > 0) {
    // Coarse log grid around the pole magnitudes for the starting bound.
    Eigen::EigenSolver<Matrix> es(sys.a(), false);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double mag = std::abs(es.eigenvalues()(i));
      if (mag > 0.0) {
        lo = std::min(lo, mag);
        hi = std::max(hi, mag);
      }
    }
    if (!std::isfinite(lo)) lo = hi = 1.0;
    const double wlo = std::log10(lo) - 2.0, whi = std::log10(hi) + 2.0;
    const int count = 200;
    for (int i = 0; i <= count; ++i) {
      const double w = std::pow(10.0, wlo + (whi - wlo) * i / count);
      const double g = sigma_max(continuous_response(sys, w));
      if (g > peak) {
        peak = g;
        where = w;
      }
    }
    const double g0 = sigma_max(continuous_response(sys, 0.0));
    if (g0 > peak) {
      peak = g0;
      where = 0.0;
    }
  }
  if (peak == 0.0 || sys.states() == 0) {
    if (peak_frequency != nullptr) *peak_frequency = where;
    return peak;
  }
  for (int iter = 0; iter < 100; ++iter) {
    const double gamma = peak * (1.0 + 2.0 * tol);
    const std::vector<double> cross = imaginary_crossings(sys, gamma);
    if (cross.empty()) break;
    std::vector<double> probes;
    if (cross.size() == 1) {
      probes.push_back(cross[0]);
    } else {
      for (std::size_t i = 0; i + 1 < cross.size(); ++i) {
        probes.push_back(cross[i] > 0.0 ? std::sqrt(cross[i] * cross[i + 1])
                                        : 0.5 * (cross[i] + cross[i + 1]));
      }
    }
    bool improved = false;
    for (double w : probes) {
      const double g = sigma_max(continuous_response(sys, w));
      if (g > peak) {
        peak = g;
        where = w;
        improved = true;
      }
    }
    if (!improved) break;
  }
  if (peak_frequency != nullptr) *peak_frequency = where;
  return peak * (1.0 + tol);
}

double hinf_norm(const DiscreteSS& sys, double tol, double* peak_frequency) {
  if (!is_stable(sys)) throw ParameterError("hinf_norm: system is not stable");
  const ContinuousSS cont = bilinear_to_continuous(sys, 1.0);
  double wc = 0.0;
  double peak = hinf_norm(cont, tol, &wc);
  double theta = std::isfinite(wc) ? 2.0 * std::atan(wc) : std::numbers::pi;
  // A direct unit-circle grid guards against crossings lost to round-off.
  const int count = 512;
  for (int i = 0; i <= count; ++i) {
    const double th = std::numbers::pi * i / count;
    const double g = sigma_max(freq_response_at(sys, std::polar(1.0, th)).value) * (1.0 + tol);
    if (g > peak) {
      peak = g;
      theta = th;
    }
  }
  if (peak_frequency != nullptr) *peak_frequency = theta / sys.sample_period();
  return peak;
}

double pointwise_lower_bound(const GeneralizedPlant& plant, const std::vector<double>& grid) {
  const DiscreteSS& sys = plant.system();
  const Eigen::Index nw = plant.n_w(), nu = plant.n_u(), ne = plant.n_e(), ny = plant.n_y();
  double bound = 0.0;
  for (double w : grid) {
    const CMatrix g = freq_response(sys, w).value;
    const CMatrix p11 = g.topLeftCorner(ne, nw);
    const CMatrix p12 = g.topRightCorner(ne, nu);
    const CMatrix p21 = g.bottomLeftCorner(ny, nw);
    // Project P11 onto the orthogonal complements of range(P12) and range(P21^H).
    Eigen::JacobiSVD<CMatrix> s12(p12, Eigen::ComputeFullU);
    Eigen::JacobiSVD<CMatrix> s21(p21, Eigen::ComputeFullV);
    const double tol12 = 1e-10 * std::max(1.0, s12.singularValues().size() ? s12.singularValues()(0) : 0.0);
    const double tol21 = 1e-10 * std::max(1.0, s21.singularValues().size() ? s21.singularValues()(0) : 0.0);
    Eigen::Index r12 = 0, r21 = 0;
    for (Eigen::Index i = 0; i < s12.singularValues().size(); ++i) r12 += s12.singularValues()(i) > tol12;
    for (Eigen::Index i = 0; i < s21.singularValues().size(); ++i) r21 += s21.singularValues()(i) > tol21;
    const CMatrix u_perp = s12.matrixU().rightCols(ne - r12);
    const CMatrix v_perp = s21.matrixV().rightCols(nw - r21);
    bound = std::max(bound, sigma_max(CMatrix(u_perp.adjoint() * p11)));
    bound = std::max(bound, sigma_max(CMatrix(p11 * v_perp)));
  }
  return bound;
}

SynthesisAttempt synthesize(const GeneralizedPlant& plant, double gamma) {
  if (!(gamma > 0.0)) throw ParameterError("synthesize: gamma must be positive");
  const DiscreteSS& sys = plant.system();
  if (!is_stable(sys)) throw ParameterError("synthesize: plant must be open-loop stable");
  SynthesisAttempt result;

  const ContinuousSS cont = bilinear_to_continuous(sys, 1.0);
  CPlant p = partition(cont, plant);
  const Eigen::Index n = p.a.rows();

  // Rank conditions; augment with epsilon channels when they fail.
  const double plant_scale =
      std::max({1.0, p.a.cwiseAbs().maxCoeff(), p.b1.size() ? p.b1.cwiseAbs().maxCoeff() : 0.0,
                p.c1.size() ? p.c1.cwiseAbs().maxCoeff() : 0.0});
  const double eps = 1e-8 * plant_scale;
  auto min_sv = [](const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
  };
  const Eigen::Index m2 = p.b2.cols(), p2 = p.c2.rows();
  if (p.d12.rows() < m2 || min_sv(p.d12) < eps) {
    const Eigen::Index extra = m2;
    Matrix c1(p.c1.rows() + extra, n);
    c1 << p.c1, Matrix::Zero(extra, n);
    Matrix d11(p.d11.rows() + extra, p.d11.cols());
    d11 << p.d11, Matrix::Zero(extra, p.d11.cols());
    Matrix d12(p.d12.rows() + extra, m2);
    d12 << p.d12, eps * Matrix::Identity(extra, m2);
    p.c1 = c1;
    p.d11 = d11;
    p.d12 = d12;
    result.regularized = true;
  }
  if (p.d21.cols() < p2 || min_sv(p.d21) < eps) {
    const Eigen::Index extra = p2;
    Matrix b1(n, p.b1.cols() + extra);
    b1 << p.b1, Matrix::Zero(n, extra);
    Matrix d11(p.d11.rows(), p.d11.cols() + extra);
    d11 << p.d11, Matrix::Zero(p.d11.rows(), extra);
    Matrix d21(p2, p.d21.cols() + extra);
    d21 << p.d21, eps * Matrix::Identity(p2, extra);
    p.b1 = b1;
    p.d11 = d11;
    p.d21 = d21;
    result.regularized = true;
  }

  // Normalize D12 -> [0; I] and D21 -> [0, I].
  Matrix theta, r12;
  tall_normalizer(p.d12, &theta, &r12);
  Matrix psi, r21t;
  tall_normalizer(p.d21.transpose(), &psi, &r21t);
  const Matrix r21 = r21t.transpose();
  const Matrix r12_inv = inverse(r12);
  const Matrix r21_inv = inverse(r21);

  CPlant q;
  q.a = p.a;
  q.b1 = p.b1 * psi;
  q.b2 = p.b2 * r12_inv;
  q.c1 = theta.transpose() * p.c1;
  q.c2 = r21_inv * p.c2;
  q.d11 = theta.transpose() * p.d11 * psi;
  q.d12 = theta.transpose() * p.d12 * r12_inv;
  q.d21 = r21_inv * p.d21 * psi;
  q.d22 = Matrix::Zero(p2, m2);
  const Matrix d22n = r21_inv * p.d22 * r12_inv;

  CentralController cc = central_controller(q, gamma);
  if (!cc.k) {
    result.reason = cc.reason;
    return result;
  }
  // Undo the D22 removal: K = (I + K' D22)^-1 K'.
  const ContinuousSS& kp = *cc.k;
  const Matrix mm = inverse(Matrix::Identity(m2, m2) + kp.d() * d22n);
  const Matrix ak = kp.a() - kp.b() * d22n * mm * kp.c();
  const Matrix bk = kp.b() * (Matrix::Identity(p2, p2) - d22n * mm * kp.d());
  const Matrix ck = mm * kp.c();
  const Matrix dk = mm * kp.d();
  // Undo the input/output scalings.
  const ContinuousSS kc(ak, bk * r21_inv, r12_inv * ck, r12_inv * dk * r21_inv);
  try {
    result.controller = bilinear_to_discrete(kc, sys.sample_period(), 1.0);
  } catch (const NumericalError& e) {
    result.reason = e.what();
  }
  return result;
}

SynthesisResult gamma_iterate(const GeneralizedPlant& plant, double rel_tol) {
  if (!(rel_tol > 0.0)) throw ParameterError("gamma_iterate: rel_tol must be positive");
  const DiscreteSS& sys = plant.system();
  const double h = sys.sample_period();
  const DiscreteSS open_loop(sys.a(), sys.b().leftCols(plant.n_w()), sys.c().topRows(plant.n_e()),
                             sys.d().topLeftCorner(plant.n_e(), plant.n_w()), h);
  const DiscreteSS zero_k = DiscreteSS::gain(Matrix::Zero(plant.n_u(), plant.n_y()), h);
  const double open_norm = hinf_norm(open_loop, 1e-8);
  const double coupling = sigma_max(Matrix(sys.b().rightCols(plant.n_u()))) +
                          sigma_max(Matrix(sys.d().topRightCorner(plant.n_e(), plant.n_u())));
  if (open_norm < 1e-14 && coupling < 1e-14) {
    return SynthesisResult{zero_k, rel_tol, 0.0, 0, false};
  }

  const std::vector<double> grid = frequency_grid(h, 256);
  double lower = pointwise_lower_bound(plant, grid);
  double upper = std::max(open_norm, lower) * 1.01;
  const double cap = 1e6 * std::max(open_norm, 1e-300);
  int iterations = 0;

  auto verified = [&](double gamma, std::optional<DiscreteSS>* out, bool* reg) {
    ++iterations;
    SynthesisAttempt att = synthesize(plant, gamma);
    if (!att.controller || !is_stable(*att.controller)) return false;
    const DiscreteSS cl = close_loop(plant, *att.controller);
    if (!is_stable(cl)) return false;
    if (hinf_norm(cl, 1e-7) > gamma) return false;
    *out = std::move(att.controller);
    *reg = att.regularized;
    return true;
  };

  std::optional<DiscreteSS> best;
  bool regularized = false;
  while (!verified(upper, &best, &regularized)) {
    lower = std::max(lower, upper);
    upper *= 2.0;
    if (upper > cap) throw NumericalError("gamma_iterate: no feasible gamma below cap");
  }
  while ((upper - lower) / std::max(lower, 1e-300) > rel_tol && iterations < 200) {
    const double mid = 0.5 * (lower + upper);
    std::optional<DiscreteSS> k;
    bool reg = false;
    if (verified(mid, &k, &reg)) {
      upper = mid;
      best = std::move(k);
      regularized = reg;
    } else {
      lower = mid;
    }
  }
  return SynthesisResult{*best, upper, lower, iterations, regularized};
}

}  // namespace sdrecon
