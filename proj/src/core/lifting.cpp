#include "lifting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sdrecon {

namespace {

Matrix matrix_power(const Matrix& a, int k) {
  Matrix out = Matrix::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) out = a * out;
  return out;
}

}  // namespace

void DesignSpec::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("spec: h must be positive");
  if (upsample_L < 1) throw ParameterError("spec: upsample_L must be >= 1");
  if (delay_m < 0) throw ParameterError("spec: delay_m must be >= 0");
  if (fsfh_N < 1 || fsfh_N % upsample_L != 0) {
    throw ParameterError("spec: fsfh_N must be a positive multiple of upsample_L");
  }
  if (delay_sub < 0 || delay_sub >= fsfh_N) {
    throw ParameterError("spec: delay_sub must lie in [0, fsfh_N)");
  }
  if (!f_model.is_siso() || !p_model.is_siso()) {
    throw ParameterError("spec: F and P must be single-input single-output");
  }
  if (f_model.d().cwiseAbs().maxCoeff() != 0.0) {
    throw ParameterError("spec: F must be strictly proper (d = 0)");
  }
}

GeneralizedPlant::GeneralizedPlant(DiscreteSS system, Eigen::Index n_w, Eigen::Index n_u,
                                   Eigen::Index n_e, Eigen::Index n_y)
    : system_(std::move(system)), n_w_(n_w), n_u_(n_u), n_e_(n_e), n_y_(n_y) {
  if (n_w < 0 || n_u < 0 || n_e < 0 || n_y < 0 || system_.inputs() != n_w + n_u ||
      system_.outputs() != n_e + n_y) {
    throw DimensionError("generalized plant partition does not match system dimensions");
  }
}

DiscreteSS fsfh_lift(const ContinuousSS& sys, double h, int n) {
  if (n < 1) throw ParameterError("fsfh_lift: N must be >= 1");
  if (!(h > 0.0)) throw ParameterError("fsfh_lift: h must be positive");
  const DiscreteSS fast = c2d_step_invariant(sys, h / n);
  const Eigen::Index ns = sys.states(), ni = sys.inputs(), no = sys.outputs();
  const Eigen::Index nn = n;

  // powers[k] = A^k
  std::vector<Matrix> powers(static_cast<std::size_t>(n) + 1);
  powers[0] = Matrix::Identity(ns, ns);
  for (int k = 1; k <= n; ++k) powers[k] = fast.a() * powers[k - 1];

  Matrix b(ns, nn * ni);
  for (int j = 0; j < n; ++j) b.middleCols(j * ni, ni) = powers[n - 1 - j] * fast.b();
  Matrix c(nn * no, ns);
  for (int i = 0; i < n; ++i) c.middleRows(i * no, no) = fast.c() * powers[i];
  Matrix d = Matrix::Zero(nn * no, nn * ni);
  for (int i = 0; i < n; ++i) {
    d.block(i * no, i * ni, no, ni) = fast.d();
    for (int j = 0; j < i; ++j) {
      d.block(i * no, j * ni, no, ni) = fast.c() * powers[i - 1 - j] * fast.b();
    }
  }
  return DiscreteSS(powers[n], b, c, d, h);
}

LiftedBlocks lift_blocks(const DesignSpec& spec) {
  spec.validate();
  const int n = spec.fsfh_N, l = spec.hold_length();
  Matrix h_mat = Matrix::Zero(n, spec.upsample_L);
  for (int j = 0; j < spec.upsample_L; ++j) h_mat.block(j * l, j, l, 1).setOnes();
  Matrix s_mat = Matrix::Zero(1, n);
  s_mat(0, 0) = 1.0;
  return LiftedBlocks{fsfh_lift(spec.f_model, spec.h, n), fsfh_lift(spec.p_model, spec.h, n),
                      std::move(h_mat), std::move(s_mat)};
}

DiscreteSS polyphase_decompose(const DiscreteSS& k, int upsample) {
  if (upsample < 1) throw ParameterError("polyphase_decompose: L must be >= 1");
  if (k.inputs() != 1) throw DimensionError("polyphase_decompose: filter must be single-input");
  const Eigen::Index ns = k.states(), no = k.outputs();
  // Over one slow period the input is nonzero only at the first fast tick.
  Matrix c(upsample * no, ns);
  Matrix d(upsample * no, 1);
  Matrix power = Matrix::Identity(ns, ns);  // A^i
  for (int i = 0; i < upsample; ++i) {
    c.middleRows(i * no, no) = k.c() * power;
    if (i == 0) {
      d.topRows(no) = k.d();
    } else {
      d.middleRows(i * no, no) = k.c() * matrix_power(k.a(), i - 1) * k.b();
    }
    power = k.a() * power;
  }
  return DiscreteSS(power, matrix_power(k.a(), upsample - 1) * k.b(), c, d,
                    k.sample_period() * upsample);
}

DiscreteSS polyphase_recompose(const DiscreteSS& k_tilde, int upsample) {
  if (upsample < 1) throw ParameterError("polyphase_recompose: L must be >= 1");
  if (k_tilde.inputs() != 1 || k_tilde.outputs() != upsample) {
    throw DimensionError("polyphase_recompose: expected 1 input and L outputs");
  }
  const Eigen::Index n = k_tilde.states();
  const Eigen::Index big = n * upsample;
  const Eigen::Index chain = upsample - 1;
  const Eigen::Index total = big + chain;

  // Kt(z^L): cyclic shift of L copies of the slow state with Ã closing the
  // loop; v = C̃ x^(L) + D̃ u is the L-vector of branch outputs.
  Matrix a = Matrix::Zero(total, total);
  if (n > 0) {
    a.block(0, (upsample - 1) * n, n, n) = k_tilde.a();
    for (int j = 1; j < upsample; ++j) a.block(j * n, (j - 1) * n, n, n).setIdentity();
  }
  Matrix b = Matrix::Zero(total, 1);
  b.topRows(n) = k_tilde.b();

  // Horner delay line y = v0 + z^-1 (v1 + z^-1 (v2 + ...)), states s_1..s_{L-1}.
  Matrix v_of_x = Matrix::Zero(upsample, big);
  if (n > 0) v_of_x.rightCols(n) = k_tilde.c();
  const Matrix& v_of_u = k_tilde.d();
  for (Eigen::Index j = 1; j <= chain; ++j) {
    const Eigen::Index row = big + j - 1;
    a.block(row, 0, 1, big) = v_of_x.row(j);
    b(row, 0) = v_of_u(j, 0);
    if (j < chain) a(row, row + 1) = 1.0;
  }
  Matrix c = Matrix::Zero(1, total);
  c.leftCols(big) = v_of_x.row(0);
  if (chain > 0) c(0, big) = 1.0;
  Matrix d = v_of_u.topRows(1);
  return DiscreteSS(a, b, c, d, k_tilde.sample_period() / upsample);
}

DiscreteSS lifted_delay(int n, long delay, double h) {
  if (n < 1 || delay < 0) throw ParameterError("lifted_delay: bad dimensions");
  // With u = [q; v] the window w[kn - delay .. kn + n - 1], the output is
  // u[0 .. n) and the next state is u[n .. n + delay).
  const Eigen::Index nd = delay, nn = n;
  const Matrix sel = Matrix::Identity(nd + nn, nd + nn);
  const Matrix next = sel.middleRows(nn, nd);
  const Matrix out = sel.topRows(nn);
  return DiscreteSS(next.leftCols(nd), next.rightCols(nn), out.leftCols(nd), out.rightCols(nn), h);
}

GeneralizedPlant assemble_plant(const DesignSpec& spec) {
  spec.validate();
  const LiftedBlocks blk = lift_blocks(spec);
  const DiscreteSS& f = blk.f_n;
  const DiscreteSS& p = blk.p_n;
  const DiscreteSS del = lifted_delay(spec.fsfh_N, spec.total_delay(), spec.h);
  const Eigen::Index n = spec.fsfh_N, ell = spec.upsample_L;
  const Eigen::Index nf = f.states(), nd = del.states(), np = p.states();
  const Eigen::Index nx = nf + nd + np;

  Matrix a = Matrix::Zero(nx, nx);
  Matrix b = Matrix::Zero(nx, n + ell);
  Matrix c = Matrix::Zero(n + 1, nx);
  Matrix d = Matrix::Zero(n + 1, n + ell);

  a.topLeftCorner(nf, nf) = f.a();
  b.topLeftCorner(nf, n) = f.b();
  // the delay line is driven by the lifted F output
  a.block(nf, 0, nd, nf) = del.b() * f.c();
  a.block(nf, nf, nd, nd) = del.a();
  b.block(nf, 0, nd, n) = del.b() * f.d();
  c.topLeftCorner(n, nf) = del.d() * f.c();
  c.block(0, nf, n, nd) = del.c();
  d.topLeftCorner(n, n) = del.d() * f.d();

  a.bottomRightCorner(np, np) = p.a();
  b.block(nf + nd, n, np, ell) = p.b() * blk.h_mat;
  c.block(0, nf + nd, n, np) = -p.c();
  d.block(0, n, n, ell) = -p.d() * blk.h_mat;
  c.block(n, 0, 1, nf) = blk.s_mat * f.c();
  d.block(n, 0, 1, n) = blk.s_mat * f.d();

  return GeneralizedPlant(DiscreteSS(a, b, c, d, spec.h), n, ell, n, 1);
}

DiscreteSS close_loop(const GeneralizedPlant& plant, const DiscreteSS& k) {
  if (k.inputs() != plant.n_y() || k.outputs() != plant.n_u()) {
    throw DimensionError("close_loop: controller dimensions do not match plant partition");
  }
  if (std::abs(k.sample_period() - plant.system().sample_period()) >
      1e-12 * plant.system().sample_period()) {
    throw DimensionError("close_loop: sample period mismatch");
  }
  const Matrix a = plant.a(), b1 = plant.b1(), b2 = plant.b2();
  const Matrix c1 = plant.c1(), c2 = plant.c2();
  const Matrix d11 = plant.d11(), d12 = plant.d12(), d21 = plant.d21(), d22 = plant.d22();
  const Eigen::Index nx = a.rows(), nk = k.states();

  const Matrix m_inv =
      (Matrix::Identity(plant.n_u(), plant.n_u()) - k.d() * d22).partialPivLu().solve(
          Matrix::Identity(plant.n_u(), plant.n_u()));
  // u = Ux x + Uk xi + Uw w
  const Matrix ux = m_inv * k.d() * c2;
  const Matrix uk = m_inv * k.c();
  const Matrix uw = m_inv * k.d() * d21;
  // y = Yx x + Yk xi + Yw w
  const Matrix yx = c2 + d22 * ux;
  const Matrix yk = d22 * uk;
  const Matrix yw = d21 + d22 * uw;

  Matrix acl(nx + nk, nx + nk);
  acl << a + b2 * ux, b2 * uk, k.b() * yx, k.a() + k.b() * yk;
  Matrix bcl(nx + nk, plant.n_w());
  bcl << b1 + b2 * uw, k.b() * yw;
  Matrix ccl(plant.n_e(), nx + nk);
  ccl << c1 + d12 * ux, d12 * uk;
  const Matrix dcl = d11 + d12 * uw;
  return DiscreteSS(acl, bcl, ccl, dcl, plant.system().sample_period());
}

std::vector<double> error_system_gain(const DesignSpec& spec, const DiscreteSS& k_tilde,
                                      const std::vector<double>& omega_grid) {
  if (!is_stable(k_tilde)) throw ParameterError("error_system_gain: filter is not stable");
  const GeneralizedPlant plant = assemble_plant(spec);
  const DiscreteSS closed = close_loop(plant, k_tilde);
  std::vector<double> gains(omega_grid.size());
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    gains[i] = sigma_max(freq_response(closed, omega_grid[i]).value);
  }
  return gains;
}

std::vector<double> frequency_grid(double h, int points) {
  if (points < 2) throw ParameterError("frequency_grid: need at least two points");
  const double top = std::numbers::pi / h;
  const int n_lin = points / 2 + 1;
  const int n_log = points - n_lin;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < n_lin; ++i) grid.push_back(top * i / (n_lin - 1));
  const double lo = std::log10(top * 1e-4), hi = std::log10(top);
  for (int i = 0; i < n_log; ++i) {
    grid.push_back(std::pow(10.0, lo + (hi - lo) * (i + 0.5) / n_log));
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

}  // namespace sdrecon
