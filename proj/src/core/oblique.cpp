#include "oblique.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sdrecon {

namespace {

constexpr double kUnitCircleTolerance = 1e-9;

std::vector<double> strip(std::vector<double> p) {
  std::size_t first = 0;
  while (first + 1 < p.size() && p[first] == 0.0) ++first;
  p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(first));
  return p;
}

std::vector<double> localization(const ContinuousSS& sys) {
  std::vector<Complex> roots;
  for (const Complex& a : poles(sys)) roots.push_back(std::exp(a));
  return poly_from_roots(roots);
}

// Descending-power long division: num = q * den + r, deg r < deg den.
void poly_divide(const std::vector<double>& num, const std::vector<double>& den,
                 std::vector<double>* q, std::vector<double>* r) {
  const std::size_t nd = den.size();
  if (num.size() < nd) {
    *q = {0.0};
    *r = num;
    return;
  }
  std::vector<double> rem = num;
  q->assign(num.size() - nd + 1, 0.0);
  for (std::size_t i = 0; i < q->size(); ++i) {
    const double coef = rem[i] / den[0];
    (*q)[i] = coef;
    for (std::size_t j = 0; j < nd; ++j) rem[i + j] -= coef * den[j];
  }
  r->assign(rem.end() - static_cast<std::ptrdiff_t>(nd - 1), rem.end());
}

double dominant_zero_magnitude(const ContinuousSS& fa, const ContinuousSS& p, Complex* which) {
  const DiscreteSS hd = c2d_step_invariant(series(fa, p), 1.0);
  const std::vector<Complex> z = zeros(hd);
  if (z.empty()) {
    if (which != nullptr) *which = Complex(0.0, 0.0);
    return 0.0;
  }
  const auto it = std::max_element(z.begin(), z.end(),
                                   [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  if (which != nullptr) *which = *it;
  return std::abs(*it);
}

}  // namespace

ConsistentFilter consistent_filter(const ContinuousSS& fa, const ContinuousSS& p) {
  if (!fa.is_siso() || !p.is_siso()) throw UnsupportedError("consistent_filter: SISO only");
  const DiscreteSS hd_ss = c2d_step_invariant(series(fa, p), 1.0);
  const RationalTF hd = to_tf(hd_ss);
  const std::vector<double> num = strip(hd.num);
  if (std::all_of(num.begin(), num.end(), [](double c) { return c == 0.0; })) {
    throw NumericalError("consistent_filter: discretized system is identically zero");
  }
  ConsistentFilter out;
  out.h_d = hd;
  std::vector<double> kden = num;
  kden.push_back(0.0);
  out.k_op = RationalTF(hd.den, kden, 1.0);
  out.delta1 = localization(fa);
  out.delta2 = localization(p);
  out.beta = hd.num;
  out.beta.push_back(0.0);
  for (const Complex& z : zeros(hd_ss)) {
    if (std::abs(z) >= 1.0) out.unstable_poles.push_back(z);
  }
  return out;
}

BetaFilter consistent_filter_via_beta(const ContinuousSS& fa, const ContinuousSS& p,
                                      int fast_factor) {
  if (!fa.is_siso() || !p.is_siso()) throw UnsupportedError("consistent_filter: SISO only");
  if (fast_factor < 1) throw ParameterError("consistent_filter_via_beta: fast_factor >= 1");
  const std::vector<double> delta = poly_mul(localization(fa), localization(p));
  const std::size_t n = delta.size() - 1;

  // beta(t) is the response of fa*p to the staircase sum_j delta_j 1[j, j+1).
  const DiscreteSS fast = c2d_step_invariant(series(fa, p), 1.0 / fast_factor);
  const std::size_t total = (n + 1) * static_cast<std::size_t>(fast_factor) + 1;
  Matrix input = Matrix::Zero(1, static_cast<Eigen::Index>(total));
  for (std::size_t j = 0; j <= n; ++j) {
    for (int i = 0; i < fast_factor; ++i) {
      input(0, static_cast<Eigen::Index>(j * fast_factor + i)) = delta[j];
    }
  }
  const Matrix y = simulate(fast, input);
  BetaFilter out;
  out.beta.resize(n + 2);
  for (std::size_t k = 0; k <= n + 1; ++k) {
    out.beta[k] = y(0, static_cast<Eigen::Index>(k * fast_factor));
  }
  const double scale = std::max(1e-300, std::abs(*std::max_element(
                                            out.beta.begin(), out.beta.end(),
                                            [](double a, double b) { return std::abs(a) < std::abs(b); })));
  std::size_t shift = 0;
  while (shift < out.beta.size() && std::abs(out.beta[shift]) <= 1e-14 * scale) ++shift;
  if (shift == out.beta.size()) {
    throw NumericalError("consistent_filter_via_beta: beta vanishes identically");
  }
  out.shift = static_cast<int>(shift);
  const std::vector<double> den(out.beta.begin() + static_cast<std::ptrdiff_t>(shift),
                                out.beta.end());
  out.k = RationalTF(delta, den, 1.0);
  return out;
}

SplitFilter split_causal_anticausal(const RationalTF& f, int trunc) {
  if (trunc < 0) throw ParameterError("split_causal_anticausal: trunc must be >= 0");
  const std::vector<double> den_raw = strip(f.den);
  const std::vector<double> num_raw = strip(f.num);
  const double lead = den_raw.front();
  std::vector<double> den(den_raw), num(num_raw);
  for (double& c : den) c /= lead;
  for (double& c : num) c /= lead;

  std::vector<Complex> stable, unstable;
  for (const Complex& r : poly_roots(den)) {
    const double mag = std::abs(r);
    if (std::abs(mag - 1.0) < kUnitCircleTolerance) {
      throw ParameterError("split_causal_anticausal: pole on the unit circle at (" +
                           std::to_string(r.real()) + ", " + std::to_string(r.imag()) + ")");
    }
    (mag < 1.0 ? stable : unstable).push_back(r);
  }
  const std::vector<double> ds = poly_from_roots(stable);
  const std::vector<double> du = poly_from_roots(unstable);
  const std::size_t ns = stable.size(), nu = unstable.size();

  std::vector<double> q, r;
  poly_divide(num, den, &q, &r);

  // r = a * du + b * ds with deg a < ns, deg b < nu (coefficients descending).
  const std::size_t nt = ns + nu;
  std::vector<double> a(ns, 0.0), b(nu, 0.0);
  if (nt > 0) {
    Matrix sys = Matrix::Zero(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nt));
    Vector rhs = Vector::Zero(static_cast<Eigen::Index>(nt));
    // Row index = power of z, from nt-1 down to 0.
    auto place = [&](const std::vector<double>& poly, std::size_t shift_power, Eigen::Index col) {
      const std::size_t deg = poly.size() - 1;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const std::size_t power = deg - i + shift_power;
        sys(static_cast<Eigen::Index>(nt - 1 - power), col) += poly[i];
      }
    };
    for (std::size_t i = 0; i < ns; ++i) place(du, i, static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < nu; ++j) place(ds, j, static_cast<Eigen::Index>(ns + j));
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::size_t power = r.size() - 1 - i;
      rhs(static_cast<Eigen::Index>(nt - 1 - power)) = r[i];
    }
    const Vector sol = sys.fullPivLu().solve(rhs);
    for (std::size_t i = 0; i < ns; ++i) a[ns - 1 - i] = sol(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < nu; ++j) b[nu - 1 - j] = sol(static_cast<Eigen::Index>(ns + j));
  }

  SplitFilter out;
  // Causal part: a / ds plus the constant term of the quotient.
  const double q0 = q.back();
  std::vector<double> cnum(ns + 1, 0.0);
  for (std::size_t i = 0; i < ns; ++i) cnum[i + 1] = a[i];
  for (std::size_t i = 0; i <= ns; ++i) cnum[i] += q0 * ds[i];
  out.causal = RationalTF(cnum, ds, f.sample_period);

  // Anticausal part: b / du expanded in ascending powers of z, plus q's z^k terms.
  const bool has_anticausal = nu > 0 || q.size() > 1;
  if (!has_anticausal) return out;
  std::vector<double> b_asc(b.rbegin(), b.rend());
  std::vector<double> du_asc(du.rbegin(), du.rend());
  const std::size_t horizon =
      std::max<std::size_t>(static_cast<std::size_t>(trunc), q.size()) + 1;
  std::vector<double> coeffs;
  double tail = 0.0;
  int quiet = 0;
  for (std::size_t k = 0; k < 2000000; ++k) {
    double v = 0.0;
    if (nu > 0) {
      v = k < b_asc.size() ? b_asc[k] : 0.0;
      for (std::size_t i = 1; i < du_asc.size() && i <= k; ++i) v -= du_asc[i] * coeffs[k - i];
      v /= du_asc[0];
    }
    coeffs.push_back(v);
    if (k >= static_cast<std::size_t>(trunc)) {
      double total = v;
      if (k >= 1 && k < q.size()) total += q[q.size() - 1 - k];
      tail += total * total;
      if (k >= horizon && (nu == 0 || total * total <= 1e-34 * std::max(tail, 1e-300))) {
        if (++quiet > 8) break;
      } else {
        quiet = 0;
      }
    }
  }
  out.anticausal.assign(static_cast<std::size_t>(trunc), 0.0);
  for (std::size_t k = 0; k < static_cast<std::size_t>(trunc) && k < coeffs.size(); ++k) {
    out.anticausal[k] = coeffs[k];
    if (k >= 1 && k < q.size()) out.anticausal[k] += q[q.size() - 1 - k];
  }
  out.tail_energy = tail;
  return out;
}

LocusResult pole_locus(const ContinuousSS& fa,
                       const std::function<ContinuousSS(double)>& p_family, double d_lo,
                       double d_hi, int steps) {
  if (steps < 1 || !(d_hi > d_lo)) throw ParameterError("pole_locus: invalid range");
  LocusResult out;
  out.points.reserve(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    const double d = d_lo + (d_hi - d_lo) * i / steps;
    Complex pole;
    dominant_zero_magnitude(fa, p_family(d), &pole);
    out.points.push_back(LocusPoint{d, pole});
  }
  for (std::size_t i = 0; i + 1 < out.points.size(); ++i) {
    const double g0 = std::abs(out.points[i].pole) - 1.0;
    const double g1 = std::abs(out.points[i + 1].pole) - 1.0;
    if (g0 == 0.0) {
      out.crossing = out.points[i].d;
      break;
    }
    if ((g0 < 0.0) != (g1 < 0.0)) {
      double lo = out.points[i].d, hi = out.points[i + 1].d;
      const bool lo_negative = g0 < 0.0;
      for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = dominant_zero_magnitude(fa, p_family(mid), nullptr) - 1.0;
        if ((g < 0.0) == lo_negative) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.crossing = 0.5 * (lo + hi);
      break;
    }
  }
  return out;
}

std::vector<double> consistency_residual(const SampledSignal& y_c, const SampledSignal& y_p,
                                         const ContinuousSS& fa, long k_first, long k_last) {
  if (!fa.is_siso()) throw UnsupportedError("consistency_residual: SISO fa only");
  if (std::abs(y_c.rate - y_p.rate) > 1e-12 * y_c.rate) {
    throw ParameterError("consistency_residual: signals must share a rate");
  }
  if (k_last < k_first) throw ParameterError("consistency_residual: empty k range");
  const double rate = y_c.rate;
  const long per_unit = std::lround(rate);
  if (std::abs(rate - static_cast<double>(per_unit)) > 1e-9 * rate) {
    throw ParameterError("consistency_residual: rate must be an integer number of samples per unit");
  }
  // f(j / rate), truncated once it falls below 1e-8 of its peak.
  std::vector<double> f;
  if (fa.states() > 0) {
    const Matrix phi = mat_exp(fa.a(), 1.0 / rate);
    Vector x = fa.b().col(0);
    double peak = 0.0;
    for (long j = 0; j < 100000000L; ++j) {
      const double v = (fa.c() * x)(0, 0);
      f.push_back(v);
      peak = std::max(peak, std::abs(v));
      if (j > 8 && std::abs(v) < 1e-8 * peak && fa.c().norm() * x.norm() < 1e-8 * peak) break;
      x = phi * x;
    }
  }
  const double direct = fa.d()(0, 0);

  auto error_at = [&](double t, double* value) {
    const double ic = t * rate + static_cast<double>(y_c.origin_index);
    const double ip = t * rate + static_cast<double>(y_p.origin_index);
    const long jc = std::lround(ic), jp = std::lround(ip);
    if (jc < 0 || jp < 0 || jc >= static_cast<long>(y_c.size()) ||
        jp >= static_cast<long>(y_p.size())) {
      return false;
    }
    *value = y_c.samples[static_cast<std::size_t>(jc)] - y_p.samples[static_cast<std::size_t>(jp)];
    return true;
  };

  std::vector<double> out;
  for (long k = k_first; k <= k_last; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double t = static_cast<double>(k) - static_cast<double>(j) / rate;
      double e = 0.0;
      if (!error_at(t, &e)) {
        throw ParameterError("consistency_residual: signals do not cover the kernel support");
      }
      const double w = (j == 0 || j + 1 == f.size()) ? 0.5 : 1.0;
      acc += w * e * f[j];
    }
    acc /= rate;
    if (direct != 0.0) {
      double e = 0.0;
      if (!error_at(static_cast<double>(k), &e)) {
        throw ParameterError("consistency_residual: signals do not cover the kernel support");
      }
      acc += direct * e;
    }
    out.push_back(acc);
  }
  return out;
}

PiecewiseComparison sine_box_comparison(int per_period) {
  if (per_period < 1) throw ParameterError("sine_box_comparison: per_period >= 1");
  const double h = std::numbers::pi / 2.0;
  // Sample-and-hold with a box kernel: value sin(k h) on [k h, (k + 1) h).
  auto consistent = [h](double t) {
    const double k = std::floor(t / h + 1e-12);
    return std::sin(std::min(k, 3.0) * h);
  };
  auto midvalue = [h](double t) { return t < 2.0 * h ? 0.5 : -0.5; };

  const int total = 4 * per_period;
  const double dt = h / per_period;
  PiecewiseComparison out{0.0, 0.0, {}};
  // Composite midpoint rule; breakpoints fall on cell edges.
  for (int i = 0; i < total; ++i) {
    const double t = (i + 0.5) * dt;
    const double x = std::sin(t);
    out.consistent_error += (consistent(t) - x) * (consistent(t) - x) * dt;
    out.midvalue_error += (midvalue(t) - x) * (midvalue(t) - x) * dt;
  }
  for (int k = 0; k < 4; ++k) {
    out.consistent_sample_mismatch.push_back(consistent(k * h) - std::sin(k * h));
  }
  return out;
}

}  // namespace sdrecon
