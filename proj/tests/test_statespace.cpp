#include <doctest.h>

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "oblique.hpp"
#include "support/generators.hpp"

using namespace sdrecon;

namespace {

ContinuousSS first_order(double pole) {
  return ContinuousSS(Matrix::Constant(1, 1, -pole), Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Zero(1, 1));
}

DiscreteSS one_over_z_minus(double a) {
  return DiscreteSS(Matrix::Constant(1, 1, a), Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Zero(1, 1), 1.0);
}

}  // namespace

TEST_CASE("mat_exp closed forms") {
  CHECK(mat_exp(Matrix::Zero(1, 1), 1.0)(0, 0) == doctest::Approx(1.0));
  CHECK(mat_exp(Matrix::Constant(1, 1, -1.0), 1.0)(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  Matrix nil(2, 2);
  nil << 0, 1, 0, 0;
  const Matrix e = mat_exp(nil, 0.7);
  CHECK(e(0, 0) == doctest::Approx(1.0));
  CHECK(e(0, 1) == doctest::Approx(0.7));
  CHECK(e(1, 0) == doctest::Approx(0.0));
  CHECK(e(1, 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(mat_exp(Matrix::Zero(2, 3), 1.0), DimensionError);
}

TEST_CASE("mat_exp agrees with the Eigen matrix-function oracle") {
  testing::Gen g(11);
  for (int i = 0; i < 40; ++i) {
    const int n = g.integer(1, 8);
    const Matrix a = g.matrix(n, n) * g.uniform(0.1, 4.0);
    const double t = g.uniform(0.0, 2.0);
    const Matrix oracle = (a * t).exp();
    CHECK((mat_exp(a, t) - oracle).norm() <= 1e-10 * std::max(1.0, oracle.norm()));
  }
}

TEST_CASE("c2d_step_invariant closed forms") {
  const DiscreteSS d = c2d_step_invariant(first_order(1.0), 1.0);
  CHECK(d.a()(0, 0) == doctest::Approx(0.367879441171).epsilon(1e-12));
  CHECK(d.b()(0, 0) == doctest::Approx(0.632120558829).epsilon(1e-12));
  CHECK(d.sample_period() == 1.0);

  const Matrix b = (Matrix(3, 2) << 1, 2, 3, 4, 5, 6).finished();
  const ContinuousSS integ(Matrix::Zero(3, 3), b, Matrix::Ones(1, 3), Matrix::Zero(1, 2));
  const DiscreteSS di = c2d_step_invariant(integ, 0.25);
  CHECK((di.a() - Matrix::Identity(3, 3)).norm() == doctest::Approx(0.0));
  CHECK((di.b() - 0.25 * b).norm() == doctest::Approx(0.0).epsilon(1e-15));

  CHECK_THROWS_AS(c2d_step_invariant(first_order(1.0), 0.0), ParameterError);
  CHECK_THROWS_AS(c2d_step_invariant(first_order(1.0), -1.0), ParameterError);
}

TEST_CASE("zeros of the discretized cascade from the consistent-sampling example") {
  const ContinuousSS chain = series(first_order(1.0), series(first_order(1.5), first_order(2.0)));
  std::vector<Complex> z = zeros(c2d_step_invariant(chain, 1.0));
  REQUIRE(z.size() == 2);
  std::sort(z.begin(), z.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(z[0].real() == doctest::Approx(-1.28549).epsilon(1e-4));
  CHECK(z[1].real() == doctest::Approx(-0.0816767).epsilon(1e-4));
  CHECK(std::abs(z[0].imag()) < 1e-12);
}

TEST_CASE("series connection") {
  const ContinuousSS g1 = first_order(1.0);
  const ContinuousSS ident = ContinuousSS::gain(Matrix::Identity(1, 1));
  const ContinuousSS same = series(g1, ident);
  CHECK(same.states() == 1);
  for (double w : {0.0, 0.3, 2.0}) {
    const Complex s(0.0, w);
    CHECK(std::abs(freq_response_at(same, s).value(0, 0) - freq_response_at(g1, s).value(0, 0)) < 1e-14);
  }
  const ContinuousSS both = series(first_order(1.0), first_order(2.0));
  CHECK(both.states() == 2);
  CHECK(std::abs(freq_response_at(both, 0.0).value(0, 0) - 0.5) < 1e-14);
  const Complex s(0.0, 1.7);
  CHECK(std::abs(freq_response_at(both, s).value(0, 0) - 1.0 / ((s + 1.0) * (s + 2.0))) < 1e-14);

  const DiscreteSS d1 = one_over_z_minus(0.5);
  const DiscreteSS d2(Matrix(0, 0), Matrix(0, 2), Matrix(1, 0), Matrix::Ones(1, 2), 1.0);
  CHECK_THROWS_AS(series(d1, d2), DimensionError);
  const DiscreteSS other = DiscreteSS(Matrix::Constant(1, 1, 0.5), Matrix::Ones(1, 1), Matrix::Ones(1, 1),
                                      Matrix::Zero(1, 1), 2.0);
  CHECK_THROWS(series(d1, other));
}

TEST_CASE("freq_response") {
  const DiscreteSS k = DiscreteSS::gain((Matrix(2, 1) << 3, -4).finished(), 1.0);
  for (double w : {0.0, 1.0, 3.0}) {
    const CMatrix v = freq_response(k, w).value;
    CHECK(v(0, 0) == Complex(3.0, 0.0));
    CHECK(v(1, 0) == Complex(-4.0, 0.0));
  }
  const DiscreteSS g = one_over_z_minus(0.5);
  CHECK(std::abs(freq_response(g, 0.0).value(0, 0) - 2.0) < 1e-14);
  for (double w : {0.1, 1.3, 2.9}) {
    CHECK(std::abs(freq_response(g, w).value(0, 0) - freq_response(g, w + 2.0 * std::numbers::pi).value(0, 0)) < 1e-12);
  }
  CHECK(freq_response(one_over_z_minus(1.0), 0.0).ill_conditioned);
  CHECK_FALSE(freq_response(g, 0.0).ill_conditioned);
}

TEST_CASE("zeros edge cases") {
  CHECK(zeros(one_over_z_minus(0.5)).empty());
  // FIR 1 + 0.5 z^-1 - 0.3 z^-2 has the roots of z^2 + 0.5 z - 0.3.
  const DiscreteSS fir = to_ss(RationalTF({1.0, 0.5, -0.3}, {1.0, 0.0, 0.0}));
  std::vector<Complex> z = zeros(fir);
  REQUIRE(z.size() == 2);
  std::sort(z.begin(), z.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  const double disc = std::sqrt(0.25 + 1.2);
  CHECK(z[0].real() == doctest::Approx((-0.5 - disc) / 2.0).epsilon(1e-12));
  CHECK(z[1].real() == doctest::Approx((-0.5 + disc) / 2.0).epsilon(1e-12));
  const DiscreteSS mimo = DiscreteSS::gain(Matrix::Ones(2, 2), 1.0);
  CHECK_THROWS_AS(zeros(mimo), UnsupportedError);
}

TEST_CASE("poles and stability") {
  CHECK(is_stable(one_over_z_minus(0.5)));
  CHECK_FALSE(is_stable(one_over_z_minus(1.0)));
  CHECK_FALSE(is_stable(one_over_z_minus(1.0 - 1e-10)));
  CHECK(is_stable(first_order(0.1)));
  CHECK_FALSE(is_stable(first_order(-0.1)));

  const ContinuousSS fa = first_order(1.0);
  const ContinuousSS p = series(first_order(1.5), first_order(2.0));
  const DiscreteSS kop = to_ss(consistent_filter(fa, p).k_op);
  CHECK_FALSE(is_stable(kop));
  const std::vector<Complex> pl = poles(kop);
  const auto it = std::min_element(pl.begin(), pl.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(it->real() == doctest::Approx(-1.28549).epsilon(1e-4));

  testing::Gen g(5);
  for (int i = 0; i < 20; ++i) {
    const int n = g.integer(1, 6);
    Matrix a = g.matrix(n, n);
    a *= 0.9 / spectral_radius(a);
    CHECK(is_stable(DiscreteSS(a, Matrix::Ones(n, 1), Matrix::Ones(1, n), Matrix::Zero(1, 1), 1.0)));
  }
}

TEST_CASE("realization validation") {
  CHECK_THROWS_AS(ContinuousSS(Matrix::Zero(2, 2), Matrix::Zero(3, 1), Matrix::Zero(1, 2), Matrix::Zero(1, 1)),
                  DimensionError);
  Matrix bad = Matrix::Zero(1, 1);
  bad(0, 0) = std::nan("");
  CHECK_THROWS(ContinuousSS(bad, Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Zero(1, 1)));
  CHECK_THROWS(DiscreteSS(Matrix::Zero(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Zero(1, 1), 0.0));
}

TEST_CASE("transfer-function conversions") {
  const RationalTF tf({0.5, -0.2}, {1.0, -0.9, 0.2}, 0.5);
  const DiscreteSS ss = to_ss(tf);
  CHECK(ss.states() == 2);
  CHECK(ss.sample_period() == 0.5);
  const RationalTF back = to_tf(ss);
  for (double w : {0.0, 0.7, 2.0, 5.0}) {
    const Complex z = std::polar(1.0, w * 0.5);
    CHECK(std::abs(back.evaluate(z) - tf.evaluate(z)) < 1e-12);
    CHECK(std::abs(freq_response(ss, w).value(0, 0) - tf.evaluate(z)) < 1e-12);
  }
  CHECK(tf.relative_degree() == 1);
  CHECK_THROWS(to_ss(RationalTF({1.0, 0.0, 0.0}, {1.0, 0.5})));
}

TEST_CASE("minimal_realization removes an uncontrollable mode") {
  Matrix a(2, 2);
  a << 0.5, 0.0, 0.0, 0.3;
  const DiscreteSS sys(a, (Matrix(2, 1) << 1, 0).finished(), (Matrix(1, 2) << 1, 1).finished(), Matrix::Zero(1, 1), 1.0);
  const DiscreteSS m = minimal_realization(sys);
  CHECK(m.states() == 1);
  for (double w : {0.0, 1.0, 2.5}) {
    CHECK(std::abs(freq_response(m, w).value(0, 0) - freq_response(sys, w).value(0, 0)) < 1e-12);
  }
}
