#include <doctest.h>

#include <numbers>

#include "fixtures.hpp"
#include "workflow.hpp"
#include "support/generators.hpp"

using namespace sdrecon;

namespace {

ContinuousSS first_order(double pole) {
  return ContinuousSS(Matrix::Constant(1, 1, -pole), Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Zero(1, 1));
}

double response_gap(const DiscreteSS& a, const DiscreteSS& b, int points = 32) {
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double w = std::numbers::pi * i / (points - 1) / a.sample_period();
    worst = std::max(worst, (freq_response(a, w).value - freq_response(b, w).value).norm());
  }
  return worst;
}

}  // namespace

TEST_CASE("spec validation") {
  DesignSpec spec = lowpass_spec(7.0187, 2, 4, 10);
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.hold_length() == 5);
  CHECK(spec.total_delay() == 40);
  spec.fsfh_N = 9;
  CHECK_THROWS_AS(spec.validate(), ParameterError);
  CHECK_THROWS_AS(lowpass_spec(7.0187, 2, 4, 10, 10), ParameterError);
  spec = lowpass_spec(7.0187, 2, 4, 10, 3);
  CHECK(spec.total_delay() == 43);
  spec.f_model = ContinuousSS::gain(Matrix::Ones(1, 1));
  CHECK_THROWS_AS(spec.validate(), ParameterError);
}

TEST_CASE("fsfh_lift special cases") {
  const ContinuousSS sys = series(first_order(0.5), first_order(2.0));
  const DiscreteSS one = fsfh_lift(sys, 0.8, 1);
  const DiscreteSS ref = c2d_step_invariant(sys, 0.8);
  CHECK((one.a() - ref.a()).norm() < 1e-14);
  CHECK((one.b() - ref.b()).norm() < 1e-14);
  CHECK((one.c() - ref.c()).norm() < 1e-14);
  CHECK((one.d() - ref.d()).norm() < 1e-14);

  const DiscreteSS g = fsfh_lift(ContinuousSS::gain(Matrix::Constant(1, 1, 2.5)), 1.0, 4);
  CHECK(g.states() == 0);
  CHECK((g.d() - 2.5 * Matrix::Identity(4, 4)).norm() == 0.0);

  // Strictly proper F gives a strictly lower-triangular feedthrough.
  const DiscreteSS fn = fsfh_lift(sys, 1.0, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j) CHECK(fn.d()(i, j) == 0.0);
  CHECK(fn.d()(1, 0) != 0.0);
}

TEST_CASE("lift_blocks hold and selector matrices") {
  const LiftedBlocks blk = lift_blocks(lowpass_spec(7.0187, 3, 1, 6));
  CHECK(blk.h_mat.rows() == 6);
  CHECK(blk.h_mat.cols() == 3);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 3; ++j) CHECK(blk.h_mat(i, j) == (i / 2 == j ? 1.0 : 0.0));
  CHECK(blk.s_mat.rows() == 1);
  CHECK(blk.s_mat(0, 0) == 1.0);
  CHECK(blk.s_mat.rightCols(5).norm() == 0.0);
}

TEST_CASE("polyphase decomposition examples") {
  const DiscreteSS unit = DiscreteSS::gain(Matrix::Ones(1, 1), 0.5);
  const DiscreteSS kt = polyphase_decompose(unit, 2);
  CHECK(kt.outputs() == 2);
  CHECK(kt.sample_period() == doctest::Approx(1.0));
  CHECK(response_gap(kt, DiscreteSS::gain((Matrix(2, 1) << 1, 0).finished(), 1.0)) < 1e-14);

  const DiscreteSS delay(Matrix::Zero(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Zero(1, 1), 0.5);
  const DiscreteSS kd = polyphase_decompose(delay, 2);
  CHECK(response_gap(kd, DiscreteSS::gain((Matrix(2, 1) << 0, 1).finished(), 1.0)) < 1e-14);
  CHECK(response_gap(polyphase_recompose(kd, 2), delay) < 1e-14);

  // Four taps, L = 2: branches are the even and odd subsequences.
  const std::vector<double> taps = {0.4, -1.0, 2.5, 0.75};
  const DiscreteSS fir = to_ss(RationalTF(taps, {1.0, 0.0, 0.0, 0.0}, 0.5));
  const DiscreteSS split = polyphase_decompose(fir, 2);
  const Matrix resp = simulate(split, (Matrix(1, 4) << 1, 0, 0, 0).finished());
  CHECK(resp(0, 0) == doctest::Approx(0.4));
  CHECK(resp(0, 1) == doctest::Approx(2.5));
  CHECK(resp(1, 0) == doctest::Approx(-1.0));
  CHECK(resp(1, 1) == doctest::Approx(0.75));
  CHECK(std::abs(resp(0, 2)) + std::abs(resp(1, 2)) < 1e-14);

  CHECK(response_gap(polyphase_recompose(DiscreteSS::gain((Matrix(2, 1) << 1, 0).finished(), 1.0), 2), unit) < 1e-14);
  CHECK_THROWS_AS(polyphase_decompose(DiscreteSS::gain(Matrix::Ones(1, 2), 1.0), 2), DimensionError);
  CHECK_THROWS(polyphase_recompose(DiscreteSS::gain(Matrix::Ones(3, 1), 1.0), 2));
}

TEST_CASE("assemble_plant structure") {
  const GeneralizedPlant plant = assemble_plant(lowpass_spec(7.0187, 2, 4, 10));
  CHECK(plant.n_w() == 10);
  CHECK(plant.n_e() == 10);
  CHECK(plant.n_u() == 2);
  CHECK(plant.n_y() == 1);
  CHECK(plant.d22().norm() == 0.0);
  CHECK(spectral_radius(plant.a()) < 1.0);

  // m = 0 and K = 0 leaves F_N alone.
  const DesignSpec spec0 = lowpass_spec(3.0, 2, 0, 4);
  const DiscreteSS closed = close_loop(assemble_plant(spec0), DiscreteSS::gain(Matrix::Zero(2, 1), 1.0));
  CHECK(response_gap(closed, lift_blocks(spec0).f_n) < 1e-12);
}

TEST_CASE("lifted_delay with a whole number of blocks") {
  const DiscreteSS d0 = lifted_delay(3, 0, 1.0);
  CHECK(d0.states() == 0);
  CHECK((d0.d() - Matrix::Identity(3, 3)).norm() == 0.0);
  const DiscreteSS d1 = lifted_delay(3, 3, 1.0);
  const Matrix x = (Matrix(3, 3) << 1, 2, 3, 4, 5, 6, 7, 8, 9).finished();
  const Matrix y = simulate(d1, x);
  CHECK(y.col(0).norm() == 0.0);
  CHECK(y.col(1) == x.col(0));
  CHECK(y.col(2) == x.col(1));
}

TEST_CASE("error_system_gain") {
  const DesignSpec spec = lowpass_spec(7.0187, 2, 4, 10);
  const DiscreteSS zero = DiscreteSS::gain(Matrix::Zero(2, 1), 1.0);
  const std::vector<double> g0 = error_system_gain(spec, zero, {0.0});
  const CMatrix f1 = freq_response(lift_blocks(spec).f_n, 0.0).value;
  CHECK(g0[0] == doctest::Approx(sigma_max(f1)).epsilon(1e-12));

  const DiscreteSS kt = fir_polyphase(johnston_interpolator(), 2, 1.0);
  const std::vector<double> a = error_system_gain(spec, kt, {0.4, 1.9});
  const std::vector<double> b = error_system_gain(spec, kt, {0.4 + 2.0 * std::numbers::pi, 1.9 - 2.0 * std::numbers::pi});
  CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-10));
  CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-10));

  const DiscreteSS unstable(Matrix::Constant(1, 1, 1.5), Matrix::Ones(1, 1), Matrix::Ones(2, 1), Matrix::Zero(2, 1), 1.0);
  CHECK_THROWS(error_system_gain(spec, unstable, {0.1}));
}

TEST_CASE("FSFH gain converges as N doubles") {
  const DiscreteSS kt = fir_polyphase(johnston_interpolator(), 2, 1.0);
  const std::vector<double> grid = frequency_grid(1.0, 16);
  std::vector<std::vector<double>> gains;
  for (int n : {4, 8, 16, 32}) gains.push_back(error_system_gain(lowpass_spec(7.0187, 2, 4, n), kt, grid));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d1 = std::abs(gains[1][i] - gains[0][i]);
    const double d2 = std::abs(gains[2][i] - gains[1][i]);
    const double d3 = std::abs(gains[3][i] - gains[2][i]);
    CHECK(d2 < d1);
    CHECK(d3 < d2);
  }
}

TEST_CASE("frequency_grid") {
  const std::vector<double> g = frequency_grid(2.0, 512);
  CHECK(g.size() == 512);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(std::numbers::pi / 2.0));
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK_THROWS(frequency_grid(1.0, 1));
}
