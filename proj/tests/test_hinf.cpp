#include <doctest.h>

#include <numbers>

#include "fir_minimax.hpp"
#include "workflow.hpp"
#include "support/generators.hpp"

using namespace sdrecon;

namespace {

DiscreteSS one_over_z_minus(double a) {
  return DiscreteSS(Matrix::Constant(1, 1, a), Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Zero(1, 1), 1.0);
}

// A small plant that synthesizes in well under a second.
DesignSpec small_spec() { return lowpass_spec(3.0, 2, 1, 4); }

}  // namespace

TEST_CASE("hinf_norm closed forms") {
  CHECK(hinf_norm(DiscreteSS::gain(Matrix::Constant(1, 1, -3.25), 1.0)) == doctest::Approx(3.25).epsilon(1e-6));
  CHECK(hinf_norm(one_over_z_minus(0.5), 1e-10) == doctest::Approx(2.0).epsilon(1e-9));
  double peak = -1.0;
  hinf_norm(one_over_z_minus(0.5), 1e-10, &peak);
  CHECK(peak == doctest::Approx(0.0).epsilon(1e-6));
  // Peak at omega = pi for a pole on the negative axis.
  CHECK(hinf_norm(one_over_z_minus(-0.5), 1e-10) == doctest::Approx(2.0).epsilon(1e-9));

  // Lightly damped second order: 1 / (2 zeta sqrt(1 - zeta^2)).
  const double zeta = 0.1;
  const ContinuousSS res((Matrix(2, 2) << 0, 1, -1, -2 * zeta).finished(), (Matrix(2, 1) << 0, 1).finished(),
                         (Matrix(1, 2) << 1, 0).finished(), Matrix::Zero(1, 1));
  CHECK(hinf_norm(res, 1e-10) == doctest::Approx(1.0 / (2 * zeta * std::sqrt(1 - zeta * zeta))).epsilon(1e-8));

  const DiscreteSS g = one_over_z_minus(0.8);
  CHECK(hinf_norm(scale(g, -2.5), 1e-10) == doctest::Approx(2.5 * hinf_norm(g, 1e-10)).epsilon(1e-8));
  CHECK_THROWS(hinf_norm(one_over_z_minus(1.2)));
}

TEST_CASE("bilinear maps") {
  const DiscreteSS d = one_over_z_minus(0.6);
  const ContinuousSS c = bilinear_to_continuous(d, 2.0);
  CHECK(is_stable(c));
  for (double theta : {0.0, 0.5, 2.0, 3.0}) {
    const Complex s(0.0, 2.0 * std::tan(theta / 2.0));
    CHECK(std::abs(freq_response_at(c, s).value(0, 0) - freq_response(d, theta).value(0, 0)) < 1e-12);
  }
  const DiscreteSS back = bilinear_to_discrete(c, 1.0, 2.0);
  for (double theta : {0.1, 1.0, 3.1}) {
    CHECK(std::abs(freq_response(back, theta).value(0, 0) - freq_response(d, theta).value(0, 0)) < 1e-12);
  }
}

TEST_CASE("synthesize and gamma_iterate on a small plant") {
  const GeneralizedPlant plant = assemble_plant(small_spec());
  const SynthesisResult r = gamma_iterate(plant, 1e-3);
  CHECK(is_stable(r.controller));
  CHECK(r.gamma_lower < r.gamma_achieved);
  CHECK((r.gamma_achieved - r.gamma_lower) / r.gamma_lower < 1e-3 + 1e-12);
  CHECK(hinf_norm(close_loop(plant, r.controller), 1e-9) <= r.gamma_achieved * 1.001);
  CHECK(r.controller.inputs() == 1);
  CHECK(r.controller.outputs() == 2);

  const SynthesisAttempt low = synthesize(plant, 0.5 * r.gamma_achieved);
  CHECK_FALSE(low.controller.has_value());
  CHECK_FALSE(low.reason.empty());

  const SynthesisAttempt high = synthesize(plant, 10.0 * r.gamma_achieved);
  REQUIRE(high.controller.has_value());
  CHECK(is_stable(*high.controller));
  CHECK(hinf_norm(close_loop(plant, *high.controller), 1e-9) < 10.0 * r.gamma_achieved);
}

TEST_CASE("gamma_iterate on a plant with nothing to attenuate") {
  Matrix d = Matrix::Zero(2, 2);
  const GeneralizedPlant plant(DiscreteSS(Matrix::Constant(1, 1, 0.5), Matrix::Zero(1, 2), Matrix::Zero(2, 1), d, 1.0),
                               1, 1, 1, 1);
  const SynthesisResult r = gamma_iterate(plant, 1e-3);
  CHECK(r.gamma_achieved <= 1e-3);
  CHECK(is_stable(r.controller));
}

TEST_CASE("longer preview never hurts") {
  const double g1 = gamma_iterate(assemble_plant(lowpass_spec(3.0, 2, 1, 4)), 1e-3).gamma_achieved;
  const double g2 = gamma_iterate(assemble_plant(lowpass_spec(3.0, 2, 2, 4)), 1e-3).gamma_achieved;
  CHECK(g2 <= g1 * (1.0 + 2e-3));
}

TEST_CASE("pointwise lower bound never exceeds the achieved level") {
  const GeneralizedPlant plant = assemble_plant(small_spec());
  const double lb = pointwise_lower_bound(plant, frequency_grid(1.0, 256));
  const SynthesisResult r = gamma_iterate(plant, 1e-3);
  CHECK(lb <= r.gamma_achieved);
  CHECK(lb > 0.0);
}

TEST_CASE("fir_minimax oracle") {
  const DesignSpec spec = small_spec();
  const std::vector<double> grid = frequency_grid(1.0, 128);

  // No control authority: objective is the reference gain whatever the taps.
  DesignSpec dead = spec;
  dead.p_model = ContinuousSS::gain(Matrix::Zero(1, 1));
  const LiftedBlocks blk = lift_blocks(dead);
  double ref = 0.0;
  for (double w : grid) ref = std::max(ref, sigma_max(freq_response(blk.f_n, w).value));
  for (int taps : {1, 3}) {
    CHECK(fir_minimax(dead, taps, grid).objective == doctest::Approx(ref).epsilon(1e-9));
  }

  double previous = std::numeric_limits<double>::infinity();
  for (int taps : {1, 2, 4, 8}) {
    const FirMinimaxResult r = fir_minimax(spec, taps, grid);
    CHECK(r.coefficients.rows() == 2);
    CHECK(r.coefficients.cols() == taps);
    CHECK(is_stable(r.controller));
    CHECK(r.objective <= previous * (1.0 + 1e-4));
    previous = std::min(previous, r.objective);
  }
  const double gamma = gamma_iterate(assemble_plant(spec), 1e-3).gamma_achieved;
  const double fir = fir_minimax(spec, 16, frequency_grid(1.0, 512)).objective;
  CHECK(std::abs(fir - gamma) / gamma < 0.05);

  CHECK_THROWS_AS(fir_minimax(spec, 0, grid), ParameterError);
  CHECK_THROWS_AS(fir_minimax(spec, 2, {}), ParameterError);
}

TEST_CASE("fir_realization") {
  const Matrix c = (Matrix(2, 3) << 1, 2, 3, 4, 5, 6).finished();
  const DiscreteSS k = fir_realization(c, 1.0);
  const Matrix y = simulate(k, (Matrix(1, 4) << 1, 0, 0, 0).finished());
  CHECK((y.leftCols(3) - c).norm() == doctest::Approx(0.0));
  CHECK(y.col(3).norm() == 0.0);
}
