#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdrecon/sdrecon.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out(s);
  sdr_string_free(s);
  return out;
}

const char* kSmallSpec = R"({
  "f_model": {"num": [1.0], "den": [0.9, 3.3, 1.0]},
  "p_model": {"num": [1.0], "den": [1.0]},
  "h": 1.0, "L": 2, "m": 1, "N": 4})";

}  // namespace

TEST_CASE("errors carry a status and a message") {
  sdr_spec* spec = nullptr;
  CHECK(sdr_spec_from_json("{not json", &spec) == SDR_ERR_ARGUMENT);
  CHECK(spec == nullptr);
  CHECK(std::strlen(sdr_last_error()) > 0);
  CHECK(sdr_spec_from_json(R"({"f_model": {"num": [1], "den": [1, 1]}})", &spec) == SDR_ERR_ARGUMENT);
  CHECK(sdr_spec_from_json(kSmallSpec, nullptr) == SDR_ERR_ARGUMENT);

  sdr_filter* f = nullptr;
  CHECK(sdr_filter_from_json(R"({"a": [[1, 2]], "b": [[1]], "c": [[1]], "d": [[0]], "sample_period": 1})", &f) ==
        SDR_ERR_DIMENSION);
  CHECK(sdr_filter_from_json(R"({"num": [1], "den": [1, -1.5], "sample_period": 1})", &f) == SDR_OK);
  double norm = 0.0;
  CHECK(sdr_filter_hinf_norm(f, 1e-6, &norm) == SDR_ERR_ARGUMENT);
  sdr_filter_free(f);

  sdr_image* img = nullptr;
  CHECK(sdr_image_read("/nonexistent/file.pgm", &img) == SDR_ERR_IO);
  CHECK(std::string(sdr_version()).size() > 0);
  sdr_spec_free(nullptr);
  sdr_filter_free(nullptr);
}

TEST_CASE("filter handles") {
  sdr_filter* f = nullptr;
  REQUIRE(sdr_filter_from_json(R"({"num": [1], "den": [1, -0.5], "sample_period": 0.5})", &f) == SDR_OK);
  size_t in = 0, out = 0, states = 0;
  double period = 0.0;
  CHECK(sdr_filter_shape(f, &in, &out, &states, &period) == SDR_OK);
  CHECK(in == 1);
  CHECK(out == 1);
  CHECK(states == 1);
  CHECK(period == 0.5);
  int stable = 0;
  CHECK(sdr_filter_is_stable(f, &stable) == SDR_OK);
  CHECK(stable == 1);
  double norm = 0.0;
  CHECK(sdr_filter_hinf_norm(f, 1e-9, &norm) == SDR_OK);
  CHECK(norm == doctest::Approx(2.0).epsilon(1e-8));

  double imp[4];
  CHECK(sdr_filter_impulse(f, 4, imp) == SDR_OK);
  CHECK(imp[0] == 0.0);
  CHECK(imp[1] == doctest::Approx(1.0));
  CHECK(imp[3] == doctest::Approx(0.25));

  const double omega = 0.0;
  double mag = 0.0, phase = 1.0;
  CHECK(sdr_filter_bode(f, &omega, 1, &mag, &phase) == SDR_OK);
  CHECK(mag == doctest::Approx(20.0 * std::log10(2.0)));
  CHECK(phase == doctest::Approx(0.0));

  const json pz = json::parse(take([&] {
    char* s = nullptr;
    REQUIRE(sdr_filter_poles_zeros(f, &s) == SDR_OK);
    return s;
  }()));
  REQUIRE(pz.at("poles").size() == 1);
  CHECK(pz.at("poles")[0][0].get<double>() == doctest::Approx(0.5));

  sdr_filter* poly = nullptr;
  sdr_filter* back = nullptr;
  REQUIRE(sdr_filter_polyphase(f, 2, &poly) == SDR_OK);
  REQUIRE(sdr_filter_recompose(poly, 2, &back) == SDR_OK);
  double imp2[6];
  CHECK(sdr_filter_impulse(back, 6, imp2) == SDR_OK);
  double imp6[6];
  CHECK(sdr_filter_impulse(f, 6, imp6) == SDR_OK);
  for (int i = 0; i < 6; ++i) CHECK(imp2[i] == doctest::Approx(imp6[i]).epsilon(1e-12));
  sdr_filter_free(poly);
  sdr_filter_free(back);
  sdr_filter_free(f);
}

TEST_CASE("design through the handles") {
  sdr_spec* spec = nullptr;
  REQUIRE(sdr_spec_from_json(kSmallSpec, &spec) == SDR_OK);
  char* text = nullptr;
  REQUIRE(sdr_spec_to_json(spec, &text) == SDR_OK);
  CHECK(json::parse(take(text)).at("N") == 4);
  REQUIRE(sdr_spec_plant_json(spec, &text) == SDR_OK);
  CHECK(json::parse(take(text)).at("partition").at("u") == 2);

  sdr_design* design = nullptr;
  REQUIRE(sdr_design_run(spec, 1e-3, &design) == SDR_OK);
  double achieved = 0.0, lower = 0.0;
  int iterations = 0;
  CHECK(sdr_design_gamma(design, &achieved, &lower, &iterations) == SDR_OK);
  CHECK(lower < achieved);
  CHECK(iterations > 0);

  sdr_filter* k_tilde = nullptr;
  sdr_filter* k = nullptr;
  REQUIRE(sdr_design_controller(design, &k_tilde) == SDR_OK);
  REQUIRE(sdr_design_interpolator(design, &k) == SDR_OK);
  std::vector<double> omega(64), gains(64);
  CHECK(sdr_frequency_grid(1.0, omega.size(), omega.data()) == SDR_OK);
  CHECK(omega.front() == 0.0);
  CHECK(omega.back() == doctest::Approx(M_PI));
  CHECK(sdr_error_gain(spec, k_tilde, omega.data(), omega.size(), gains.data()) == SDR_OK);
  for (double g : gains) CHECK(g <= achieved * 1.001);

  REQUIRE(sdr_design_to_json(design, &text) == SDR_OK);
  const json doc = json::parse(take(text));
  CHECK(doc.at("gamma_achieved").get<double>() == achieved);

  // Fast-rate simulation at four samples per fast period.
  std::vector<double> w(400, 0.0), y(400), e(400);
  w[8] = 1.0;
  CHECK(sdr_simulate(spec, k, w.data(), w.size(), 8.0, y.data(), e.data()) == SDR_OK);
  CHECK(sdr_simulate(spec, k, w.data(), w.size(), 3.0, y.data(), e.data()) != SDR_OK);

  double over = 0.0;
  CHECK(sdr_rect_overshoot(k, 2, 8, 4, &over) == SDR_OK);
  CHECK(over >= 0.0);

  sdr_design* fir = nullptr;
  REQUIRE(sdr_design_fir_minimax(spec, 4, 64, &fir) == SDR_OK);
  double fir_gamma = 0.0;
  CHECK(sdr_design_gamma(fir, &fir_gamma, &lower, &iterations) == SDR_OK);
  CHECK(lower == 0.0);
  CHECK(fir_gamma >= achieved * 0.95);

  sdr_design_free(fir);
  sdr_filter_free(k);
  sdr_filter_free(k_tilde);
  sdr_design_free(design);
  sdr_spec_free(spec);
}

TEST_CASE("baselines, signals and media") {
  size_t count = 0;
  CHECK(sdr_baseline_taps(0, nullptr, 0, &count) == SDR_OK);
  CHECK(count == 32);
  std::vector<double> taps(count);
  CHECK(sdr_baseline_taps(0, taps.data(), taps.size(), &count) == SDR_OK);
  CHECK(taps[0] == doctest::Approx(taps[31]));
  CHECK(sdr_baseline_taps(1, nullptr, 0, &count) == SDR_OK);
  CHECK(count == 127);
  CHECK(sdr_baseline_taps(7, nullptr, 0, &count) == SDR_ERR_ARGUMENT);

  std::vector<double> clip(800);
  CHECK(sdr_synthetic_clip(8000.0, 0.1, 2, clip.data(), clip.size(), &count) == SDR_OK);
  CHECK(count == 800);
  CHECK(sdr_synthetic_clip(800.0, 1.0, 2, clip.data(), clip.size(), &count) == SDR_ERR_ARGUMENT);
  std::vector<double> mag(129);
  CHECK(sdr_spectrum(clip.data(), clip.size(), 8000.0, 256, 1, 0, mag.data()) == SDR_OK);

  const std::string wav = (std::filesystem::temp_directory_path() / "sdrecon_capi.wav").string();
  sdr_audio* audio = nullptr;
  REQUIRE(sdr_audio_create(800, 1, clip.size(), &audio) == SDR_OK);
  CHECK(sdr_audio_set_channel(audio, 0, clip.data()) == SDR_OK);
  CHECK(sdr_audio_set_channel(audio, 1, clip.data()) == SDR_ERR_ARGUMENT);
  CHECK(sdr_audio_write(audio, wav.c_str()) == SDR_OK);
  sdr_audio_free(audio);
  REQUIRE(sdr_audio_read(wav.c_str(), &audio) == SDR_OK);
  int rate = 0;
  size_t channels = 0, frames = 0;
  CHECK(sdr_audio_info(audio, &rate, &channels, &frames) == SDR_OK);
  CHECK(rate == 800);
  CHECK(channels == 1);
  CHECK(frames == 800);
  sdr_audio_free(audio);
  std::filesystem::remove(wav);

  sdr_image* img = nullptr;
  REQUIRE(sdr_image_read(SDRECON_TEST_DATA "/camera.pgm", &img) == SDR_OK);
  int rows = 0, cols = 0;
  CHECK(sdr_image_size(img, &rows, &cols) == SDR_OK);
  CHECK(rows > 0);
  double p = 0.0, s = 0.0;
  CHECK(sdr_image_psnr(img, img, &p) == SDR_OK);
  CHECK(std::isinf(p));
  CHECK(sdr_image_ssim(img, img, &s) == SDR_OK);
  CHECK(s == doctest::Approx(1.0));
  sdr_image* small = nullptr;
  sdr_image* big = nullptr;
  REQUIRE(sdr_image_decimate(img, 2, &small) == SDR_OK);
  REQUIRE(sdr_image_lanczos(small, 2, &big) == SDR_OK);
  CHECK(sdr_image_psnr(big, img, &p) == SDR_OK);
  CHECK(p > 20.0);
  CHECK(sdr_image_psnr(small, img, &p) == SDR_ERR_DIMENSION);
  sdr_image_free(big);
  sdr_image_free(small);
  sdr_image_free(img);
}

TEST_CASE("consistent reconstruction entry points") {
  const char* fa = R"({"num": [1], "den": [1, 1]})";
  const char* p = R"({"num": [1], "den": [1, 3.5, 3]})";
  char* text = nullptr;
  REQUIRE(sdr_oblique_filter(fa, p, &text) == SDR_OK);
  const json cf = json::parse(take(text));
  CHECK(cf.at("unstable_poles").size() == 1);
  CHECK(cf.at("causality_shift") == 1);
  REQUIRE(sdr_oblique_filter_beta(fa, p, &text) == SDR_OK);
  CHECK(json::parse(take(text)).at("shift") == 1);
  REQUIRE(sdr_oblique_split(cf.at("k_op").dump().c_str(), 31, &text) == SDR_OK);
  CHECK(json::parse(take(text)).at("anticausal").size() == 31);

  double crossing = 0.0;
  int has = 0;
  REQUIRE(sdr_oblique_locus(fa, R"({"num": [1], "den": [1, 2]})", 2.0, 3.5, 150, &text, &crossing, &has) == SDR_OK);
  const std::string csv = take(text);
  CHECK(csv.rfind("d,re,im\n", 0) == 0);
  REQUIRE(has == 1);
  CHECK(crossing == doctest::Approx(2.72778).epsilon(1e-3));

  double c = 0.0, m = 0.0;
  CHECK(sdr_sine_box(256, &c, &m) == SDR_OK);
  CHECK(m < c);
  CHECK(sdr_oblique_filter(R"({"a": [[-1]], "b": [[1]], "c": [[0]], "d": [[0]]})", p, &text) == SDR_ERR_NUMERICAL);
}
