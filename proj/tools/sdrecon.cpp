// Command-line front end. Links only against the C API.
#include <sdrecon/sdrecon.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void config_error(const std::string& message) { throw CliError{kExitConfig, message}; }

void check(sdr_status s, const char* what) {
  if (s == SDR_OK) return;
  const bool numerical = s == SDR_ERR_NUMERICAL || s == SDR_ERR_INTERNAL;
  throw CliError{numerical ? kExitNumerical : kExitConfig,
                 std::string(what) + ": " + sdr_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using SpecPtr = std::unique_ptr<sdr_spec, Deleter<sdr_spec, sdr_spec_free>>;
using FilterPtr = std::unique_ptr<sdr_filter, Deleter<sdr_filter, sdr_filter_free>>;
using DesignPtr = std::unique_ptr<sdr_design, Deleter<sdr_design, sdr_design_free>>;
using ImagePtr = std::unique_ptr<sdr_image, Deleter<sdr_image, sdr_image_free>>;
using AudioPtr = std::unique_ptr<sdr_audio, Deleter<sdr_audio, sdr_audio_free>>;

std::string take(char* s) {
  std::string out(s);
  sdr_string_free(s);
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    config_error(path + ": " + e.what());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  const std::size_t rows = cols.empty() ? 0 : cols.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << fmt(cols[c][r]);
    out << '\n';
  }
  return out.str();
}

// Outputs are staged and only written once the whole command has succeeded.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void text(const std::string& name, std::string content) { texts_[name] = std::move(content); }
  void file(const std::string& name, std::function<void(const std::string&)> writer) {
    writers_.emplace_back(name, std::move(writer));
  }

  std::vector<std::string> commit() const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) config_error("cannot create output directory " + dir_.string());
    std::vector<std::string> written;
    for (const auto& [name, content] : texts_) {
      const fs::path p = dir_ / name;
      std::ofstream out(p);
      out << content;
      if (!out) config_error("cannot write " + p.string());
      written.push_back(p.string());
    }
    for (const auto& [name, writer] : writers_) {
      const fs::path p = dir_ / name;
      writer(p.string());
      written.push_back(p.string());
    }
    return written;
  }

 private:
  fs::path dir_;
  std::map<std::string, std::string> texts_;
  std::vector<std::pair<std::string, std::function<void(const std::string&)>>> writers_;
};

json two_pole(double t) { return json{{"num", {1.0}}, {"den", {0.1 * t * t, 1.1 * t, 1.0}}}; }

json default_spec(double t, int l, int m, int n, int sub) {
  return json{{"f_model", two_pole(t)}, {"p_model", {{"num", {1.0}}, {"den", {1.0}}}},
              {"h", 1.0}, {"L", l}, {"m", m}, {"N", n}, {"delay_sub", sub}};
}

json defaults_for(const std::string& cmd) {
  if (cmd == "design" || cmd == "analyze" || cmd == "compare") {
    return json{{"tol", 1e-3}, {"grid", 512}, {"out", "out"}};
  }
  if (cmd == "audio") {
    return json{{"factor", 4}, {"seconds", 3.0}, {"seed", 1}, {"tol", 1e-3},
                {"spec", default_spec(7.0187, 4, 2, 20, 0)}, {"out", "out"}};
  }
  if (cmd == "image") {
    return json{{"factor", 2}, {"method", "both"}, {"downsample", true}, {"tol", 1e-3},
                {"spec", default_spec(4.0, 2, 4, 12, 3)}, {"out", "out"}};
  }
  return json{{"fa", {{"num", {1.0}}, {"den", {1.0, 1.0}}}},
              {"p", {{"num", {1.0}}, {"den", {1.0, 3.5, 3.0}}}},
              {"locus_base", {{"num", {1.0}}, {"den", {1.0, 2.0}}}},
              {"d_range", {2.0, 3.5}},
              {"steps", 200},
              {"trunc", 31},
              {"rect_half_period", 16},
              {"out", "out"}};
}

bool is_model(const json& v) { return v.is_object() && (v.contains("num") || v.contains("a")); }

// Like merge_patch, except that a model document replaces the default model
// instead of mixing its fields with it.
void merge_config(json& target, const json& patch) {
  for (const auto& [key, value] : patch.items()) {
    if (value.is_null()) {
      target.erase(key);
    } else if (value.is_object() && !is_model(value) && target.contains(key) && target[key].is_object()) {
      merge_config(target[key], value);
    } else {
      target[key] = value;
    }
  }
}

struct Flags {
  std::string spec, filter, in, out;
  int grid = 0;
  double tol = 0.0;
  bool print_config = false;
};

// Defaults, then the config document, then flags.
json resolve(const std::string& cmd, const Flags& f) {
  json cfg = defaults_for(cmd);
  if (!f.spec.empty()) {
    json doc = read_json(f.spec);
    if (!doc.is_object()) config_error("config must be a JSON object");
    if (doc.contains("f_model")) doc = json{{"spec", doc}};
    merge_config(cfg, doc);
  }
  if (!f.filter.empty()) cfg["filter"] = f.filter;
  if (!f.in.empty()) cfg["in"] = f.in;
  if (!f.out.empty()) cfg["out"] = f.out;
  if (f.grid > 0) cfg["grid"] = f.grid;
  if (f.tol > 0.0) cfg["tol"] = f.tol;
  return cfg;
}

template <typename T>
T get(const json& cfg, const char* key) {
  if (!cfg.contains(key)) config_error(std::string("config: missing '") + key + "'");
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(std::string("config: bad type for '") + key + "'");
  }
}

SpecPtr load_spec(const json& cfg) {
  if (!cfg.contains("spec")) config_error("config: missing 'spec' (pass --spec)");
  sdr_spec* s = nullptr;
  check(sdr_spec_from_json(cfg.at("spec").dump().c_str(), &s), "spec");
  return SpecPtr(s);
}

int spec_upsample(const sdr_spec* spec) {
  char* text = nullptr;
  check(sdr_spec_to_json(spec, &text), "spec");
  return json::parse(take(text)).at("L").get<int>();
}

// A design document (with k_tilde) or a bare filter in polyphase form.
FilterPtr load_k_tilde(const std::string& path) {
  json doc = read_json(path);
  if (doc.contains("k_tilde")) doc = doc.at("k_tilde");
  sdr_filter* f = nullptr;
  check(sdr_filter_from_json(doc.dump().c_str(), &f), "filter");
  return FilterPtr(f);
}

FilterPtr recompose(const sdr_filter* k_tilde, int upsample) {
  size_t outputs = 0;
  check(sdr_filter_shape(k_tilde, nullptr, &outputs, nullptr, nullptr), "filter");
  if (static_cast<int>(outputs) != upsample) config_error("filter output count does not match L");
  sdr_filter* k = nullptr;
  check(sdr_filter_recompose(k_tilde, upsample, &k), "recompose");
  return FilterPtr(k);
}

std::vector<double> grid_for(double h, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  check(sdr_frequency_grid(h, static_cast<size_t>(points), g.data()), "grid");
  return g;
}

FilterPtr johnston_k_tilde() {
  size_t n = 0;
  check(sdr_baseline_taps(0, nullptr, 0, &n), "baseline");
  std::vector<double> taps(n);
  check(sdr_baseline_taps(0, taps.data(), n, &n), "baseline");
  sdr_filter* f = nullptr;
  check(sdr_filter_from_fir(taps.data(), n, 2, 1.0, &f), "baseline");
  return FilterPtr(f);
}

std::vector<double> error_gain(const sdr_spec* spec, const sdr_filter* k_tilde,
                               const std::vector<double>& grid) {
  std::vector<double> g(grid.size());
  check(sdr_error_gain(spec, k_tilde, grid.data(), grid.size(), g.data()), "error gain");
  return g;
}

double max_of(const std::vector<double>& v) {
  double m = -HUGE_VAL;
  for (double x : v) m = std::max(m, x);
  return m;
}

json cmd_design(const json& cfg, Outputs& out) {
  SpecPtr spec = load_spec(cfg);
  const int grid_points = get<int>(cfg, "grid");
  if (grid_points < 2) config_error("grid must be >= 2");
  sdr_design* raw = nullptr;
  check(sdr_design_run(spec.get(), get<double>(cfg, "tol"), &raw), "synthesis");
  DesignPtr design(raw);
  double achieved = 0.0, lower = 0.0;
  int iterations = 0;
  check(sdr_design_gamma(design.get(), &achieved, &lower, &iterations), "design");
  sdr_filter* k_raw = nullptr;
  check(sdr_design_interpolator(design.get(), &k_raw), "design");
  FilterPtr k(k_raw);

  char* text = nullptr;
  check(sdr_design_to_json(design.get(), &text), "design");
  json doc = json::parse(take(text));
  doc["spec"] = cfg.at("spec");
  out.text("design.json", doc.dump(2) + "\n");

  check(sdr_filter_poles_zeros(k.get(), &text), "poles");
  json pz = json::parse(take(text));
  int stable = 0;
  check(sdr_filter_is_stable(k.get(), &stable), "stability");
  const json report{{"gamma_achieved", achieved}, {"gamma_lower", lower},
                    {"iterations", iterations}, {"stable", stable != 0},
                    {"poles", pz.at("poles")}, {"zeros", pz.at("zeros")}};
  out.text("report.json", report.dump(2) + "\n");

  double period = 0.0;
  check(sdr_filter_shape(k.get(), nullptr, nullptr, nullptr, &period), "filter");
  const std::vector<double> omega = grid_for(period, grid_points);
  std::vector<double> mag(omega.size()), phase(omega.size());
  check(sdr_filter_bode(k.get(), omega.data(), omega.size(), mag.data(), phase.data()), "bode");
  out.text("bode.csv", csv({"omega", "magnitude_db", "phase_rad"}, {omega, mag, phase}));
  return json{{"gamma_achieved", achieved}, {"gamma_lower", lower}, {"stable", stable != 0}};
}

json cmd_analyze(const json& cfg, Outputs& out) {
  SpecPtr spec = load_spec(cfg);
  FilterPtr k_tilde = load_k_tilde(get<std::string>(cfg, "filter"));
  char* text = nullptr;
  check(sdr_spec_to_json(spec.get(), &text), "spec");
  const json sj = json::parse(take(text));
  const int l = sj.at("L").get<int>();
  const std::vector<double> grid = grid_for(sj.at("h").get<double>(), get<int>(cfg, "grid"));

  std::vector<std::string> header{"omega", "designed"};
  std::vector<std::vector<double>> cols{grid, error_gain(spec.get(), k_tilde.get(), grid)};
  json summary{{"designed_max", max_of(cols[1])}};

  std::string zero_doc = json{{"a", json::array()}, {"b", json::array()}, {"c", json::array()},
                              {"d", std::vector<std::vector<double>>(static_cast<std::size_t>(l), {0.0})},
                              {"sample_period", sj.at("h")}}
                             .dump();
  sdr_filter* zero = nullptr;
  check(sdr_filter_from_json(zero_doc.c_str(), &zero), "filter");
  FilterPtr zero_ptr(zero);
  header.push_back("open_loop");
  cols.push_back(error_gain(spec.get(), zero, grid));
  summary["open_loop_max"] = max_of(cols.back());

  if (l == 2 && std::abs(sj.at("h").get<double>() - 1.0) < 1e-12) {
    FilterPtr johnston = johnston_k_tilde();
    header.push_back("johnston");
    cols.push_back(error_gain(spec.get(), johnston.get(), grid));
    summary["johnston_max"] = max_of(cols.back());
  }
  out.text("gain.csv", csv(header, cols));
  out.text("summary.json", summary.dump(2) + "\n");
  return summary;
}

json cmd_compare(const json& cfg, Outputs& out) {
  SpecPtr spec = load_spec(cfg);
  if (spec_upsample(spec.get()) != 2) config_error("compare: the baseline is a 2x interpolator (L = 2)");
  FilterPtr k_tilde = load_k_tilde(get<std::string>(cfg, "filter"));
  FilterPtr k = recompose(k_tilde.get(), 2);
  FilterPtr johnston = johnston_k_tilde();
  FilterPtr johnston_k = recompose(johnston.get(), 2);

  const std::vector<double> grid = grid_for(1.0, get<int>(cfg, "grid"));
  const double designed_max = max_of(error_gain(spec.get(), k_tilde.get(), grid));
  const double johnston_max = max_of(error_gain(spec.get(), johnston.get(), grid));
  double os_designed = 0.0, os_johnston = 0.0;
  check(sdr_rect_overshoot(k.get(), 2, 16, 4, &os_designed), "overshoot");
  check(sdr_rect_overshoot(johnston_k.get(), 2, 16, 4, &os_johnston), "overshoot");

  std::vector<double> slow(128), up(256, 0.0), idx(256);
  for (std::size_t i = 0; i < slow.size(); ++i) slow[i] = (i / 16) % 2 == 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < slow.size(); ++i) up[2 * i] = slow[i];
  std::vector<double> y1(256), y2(256), input(256);
  for (std::size_t i = 0; i < 256; ++i) {
    idx[i] = static_cast<double>(i) / 2.0;
    input[i] = slow[i / 2];
  }
  check(sdr_filter_apply(k.get(), up.data(), up.size(), y1.data()), "filter");
  check(sdr_filter_apply(johnston_k.get(), up.data(), up.size(), y2.data()), "filter");
  out.text("rect.csv", csv({"t", "input", "designed", "johnston"}, {idx, input, y1, y2}));

  const json result{{"designed_max_gain", designed_max}, {"johnston_max_gain", johnston_max},
                    {"designed_overshoot", os_designed}, {"johnston_overshoot", os_johnston}};
  out.text("compare.json", result.dump(2) + "\n");
  return result;
}

FilterPtr interpolator_from(const json& cfg, const sdr_spec* spec, int factor, double tol) {
  if (cfg.contains("filter")) return recompose(load_k_tilde(get<std::string>(cfg, "filter")).get(), factor);
  sdr_design* raw = nullptr;
  check(sdr_design_run(spec, tol, &raw), "synthesis");
  DesignPtr design(raw);
  sdr_filter* k = nullptr;
  check(sdr_design_interpolator(design.get(), &k), "design");
  return FilterPtr(k);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

json cmd_audio(const json& cfg, Outputs& out) {
  const int factor = get<int>(cfg, "factor");
  if (factor < 1) config_error("factor must be >= 1");
  SpecPtr spec = load_spec(cfg);
  if (spec_upsample(spec.get()) != factor) config_error("spec L must equal the audio factor");

  std::vector<std::vector<double>> channels;
  int rate = 44100;
  if (cfg.contains("in")) {
    sdr_audio* raw = nullptr;
    check(sdr_audio_read(get<std::string>(cfg, "in").c_str(), &raw), "read audio");
    AudioPtr audio(raw);
    size_t nch = 0, frames = 0;
    check(sdr_audio_info(audio.get(), &rate, &nch, &frames), "audio");
    channels.assign(nch, std::vector<double>(frames));
    for (size_t c = 0; c < nch; ++c) check(sdr_audio_channel(audio.get(), c, channels[c].data()), "audio");
  } else {
    size_t n = 0;
    const double seconds = get<double>(cfg, "seconds");
    const auto seed = get<unsigned>(cfg, "seed");
    check(sdr_synthetic_clip(rate, seconds, seed, nullptr, 0, &n), "clip");
    channels.assign(1, std::vector<double>(n));
    check(sdr_synthetic_clip(rate, seconds, seed, channels[0].data(), n, &n), "clip");
  }
  if (channels.empty() || channels[0].empty()) config_error("audio input is empty");

  FilterPtr k = interpolator_from(cfg, spec.get(), factor, get<double>(cfg, "tol"));
  size_t ntaps = 0;
  check(sdr_baseline_taps(1, nullptr, 0, &ntaps), "baseline");
  std::vector<double> eq_taps(ntaps);
  check(sdr_baseline_taps(1, eq_taps.data(), ntaps, &ntaps), "baseline");
  sdr_filter* eq_raw = nullptr;
  check(sdr_filter_from_fir(eq_taps.data(), ntaps, factor, 1.0, &eq_raw), "baseline");
  FilterPtr eq_tilde(eq_raw);
  FilterPtr eq = recompose(eq_tilde.get(), factor);

  const std::size_t frames = channels[0].size();
  std::vector<std::vector<double>> proposed(channels.size()), equi(channels.size());
  for (std::size_t c = 0; c < channels.size(); ++c) {
    std::vector<double> up(frames, 0.0);
    for (std::size_t i = 0; i < frames; i += static_cast<std::size_t>(factor)) up[i] = channels[c][i];
    proposed[c].resize(frames);
    equi[c].resize(frames);
    check(sdr_filter_apply(k.get(), up.data(), frames, proposed[c].data()), "filter");
    check(sdr_filter_apply(eq.get(), up.data(), frames, equi[c].data()), "filter");
  }

  const std::size_t nfft = next_pow2(frames);
  std::vector<double> freq(nfft / 2 + 1), s_orig(freq.size()), s_eq(freq.size()), s_prop(freq.size());
  for (std::size_t i = 0; i < freq.size(); ++i) freq[i] = static_cast<double>(i) * rate / static_cast<double>(nfft);
  check(sdr_spectrum(channels[0].data(), frames, rate, nfft, 1, 1, s_orig.data()), "spectrum");
  check(sdr_spectrum(equi[0].data(), frames, rate, nfft, 1, 1, s_eq.data()), "spectrum");
  check(sdr_spectrum(proposed[0].data(), frames, rate, nfft, 1, 1, s_prop.data()), "spectrum");
  out.text("spectra.csv", csv({"hz", "original_db", "equiripple_db", "proposed_db"},
                              {freq, s_orig, s_eq, s_prop}));

  auto band_db = [&](const std::vector<double>& s_db, double lo, double hi) {
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < freq.size(); ++i) {
      if (freq[i] >= lo && freq[i] <= hi) {
        sum += std::pow(10.0, s_db[i] / 20.0);
        ++count;
      }
    }
    return count ? 20.0 * std::log10(sum / count) : -HUGE_VAL;
  };
  const json metrics{{"band_hz", {6000.0, 10000.0}},
                     {"original_db", band_db(s_orig, 6000.0, 10000.0)},
                     {"equiripple_db", band_db(s_eq, 6000.0, 10000.0)},
                     {"proposed_db", band_db(s_prop, 6000.0, 10000.0)}};
  out.text("metrics.json", metrics.dump(2) + "\n");

  auto writer = [rate](std::vector<std::vector<double>> data) {
    return [rate, data = std::move(data)](const std::string& path) {
      sdr_audio* raw = nullptr;
      check(sdr_audio_create(rate, data.size(), data[0].size(), &raw), "audio");
      AudioPtr a(raw);
      for (std::size_t c = 0; c < data.size(); ++c) check(sdr_audio_set_channel(a.get(), c, data[c].data()), "audio");
      check(sdr_audio_write(a.get(), path.c_str()), "write audio");
    };
  };
  out.file("proposed.wav", writer(proposed));
  out.file("equiripple.wav", writer(equi));
  return metrics;
}

json psnr_json(double v) { return std::isinf(v) ? json("+inf") : json(v); }

json cmd_image(const json& cfg, Outputs& out) {
  const int factor = get<int>(cfg, "factor");
  if (factor < 1) config_error("factor must be >= 1");
  const auto method = get<std::string>(cfg, "method");
  if (method != "both" && method != "lanczos" && method != "sampled_data") {
    config_error("method must be lanczos, sampled_data or both");
  }
  const bool roundtrip = get<bool>(cfg, "downsample");
  sdr_image* raw = nullptr;
  check(sdr_image_read(get<std::string>(cfg, "in").c_str(), &raw), "read image");
  std::shared_ptr<sdr_image> original(raw, sdr_image_free);
  std::shared_ptr<sdr_image> source = original;
  if (roundtrip && factor > 1) {
    check(sdr_image_decimate(original.get(), factor, &raw), "decimate");
    source.reset(raw, sdr_image_free);
  }

  std::map<std::string, std::shared_ptr<sdr_image>> results;
  if (factor == 1) {
    results["lanczos"] = source;
    results["sampled_data"] = source;
  } else {
    if (method != "sampled_data") {
      check(sdr_image_lanczos(source.get(), factor, &raw), "lanczos");
      results["lanczos"].reset(raw, sdr_image_free);
    }
    if (method != "lanczos") {
      SpecPtr spec = load_spec(cfg);
      if (spec_upsample(spec.get()) != factor) config_error("spec L must equal the image factor");
      FilterPtr k = interpolator_from(cfg, spec.get(), factor, get<double>(cfg, "tol"));
      check(sdr_image_sampled_data(source.get(), spec.get(), k.get(), &raw), "sampled-data resize");
      results["sampled_data"].reset(raw, sdr_image_free);
    }
  }

  json metrics = json::object();
  for (const auto& [name, img] : results) {
    if (method != "both" && name != method) continue;
    if (roundtrip) {
      double p = 0.0, s = 0.0;
      check(sdr_image_psnr(img.get(), original.get(), &p), "psnr");
      check(sdr_image_ssim(img.get(), original.get(), &s), "ssim");
      metrics[name] = json{{"psnr", psnr_json(p)}, {"ssim", s}};
    }
    out.file(name + ".pgm", [img](const std::string& path) { check(sdr_image_write(img.get(), path.c_str()), "write image"); });
  }
  out.text("metrics.json", metrics.dump(2) + "\n");
  return metrics;
}

json cmd_oblique(const json& cfg, Outputs& out) {
  const std::string fa = cfg.at("fa").dump(), p = cfg.at("p").dump();
  char* text = nullptr;
  check(sdr_oblique_filter(fa.c_str(), p.c_str(), &text), "consistent filter");
  const json filter = json::parse(take(text));
  out.text("k_op.json", filter.dump(2) + "\n");
  check(sdr_oblique_filter_beta(fa.c_str(), p.c_str(), &text), "beta filter");
  out.text("beta.json", json::parse(take(text)).dump(2) + "\n");

  const int trunc = get<int>(cfg, "trunc");
  check(sdr_oblique_split(filter.at("k_op").dump().c_str(), trunc, &text), "split");
  const json split = json::parse(take(text));
  out.text("split.json", split.dump(2) + "\n");

  sdr_filter* causal_raw = nullptr;
  check(sdr_filter_from_json(split.at("causal").dump().c_str(), &causal_raw), "causal part");
  FilterPtr causal(causal_raw);
  const std::size_t n_imp = 64;
  std::vector<double> k_axis(n_imp), imp(n_imp);
  for (std::size_t i = 0; i < n_imp; ++i) k_axis[i] = static_cast<double>(i);
  check(sdr_filter_impulse(causal.get(), n_imp, imp.data()), "impulse");
  out.text("causal.csv", csv({"k", "value"}, {k_axis, imp}));
  const auto anti = split.at("anticausal").get<std::vector<double>>();
  std::vector<double> anti_k(anti.size());
  for (std::size_t i = 0; i < anti.size(); ++i) anti_k[i] = -static_cast<double>(i);
  out.text("anticausal.csv", csv({"k", "value"}, {anti_k, anti}));

  const auto range = get<std::vector<double>>(cfg, "d_range");
  if (range.size() != 2) config_error("d_range must have two entries");
  double crossing = 0.0;
  int has_crossing = 0;
  check(sdr_oblique_locus(fa.c_str(), cfg.at("locus_base").dump().c_str(), range[0], range[1],
                          get<int>(cfg, "steps"), &text, &crossing, &has_crossing),
        "locus");
  out.text("locus.csv", take(text));

  // Rectangular wave through the two-sided split filter.
  const int half = get<int>(cfg, "rect_half_period");
  const std::size_t len = static_cast<std::size_t>(8 * half);
  std::vector<double> t(len), w(len), causal_out(len), y(len, 0.0);
  for (std::size_t i = 0; i < len; ++i) {
    t[i] = static_cast<double>(i);
    w[i] = (i / static_cast<std::size_t>(half)) % 2 == 0 ? 1.0 : -1.0;
  }
  check(sdr_filter_apply(causal.get(), w.data(), len, causal_out.data()), "filter");
  for (std::size_t i = 0; i < len; ++i) {
    y[i] = causal_out[i];
    for (std::size_t j = 0; j < anti.size() && i + j < len; ++j) y[i] += anti[j] * w[i + j];
  }
  out.text("rect.csv", csv({"k", "input", "consistent"}, {t, w, y}));

  json result{{"unstable_poles", filter.at("unstable_poles")}, {"tail_energy", split.at("tail_energy")}};
  result["crossing"] = has_crossing ? json(crossing) : json(nullptr);
  out.text("summary.json", result.dump(2) + "\n");
  return result;
}

int run(const std::string& cmd, const Flags& flags) {
  const json cfg = resolve(cmd, flags);
  if (flags.print_config) {
    std::cout << cfg.dump(2) << "\n";
    return 0;
  }
  Outputs out(get<std::string>(cfg, "out"));
  json result;
  if (cmd == "design") result = cmd_design(cfg, out);
  else if (cmd == "analyze") result = cmd_analyze(cfg, out);
  else if (cmd == "compare") result = cmd_compare(cfg, out);
  else if (cmd == "audio") result = cmd_audio(cfg, out);
  else if (cmd == "image") result = cmd_image(cfg, out);
  else result = cmd_oblique(cfg, out);
  const std::vector<std::string> files = out.commit();
  std::cout << json{{"status", "ok"}, {"command", cmd}, {"result", result}, {"files", files}}.dump(2)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampled-data signal reconstruction toolkit"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"design", "synthesize an interpolation filter"},
      {"analyze", "error-system gain over frequency"},
      {"audio", "audio reconstruction and spectra"},
      {"image", "image reconstruction and metrics"},
      {"oblique", "consistent-reconstruction filter, split and pole locus"},
      {"compare", "designed filter against the 32-tap baseline"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--spec", flags.spec, "JSON config document (or a bare design spec)");
    sub->add_option("--filter", flags.filter, "design JSON or filter JSON");
    sub->add_option("--in", flags.in, "input media");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--grid", flags.grid, "frequency grid size");
    sub->add_option("--tol", flags.tol, "relative gamma tolerance");
    sub->add_flag("--print-config", flags.print_config, "echo the resolved config and exit");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << json{{"status", "error"}, {"code", kExitConfig}, {"message", e.what()}}.dump() << "\n";
    return kExitConfig;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return run(cmd, flags);
  } catch (const CliError& e) {
    std::cerr << json{{"status", "error"}, {"code", e.code}, {"command", cmd}, {"message", e.message}}.dump()
              << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << json{{"status", "error"}, {"code", kExitNumerical}, {"command", cmd}, {"message", e.what()}}.dump()
              << "\n";
    return kExitNumerical;
  }
}
