#include "serialize.hpp"

#include <cstdio>
#include <sstream>

namespace sdrecon {

namespace {

std::vector<double> number_list(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ParameterError(std::string(what) + ": expected a non-empty array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ParameterError(std::string(what) + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParameterError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json complex_list(const std::vector<Complex>& values) {
  Json out = Json::array();
  for (const Complex& c : values) out.push_back({c.real(), c.imag()});
  return out;
}

}  // namespace

ContinuousSS continuous_from_tf(const std::vector<double>& num, const std::vector<double>& den) {
  const DiscreteSS d = to_ss(RationalTF(num, den, 1.0));
  return ContinuousSS(d.a(), d.b(), d.c(), d.d());
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

// Row-major nested arrays. An empty array is a 0x0 matrix; a 0-column
// matrix with r rows is written as r empty rows.
Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ParameterError("matrix: expected nested arrays");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  if (!j[0].is_array()) throw ParameterError("matrix: expected nested arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParameterError("matrix: ragged rows");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      if (!row[static_cast<std::size_t>(k)].is_number()) throw ParameterError("matrix: non-numeric entry");
      m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
  }
  return m;
}

namespace {

Json realization_json(const Realization& sys) {
  return Json{{"a", to_json(sys.a())},
              {"b", to_json(sys.b())},
              {"c", to_json(sys.c())},
              {"d", to_json(sys.d())}};
}

// Fills in the zero-width dimensions that nested arrays cannot express.
void realization_from_json(const Json& j, Matrix& a, Matrix& b, Matrix& c, Matrix& d) {
  a = matrix_from_json(field(j, "a"));
  b = matrix_from_json(field(j, "b"));
  c = matrix_from_json(field(j, "c"));
  d = matrix_from_json(field(j, "d"));
  if (a.size() == 0) {
    a.resize(0, 0);
    b.resize(0, d.cols());
    c.resize(d.rows(), 0);
  }
}

}  // namespace

Json to_json(const ContinuousSS& sys) { return realization_json(sys); }

Json to_json(const DiscreteSS& sys) {
  Json out = realization_json(sys);
  out["sample_period"] = sys.sample_period();
  return out;
}

ContinuousSS continuous_from_json(const Json& j) {
  if (j.is_object() && j.contains("num")) {
    return continuous_from_tf(number_list(j.at("num"), "num"), number_list(field(j, "den"), "den"));
  }
  Matrix a, b, c, d;
  realization_from_json(j, a, b, c, d);
  return ContinuousSS(a, b, c, d);
}

DiscreteSS discrete_from_json(const Json& j) {
  const Json& period = field(j, "sample_period");
  if (!period.is_number()) throw ParameterError("sample_period must be a number");
  if (j.contains("num")) {
    return to_ss(RationalTF(number_list(j.at("num"), "num"), number_list(field(j, "den"), "den"),
                            period.get<double>()));
  }
  Matrix a, b, c, d;
  realization_from_json(j, a, b, c, d);
  return DiscreteSS(a, b, c, d, period.get<double>());
}

Json to_json(const RationalTF& tf) {
  return Json{{"num", tf.num}, {"den", tf.den}, {"sample_period", tf.sample_period}};
}

RationalTF tf_from_json(const Json& j) {
  const double period = j.contains("sample_period") ? j.at("sample_period").get<double>() : 1.0;
  return RationalTF(number_list(field(j, "num"), "num"), number_list(field(j, "den"), "den"), period);
}

Json to_json(const DesignSpec& spec) {
  return Json{{"f_model", to_json(spec.f_model)}, {"p_model", to_json(spec.p_model)},
              {"h", spec.h},  {"L", spec.upsample_L},
              {"m", spec.delay_m}, {"N", spec.fsfh_N},
              {"delay_sub", spec.delay_sub}};
}

DesignSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw ParameterError("spec: expected an object");
  auto integer = [&j](const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_number_integer()) throw ParameterError(std::string("spec: '") + key + "' must be an integer");
    return v.get<int>();
  };
  const double h = j.contains("h") ? j.at("h").get<double>() : 1.0;
  const int l = integer("L", 2);
  DesignSpec spec{continuous_from_json(field(j, "f_model")),
                  continuous_from_json(field(j, "p_model")),
                  h,
                  l,
                  integer("m", 0),
                  integer("N", 5 * l),
                  integer("delay_sub", 0)};
  spec.validate();
  return spec;
}

Json to_json(const GeneralizedPlant& plant) {
  Json out = to_json(plant.system());
  out["partition"] = Json{{"w", plant.n_w()}, {"u", plant.n_u()}, {"e", plant.n_e()}, {"y", plant.n_y()}};
  return out;
}

Json to_json(const SynthesisResult& result) {
  return Json{{"controller", to_json(result.controller)},
              {"gamma_achieved", result.gamma_achieved},
              {"gamma_lower", result.gamma_lower},
              {"iterations", result.iterations},
              {"regularized", result.regularized}};
}

Json to_json(const ConsistentFilter& filter) {
  return Json{{"k_op", to_json(filter.k_op)},
              {"h_d", to_json(filter.h_d)},
              {"delta1", filter.delta1},
              {"delta2", filter.delta2},
              {"beta", filter.beta},
              {"unstable_poles", complex_list(filter.unstable_poles)},
              {"causality_shift", filter.causality_shift}};
}

std::string locus_csv(const LocusResult& locus) {
  std::ostringstream out;
  out << "d,re,im\n";
  for (const LocusPoint& p : locus.points) {
    out << format_number(p.d) << ',' << format_number(p.pole.real()) << ','
        << format_number(p.pole.imag()) << '\n';
  }
  return out.str();
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw DimensionError("csv_table: header/column count mismatch");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns) {
    if (col.size() != rows) throw DimensionError("csv_table: columns differ in length");
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_number(columns[c][r]);
    out << '\n';
  }
  return out.str();
}

}  // namespace sdrecon
