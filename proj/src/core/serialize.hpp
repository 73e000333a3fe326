#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hinf.hpp"
#include "oblique.hpp"

namespace sdrecon {

using Json = nlohmann::json;

/// Controllable-canonical realization of num(s) / den(s), descending powers.
ContinuousSS continuous_from_tf(const std::vector<double>& num, const std::vector<double>& den);

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// {a, b, c, d} with row-major nested arrays; discrete models add sample_period.
Json to_json(const ContinuousSS& sys);
Json to_json(const DiscreteSS& sys);
/// Accepts {a, b, c, d} or {num, den}.
ContinuousSS continuous_from_json(const Json& j);
DiscreteSS discrete_from_json(const Json& j);

Json to_json(const RationalTF& tf);
RationalTF tf_from_json(const Json& j);

/// {f_model, p_model, h, L, m, N, delay_sub}; N defaults to 5 L and
/// delay_sub to 0 when absent.
Json to_json(const DesignSpec& spec);
DesignSpec spec_from_json(const Json& j);

/// State-space fields plus {"partition": {w, u, e, y}}.
Json to_json(const GeneralizedPlant& plant);

Json to_json(const SynthesisResult& result);
Json to_json(const ConsistentFilter& filter);

/// Rows "d,re,im" with a header line.
std::string locus_csv(const LocusResult& locus);

/// Header line followed by one row per index; all columns must have equal length.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns);

}  // namespace sdrecon
