#pragma once

#include <json.hpp>

#include <string>

#include "mixnorm/blocks.hpp"
#include "mixnorm/diskfn.hpp"
#include "mixnorm/operators.hpp"
#include "mixnorm/report.hpp"
#include "mixnorm/weights.hpp"

namespace mixnorm {

using Json = nlohmann::ordered_json;

// std:<alpha>, log:<kappa>, exp:<c>, file:<csv path>, pow:<base>:<alpha>, beta:<base>:<beta>
RadialWeight parse_weight(const std::string& spec);

// {family, params, base} record; tabulated weights carry r and omega arrays or a file
Json weight_to_json(const RadialWeight& w);
RadialWeight weight_from_json(const Json& j);

// two numeric columns r, omega; a non-numeric first line is a header
RadialWeight read_weight_csv(const std::string& path);

// comma-separated coefficients, each "re" or "re:im"
AnalyticPoly parse_coeffs(const std::string& text);

Json poly_to_json(const AnalyticPoly& f);
AnalyticPoly poly_from_json(const Json& j);

std::string polar_samples_csv(const PolarSamples& f);
PolarSamples read_polar_samples_csv(const std::string& path);

// non-finite values become the strings "inf", "-inf", "nan"
Json number(double x);
double number_from_json(const Json& j);

Json to_json(const RatioReport& r, bool with_samples = false);
Json to_json(const ProbeReport& p);
std::string probe_csv(const ProbeReport& p);
Json to_json(const ClassReport& c);
Json to_json(const BlockBasis& b);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace mixnorm
