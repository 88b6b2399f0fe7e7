#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixnorm/io.hpp"
#include "mixnorm/verify.hpp"

namespace mixnorm {

struct RunConfig {
  std::vector<std::string> weights{"std:0"};
  double p = 2.0;
  double q = 2.0;                // kInf selects the weak norm
  std::string inner = "Hp";      // Hp or Bloch
  std::string convention = "with_r";
  std::string f;                 // inline coefficients "re[:im],..."
  std::string f_file;            // JSON [[re, im], ...]
  std::vector<int> N{0, 1, 2};
  int n_points = 40;
  double s_max = 0.999;
  double K = 0.0;                // 0 picks the smallest certified K
  int n_max = 16;
  int cutoff_k = 2;
  std::uint64_t seed = kFamilySeed;
  double tolerance = -1.0;
  std::vector<std::string> only;
  std::string out = ".";
  bool allow_unconverged = false;

  // throws DomainError
  void validate() const;
};

Json to_json(const RunConfig& c);
RunConfig config_from_json(const Json& j);  // missing keys keep their defaults

InnerSpace parse_inner(const std::string& s);
MeasureConvention parse_convention(const std::string& s);

}  // namespace mixnorm
