#include "mixnorm/config.hpp"

#include <cmath>

#include "mixnorm/errors.hpp"

namespace mixnorm {

void RunConfig::validate() const {
  if (weights.empty()) throw DomainError("at least one weight is required");
  for (const auto& w : weights) parse_weight(w);
  if (!(p > 0.0) || std::isinf(p)) throw DomainError("p must be in (0, inf)");
  if (!(q > 0.0)) throw DomainError("q must be in (0, inf]");
  parse_inner(inner);
  parse_convention(convention);
  if (N.empty()) throw DomainError("N list is empty");
  for (int n : N)
    if (n < 0) throw DomainError("derivative orders must be >= 0");
  if (n_points < 1) throw DomainError("sweep needs at least one point");
  if (!(s_max > 0.0 && s_max < 1.0)) throw DomainError("s_max must be in (0, 1)");
  if (K != 0.0 && !(K > 1.0)) throw DomainError("K must exceed 1");
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  if (cutoff_k < 2) throw DomainError("cutoff k must be >= 2");
  if (!f.empty()) parse_coeffs(f);
}

InnerSpace parse_inner(const std::string& s) {
  if (s == "Hp" || s == "H") return InnerSpace::Hp;
  if (s == "Bloch") return InnerSpace::Bloch;
  if (s == "BMOA") return InnerSpace::BMOA;
  throw DomainError("inner space must be Hp, Bloch or BMOA");
}

MeasureConvention parse_convention(const std::string& s) {
  if (s == "with_r") return MeasureConvention::with_r;
  if (s == "without_r") return MeasureConvention::without_r;
  throw DomainError("convention must be with_r or without_r");
}

Json to_json(const RunConfig& c) {
  Json j;
  j["weights"] = c.weights;
  j["p"] = number(c.p);
  j["q"] = number(c.q);
  j["inner"] = c.inner;
  j["convention"] = c.convention;
  j["f"] = c.f;
  j["f_file"] = c.f_file;
  j["N"] = c.N;
  j["n_points"] = c.n_points;
  j["s_max"] = c.s_max;
  j["K"] = c.K;
  j["n_max"] = c.n_max;
  j["cutoff_k"] = c.cutoff_k;
  j["seed"] = c.seed;
  j["tolerance"] = c.tolerance;
  j["only"] = c.only;
  j["out"] = c.out;
  j["allow_unconverged"] = c.allow_unconverged;
  return j;
}

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  RunConfig c;
  try {
    if (j.contains("weights")) {
      c.weights.clear();
      for (const auto& w : j["weights"])
        c.weights.push_back(w.is_string() ? w.get<std::string>() : weight_from_json(w).spec());
    }
    if (j.contains("p")) c.p = number_from_json(j["p"]);
    if (j.contains("q")) c.q = number_from_json(j["q"]);
    c.inner = j.value("inner", c.inner);
    c.convention = j.value("convention", c.convention);
    c.f = j.value("f", c.f);
    c.f_file = j.value("f_file", c.f_file);
    c.N = j.value("N", c.N);
    c.n_points = j.value("n_points", c.n_points);
    c.s_max = j.value("s_max", c.s_max);
    c.K = j.value("K", c.K);
    c.n_max = j.value("n_max", c.n_max);
    c.cutoff_k = j.value("cutoff_k", c.cutoff_k);
    c.seed = j.value("seed", c.seed);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.only = j.value("only", c.only);
    c.out = j.value("out", c.out);
    c.allow_unconverged = j.value("allow_unconverged", c.allow_unconverged);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad config: ") + e.what());
  }
  return c;
}

}  // namespace mixnorm
