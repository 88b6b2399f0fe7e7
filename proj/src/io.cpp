#include "mixnorm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mixnorm/errors.hpp"

namespace mixnorm {

namespace {

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot read " + what + " from '" + s + "'");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size()) throw DomainError("trailing characters in " + what + " '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

Json vec(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

RadialWeight parse_weight(const std::string& spec_in) {
  const std::string spec = trim(spec_in);
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw DomainError("weight spec needs a family prefix: '" + spec + "'");
  const std::string fam = spec.substr(0, colon), rest = spec.substr(colon + 1);
  if (fam == "std") return RadialWeight::standard(to_double(rest, "alpha"));
  if (fam == "log") return RadialWeight::logarithmic(to_double(rest, "kappa"));
  if (fam == "exp") return RadialWeight::exponential(to_double(rest, "c"));
  if (fam == "file") return read_weight_csv(rest);
  if (fam == "pow" || fam == "beta") {
    // the base spec may itself contain colons; the parameter is the last field
    const auto last = rest.rfind(':');
    if (last == std::string::npos) throw DomainError(fam + ": spec needs <base>:<param>");
    const RadialWeight base = parse_weight(rest.substr(0, last));
    const double a = to_double(rest.substr(last + 1), fam == "pow" ? "alpha" : "beta");
    return fam == "pow" ? power_transform(base, a) : beta_modulated(base, a);
  }
  throw DomainError("unknown weight family '" + fam + "'");
}

Json weight_to_json(const RadialWeight& w) {
  Json j;
  j["family"] = to_string(w.family());
  j["params"] = vec(w.params());
  j["spec"] = w.spec();
  return j;
}

RadialWeight weight_from_json(const Json& j) {
  if (j.is_string()) return parse_weight(j.get<std::string>());
  if (!j.is_object()) throw DomainError("weight record must be a string or an object");
  if (j.contains("r") && j.contains("omega"))
    return RadialWeight::tabulated(j["r"].get<std::vector<double>>(),
                                   j["omega"].get<std::vector<double>>());
  if (j.contains("file")) return read_weight_csv(j["file"].get<std::string>());
  if (j.contains("spec")) return parse_weight(j["spec"].get<std::string>());
  const std::string fam = j.value("family", "");
  const auto params = j.value("params", std::vector<double>{});
  auto param = [&](std::size_t i) {
    if (params.size() <= i) throw DomainError("weight record '" + fam + "' is missing parameters");
    return params[i];
  };
  if (fam == "standard") return RadialWeight::standard(param(0));
  if (fam == "logarithmic") return RadialWeight::logarithmic(param(0));
  if (fam == "exponential") return RadialWeight::exponential(param(0));
  if (fam == "power_transform" || fam == "beta_modulated") {
    if (!j.contains("base")) throw DomainError("derived weight record needs a base");
    const RadialWeight base = weight_from_json(j["base"]);
    return fam == "power_transform" ? power_transform(base, param(0))
                                    : beta_modulated(base, param(0));
  }
  throw DomainError("unknown weight family '" + fam + "'");
}

RadialWeight read_weight_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open weight table '" + path + "'");
  std::vector<double> r, om;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, ',');
    if (f.size() != 2) throw DomainError("weight table rows need two columns: '" + line + "'");
    if (first && !std::isdigit(static_cast<unsigned char>(trim(f[0])[0])) && trim(f[0])[0] != '.' &&
        trim(f[0])[0] != '-') {
      first = false;
      continue;
    }
    first = false;
    r.push_back(to_double(trim(f[0]), "r"));
    om.push_back(to_double(trim(f[1]), "omega"));
  }
  return RadialWeight::tabulated(std::move(r), std::move(om));
}

AnalyticPoly parse_coeffs(const std::string& text) {
  const auto toks = split(text, ',');
  if (toks.empty()) throw DomainError("empty coefficient list");
  Eigen::VectorXcd c(toks.size());
  for (std::size_t k = 0; k < toks.size(); ++k) {
    const std::string t = trim(toks[k]);
    const auto colon = t.find(':');
    if (colon == std::string::npos) {
      c[k] = to_double(t, "coefficient");
    } else {
      c[k] = cdouble(to_double(t.substr(0, colon), "coefficient"),
                     to_double(t.substr(colon + 1), "coefficient"));
    }
    if (!std::isfinite(c[k].real()) || !std::isfinite(c[k].imag()))
      throw DomainError("coefficients must be finite");
  }
  return AnalyticPoly(std::move(c));
}

Json poly_to_json(const AnalyticPoly& f) {
  Json a = Json::array();
  for (const cdouble& v : f.coeffs()) a.push_back(Json::array({v.real(), v.imag()}));
  return a;
}

AnalyticPoly poly_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw DomainError("polynomial must be a nonempty array");
  Eigen::VectorXcd c(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    const Json& e = j[k];
    if (e.is_number()) {
      c[k] = e.get<double>();
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      c[k] = cdouble(e[0].get<double>(), e[1].get<double>());
    } else {
      throw DomainError("polynomial entries must be [re, im] pairs");
    }
  }
  return AnalyticPoly(std::move(c));
}

std::string polar_samples_csv(const PolarSamples& f) {
  std::ostringstream out;
  out.precision(17);
  out << "r,theta,re,im\n";
  for (Eigen::Index i = 0; i < f.values.rows(); ++i)
    for (int m = 0; m < f.angle_count(); ++m)
      out << f.radii[i] << ',' << f.theta(m) << ',' << f.values(i, m).real() << ','
          << f.values(i, m).imag() << '\n';
  return out.str();
}

PolarSamples read_polar_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open samples file '" + path + "'");
  std::string line;
  std::vector<double> radii;
  std::vector<std::vector<cdouble>> rows;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == 'r' || line[0] == '#') continue;
    const auto f = split(line, ',');
    if (f.size() != 4) throw DomainError("sample rows need r, theta, re, im");
    const double r = to_double(trim(f[0]), "r");
    if (radii.empty() || r != radii.back()) {
      radii.push_back(r);
      rows.emplace_back();
    }
    rows.back().emplace_back(to_double(trim(f[2]), "re"), to_double(trim(f[3]), "im"));
  }
  if (rows.empty()) throw DomainError("samples file is empty");
  Eigen::MatrixXcd v(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw DomainError("ragged sample grid");
    for (std::size_t m = 0; m < rows[i].size(); ++m) v(i, m) = rows[i][m];
  }
  return PolarSamples(Eigen::Map<Eigen::VectorXd>(radii.data(), radii.size()), std::move(v));
}

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
  }
  throw DomainError("expected a number");
}

Json to_json(const RatioReport& r, bool with_samples) {
  Json j;
  j["min"] = number(r.ratio_min);
  j["max"] = number(r.ratio_max);
  j["argmin"] = vec(r.argmin);
  j["argmax"] = vec(r.argmax);
  j["n_points"] = r.n_points;
  j["n_excluded"] = r.n_excluded;
  j["base_min"] = number(r.base_min);
  j["base_max"] = number(r.base_max);
  j["stability"] = number(r.stability);
  j["growth"] = number(r.growth);
  j["verdict"] = to_string(r.verdict);
  if (with_samples) {
    Json s = Json::array();
    for (const auto& x : r.samples)
      s.push_back({{"coord", vec(x.coord)}, {"lhs", number(x.lhs)}, {"rhs", number(x.rhs)}});
    j["samples"] = std::move(s);
  }
  return j;
}

Json to_json(const ProbeReport& p) {
  Json j;
  j["label"] = p.label;
  Json g = Json::array();
  for (const auto& c : p.grid) g.push_back(vec(c));
  j["grid"] = std::move(g);
  j["lhs"] = vec(p.lhs);
  j["rhs"] = vec(p.rhs);
  j["ratio"] = to_json(p.ratio);
  j["audit"] = {{"D", p.audit.D},
                {"D2", p.audit.D2},
                {"max_rel_change", number(p.audit.max_rel_change)},
                {"converged", p.audit.converged}};
  return j;
}

std::string probe_csv(const ProbeReport& p) {
  std::ostringstream out;
  out.precision(17);
  std::size_t width = p.grid.empty() ? 0 : p.grid[0].size();
  for (std::size_t k = 0; k < width; ++k) out << 'x' << k << ',';
  out << "lhs,rhs,ratio\n";
  for (std::size_t i = 0; i < p.lhs.size(); ++i) {
    for (std::size_t k = 0; k < width; ++k) out << p.grid[i][k] << ',';
    out << p.lhs[i] << ',' << p.rhs[i] << ',' << (p.rhs[i] != 0 ? p.lhs[i] / p.rhs[i] : kInf)
        << '\n';
  }
  return out.str();
}

Json to_json(const ClassReport& c) {
  Json j;
  j["class"] = to_string(c.class_name);
  j["certified"] = c.certified;
  j["best_constant"] = number(c.best_constant);
  j["coarse_constant"] = number(c.coarse_constant);
  j["argbest"] = number(c.argbest);
  if (c.class_name == DoublingClass::Dcheck) j["K"] = number(c.K);
  j["witness_grid_size"] = c.witness_grid.size();
  return j;
}

Json to_json(const BlockBasis& b) {
  Json j;
  j["K"] = number(b.K());
  j["N"] = b.N();
  j["weight"] = b.schedule().weight.spec();
  j["M_seq"] = b.schedule().M_seq;
  j["coverage"] = b.coverage();
  Json wins = Json::array();
  for (int n = 0; n < b.n_blocks(); ++n) {
    const auto [lo, hi] = b.support(n);
    Json entries = Json::array();
    for (std::int64_t k = lo; k < hi; ++k) {
      const double v = b.coeff(n, k);
      if (v != 0.0) entries.push_back(Json::array({k, v}));
    }
    wins.push_back({{"n", n}, {"coeffs", std::move(entries)}});
  }
  j["windows"] = std::move(wins);
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace mixnorm
