#include "mixnorm/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "mixnorm/errors.hpp"
#include "mixnorm/operators.hpp"
#include "mixnorm/parallel.hpp"

namespace mixnorm {

namespace {

AnalyticPoly random_poly(std::mt19937_64& rng, int deg) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd c(deg + 1);
  for (auto& v : c) v = cdouble(g(rng), g(rng));
  return AnalyticPoly(std::move(c));
}

// degrees uniform in [0, max_deg]
std::vector<AnalyticPoly> random_polys(std::uint64_t seed, int count, int max_deg) {
  std::mt19937_64 rng(seed);
  std::vector<AnalyticPoly> out;
  for (int i = 0; i < count; ++i) {
    const int deg = static_cast<int>(rng() % (max_deg + 1));
    out.push_back(random_poly(rng, deg));
  }
  return out;
}

double tol_or(const AcceptOptions& opt, double dflt) {
  return opt.tolerance > 0 ? opt.tolerance : dflt;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

BlockBasis dyadic_basis(const RadialWeight& w) { return BlockBasis(build_schedule(w, 2.0), 1); }

void fold(CheckResult& r, double lo, double hi) {
  r.ratio_min = std::min(r.ratio_min, lo);
  r.ratio_max = std::max(r.ratio_max, hi);
}

void start_range(CheckResult& r) {
  r.ratio_min = kInf;
  r.ratio_max = -kInf;
}

// ---- 1: norm identity ----
CheckResult norm_identity(const AcceptOptions& opt) {
  CheckResult r;
  const double tol = tol_or(opt, 1e-9);
  const auto polys = random_polys(opt.seed + 1, 100, 64);
  double worst = 0.0;
  start_range(r);
  for (const auto& w : {RadialWeight::standard(0), RadialWeight::standard(1),
                        RadialWeight::logarithmic(2)}) {
    Eigen::VectorXd xs(65);
    for (int k = 0; k <= 64; ++k) xs[k] = 2.0 * k + 1.0;
    const Eigen::VectorXd m = w.moments(xs);
    const NormSpec spec{2, InnerSpace::Hp, 2, w, MeasureConvention::with_r};
    double wmax = 0.0;
    for (const auto& f : polys) {
      double exact = 0.0;
      for (int k = 0; k <= f.degree(); ++k) exact += std::norm(f.coeff(k)) * m[k];
      const double n = mixed_norm(f, spec);
      const double ratio = n * n / exact;
      fold(r, ratio, ratio);
      wmax = std::max(wmax, std::abs(ratio - 1.0));
    }
    r.detail[w.spec()] = number(wmax);
    worst = std::max(worst, wmax);
  }
  r.pass = worst <= tol;
  r.summary = "max rel error " + fmt(worst) + " (tol " + fmt(tol) + ")";
  return r;
}

// ---- 2: kernel coefficients ----
CheckResult kernel_exact(const AcceptOptions& opt) {
  CheckResult r;
  const double tol = tol_or(opt, 1e-9);
  double worst = 0.0;
  start_range(r);
  for (double a : {0.0, 1.0, 2.0}) {
    const auto ker = kernel_truncate(RadialWeight::standard(a), 512);
    // Taylor coefficients of (1 - u)^{-(2 + a)} by their ratio recurrence
    double binom = 1.0, wa = 0.0;
    for (int n = 0; n <= 512; ++n) {
      const double ratio = ker.coeffs[n] / binom;
      fold(r, ratio, ratio);
      wa = std::max(wa, std::abs(ratio - 1.0));
      binom *= (n + 2.0 + a) / (n + 1.0);
    }
    r.detail["std:" + fmt(a)] = number(wa);
    worst = std::max(worst, wa);
  }
  r.pass = worst <= tol;
  r.summary = "max rel error " + fmt(worst) + " over n <= 512 (tol " + fmt(tol) + ")";
  return r;
}

// ---- 3: reproducing identity ----
CheckResult reproducing(const AcceptOptions& opt) {
  CheckResult r;
  const double tol = tol_or(opt, 1e-8);
  const auto polys = random_polys(opt.seed + 3, 100, 64);
  const std::vector<RadialWeight> ws = {RadialWeight::standard(0), RadialWeight::standard(1),
                                        RadialWeight::standard(2), RadialWeight::standard(-0.5),
                                        RadialWeight::logarithmic(2), RadialWeight::logarithmic(3)};
  double worst = 0.0;
  for (const auto& w : ws) {
    const auto ker = kernel_truncate(w, 64);
    std::vector<double> err(polys.size(), 0.0);
    parallel_for(static_cast<int>(polys.size()), [&](int i) {
      const auto& f = polys[i];
      const auto p = bergman_project_coeffs(w, f, ker);
      const double scale = f.coeffs().cwiseAbs().maxCoeff();
      for (int n = 0; n <= std::max(p.degree(), f.degree()); ++n)
        err[i] = std::max(err[i], std::abs(p.coeff(n) - f.coeff(n)) / scale);
    });
    const double wmax = *std::max_element(err.begin(), err.end());
    r.detail[w.spec()] = number(wmax);
    worst = std::max(worst, wmax);
  }
  r.ratio_min = r.ratio_max = worst;
  r.pass = worst <= tol;
  r.summary = "max coefficient error " + fmt(worst) + " at D = 64 (tol " + fmt(tol) + ")";
  return r;
}

// ---- 4: classification ----
CheckResult classification(const AcceptOptions&) {
  CheckResult r;
  struct Row {
    const char* spec;
    bool dhat, dcheck;
    bool check_lower;
  };
  const Row rows[] = {{"std:0", true, true, true},
                      {"std:1", true, true, true},
                      {"log:2", true, false, true},
                      {"exp:1", false, false, false}};
  r.pass = true;
  start_range(r);
  std::string line;
  for (const auto& row : rows) {
    const RadialWeight w = parse_weight(row.spec);
    const auto up = certify_upper_doubling(w);
    Json d{{"Dhat", to_json(up)}};
    bool ok = up.certified == row.dhat;
    if (up.certified) fold(r, up.best_constant, up.best_constant);
    if (row.check_lower) {
      const auto lo = classify_lower_doubling(w);
      d["Dcheck"] = to_json(lo);
      ok = ok && lo.certified == row.dcheck;
      line += std::string(" ") + row.spec + (up.certified ? " Dhat" : " !Dhat") +
              (lo.certified ? "+Dcheck" : "+!Dcheck");
    } else {
      line += std::string(" ") + row.spec + (up.certified ? " Dhat" : " !Dhat");
    }
    d["match"] = ok;
    r.detail[row.spec] = std::move(d);
    r.pass = r.pass && ok;
  }
  r.summary = "verdicts:" + line;
  return r;
}

// ---- 5: two-sided kernel mean estimate ----
CheckResult kernel_mean(const AcceptOptions&) {
  CheckResult r;
  r.pass = true;
  start_range(r);
  double worst_spread = 0.0, worst_change = 0.0;
  for (const auto& w : {RadialWeight::standard(0), RadialWeight::standard(1),
                        RadialWeight::logarithmic(2)}) {
    for (int N : {0, 1, 2}) {
      const auto p = kernel_mean_probe(w, N, 40, 0.999);
      const bool ok = p.audit.converged && p.ratio.spread() <= 100 &&
                      p.audit.max_rel_change <= 0.10 && p.ratio.verdict != Verdict::unconverged;
      fold(r, p.ratio.ratio_min, p.ratio.ratio_max);
      worst_spread = std::max(worst_spread, p.ratio.spread());
      worst_change = std::max(worst_change, p.audit.max_rel_change);
      r.detail[w.spec() + " N=" + std::to_string(N)] = {
          {"min", number(p.ratio.ratio_min)}, {"max", number(p.ratio.ratio_max)},
          {"D", p.audit.D},                   {"max_rel_change", number(p.audit.max_rel_change)},
          {"verdict", to_string(p.ratio.verdict)}};
      r.pass = r.pass && ok;
    }
  }
  r.summary = "worst max/min " + fmt(worst_spread) + ", worst change on doubling D " +
              fmt(worst_change);
  return r;
}

bool bounded_ok(const RatioReport& rep, double max_spread = 100, double max_stab = 0.10) {
  return rep.verdict == Verdict::bounded && rep.spread() <= max_spread && rep.stability <= max_stab;
}

Json brief(const RatioReport& rep) {
  return {{"min", number(rep.ratio_min)},
          {"max", number(rep.ratio_max)},
          {"stability", number(rep.stability)},
          {"verdict", to_string(rep.verdict)}};
}

// ---- 6: block decomposition norm equivalence ----
CheckResult decomposition(const AcceptOptions& opt) {
  CheckResult r;
  r.pass = true;
  start_range(r);
  double worst_spread = 0.0, worst_stab = 0.0;
  for (const auto& w : {RadialWeight::standard(0), RadialWeight::logarithmic(2)}) {
    const BlockBasis b = dyadic_basis(w);
    const TestFamily fam = make_test_family(b, opt.seed);
    for (double q : {0.5, 1.0, 2.0, 4.0}) {
      const auto rep = decomposition_equivalence_check(w, b, {InnerSpace::Hp, 2.0}, q, fam);
      fold(r, rep.ratio_min, rep.ratio_max);
      worst_spread = std::max(worst_spread, rep.spread());
      worst_stab = std::max(worst_stab, rep.stability);
      r.detail[w.spec() + " q=" + fmt(q)] = brief(rep);
      r.pass = r.pass && bounded_ok(rep);
    }
    // recorded only: the basis from the smallest certified K
    const BlockBasis bk(build_schedule(w, choose_K(w)), 1);
    const TestFamily fk = make_test_family(bk, opt.seed);
    const auto rk = decomposition_equivalence_check(w, bk, {InnerSpace::Hp, 2.0}, 2.0, fk);
    r.detail[w.spec() + " choose_K q=2 (info)"] = brief(rk);
  }
  r.summary = "K = 2 bases, worst max/min " + fmt(worst_spread) + ", worst stability " +
              fmt(worst_stab);
  return r;
}

// ---- 7: block multiplier equivalence ----
CheckResult block_multiplier(const AcceptOptions& opt) {
  CheckResult r;
  r.pass = true;
  start_range(r);
  double worst = 0.0;
  const InnerSpec Xs[] = {{InnerSpace::Hp, 1.0}, {InnerSpace::Hp, 2.0}};
  for (const auto& w : {RadialWeight::standard(0), RadialWeight::logarithmic(2)}) {
    const BlockBasis b = dyadic_basis(w);
    const TestFamily fam = make_test_family(b, opt.seed);
    for (double a : {0.5, 1.0, 2.0}) {
      for (const auto& X : Xs) {
        const auto rep = block_multiplier_check(w, a, b, X, fam);
        const std::string key = w.spec() + " alpha=" + fmt(a) + " H" + fmt(X.p);
        for (const RatioReport* rr : {&rep.vs_moment, &rep.vs_power}) {
          fold(r, rr->ratio_min, rr->ratio_max);
          worst = std::max(worst, rr->spread());
          r.pass = r.pass && rr->verdict == Verdict::bounded && rr->spread() <= 100;
        }
        r.detail[key] = {{"vs_moment", brief(rep.vs_moment)},
                         {"vs_power", brief(rep.vs_power)},
                         {"blocks_used", rep.blocks_used},
                         {"blocks_skipped", rep.blocks_skipped}};
      }
    }
  }
  // recorded only: nu_1 on its choose_K basis, where the constants grow like K^{2 alpha}
  const RadialWeight w1 = RadialWeight::standard(1);
  const BlockBasis b1(build_schedule(w1, choose_K(w1)), 1);
  const TestFamily f1 = make_test_family(b1, opt.seed);
  for (double a : {0.5, 1.0, 2.0}) {
    const auto rep = block_multiplier_check(w1, a, b1, {InnerSpace::Hp, 2.0}, f1);
    r.detail["std:1 choose_K alpha=" + fmt(a) + " H2 (info)"] = {
        {"vs_moment", brief(rep.vs_moment)}, {"vs_power", brief(rep.vs_power)}};
  }
  r.summary = "K = 2 bases, worst max/min " + fmt(worst);
  return r;
}

// ---- 8: projection dichotomy probe ----
CheckResult dichotomy(const AcceptOptions&) {
  CheckResult r;
  const RadialWeight w0 = RadialWeight::standard(0), w1 = RadialWeight::standard(1),
                     wl = RadialWeight::logarithmic(2);
  const double l0 = divergence_functional(w0, 2, 1 - 1e-6) / divergence_functional(w0, 2, 0.9);
  // trace over 1 - t = 10^{-2}, ..., 10^{-8}, four points per decade
  Json trace = Json::array();
  bool monotone = true;
  double prev = -kInf;
  for (int j = 8; j <= 32; ++j) {
    const double gap = std::pow(10.0, -j / 4.0);
    const double v = divergence_functional(wl, 2, 1 - gap);
    trace.push_back(Json::array({number(gap), number(v)}));
    monotone = monotone && v > prev;
    prev = v;
  }
  const double ll = divergence_functional(wl, 2, 1 - 1e-8) / divergence_functional(wl, 2, 0.99);
  r.detail["nu0 Lambda ratio"] = number(l0);
  r.detail["log2 Lambda ratio"] = number(ll);
  r.detail["log2 Lambda trace"] = std::move(trace);
  bool ok = l0 <= 4 && ll >= 2 && monotone;

  const int D = 4096;
  std::string sv;
  for (const auto& [w, want] : {std::pair{w0, Verdict::bounded}, std::pair{w1, Verdict::bounded},
                                std::pair{wl, Verdict::unbounded_trend}}) {
    const auto s = schur_test_check(w, 2, kernel_truncate(w, D));
    const bool match = s.first.ratio.verdict == want &&
                       (want == Verdict::unbounded_trend || s.second.ratio.verdict == want);
    r.detail["Schur " + w.spec()] = {{"first", brief(s.first.ratio)},
                                    {"second", brief(s.second.ratio)},
                                    {"model_min", number(s.model_min)},
                                    {"model_max", number(s.model_max)},
                                    {"match", match}};
    sv += " " + w.spec() + "=" + to_string(s.first.ratio.verdict);
    ok = ok && match;
  }
  r.pass = ok;
  r.ratio_min = l0;
  r.ratio_max = ll;
  r.summary = "Lambda ratio nu0 " + fmt(l0) + ", log:2 " + fmt(ll) +
              (monotone ? " (monotone)" : " (NOT monotone)") + "; Schur" + sv;
  return r;
}

// ---- 9: Hoelder pairing ----
CheckResult holder(const AcceptOptions& opt) {
  CheckResult r;
  const RadialWeight w = RadialWeight::standard(0);
  std::mt19937_64 rng(opt.seed + 9);
  r.pass = true;
  start_range(r);
  for (const auto& [p, q] : {std::pair{2.0, 2.0}, std::pair{3.0, 1.5}}) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto f = random_poly(rng, static_cast<int>(rng() % 65));
      const auto g = random_poly(rng, static_cast<int>(rng() % 65));
      const auto h = holder_pairing_check(w, p, q, f, g);
      const double ratio = h.lhs / h.bound;
      fold(r, ratio, ratio);
      worst = std::max(worst, ratio);
      r.pass = r.pass && h.lhs <= h.bound * (1 + 1e-12);
    }
    r.detail["p=" + fmt(p) + " q=" + fmt(q)] = number(worst);
  }
  r.summary = "max |<f,g>| / bound " + fmt(r.ratio_max);
  return r;
}

// ---- 10: Cesaro means on H^1 ----
CheckResult cesaro(const AcceptOptions& opt) {
  CheckResult r;
  const auto polys = random_polys(opt.seed + 10, 200, 64);
  std::vector<std::vector<RatioSample>> rows(polys.size());
  parallel_for(static_cast<int>(polys.size()), [&](int i) {
    const double base = hardy_norm(polys[i], 1.0);
    for (int n = 0; n <= 256; ++n)
      rows[i].push_back({{double(i), double(n)}, hardy_norm(cesaro_mean(polys[i], n), 1.0), base});
  });
  std::vector<RatioSample> lo, hi;
  for (const auto& row : rows)
    for (const auto& s : row) {
      hi.push_back(s);
      if (s.coord[1] <= 128) lo.push_back(s);
    }
  const auto rep = summarize_ratios(lo, hi);
  r.ratio_min = rep.ratio_min;
  r.ratio_max = rep.ratio_max;
  r.detail = {{"n<=128 max", number(rep.base_max)},
              {"n<=256 max", number(rep.ratio_max)},
              {"stability", number(rep.stability)},
              {"verdict", to_string(rep.verdict)}};
  r.pass = rep.ratio_max <= 10 && rep.stability <= 0.10;
  r.summary = "max ratio " + fmt(rep.ratio_max) + " (n <= 128: " + fmt(rep.base_max) + ")";
  return r;
}

// ---- 11: block reconstruction ----
CheckResult reconstruction(const AcceptOptions& opt) {
  CheckResult r;
  const double tol = tol_or(opt, 1e-14);
  const RadialWeight w0 = RadialWeight::standard(0), w1 = RadialWeight::standard(1);
  const BlockBasis bases[] = {dyadic_basis(w0), BlockBasis(build_schedule(w1, choose_K(w1)), 1)};
  std::mt19937_64 rng(opt.seed + 11);
  double worst = 0.0;
  for (const auto& b : bases) {
    const auto cap = static_cast<int>(std::min<std::int64_t>(b.coverage(), 4096));
    double wb = 0.0;
    for (int i = 0; i < 50; ++i) {
      const auto f = random_poly(rng, static_cast<int>(rng() % (cap + 1)));
      AnalyticPoly sum;
      for (int n = 0; n < b.n_blocks(); ++n) sum = sum + block_project(b, n, f);
      wb = std::max(wb, (sum - f).coeffs().cwiseAbs().maxCoeff());
    }
    r.detail[b.schedule().weight.spec() + " K=" + fmt(b.K())] = number(wb);
    worst = std::max(worst, wb);
  }
  r.ratio_min = r.ratio_max = worst;
  r.pass = worst <= tol;
  r.summary = "max coefficient error " + fmt(worst) + " (tol " + fmt(tol) + ")";
  return r;
}

}  // namespace

const std::vector<CheckInfo>& acceptance_checks() {
  static const std::vector<CheckInfo> checks = {
      {1, "norm_identity", "mixed norm with r: p = q = 2 equals the weighted coefficient sum"},
      {2, "kernel_exact", "standard weight kernel is (1 - z conj a)^{-(2+alpha)}"},
      {3, "reproducing", "Bergman projection reproduces analytic polynomials"},
      {4, "classification", "upper and lower doubling classes of the built-in weights"},
      {5, "kernel_mean", "two-sided estimate of the kernel derivative integral means"},
      {6, "decomposition", "block decomposition norm equivalent to the X(q, omega) norm"},
      {7, "block_multiplier", "I^mu on blocks acts as multiplication by mu_{M_n}"},
      {8, "projection_dichotomy", "projection bounded iff the weight is two-sided doubling"},
      {9, "holder", "pairing bounded by the product of conjugate mixed norms"},
      {10, "cesaro", "Cesaro means uniformly bounded on H^1"},
      {11, "block_reconstruction", "block polynomials partition the spectrum"},
      {12, "determinism", "repeated runs give identical manifests"},
  };
  return checks;
}

bool selected(const CheckInfo& c, const std::vector<std::string>& only) {
  if (only.empty()) return true;
  for (const auto& s : only) {
    if (s == std::to_string(c.number)) return true;
    if (std::string(c.id).find(s) != std::string::npos) return true;
  }
  return false;
}

CheckResult run_check(int number, const AcceptOptions& opt) {
  using Fn = CheckResult (*)(const AcceptOptions&);
  static const Fn fns[] = {norm_identity, kernel_exact,  reproducing,      classification,
                           kernel_mean,   decomposition, block_multiplier, dichotomy,
                           holder,        cesaro,        reconstruction};
  if (number < 1 || number > 11) throw DomainError("no runnable check " + std::to_string(number));
  const auto& info = acceptance_checks()[number - 1];
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = fns[number - 1](opt);
    r.verdict = r.pass ? "pass" : "fail";
  } catch (const std::exception& e) {
    r = CheckResult{};
    r.pass = false;
    r.verdict = "error";
    r.summary = e.what();
  }
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                     .count();
  r.number = number;
  r.check_id = info.id;
  r.paper_ref = info.ref;
  return r;
}

std::vector<CheckResult> run_checks(const AcceptOptions& opt) {
  std::vector<CheckResult> out;
  for (const auto& c : acceptance_checks())
    if (c.number <= 11 && selected(c, opt.only)) out.push_back(run_check(c.number, opt));
  return out;
}

Json manifest_core(const std::vector<CheckResult>& results) {
  Json list = Json::array();
  for (const auto& r : results) {
    Json e;
    e["check_id"] = r.check_id;
    e["paper_ref"] = r.paper_ref;
    e["verdict"] = r.verdict;
    e["ratio_min"] = number(r.ratio_min);
    e["ratio_max"] = number(r.ratio_max);
    e["summary"] = r.summary;
    e["detail"] = r.detail;
    list.push_back(std::move(e));
  }
  return list;
}

Json manifest(const std::vector<CheckResult>& results, const std::string& timestamp) {
  Json core = manifest_core(results);
  for (std::size_t i = 0; i < results.size(); ++i) core[i]["runtime_ms"] = results[i].runtime_ms;
  Json m;
  m["timestamp"] = timestamp;
  m["checks"] = std::move(core);
  return m;
}

CheckResult determinism_check(const std::vector<CheckResult>& first, const AcceptOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  r.number = 12;
  r.check_id = acceptance_checks()[11].id;
  r.paper_ref = acceptance_checks()[11].ref;
  const auto second = run_checks(opt);
  const std::string a = manifest_core(first).dump(), b = manifest_core(second).dump();
  r.pass = !first.empty() && a == b;
  r.verdict = r.pass ? "pass" : "fail";
  r.ratio_min = r.ratio_max = r.pass ? 1.0 : 0.0;
  r.summary = r.pass ? "second run manifest identical (" + std::to_string(a.size()) + " bytes)"
                     : "manifests differ";
  if (first.empty()) r.summary = "no checks selected to compare";
  r.detail = {{"checks_compared", first.size()}};
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                     .count();
  return r;
}

std::string result_line(const CheckResult& r) {
  std::ostringstream s;
  s << (r.pass ? "PASS" : "FAIL") << "  [" << r.number << "] " << r.check_id << ": " << r.summary
    << "  (" << static_cast<long>(r.runtime_ms) << " ms)";
  return s.str();
}

}  // namespace mixnorm
