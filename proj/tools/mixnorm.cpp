#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>

#include "mixnorm/acceptance.hpp"
#include "mixnorm/config.hpp"
#include "mixnorm/errors.hpp"
#include "mixnorm/operators.hpp"

using namespace mixnorm;
namespace fs = std::filesystem;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

std::string out_path(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.out);
  return (fs::path(c.out) / name).string();
}

void emit(const RunConfig& c, const std::string& name, const Json& j) {
  std::cout << j.dump(2) << std::endl;
  if (!c.out.empty() && c.out != "-") write_text(out_path(c, name), j.dump(2) + "\n");
}

AnalyticPoly load_function(const RunConfig& c) {
  if (!c.f_file.empty()) {
    Json j;
    try {
      j = Json::parse(read_text(c.f_file));
    } catch (const nlohmann::json::exception& e) {
      throw DomainError("malformed function file: " + std::string(e.what()));
    }
    return poly_from_json(j);
  }
  if (c.f.empty()) throw DomainError("give a function with --f or --f-file");
  return parse_coeffs(c.f);
}

int cmd_certify(const RunConfig& c) {
  Json all = Json::array();
  for (const auto& spec : c.weights) {
    const RadialWeight w = parse_weight(spec);
    Json j;
    j["weight"] = weight_to_json(w);
    const auto up = certify_upper_doubling(w);
    j["Dhat"] = to_json(up);
    j["Dcheck"] = to_json(classify_lower_doubling(w));
    if (up.certified) {
      Json la = Json::array();
      for (const auto& d : doubling_diagnostics(
               w, {DoublingDiagnostic::tail_power_decay, DoublingDiagnostic::tail_vs_moment, DoublingDiagnostic::moment_doubling, DoublingDiagnostic::moment_power_decay, DoublingDiagnostic::beta_moment})) {
        Json e{{"item", to_string(d.item)}, {"ratio", to_json(d.ratio)}};
        if (d.exponent) e["exponent"] = number(*d.exponent);
        la.push_back(std::move(e));
      }
      j["doubling_diagnostics"] = std::move(la);
      j["tail_integral_gamma1"] = to_json(tail_integral_diagnostic(w, 1.0));
    }
    all.push_back(std::move(j));
  }
  emit(c, "certify.json", all);
  return 0;
}

int cmd_norm(const RunConfig& c) {
  const AnalyticPoly f = load_function(c);
  Json all = Json::array();
  for (const auto& spec : c.weights) {
    const RadialWeight w = parse_weight(spec);
    NormSpec ns{c.q, parse_inner(c.inner), c.p, w, parse_convention(c.convention)};
    Json j{{"weight", w.spec()}, {"p", number(c.p)}, {"q", number(c.q)}, {"inner", c.inner}};
    if (std::isinf(c.q)) {
      if (ns.inner != InnerSpace::Hp) throw DomainError("the weak norm is defined for H^p only");
      j["norm_weak"] = number(mixed_norm_weak(f, w, c.p));
    } else {
      ns.convention = MeasureConvention::with_r;
      j["norm_with_r"] = number(mixed_norm(f, ns));
      ns.convention = MeasureConvention::without_r;
      j["norm_Xq_without_r"] = number(space_norm_Xq(f, ns));
      if (ns.inner == InnerSpace::Hp && c.p == 2.0 && c.q == 2.0) {
        // coefficient form: sum |f_k|^2 omega_{2k+1}
        double s = 0.0;
        for (int k = 0; k <= f.degree(); ++k) s += std::norm(f.coeff(k)) * w.moment(2.0 * k + 1);
        j["audit_coefficient_form"] = number(std::sqrt(s));
      }
    }
    all.push_back(std::move(j));
  }
  emit(c, "norm.json", all);
  return 0;
}

int cmd_kernel_sweep(const RunConfig& c) {
  int rc = 0;
  Json all = Json::array();
  for (const auto& spec : c.weights) {
    const RadialWeight w = parse_weight(spec);
    if (!certify_upper_doubling(w).certified)
      std::cerr << "warning: " << w.spec() << " is not certified upper doubling" << std::endl;
    for (int N : c.N) {
      try {
        auto rep = kernel_mean_probe(w, N, c.n_points, c.s_max);
        const std::string stem = "kernel_" + w.spec() + "_N" + std::to_string(N);
        std::string safe = stem;
        for (char& ch : safe)
          if (ch == ':' || ch == '/') ch = '_';
        write_text(out_path(c, safe + ".csv"), probe_csv(rep));
        write_text(out_path(c, safe + ".json"), to_json(rep).dump(2) + "\n");
        if (!rep.audit.converged && !c.allow_unconverged) rc = kExitFail;
        all.push_back({{"weight", w.spec()},
                       {"N", N},
                       {"ratio", to_json(rep.ratio)},
                       {"audit_converged", rep.audit.converged}});
      } catch (const UnconvergedTruncation& e) {
        std::cerr << "unconverged: " << e.what() << " (needs degree " << e.required_degree() << ")"
                  << std::endl;
        all.push_back({{"weight", w.spec()}, {"N", N}, {"error", e.what()},
                       {"required_degree", e.required_degree()}});
        if (!c.allow_unconverged) rc = kExitFail;
      }
    }
  }
  std::cout << all.dump(2) << std::endl;
  write_text(out_path(c, "kernel_sweep.json"), all.dump(2) + "\n");
  return rc;
}

int cmd_projection_probe(const RunConfig& c) {
  if (!(c.q > 1.0) || std::isinf(c.q)) throw DomainError("projection probe needs q in (1, inf)");
  Json all = Json::array();
  for (const auto& spec : c.weights) {
    const RadialWeight w = parse_weight(spec);
    Json j{{"weight", w.spec()}, {"q", number(c.q)}};
    Json trace = Json::array();
    for (double t : {0.5, 0.9, 0.99, 0.999, 1 - 1e-4, 1 - 1e-5, 1 - 1e-6, 1 - 1e-7, 1 - 1e-8})
      trace.push_back({{"t", t}, {"Lambda", number(divergence_functional(w, c.q, t))}});
    j["Lambda"] = std::move(trace);
    const auto ker = kernel_truncate(w, 4096);
    const auto s = schur_test_check(w, c.q, ker);
    j["schur_first"] = to_json(s.first.ratio);
    j["schur_second"] = to_json(s.second.ratio);
    j["schur_model_range"] = {number(s.model_min), number(s.model_max)};

    // |P f| <= P+ |f| on the annulus test functions
    const auto k64 = kernel_truncate(w, 64);
    Eigen::VectorXd radii(64);
    for (int i = 0; i < 64; ++i) radii[i] = (i + 0.5) / 64;
    Json dom = Json::array();
    for (double t : {0.5, 0.75, 0.9}) {
      const auto f = annulus_test(t, c.q, radii, 256);
      const auto pts = default_eval_points(6);
      const auto pf = bergman_project(w, f, k64, pts);
      const auto mf = maximal_project(w, f, k64, pts);
      double worst = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        worst = std::max(worst, std::abs(pf[i]) - std::abs(mf[i]));
      dom.push_back({{"t", t}, {"max |Pf| - P+|f|", number(worst)}});
    }
    j["domination"] = std::move(dom);
    all.push_back(std::move(j));
  }
  emit(c, "projection_probe.json", all);
  return 0;
}

int cmd_basis(const RunConfig& c) {
  const RadialWeight w = parse_weight(c.weights.at(0));
  const double K = c.K > 0 ? c.K : choose_K(w);
  const BlockBasis b(build_schedule(w, K, c.n_max), 1, CutoffSpec{c.cutoff_k});
  const Json j = to_json(b);
  write_text(out_path(c, "basis.json"), j.dump(2) + "\n");
  std::cout << "K = " << b.K() << ", windows = " << b.n_blocks() << ", coverage = " << b.coverage()
            << std::endl;
  return 0;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int cmd_accept(const RunConfig& c) {
  AcceptOptions opt;
  opt.seed = c.seed;
  opt.tolerance = c.tolerance;
  opt.only = c.only;
  auto results = run_checks(opt);
  for (const auto& r : results) std::cout << result_line(r) << std::endl;
  if (selected(acceptance_checks()[11], c.only)) {
    results.push_back(determinism_check(results, opt));
    std::cout << result_line(results.back()) << std::endl;
  }
  write_text(out_path(c, "manifest.json"), manifest(results, utc_now()).dump(2) + "\n");
  std::vector<std::string> failed;
  for (const auto& r : results)
    if (!r.pass) failed.push_back(r.check_id);
  if (failed.empty()) {
    std::cout << "all " << results.size() << " checks passed" << std::endl;
    return 0;
  }
  std::cout << "failed:";
  for (const auto& f : failed) std::cout << ' ' << f;
  std::cout << std::endl;
  return kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed-norm space laboratory"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_file, q_text = "2", N_text;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", config_file, "JSON run config; flags override it");
    s->add_option("--out", cfg.out, "output directory");
  };
  auto add_weight = [&](CLI::App* s) {
    s->add_option("--weight,-w", cfg.weights, "weight spec(s): std:a log:k exp:c file:path pow:base:a beta:base:b");
  };

  auto* certify = app.add_subcommand("certify", "doubling classes and diagnostics");
  add_common(certify);
  add_weight(certify);

  auto* norm = app.add_subcommand("norm", "mixed norm of a polynomial");
  add_common(norm);
  add_weight(norm);
  norm->add_option("--f", cfg.f, "coefficients re[:im],...");
  norm->add_option("--f-file", cfg.f_file, "JSON array of [re, im]");
  norm->add_option("--p", cfg.p);
  norm->add_option("--q", q_text, "outer exponent or inf");
  norm->add_option("--inner", cfg.inner, "Hp or Bloch");

  auto* ksweep = app.add_subcommand("kernel-sweep", "kernel derivative mean estimate");
  add_common(ksweep);
  add_weight(ksweep);
  ksweep->add_option("--N", N_text, "derivative orders, comma separated");
  ksweep->add_option("--points", cfg.n_points);
  ksweep->add_option("--s-max", cfg.s_max);
  ksweep->add_flag("--allow-unconverged", cfg.allow_unconverged);

  auto* pprobe = app.add_subcommand("projection-probe", "divergence functional and Schur test");
  add_common(pprobe);
  add_weight(pprobe);
  pprobe->add_option("--q", q_text);

  auto* basis = app.add_subcommand("basis", "export a block polynomial basis");
  add_common(basis);
  add_weight(basis);
  basis->add_option("--K", cfg.K, "block ratio; default chooses the smallest certified K");
  basis->add_option("--n-max", cfg.n_max);
  basis->add_option("--cutoff-k", cfg.cutoff_k);

  auto* accept = app.add_subcommand("accept", "run the acceptance suite");
  add_common(accept);
  accept->add_option("--only", cfg.only, "check ids, numbers or substrings");
  accept->add_option("--tolerance", cfg.tolerance, "override for the exact-identity tolerances");
  accept->add_option("--seed", cfg.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (!config_file.empty()) {
      // config first, then explicit flags on top
      RunConfig from_file;
      try {
        from_file = config_from_json(Json::parse(read_text(config_file)));
      } catch (const nlohmann::json::exception& e) {
        throw DomainError("malformed config: " + std::string(e.what()));
      }
      RunConfig merged = from_file;
      auto* sub = app.get_subcommands().front();
      auto given = [&](const char* name) {
        const auto* o = sub->get_option_no_throw(name);
        return o != nullptr && o->count() > 0;
      };
      if (given("--weight")) merged.weights = cfg.weights;
      if (given("--out")) merged.out = cfg.out;
      if (given("--f")) merged.f = cfg.f;
      if (given("--f-file")) merged.f_file = cfg.f_file;
      if (given("--p")) merged.p = cfg.p;
      if (given("--inner")) merged.inner = cfg.inner;
      if (given("--points")) merged.n_points = cfg.n_points;
      if (given("--s-max")) merged.s_max = cfg.s_max;
      if (given("--K")) merged.K = cfg.K;
      if (given("--n-max")) merged.n_max = cfg.n_max;
      if (given("--cutoff-k")) merged.cutoff_k = cfg.cutoff_k;
      if (given("--only")) merged.only = cfg.only;
      if (given("--tolerance")) merged.tolerance = cfg.tolerance;
      if (given("--seed")) merged.seed = cfg.seed;
      if (given("--allow-unconverged")) merged.allow_unconverged = true;
      if (!given("--q")) q_text.clear();
      if (!given("--N")) N_text.clear();
      cfg = merged;
    }
    if (!q_text.empty()) cfg.q = number_from_json(q_text == "inf" ? Json("inf") : Json(std::stod(q_text)));
    if (!N_text.empty()) {
      cfg.N.clear();
      for (const auto& t : CLI::detail::split(N_text, ',')) cfg.N.push_back(std::stoi(t));
    }
    cfg.validate();

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "certify") return cmd_certify(cfg);
    if (cmd == "norm") return cmd_norm(cfg);
    if (cmd == "kernel-sweep") return cmd_kernel_sweep(cfg);
    if (cmd == "projection-probe") return cmd_projection_probe(cfg);
    if (cmd == "basis") return cmd_basis(cfg);
    return cmd_accept(cfg);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number (" << e.what() << ")" << std::endl;
    return kExitInput;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << std::endl;
    return kExitFail;
  }
}
