#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>

#include "mixnorm/config.hpp"
#include "mixnorm/errors.hpp"
#include "mixnorm/io.hpp"

using namespace mixnorm;

TEST(WeightSpec, BuiltIns) {
  EXPECT_EQ(parse_weight("std:0").spec(), RadialWeight::standard(0).spec());
  EXPECT_DOUBLE_EQ(parse_weight("std:1").density(0.0), 2.0);
  EXPECT_DOUBLE_EQ(parse_weight("log:2").tail(0.0), 1.0);
  EXPECT_EQ(parse_weight(" exp:1 ").family(), WeightFamily::exponential);
  auto p = parse_weight("pow:std:0:2");
  EXPECT_EQ(p.family(), WeightFamily::power_transform);
  EXPECT_EQ(p.spec(), power_transform(RadialWeight::standard(0), 2).spec());
  auto nested = parse_weight("beta:pow:log:2:1.5:0.5");
  EXPECT_EQ(nested.family(), WeightFamily::beta_modulated);
  EXPECT_EQ(nested.spec(), "beta:pow:log:2:1.5:0.5");
  for (const char* bad : {"", "std", "std:", "std:x", "foo:1", "pow:std:0", "std:1abc"})
    EXPECT_THROW(parse_weight(bad), DomainError) << bad;
}

TEST(WeightSpec, FileTable) {
  const std::string path = ::testing::TempDir() + "w.csv";
  write_text(path, "r,omega\n0,1\n0.5,1\n1,1\n");
  auto w = parse_weight("file:" + path);
  EXPECT_EQ(w.family(), WeightFamily::tabulated);
  EXPECT_NEAR(w.tail(0.5), 0.5, 1e-14);
  EXPECT_THROW(parse_weight("file:/nonexistent/w.csv"), DomainError);
  write_text(path, "0,1,2\n");
  EXPECT_THROW(parse_weight("file:" + path), DomainError);
}

TEST(WeightJson, Records) {
  for (const char* s : {"std:1", "log:2", "exp:1", "pow:std:0:2"}) {
    auto w = parse_weight(s);
    EXPECT_EQ(weight_from_json(weight_to_json(w)).spec(), w.spec());
  }
  EXPECT_EQ(weight_from_json(Json{{"family", "standard"}, {"params", {1.0}}}).spec(), "std:1");
  auto pw = weight_from_json(
      Json{{"family", "power_transform"}, {"params", {2.0}}, {"base", "std:0"}});
  EXPECT_EQ(pw.spec(), "pow:std:0:2");
  auto tab = weight_from_json(Json{{"r", {0.0, 1.0}}, {"omega", {2.0, 2.0}}});
  EXPECT_NEAR(tab.tail(0.0), 2.0, 1e-14);
  EXPECT_THROW(weight_from_json(Json{{"family", "standard"}}), DomainError);
  EXPECT_THROW(weight_from_json(Json(3)), DomainError);
}

TEST(PolyIo, CoefficientsAndJson) {
  auto f = parse_coeffs("1, 0:2, -0.5");
  ASSERT_EQ(f.degree(), 2);
  EXPECT_EQ(f.coeff(1), cdouble(0, 2));
  EXPECT_EQ(poly_from_json(poly_to_json(f)).coeffs(), f.coeffs());
  EXPECT_EQ(poly_to_json(AnalyticPoly{cdouble(1, -1)}).dump(), "[[1.0,-1.0]]");
  EXPECT_EQ(poly_from_json(Json::parse("[1, [0, 1]]")).coeff(1), cdouble(0, 1));
  EXPECT_THROW(parse_coeffs("1,,2"), DomainError);
  EXPECT_THROW(parse_coeffs("nan"), DomainError);
  EXPECT_THROW(poly_from_json(Json::parse("[]")), DomainError);
  EXPECT_THROW(poly_from_json(Json::parse("[[1,2,3]]")), DomainError);
}

TEST(PolarIo, CsvRoundTrip) {
  Eigen::VectorXd r(2);
  r << 0.25, 0.75;
  Eigen::MatrixXcd v(2, 4);
  for (int i = 0; i < 2; ++i)
    for (int m = 0; m < 4; ++m) v(i, m) = cdouble(i + 0.1 * m, -m);
  const std::string path = ::testing::TempDir() + "s.csv";
  write_text(path, polar_samples_csv(PolarSamples(r, v)));
  auto back = read_polar_samples_csv(path);
  EXPECT_EQ(back.radii, r);
  EXPECT_EQ(back.values, v);
}

TEST(Numbers, NonFinite) {
  EXPECT_EQ(number(kInf).dump(), "\"inf\"");
  EXPECT_EQ(number_from_json(number(kInf)), kInf);
  EXPECT_EQ(number_from_json(number(-kInf)), -kInf);
  EXPECT_TRUE(std::isnan(number_from_json(number(std::nan("")))));
  EXPECT_EQ(number_from_json(number(0.1)), 0.1);
  EXPECT_THROW(number_from_json(Json("x")), DomainError);
}

TEST(Reports, ProbeJsonShape) {
  ProbeReport p;
  p.label = "x";
  p.grid = {{0.1}, {0.2}};
  p.lhs = {1, 2};
  p.rhs = {1, 1};
  p.ratio = summarize_ratios({}, {{{0.1}, 1, 1}, {{0.2}, 2, 1}});
  p.audit = {8, 16, 0.01, true};
  const Json j = to_json(p);
  EXPECT_EQ(j["ratio"]["min"], 1.0);
  EXPECT_EQ(j["ratio"]["max"], 2.0);
  EXPECT_EQ(j["audit"]["D2"], 16);
  EXPECT_EQ(probe_csv(p), "x0,lhs,rhs,ratio\n0.10000000000000001,1,1,1\n0.20000000000000001,2,1,2\n");
}

TEST(Reports, BasisExport) {
  BlockBasis b(build_schedule(RadialWeight::standard(0), 2.0, 6), 1);
  const Json j = to_json(b);
  EXPECT_EQ(j["K"], 2.0);
  EXPECT_EQ(j["M_seq"][3], 8);
  ASSERT_EQ(j["windows"].size(), static_cast<std::size_t>(b.n_blocks()));
  // window values sum to one at every covered frequency
  std::vector<double> total(b.coverage() + 1, 0.0);
  for (const auto& w : j["windows"])
    for (const auto& e : w["coeffs"])
      if (e[0].get<std::int64_t>() <= b.coverage()) total[e[0].get<std::size_t>()] += e[1].get<double>();
  for (double t : total) EXPECT_NEAR(t, 1.0, 1e-15);
}

TEST(Config, RoundTripAndValidation) {
  RunConfig c;
  c.weights = {"log:2", "pow:std:0:2"};
  c.q = kInf;
  c.N = {0, 2};
  c.only = {"kernel"};
  c.seed = 7;
  c.tolerance = 1e-30;
  const Json j = to_json(c);
  const RunConfig back = config_from_json(j);
  EXPECT_EQ(to_json(back).dump(), j.dump());
  EXPECT_EQ(back.q, kInf);
  EXPECT_NO_THROW(back.validate());
  EXPECT_EQ(config_from_json(Json::object()).weights, RunConfig{}.weights);

  auto bad = [](auto mutate) {
    RunConfig r;
    mutate(r);
    return r;
  };
  EXPECT_THROW(bad([](RunConfig& r) { r.p = 0; }).validate(), DomainError);
  EXPECT_THROW(bad([](RunConfig& r) { r.weights = {}; }).validate(), DomainError);
  EXPECT_THROW(bad([](RunConfig& r) { r.weights = {"x:1"}; }).validate(), DomainError);
  EXPECT_THROW(bad([](RunConfig& r) { r.s_max = 1; }).validate(), DomainError);
  EXPECT_THROW(bad([](RunConfig& r) { r.N = {-1}; }).validate(), DomainError);
  EXPECT_THROW(bad([](RunConfig& r) { r.K = 1; }).validate(), DomainError);
  EXPECT_THROW(bad([](RunConfig& r) { r.inner = "L2"; }).validate(), DomainError);
  EXPECT_THROW(config_from_json(Json{{"p", "two"}}), DomainError);
  EXPECT_THROW(config_from_json(Json{{"n_points", "many"}}), DomainError);
}
