#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "mixnorm/io.hpp"

using namespace mixnorm;

namespace {

const std::string kOut = ::testing::TempDir() + "mixnorm_cli";

int run(const std::string& args) {
  const std::string cmd = std::string(MIXNORM_CLI) + " " + args + " --out " + kOut + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, NormExample) {
  ASSERT_EQ(run("norm --f 1,1 --weight std:0 --p 2 --q 2"), 0);
  const Json j = Json::parse(read_text(kOut + "/norm.json"));
  EXPECT_NEAR(j[0]["norm_with_r"].get<double>(), std::sqrt(3.0) / 2, 1e-9);
  ASSERT_EQ(run("norm --f 0 --weight std:0 --q inf"), 0);
  EXPECT_EQ(Json::parse(read_text(kOut + "/norm.json"))[0]["norm_weak"], 0.0);
}

TEST(Cli, CertifyVerdictsAreData) {
  ASSERT_EQ(run("certify --weight exp:1"), 0);
  const Json j = Json::parse(read_text(kOut + "/certify.json"));
  EXPECT_FALSE(j[0]["Dhat"]["certified"].get<bool>());
}

TEST(Cli, InvalidInputExitsTwo) {
  EXPECT_EQ(run("certify --weight std:"), 2);
  EXPECT_EQ(run("norm --f 1,a --weight std:0"), 2);
  EXPECT_EQ(run("norm --weight std:0"), 2);
  write_text(::testing::TempDir() + "bad_f.json", "[[1, 2]");
  EXPECT_EQ(run("norm --f-file " + ::testing::TempDir() + "bad_f.json"), 2);
  EXPECT_EQ(run("projection-probe --weight std:0 --q 1"), 2);
  EXPECT_EQ(run("nosuchcommand"), 2);
}

TEST(Cli, ConfigFile) {
  const std::string cfg = ::testing::TempDir() + "cfg.json";
  write_text(cfg, R"({"weights": ["std:1"], "f": "1", "p": 2, "q": 2})");
  ASSERT_EQ(run("norm --config " + cfg), 0);
  const Json j = Json::parse(read_text(kOut + "/norm.json"));
  EXPECT_EQ(j[0]["weight"], "std:1");
  EXPECT_NEAR(j[0]["norm_with_r"].get<double>(), std::sqrt(0.5), 1e-12);
  write_text(cfg, "{oops");
  EXPECT_EQ(run("norm --config " + cfg), 2);
}

TEST(Cli, AcceptSubsetAndForcedFailure) {
  EXPECT_EQ(run("accept --only kernel_exact"), 0);
  const Json m = Json::parse(read_text(kOut + "/manifest.json"));
  ASSERT_EQ(m["checks"].size(), 1u);
  EXPECT_EQ(m["checks"][0]["check_id"], "kernel_exact");
  EXPECT_EQ(run("accept --only norm_identity --tolerance 1e-30"), 1);
  const Json f = Json::parse(read_text(kOut + "/manifest.json"));
  EXPECT_EQ(f["checks"][0]["verdict"], "fail");
}
