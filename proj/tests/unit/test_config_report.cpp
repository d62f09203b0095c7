#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "ncsigma/config.hpp"
#include "ncsigma/report.hpp"

using namespace ncsigma;

namespace {

TEST(Config, DefaultsAreValid) {
  RunConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.theta, 0.2);
  EXPECT_EQ(cfg.trunc_box, 32);
  EXPECT_EQ(cfg.grid_points, 4001);
}

TEST(Config, ValidateRejectsBadValues) {
  auto bad = [](auto mutate) {
    RunConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](RunConfig& c) { c.theta = 0.0; }).validate(), UsageError);
  EXPECT_THROW(bad([](RunConfig& c) { c.theta = 1.0; }).validate(), UsageError);
  EXPECT_THROW(bad([](RunConfig& c) { c.trunc_box = 0; }).validate(), UsageError);
  EXPECT_THROW(bad([](RunConfig& c) { c.grid_points = 100; }).validate(), UsageError);
  EXPECT_THROW(bad([](RunConfig& c) { c.grid_points = 1; }).validate(), UsageError);
  EXPECT_THROW(bad([](RunConfig& c) { c.tolerances.quadrature_eps = 0.0; }).validate(), UsageError);
}

TEST(Config, ParseKeyValue) {
  std::istringstream in(R"(# experiment
theta = 0.3
lambda-re=0.25
lambda_im = -0.5   # trailing comment
trunc=16

grid_points=2001
alg_eps=1e-11
format=csv
seed=7
)");
  RunConfig cfg;
  parse_config(in, cfg);
  EXPECT_EQ(cfg.theta, 0.3);
  EXPECT_EQ(cfg.lambda, Complex(0.25, -0.5));
  EXPECT_EQ(cfg.trunc_box, 16);
  EXPECT_EQ(cfg.grid_points, 2001);
  EXPECT_EQ(cfg.tolerances.algebraic_eps, 1e-11);
  EXPECT_EQ(cfg.output_format, OutputFormat::csv);
  EXPECT_EQ(cfg.seed, 7u);
}

TEST(Config, ParseErrors) {
  RunConfig cfg;
  std::istringstream no_eq("theta 0.3\n");
  EXPECT_THROW(parse_config(no_eq, cfg), UsageError);
  std::istringstream unknown("colour=red\n");
  EXPECT_THROW(parse_config(unknown, cfg), UsageError);
  EXPECT_THROW(apply_setting(cfg, "theta", "abc"), UsageError);
  EXPECT_THROW(apply_setting(cfg, "trunc", "3.5"), UsageError);
  EXPECT_THROW(apply_setting(cfg, "format", "xml"), UsageError);
  EXPECT_THROW(load_config_file("/nonexistent/ncsigma.cfg", cfg), UsageError);
}

TEST(Config, NumberParsing) {
  EXPECT_EQ(parse_real("1e-3", "x"), 1e-3);
  EXPECT_EQ(parse_real(" -2.5 ", "x"), -2.5);
  EXPECT_EQ(parse_integer("42", "x"), 42);
  EXPECT_THROW(parse_integer("4x", "x"), UsageError);
  EXPECT_EQ(parse_format("json"), OutputFormat::json);
  EXPECT_EQ(to_string(OutputFormat::csv), "csv");
}

TEST(Config, JsonOmitsOutputPath) {
  RunConfig cfg;
  cfg.output_path = "/tmp/x.json";
  nlohmann::json j = cfg;
  EXPECT_FALSE(j.contains("output_path"));
  EXPECT_EQ(j["theta"], 0.2);
  EXPECT_TRUE(j.contains("tolerances"));
}

TEST(Report, ExitCodes) {
  ModelReport r;
  EXPECT_EQ(r.exit_code(), kExitOk);
  r.add_check("a", true, 0.0, 1.0);
  EXPECT_EQ(r.exit_code(), kExitOk);
  r.add_check("b", false, 2.0, 1.0);
  EXPECT_EQ(r.exit_code(), kExitInvariant);
  r.errors.push_back({"inversion", "diverged", {}});
  EXPECT_EQ(r.exit_code(), kExitNumerical);
}

TEST(Report, JsonShape) {
  ModelReport r;
  r.model = "instanton";
  r.theta = 0.2;
  r.energy = 1.5;
  r.add_check("x", true, 0.1, 0.2, "note");
  const auto j = to_json(r);
  for (const char* k : {"model", "theta", "inputs", "energy", "residuals", "chern", "tolerances",
                        "convergence", "metrics", "config", "checks", "errors", "pass"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  EXPECT_TRUE(j["chern"].is_null());
  EXPECT_EQ(j["checks"][0]["note"], "note");
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Report, CsvPrefersRows) {
  ModelReport r;
  r.add_check("chk", true, 0.5, 1.0);
  EXPECT_EQ(to_csv(r), "check,pass,value,threshold\nchk,true,0.5,1\n");
  r.convergence.push_back({{"N", 8}, {"tau", 0.2}});
  EXPECT_EQ(to_csv(r), "N,tau\n8,0.20000000000000001\n");
  r.rows.push_back({{"b", "x,y"}, {"a", nullptr}});
  EXPECT_EQ(to_csv(r), "a,b\n,\"x,y\"\n");
}

TEST(Report, RenderFormats) {
  ModelReport r;
  r.model = "m";
  EXPECT_EQ(render(r, OutputFormat::csv), to_csv(r));
  const auto text = render(r, OutputFormat::json);
  EXPECT_EQ(nlohmann::json::parse(text)["model"], "m");
}

}  // namespace
