#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kuothom/arcs.hpp"
#include "kuothom/cli.hpp"
#include "kuothom/errors.hpp"
#include "kuothom/text.hpp"
#include "test_support.hpp"

using namespace kuothom;
using namespace kuothom::cli;
using kuothom::testing::P;
namespace fs = std::filesystem;

namespace {

TaskConfig small_config(std::uint64_t seed = 1) {
  TaskConfig c;
  c.seed = seed;
  c.m = {1};
  c.r = {1, 2};
  c.grid = 180;
  c.ratio_samples = 200;
  c.relative.samples = 128;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

/// Runs the tool through the shell and returns its exit status.
int run_tool(const std::string& args) {
  const std::string cmd = std::string(KUOTHOM_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("kuothom_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void put(const fs::path& p, const std::string& content) { std::ofstream(p, std::ios::binary) << content; }

}  // namespace

TEST(Number, TwelveSignificantDigits) {
  EXPECT_EQ(number(0.1).dump(), "0.1");
  EXPECT_EQ(number(1.0 / 3.0).dump(), "0.333333333333");
  EXPECT_EQ(number(2.0 / 3.0 * 1e-20).dump(), "6.66666666667e-21");
  EXPECT_EQ(number(-0.0).dump(), "0.0");
  EXPECT_TRUE(number(INFINITY).is_null());
  EXPECT_TRUE(number(NAN).is_null());
}

TEST(Config, DefaultsAndOverrides) {
  const TaskConfig d = parse_config_text("{}");
  EXPECT_EQ(d.radii, default_radii());
  EXPECT_EQ(d.grid, 720u);
  EXPECT_FALSE(d.seed);
  const TaskConfig c = parse_config_text(R"({"m": 3, "r": [1, 5], "seed": 9, "tolerance": 0.2,
      "arcs": {"count": 0, "file": "a.txt"},
      "relative": {"ball": 0.1, "compatibility": {"g": ["y^2"], "t": [0, "1/3", 1], "r": 2}}})");
  EXPECT_EQ(c.m, std::vector<unsigned>{3});
  EXPECT_EQ(c.r, (std::vector<unsigned>{1, 5}));
  EXPECT_EQ(*c.seed, 9u);
  EXPECT_EQ(c.arcs.count, 0u);
  EXPECT_EQ(*c.arcs.file, "a.txt");
  ASSERT_TRUE(c.relative.compatibility);
  EXPECT_EQ(c.relative.compatibility->t, (std::vector<std::string>{"0", "1/3", "1"}));
  EXPECT_EQ(config_json(parse_config(config_json(c))), config_json(c));
  EXPECT_EQ(config_json(parse_config(config_json(d))), config_json(d));
}

TEST(Config, RejectsBadValues) {
  for (const char* bad : {R"({"bogus": 1})", R"({"m": 0})", R"({"m": []})", R"({"r": -1})", R"({"grid": 1.5})",
                          R"({"tolerance": 0})", R"({"radii": [0.1, 0.05, 0.05, 0.01]})", R"({"radii": [0.1, 0.05]})",
                          R"({"seed": -3})", R"({"arcs": {"max_exponent": 0}})", R"({"relative": {"bands": 2}})",
                          R"({"relative": {"compatibility": {"t": ["1/2"]}}})",
                          R"({"relative": {"compatibility": {"g": "y", "t": ["3/2"]}}})",
                          R"({"relative": {"compatibility": {"g": "y", "t": ["1/0"]}}})", "[1, 2", "[]"})
    EXPECT_THROW(parse_config_text(bad), ConfigError) << bad;
}

TEST(GermFile, Format) {
  const MapGerm f = parse_germ("# the example\nx - y^2   # first\n\nx^2\n");
  EXPECT_EQ(f, MapGerm(2, {P("x - y^2"), P("x^2")}));
  const MapGerm g = parse_germ("n: 3\nr: 4\nx*y\n");
  EXPECT_EQ(g.n(), 3u);
  EXPECT_EQ(g.jet_degree(), 4u);
  EXPECT_EQ(parse_germ("y^3").n(), 2u);
}

TEST(GermFile, ErrorsCarryPositions) {
  const auto position = [](const char* text) {
    try {
      parse_germ(text);
    } catch (const ParseError& e) {
      return std::make_pair(e.line(), e.column());
    }
    return std::make_pair(std::size_t{0}, std::size_t{0});
  };
  EXPECT_EQ(position("x\n  y +* x\n"), std::make_pair(std::size_t{2}, std::size_t{6}));
  EXPECT_EQ(position("# only a comment\n").first, 2u);
  EXPECT_EQ(position("x\n1 + y\n"), std::make_pair(std::size_t{2}, std::size_t{1}));
  EXPECT_EQ(position("q: 3\nx\n"), std::make_pair(std::size_t{1}, std::size_t{1}));
  EXPECT_EQ(position("n: two\nx\n").first, 1u);
  EXPECT_EQ(position("x\ny\nx*y\n").first, 3u);
  EXPECT_THROW(parse_germ("n: 1\ny\n"), ParseError);
}

TEST(Analyze, WorkedExampleSymbolicForms) {
  const Report r = cmd_analyze(parse_germ("x - y^2\nx^2\n"), small_config());
  const auto& res = r.json["results"];
  EXPECT_EQ(P(res["symbolic"]["K"].get<std::string>().c_str()),
            P("16*(x^2 + y^2)*x^2*y^2 + (x - y^2)^2 + x^4"));
  EXPECT_EQ(P(res["symbolic"]["T"].get<std::string>().c_str()), P("(x - y^2)^2 + x^4"));
  EXPECT_EQ(res["minors"]["kuo"][0]["value"], "4*x*y");
  EXPECT_TRUE(res["minors"]["thom"].empty());
  EXPECT_EQ(r.json["schema"], 1);
  EXPECT_EQ(r.exit_code, kOk);
}

TEST(Analyze, ZeroMapFailsEverythingWithDiagnostic) {
  const Report r = cmd_analyze(MapGerm(2, {Polynomial(2)}), small_config());
  const auto& res = r.json["results"];
  ASSERT_FALSE(res["diagnostics"].empty());
  EXPECT_NE(res["diagnostics"][0].get<std::string>().find("zero map"), std::string::npos);
  for (const auto& c : res["conditions"]) {
    EXPECT_FALSE(c["holds"].get<bool>()) << c.dump();
    EXPECT_FALSE(c["diagnostic"].is_null());
  }
  for (const auto& e : res["equivalence"]) {
    EXPECT_FALSE(e["kuo"]["holds"].get<bool>());
    EXPECT_FALSE(e["thom"]["holds"].get<bool>());
  }
}

TEST(Analyze, IdentityMapUsesTheSquareBranch) {
  const Report r = cmd_analyze(parse_germ("x\ny\n"), small_config());
  const auto& res = r.json["results"];
  EXPECT_EQ(P(res["symbolic"]["T"].get<std::string>().c_str()), P("x^2 + y^2"));
  bool noted = false;
  for (const auto& d : res["diagnostics"]) noted |= d.get<std::string>().find("n = p") != std::string::npos;
  EXPECT_TRUE(noted);
  // |f| = |x| exactly, so every T_1 minimum is the radius.
  for (const auto& s : res["scans"])
    if (s["id"] == "thom_1")
      for (std::size_t k = 0; k < s["radii"].size(); ++k)
        EXPECT_NEAR(s["min_values"][k].get<double>(), s["radii"][k].get<double>(), 1e-9);
}

TEST(Analyze, RequiresSeed) {
  TaskConfig c = small_config();
  c.seed.reset();
  EXPECT_THROW(cmd_analyze(parse_germ("x"), c), ConfigError);
}

TEST(Arcs, ExplicitArcRow) {
  const std::vector<Arc> arcs{parse_arc("t^2; t")};
  const Report r = cmd_arcs(parse_germ("x - y^2"), small_config(), std::span<const Arc>(arcs));
  const auto& row = r.json["results"]["probes"][0]["rows"][0];
  EXPECT_EQ(row["ord_K"], 1);
  EXPECT_EQ(row["ord_T"], 1);
  EXPECT_EQ(r.csv_files.at(0).second, "arc_id,ord_K,ord_T,equal\n0,1,1,true\n");
}

TEST(Arcs, EmptyListIsFine) {
  TaskConfig c = small_config();
  c.seed.reset();
  const Report r = cmd_arcs(parse_germ("x - y^2"), c, std::span<const Arc>());
  EXPECT_TRUE(r.json["results"]["probes"][0]["rows"].empty());
  EXPECT_EQ(r.exit_code, kOk);
  EXPECT_THROW(cmd_arcs(parse_germ("x - y^2"), c), ConfigError);
}

TEST(Arcs, WorkedExampleAgainstFullComposition) {
  TaskConfig c = small_config(7);
  c.arcs.count = 50;
  const MapGerm f = parse_germ("x - y^2\nx^2");
  const Report r = cmd_arcs(f, c);
  const auto& probe = r.json["results"]["probes"][0];
  EXPECT_EQ(probe["equal"], 50);
  EXPECT_EQ(probe["mismatch"], 0);
  const GermQuantities q(f);
  const auto ord = [](const nlohmann::ordered_json& j) {
    return j.is_string() ? Order::infinity() : Order(j.get<std::uint64_t>());
  };
  for (std::size_t i = 0; i < 50; ++i) {
    // The printed arc re-parses; orders come from the untruncated compositions.
    const Arc arc = parse_arc(r.json["results"]["arcs"][i].get<std::string>());
    const auto& lam = arc.components();
    const Order u = std::min(compose(f.component(0), lam).order(), compose(f.component(1), lam).order());
    const Order v = arc.order() + compose(q.minors().kuo()[0].value, lam).order();
    EXPECT_EQ(ord(probe["rows"][i]["ord_K"]), std::min(u, v));
    EXPECT_EQ(ord(probe["rows"][i]["ord_T"]), u);
  }
}

TEST(Arcs, DimensionMismatch) {
  const std::vector<Arc> arcs{parse_arc("t; t; t")};
  EXPECT_THROW(cmd_arcs(parse_germ("x - y^2"), small_config(), std::span<const Arc>(arcs)), ConfigError);
}

TEST(Relative, SquareAlongTheAxis) {
  TaskConfig c = small_config();
  c.r = {2};
  c.relative.compatibility = CompatibilityTask{{"y^2 + x*y^3"}};
  const Report r = cmd_relative(parse_germ("y^2"), parse_sigma("subspaces: [x]", 2), c);
  const auto& res = r.json["results"];
  EXPECT_TRUE(res["conditions"][0]["kuo"]["holds"].get<bool>());
  EXPECT_TRUE(res["conditions"][0]["thom"]["holds"].get<bool>());
  EXPECT_EQ(res["sigma"]["distance_method"], "exact");
  EXPECT_EQ(res["sigma"]["coherence"], "assumed, not checked");
  EXPECT_TRUE(res["compatibility"]["consistent"].get<bool>());
  EXPECT_EQ(res["compatibility"]["rows"].size(), 5u);
  for (const auto& row : res["compatibility"]["rows"]) EXPECT_TRUE(row["holds"].get<bool>());
  EXPECT_TRUE(res["notes"].empty());
}

TEST(Relative, OriginNotesTheReduction) {
  const Report r = cmd_relative(parse_germ("x - y^2"), SigmaSet::origin(2), small_config());
  ASSERT_EQ(r.json["results"]["notes"].size(), 1u);
}

TEST(Relative, PreconditionsAndVariants) {
  TaskConfig c = small_config();
  c.relative.compatibility = CompatibilityTask{{"y^2 + x^2"}};
  const MapGerm f = parse_germ("y^2");
  EXPECT_THROW(cmd_relative(f, parse_sigma("subspaces: [x]", 2), c), PreconditionError);
  EXPECT_THROW(cmd_relative(f, parse_sigma("zeros: y", 2), c), UnsupportedError);
  EXPECT_THROW(cmd_relative(f, parse_sigma("subspaces: [x]", 3), small_config()), ConfigError);
  c.relative.compatibility.reset();
  EXPECT_THROW(cmd_relative(f, parse_sigma("subspaces: [x, y]", 2), c), PreconditionError);
  const Report alg = cmd_relative(f, parse_sigma("zeros: y", 2), c);
  EXPECT_EQ(alg.json["results"]["sigma"]["variant"], "algebraic");
  EXPECT_EQ(alg.json["results"]["sigma"]["distance_method"], "projection");
}

TEST(Report, PolynomialsRoundTrip) {
  const MapGerm f = parse_germ("n: 3\nx*y - z^3\n1/2*x^2 + y*z");
  const Report r = cmd_analyze(f, small_config());
  const auto& res = r.json["results"];
  std::vector<Polynomial> printed;
  for (const auto& c : res["germ"]["components"]) printed.push_back(parse_polynomial(c.get<std::string>(), 3));
  EXPECT_EQ(printed, f.components());
  const GermQuantities q(f);
  for (std::size_t i = 0; i < q.minors().kuo().size(); ++i)
    EXPECT_EQ(parse_polynomial(res["minors"]["kuo"][i]["value"].get<std::string>(), 3), q.minors().kuo()[i].value);
  for (std::size_t i = 0; i < q.minors().thom().size(); ++i)
    EXPECT_EQ(parse_polynomial(res["minors"]["thom"][i]["value"].get<std::string>(), 3),
              q.minors().thom()[i].value);
  EXPECT_EQ(parse_polynomial(res["symbolic"]["K"].get<std::string>(), 3), q.kuo_polynomial(2));
  EXPECT_EQ(parse_polynomial(res["symbolic"]["T"].get<std::string>(), 3), q.thom_polynomial(2));
}

TEST(Example, DeterministicAndMatchesGolden) {
  const std::string a = render(cmd_example(TaskConfig{}));
  const std::string b = render(cmd_example(TaskConfig{}));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, slurp(fs::path(KUOTHOM_GOLDEN_DIR) / "example.json"));
  const Report r = cmd_example(TaskConfig{});
  EXPECT_TRUE(r.json["results"]["reference"]["K_2"]["equal"].get<bool>());
  EXPECT_TRUE(r.json["results"]["reference"]["T_2"]["equal"].get<bool>());
  EXPECT_TRUE(r.json["results"]["ratio_grid"]["within"].get<bool>());
  EXPECT_EQ(r.json["config"]["seed"], 7);
  TaskConfig other;
  other.seed = 8;
  EXPECT_NE(render(cmd_example(other)), a);
}

TEST(Tool, ExitCodes) {
  const fs::path dir = scratch("exit");
  put(dir / "y2.germ", "y^2\n");
  put(dir / "bad.germ", "x - y^^2\n");
  put(dir / "axis.sigma", "subspaces: [x]\n");
  put(dir / "zeros.sigma", "zeros: y\n");
  put(dir / "ok.json", R"({"m": [1], "r": [2], "grid": 90, "relative": {"samples": 64}})");
  put(dir / "compat.json", R"({"m": [1], "r": [2], "relative": {"samples": 64, "compatibility": {"g": "y^2 + x^2"}}})");
  put(dir / "arcs.json", R"({"m": [1], "arcs": {"file": "arcs.txt"}})");
  put(dir / "arcs.txt", "t^2; t\n");
  const std::string d = dir.string() + "/";
  EXPECT_EQ(run_tool("analyze --germ " + d + "y2.germ --config " + d + "ok.json --seed 3"), 0);
  EXPECT_EQ(run_tool("analyze --germ " + d + "y2.germ --config " + d + "ok.json"), 1);
  EXPECT_EQ(run_tool("analyze --germ " + d + "bad.germ --seed 3"), 1);
  EXPECT_EQ(run_tool("analyze --germ " + d + "missing.germ --seed 3"), 1);
  EXPECT_EQ(run_tool("frobnicate"), 1);
  EXPECT_EQ(run_tool("arcs --germ " + d + "y2.germ --config " + d + "arcs.json"), 0);
  EXPECT_EQ(run_tool("relative --germ " + d + "y2.germ --sigma " + d + "axis.sigma --config " + d +
                     "compat.json --seed 1"),
            2);
  EXPECT_EQ(run_tool("relative --germ " + d + "y2.germ --sigma " + d + "zeros.sigma --config " + d +
                     "compat.json --seed 1"),
            2);
  EXPECT_EQ(run_tool("relative --germ " + d + "y2.germ --sigma " + d + "axis.sigma --config " + d +
                     "ok.json --seed 1 --out " + d + "rel"),
            0);
  EXPECT_TRUE(fs::exists(dir / "rel" / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "rel" / "scan_relative_kuo_1.csv"));
}

TEST(Tool, ExampleRunsAreByteIdentical) {
  const fs::path dir = scratch("example");
  ASSERT_EQ(run_tool("example --seed 5 --out " + (dir / "a").string()), 0);
  ASSERT_EQ(run_tool("example --seed 5 --out " + (dir / "b").string()), 0);
  for (const auto& entry : fs::directory_iterator(dir / "a"))
    EXPECT_EQ(slurp(entry.path()), slurp(dir / "b" / entry.path().filename())) << entry.path();
  EXPECT_EQ(slurp(dir / "a" / "arcs_m2.csv").substr(0, 24), "arc_id,ord_K,ord_T,equal");
}
