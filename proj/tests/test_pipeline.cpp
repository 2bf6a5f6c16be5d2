#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include "webimpact/csv.hpp"
#include "webimpact/io.hpp"
#include "webimpact/pipeline.hpp"

using namespace webimpact;
namespace fs = std::filesystem;

namespace {

const fs::path kData = WEBIMPACT_TEST_DATA "/pipeline";

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("webimpact_pipeline_" + name);
  fs::remove_all(dir);
  return dir;
}

PipelineConfig fixture_config(const fs::path& out) {
  auto config = load_config(kData / "pipeline.conf");
  config.output_dir = out;
  return config;
}

struct Run {
  int code = -1;
  std::string output;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + WEBIMPACT_CLI + "\" " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), static_cast<int>(buf.size()), pipe)) r.output += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = read_text_file(e.path());
  return out;
}

std::map<std::string, std::string> summary_of(const fs::path& file) {
  const auto t = read_csv_file(file);
  std::map<std::string, std::string> out;
  for (const auto& row : t.rows) out[row[0]] = row[1];
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# comment\n"
      "roster = r.csv\n"
      "fixtures = /abs/f.csv\n"
      "samples = November:nov.csv, December:dec.csv\n"
      "output_dir = out\n"
      "summary_mode = undirected\n"
      "alpha = 0.001, 0.1\n"
      "top_k = 5\n"
      "pair_scope = cross\n"
      "collector.min_interval = 0.5\n"
      "collector.region_default = turkey\n"
      "layout.temperature = 20\n"
      "layout.size_max = 50\n");
  const auto c = parse_config(in, "/base");
  CHECK(c.roster_path == fs::path("/base/r.csv"));
  CHECK(c.fixtures_path == fs::path("/abs/f.csv"));
  REQUIRE(c.samples.size() == 2);
  CHECK(c.samples[1].label == "December");
  CHECK(c.samples[1].path == fs::path("/base/dec.csv"));
  CHECK(c.summary_mode == SummaryMode::UndirectedView);
  CHECK(c.alpha_levels[0] == 0.001);
  CHECK(c.top_k == 5);
  CHECK(c.pair_scope == PairScope::CrossKindOnly);
  CHECK(c.collector.min_interval == std::chrono::milliseconds(500));
  CHECK(c.collector.region_default == Region::Turkey);
  CHECK(c.layout.temperature0() == 20.0);
  CHECK(c.node_size.max == 50.0);
}

TEST_CASE("config errors name the line") {
  std::istringstream unknown("roster = a\nbogus = 1\n");
  try {
    parse_config(unknown);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream no_eq("roster\n");
  CHECK_THROWS_AS(parse_config(no_eq), ParseError);
  PipelineConfig c;
  CHECK_THROWS_AS(apply_setting(c, "top_k", "zero"), ValidationError);
  CHECK_THROWS_AS(apply_setting(c, "summary_mode", "sideways"), Error);
  CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("environment overrides the output directory") {
  PipelineConfig c;
  c.output_dir = "from_file";
  setenv(kOutputDirEnv, "/tmp/from_env", 1);
  apply_environment(c);
  CHECK(c.output_dir == fs::path("/tmp/from_env"));
  unsetenv(kOutputDirEnv);
  c.output_dir = "kept";
  apply_environment(c);
  CHECK(c.output_dir == fs::path("kept"));
}

TEST_CASE("full run on the bundled fixture") {
  const auto out = temp_dir("full");
  const auto written = run_pipeline(fixture_config(out));
  for (const char* f : {"query_plan.csv", "metric_hits.csv", "resolved_nodes.csv", "exclusions.csv", "pairwise.csv",
                        "anomalies.csv", "stability.csv", "descriptives_universities.csv",
                        "correlation_universities_rho.csv", "pca_companies_loadings.csv", "network.net",
                        "node_metrics.csv", "network_summary.csv", "taxonomy.csv", "top_combinations.csv",
                        "interaction_ranking.csv", "layout.csv", "network.gexf"}) {
    CHECK_MESSAGE(fs::exists(out / f), f);
    CHECK(std::find(written.begin(), written.end(), f) != written.end());
  }

  const auto s = summary_of(out / "network_summary.csv");
  const double n = std::stod(s.at("nodes"));
  CHECK(std::abs(std::stod(s.at("graph_density")) - std::stod(s.at("average_degree")) / (n - 1)) <= 1e-12);

  const auto excl = read_csv_file(out / "exclusions.csv");
  std::set<std::string> excluded;
  for (const auto& row : excl.rows) excluded.insert(row[0]);
  CHECK(excluded == std::set<std::string>{"C05", "C07"});

  const auto resolved = read_csv_file(out / "resolved_nodes.csv");
  bool arcelik = false;
  for (const auto& row : resolved.rows)
    if (row[0] == "C01") arcelik = row[resolved.column("domain")] == "arcelik.com.tr";
  CHECK(arcelik);

  const auto anomalies = read_text_file(out / "anomalies.csv");
  CHECK(anomalies.find("December,U08,62200,685000") != std::string::npos);

  const auto net_text = read_text_file(out / "network.net");
  std::istringstream net_in(net_text);
  const auto net = read_pajek(net_in);
  CHECK(net.node_count() == static_cast<std::size_t>(n));
}

TEST_CASE("rerun is byte-identical") {
  const auto a = temp_dir("rerun_a");
  const auto b = temp_dir("rerun_b");
  run_pipeline(fixture_config(a));
  run_pipeline(fixture_config(b));
  const auto fa = read_dir(a);
  const auto fb = read_dir(b);
  CHECK(fa.size() == fb.size());
  for (const auto& [name, content] : fa) CHECK_MESSAGE(fb.at(name) == content, name);
}

TEST_CASE("single steps compute their inputs") {
  const auto out = temp_dir("steps");
  Pipeline p(fixture_config(out));
  const auto files = p.run(Step::Net);
  CHECK(std::find(files.begin(), files.end(), "network_summary.csv") != files.end());
  CHECK(fs::exists(out / "network.net"));
  CHECK_FALSE(fs::exists(out / "network.gexf"));
}

TEST_CASE("stage errors") {
  auto config = fixture_config(temp_dir("missing"));
  config.roster_path = "/nonexistent/roster.csv";
  try {
    run_pipeline(config);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.exit_code() == 2);
    CHECK(std::string(e.what()).find("/nonexistent/roster.csv") != std::string::npos);
  }
}

TEST_CASE("cli run, flags and exit codes") {
  const auto out = temp_dir("cli");
  const auto conf = (kData / "pipeline.conf").string();
  const auto ok = run_cli("run -q -c \"" + conf + "\" -o \"" + out.string() + "\"");
  CHECK(ok.code == 0);
  CHECK(ok.output.empty());
  CHECK(fs::exists(out / "network.gexf"));

  const auto missing = run_cli("run -c \"" + conf + "\" -o \"" + out.string() + "\" --roster /nonexistent/roster.csv");
  CHECK(missing.code == 2);
  CHECK(missing.output.find("/nonexistent/roster.csv") != std::string::npos);
  CHECK(missing.output.find("stage '") != std::string::npos);

  const auto bad_key = run_cli("plan -c \"" + conf + "\" -o \"" + out.string() + "\" --set nonsense=1");
  CHECK(bad_key.code == 2);

  const auto plan = run_cli("plan -c \"" + conf + "\" -o \"" + (out / "plan_only").string() + "\"");
  CHECK(plan.code == 0);
  CHECK(plan.output.find("query_plan.csv") != std::string::npos);

  const auto env_dir = temp_dir("cli_env");
  setenv(kOutputDirEnv, env_dir.string().c_str(), 1);
  const auto env_run = run_cli("plan -q -c \"" + conf + "\"");
  unsetenv(kOutputDirEnv);
  CHECK(env_run.code == 0);
  CHECK(fs::exists(env_dir / "query_plan.csv"));

  CHECK(run_cli("").code != 0);
}
