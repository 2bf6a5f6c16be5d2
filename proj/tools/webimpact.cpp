// webimpact: command-line front end for the mention-network pipeline.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "webimpact/pipeline.hpp"

namespace {

struct Overrides {
  std::string roster;
  std::string fixtures;
  std::string samples;
  std::string output_dir;
  std::string summary_mode;
  std::string seed;
  std::vector<std::string> settings;  // key=value
};

void add_common(CLI::App& cmd, std::string& config_path, Overrides& o) {
  cmd.add_option("-c,--config", config_path, "Pipeline configuration file (key = value lines)");
  cmd.add_option("--roster", o.roster, "Institution roster CSV");
  cmd.add_option("--fixtures", o.fixtures, "Hit-count fixture CSV");
  cmd.add_option("--samples", o.samples, "Metric samples as label:path[,label:path...]");
  cmd.add_option("-o,--output-dir", o.output_dir, "Directory for generated files");
  cmd.add_option("--summary-mode", o.summary_mode, "directed or undirected");
  cmd.add_option("--seed", o.seed, "Layout seed");
  cmd.add_option("--set", o.settings, "Override any configuration key (key=value), repeatable");
}

webimpact::PipelineConfig build_config(const std::string& config_path, const Overrides& o) {
  webimpact::PipelineConfig config = config_path.empty() ? webimpact::PipelineConfig{} : webimpact::load_config(config_path);
  webimpact::apply_environment(config);
  const std::vector<std::pair<std::string, const std::string*>> flags{
      {"roster", &o.roster},       {"fixtures", &o.fixtures},         {"samples", &o.samples},
      {"output_dir", &o.output_dir}, {"summary_mode", &o.summary_mode}, {"layout.seed", &o.seed}};
  for (const auto& [key, value] : flags)
    if (!value->empty()) webimpact::apply_setting(config, key, *value);
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw webimpact::ValidationError("--set expects key=value, got '" + kv + "'");
    webimpact::apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"University-company URL mention network toolkit"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands{
      {"plan", "Write the metric query plan"},
      {"collect", "Collect metric and pairwise hit counts and resolve domains"},
      {"ingest", "Load metric samples; flag regional anomalies and sample stability"},
      {"stats", "Descriptives, correlation matrices and PCA"},
      {"net", "Build the mention network; centrality, summary and rankings"},
      {"layout", "Force-directed layout coordinates"},
      {"export", "GEXF export with layout attributes"},
      {"run", "Full pipeline"},
  };

  std::string config_path;
  Overrides overrides;
  bool quiet = false;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(*cmd, config_path, overrides);
    cmd->add_flag("-q,--quiet", quiet, "Do not list written files");
    subs[name] = cmd;
  }

  CLI11_PARSE(app, argc, argv);

  const std::map<std::string, webimpact::Step> steps{
      {"plan", webimpact::Step::Plan}, {"collect", webimpact::Step::Collect}, {"ingest", webimpact::Step::Ingest},
      {"stats", webimpact::Step::Stats}, {"net", webimpact::Step::Net},       {"layout", webimpact::Step::Layout},
      {"export", webimpact::Step::Export}};

  webimpact::PipelineConfig config;
  try {
    config = build_config(config_path, overrides);
  } catch (const webimpact::Error& e) {
    std::cerr << "webimpact: stage 'config': " << e.what() << '\n';
    return 2;
  }

  try {
    webimpact::Pipeline pipeline(std::move(config));
    std::vector<std::string> written;
    for (const auto& [name, cmd] : subs) {
      if (!cmd->parsed()) continue;
      written = name == "run" ? pipeline.run_all() : pipeline.run(steps.at(name));
    }
    if (!quiet)
      for (const auto& f : written) std::cout << (pipeline.config().output_dir / f).string() << '\n';
  } catch (const webimpact::StageError& e) {
    std::cerr << "webimpact: " << e.what() << '\n';
    return e.exit_code();
  }
  return 0;
}
