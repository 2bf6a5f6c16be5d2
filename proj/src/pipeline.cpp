#include "webimpact/pipeline.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "webimpact/csv.hpp"
#include "webimpact/ingest.hpp"
#include "webimpact/io.hpp"
#include "webimpact/network.hpp"
#include "webimpact/reports.hpp"
#include "webimpact/stats.hpp"

namespace webimpact {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ValidationError("setting '" + std::string(key) + "': bad value '" + std::string(text) + "'");
  return value;
}

std::filesystem::path resolve_path(std::string_view value, const std::filesystem::path& base) {
  std::filesystem::path p{std::string(value)};
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(',');
    const auto item = trim(s.substr(0, pos));
    if (!item.empty()) out.push_back(item);
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

const std::vector<std::string> kUniversityVariables{"tpc",           "apc",          "citations",   "gum",
                                                    "domain_authority", "external_links", "root_domains"};
const std::vector<std::string> kCompanyVariables{"tpc",           "gum",          "domain_authority",
                                                 "external_links", "root_domains", "sales"};

DataTable sample_table(const SampleSet& sample, const std::map<std::string, InstitutionKind>& kinds,
                       InstitutionKind kind, const std::vector<std::string>& variables) {
  std::vector<const WebMetricsRecord*> rows;
  for (const auto& [id, rec] : sample.records()) {
    const auto it = kinds.find(id);
    if (it != kinds.end() && it->second == kind) rows.push_back(&rec);
  }
  DataTable table;
  table.columns = variables;
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(variables.size()));
  for (std::size_t c = 0; c < variables.size(); ++c) {
    const MetricField field = parse_metric_field(variables[c]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          field_value(*rows[r], field).value_or(std::numeric_limits<double>::quiet_NaN());
  }
  return table;
}

// log10(1 + x) on every present value, except domain authority, which is
// already a bounded score.
DataTable log_table(const DataTable& raw) {
  DataTable out = raw;
  for (Eigen::Index c = 0; c < out.values.cols(); ++c) {
    if (out.columns[static_cast<std::size_t>(c)] == "domain_authority") continue;
    for (Eigen::Index r = 0; r < out.values.rows(); ++r) {
      double& v = out.values(r, c);
      if (!std::isnan(v)) v = log_transform(std::span<const double>(&v, 1)).front();
    }
  }
  return out;
}

std::vector<std::pair<std::string, Descriptives>> describe_table(const DataTable& table) {
  std::vector<std::pair<std::string, Descriptives>> out;
  for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
    std::vector<double> present;
    for (Eigen::Index r = 0; r < table.values.rows(); ++r)
      if (!std::isnan(table.values(r, c))) present.push_back(table.values(r, c));
    if (present.empty()) continue;
    out.emplace_back(table.columns[static_cast<std::size_t>(c)], describe(present));
  }
  return out;
}

}  // namespace

void apply_setting(PipelineConfig& c, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir) {
  value = trim(value);
  try {
    if (key == "roster") {
      c.roster_path = resolve_path(value, base_dir);
    } else if (key == "fixtures") {
      c.fixtures_path = resolve_path(value, base_dir);
    } else if (key == "output_dir") {
      c.output_dir = resolve_path(value, base_dir);
    } else if (key == "samples") {
      c.samples.clear();
      for (auto item : split_list(value)) {
        const auto colon = item.find(':');
        if (colon == std::string_view::npos || colon == 0)
          throw ValidationError("setting 'samples': expected label:path, got '" + std::string(item) + "'");
        c.samples.push_back({std::string(trim(item.substr(0, colon))), resolve_path(trim(item.substr(colon + 1)), base_dir)});
      }
    } else if (key == "summary_mode") {
      c.summary_mode = parse_summary_mode(value);
    } else if (key == "alpha") {
      const auto items = split_list(value);
      if (items.size() != 2) throw ValidationError("setting 'alpha': expected two levels");
      c.alpha_levels = {parse_value<double>(key, items[0]), parse_value<double>(key, items[1])};
    } else if (key == "top_k") {
      c.top_k = parse_value<std::size_t>(key, value);
    } else if (key == "components") {
      c.components = parse_value<int>(key, value);
    } else if (key == "pair_scope") {
      if (value == "all")
        c.pair_scope = PairScope::AllPairs;
      else if (value == "cross")
        c.pair_scope = PairScope::CrossKindOnly;
      else
        throw ValidationError("setting 'pair_scope': expected all or cross");
    } else if (key == "collector.min_interval") {
      c.collector.min_interval = std::chrono::duration_cast<std::chrono::nanoseconds>(
          std::chrono::duration<double>(parse_value<double>(key, value)));
    } else if (key == "collector.jitter") {
      c.collector.jitter_fraction = parse_value<double>(key, value);
    } else if (key == "collector.max_retries") {
      c.collector.max_retries = parse_value<int>(key, value);
    } else if (key == "collector.workers") {
      c.collector.workers = parse_value<unsigned>(key, value);
    } else if (key == "collector.seed") {
      c.collector.seed = parse_value<std::uint64_t>(key, value);
    } else if (key == "collector.region_default") {
      c.collector.region_default = parse_region(value);
    } else if (key == "layout.width") {
      c.layout.width = parse_value<double>(key, value);
    } else if (key == "layout.height") {
      c.layout.height = parse_value<double>(key, value);
    } else if (key == "layout.iterations") {
      c.layout.iterations = parse_value<int>(key, value);
    } else if (key == "layout.c") {
      c.layout.c_constant = parse_value<double>(key, value);
    } else if (key == "layout.temperature") {
      c.layout.initial_temperature = parse_value<double>(key, value);
    } else if (key == "layout.seed") {
      c.layout.seed = parse_value<std::uint64_t>(key, value);
    } else if (key == "layout.size_min") {
      c.node_size.min = parse_value<double>(key, value);
    } else if (key == "layout.size_max") {
      c.node_size.max = parse_value<double>(key, value);
    } else {
      throw ValidationError("unknown setting '" + std::string(key) + "'");
    }
  } catch (const ParseError& e) {
    throw ValidationError("setting '" + std::string(key) + "': " + e.what());
  }
}

PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  PipelineConfig config;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = trim(raw);
    if (line.empty() || line.starts_with('#')) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", lineno);
    const auto key = trim(line.substr(0, eq));
    try {
      apply_setting(config, key, line.substr(eq + 1), base_dir);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  try {
    return parse_config(in, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void apply_environment(PipelineConfig& config) {
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) config.output_dir = dir;
}

void validate(const PipelineConfig& c) {
  if (c.roster_path.empty()) throw ValidationError("roster path is empty");
  if (c.fixtures_path.empty()) throw ValidationError("fixtures path is empty");
  if (c.output_dir.empty()) throw ValidationError("output_dir is empty");
  for (const auto& s : c.samples) {
    if (s.label.empty() || s.path.empty()) throw ValidationError("sample entries need a label and a path");
  }
  for (double a : c.alpha_levels)
    if (!(a > 0.0 && a < 1.0)) throw ValidationError("alpha levels must lie in (0, 1)");
  if (c.top_k < 1) throw ValidationError("top_k must be >= 1");
  if (c.components < 1) throw ValidationError("components must be >= 1");
  if (!(c.node_size.min > 0.0 && c.node_size.max >= c.node_size.min)) throw ValidationError("invalid node size range");
  validate(c.layout);
  validate(c.collector);
}

std::string_view to_string(Step step) {
  switch (step) {
    case Step::Plan: return "plan";
    case Step::Collect: return "collect";
    case Step::Ingest: return "ingest";
    case Step::Stats: return "stats";
    case Step::Net: return "net";
    case Step::Layout: return "layout";
    case Step::Export: return "export";
  }
  return "plan";
}

struct Pipeline::State {
  PipelineConfig config;
  std::vector<std::string> written;

  std::optional<std::vector<Institution>> roster;
  std::optional<std::vector<QuerySpec>> metric_plan;
  std::optional<std::vector<HitCount>> metric_hits;
  std::optional<ResolvedRoster> resolved;
  std::optional<std::vector<QuerySpec>> pairwise_plan;
  std::optional<std::vector<HitCount>> pairwise_hits;
  std::optional<std::vector<SampleSet>> samples;
  std::optional<MentionNetwork> network;
  std::optional<std::vector<NodePlacement>> placements;
  std::optional<FixtureDriver> driver;
  std::map<std::string, std::uint64_t> domain_tpc;

  template <typename F>
  auto stage(const std::string& name, F&& body) -> decltype(body()) {
    try {
      return body();
    } catch (const StageError&) {
      throw;
    } catch (const ComputationError& e) {
      throw StageError(name, 1, e.what());
    } catch (const Error& e) {
      throw StageError(name, 2, e.what());
    } catch (const std::exception& e) {
      throw StageError(name, 1, e.what());
    }
  }

  void emit(const std::string& stage_name, const std::string& file, const std::function<void(std::ostream&)>& writer) {
    stage(stage_name, [&] {
      std::ostringstream out;
      writer(out);
      write_text_file(config.output_dir / file, out.str());
      written.push_back(file);
    });
  }

  const std::vector<Institution>& get_roster() {
    if (!roster) {
      roster = stage("roster", [&] {
        auto r = read_roster(config.roster_path);
        if (r.empty()) throw ValidationError("roster '" + config.roster_path.string() + "' lists no institutions");
        std::map<std::string, int> holders;
        for (const auto& inst : r)
          for (const auto& d : std::set<std::string>(inst.domains.begin(), inst.domains.end())) ++holders[d];
        std::set<std::string> shared;
        for (const auto& [d, n] : holders)
          if (n > 1) shared.insert(d);
        const auto violations = validate_roster(r, shared);
        if (!violations.empty()) {
          std::string msg = "roster '" + config.roster_path.string() + "' is invalid:";
          for (const auto& v : violations) msg += " [" + std::string(to_string(v.kind)) + " " + v.institution_id + " " + v.detail + "]";
          throw ValidationError(msg);
        }
        return r;
      });
    }
    return *roster;
  }

  const std::vector<QuerySpec>& get_metric_plan() {
    if (!metric_plan) metric_plan = stage("plan", [&] { return enumerate_metric_plan(get_roster()); });
    return *metric_plan;
  }

  FixtureDriver& get_driver() {
    if (!driver) stage("collect", [&] { driver.emplace(read_fixtures(config.fixtures_path)); });
    return *driver;
  }

  const std::vector<HitCount>& get_metric_hits() {
    if (!metric_hits) {
      const auto& plan = get_metric_plan();
      metric_hits = stage("collect", [&] { return execute_plan(plan, get_driver(), config.collector); });
      for (std::size_t i = 0; i < plan.size(); ++i)
        if (plan[i].metric == Metric::TPC) domain_tpc[plan[i].target_domain] = (*metric_hits)[i].value;
    }
    return *metric_hits;
  }

  const ResolvedRoster& get_resolved() {
    if (!resolved) {
      get_metric_hits();
      resolved = stage("resolve", [&] { return resolve_roster(get_roster(), domain_tpc); });
    }
    return *resolved;
  }

  std::map<std::string, std::uint64_t> tpc_by_id() {
    std::map<std::string, std::uint64_t> out;
    for (const auto& node : get_resolved().nodes) out[node.id] = domain_tpc.at(node.domain);
    return out;
  }

  const std::vector<QuerySpec>& get_pairwise_plan() {
    if (!pairwise_plan)
      pairwise_plan = stage("pairwise", [&] { return enumerate_pairwise_plan(get_resolved().nodes, config.pair_scope); });
    return *pairwise_plan;
  }

  const std::vector<HitCount>& get_pairwise_hits() {
    if (!pairwise_hits) {
      const auto& plan = get_pairwise_plan();
      pairwise_hits = stage("collect", [&] { return execute_plan(plan, get_driver(), config.collector); });
    }
    return *pairwise_hits;
  }

  const std::vector<SampleSet>& get_samples() {
    if (!samples) {
      const auto& r = get_roster();
      samples = stage("ingest", [&] {
        if (config.samples.empty()) throw ValidationError("no metric samples configured");
        std::vector<SampleSet> out;
        for (const auto& s : config.samples) out.push_back(load_sample(s.path, s.label, r));
        return out;
      });
    }
    return *samples;
  }

  const MentionNetwork& get_network() {
    if (!network) {
      const auto& plan = get_pairwise_plan();
      const auto& hits = get_pairwise_hits();
      auto sizes = tpc_by_id();
      network = stage("network", [&] {
        const auto rows = pairwise_from_hits(plan, hits);
        return build_network(rows, get_resolved().nodes, sizes);
      });
    }
    return *network;
  }

  const std::vector<NodePlacement>& get_placements() {
    if (!placements) {
      const auto& net = get_network();
      placements = stage("layout", [&] {
        const Positions pos = fruchterman_reingold(net, config.layout);
        return place_nodes(net, pos, encode_nodes(net, {}, config.node_size));
      });
    }
    return *placements;
  }

  void step_plan() {
    const auto& plan = get_metric_plan();
    emit("plan", "query_plan.csv", [&](std::ostream& o) { write_query_plan(o, plan); });
  }

  void step_collect() {
    const auto& mh = get_metric_hits();
    emit("collect", "metric_hits.csv", [&](std::ostream& o) { write_hit_counts(o, mh); });
    const auto& res = get_resolved();
    emit("resolve", "resolved_nodes.csv", [&](std::ostream& o) {
      write_csv_row(o, {"institution_id", "domain", "kind", "sector", "tpc"});
      for (const auto& n : res.nodes)
        write_csv_row(o, {n.id, n.domain, to_string(n.kind), n.sector ? sector_slug(*n.sector) : "",
                          std::to_string(domain_tpc.at(n.domain))});
    });
    emit("resolve", "exclusions.csv", [&](std::ostream& o) { write_exclusions(o, res.excluded); });
    const auto& pp = get_pairwise_plan();
    emit("pairwise", "pairwise_plan.csv", [&](std::ostream& o) { write_query_plan(o, pp); });
    const auto& ph = get_pairwise_hits();
    emit("collect", "pairwise_hits.csv", [&](std::ostream& o) { write_hit_counts(o, ph); });
    emit("collect", "pairwise.csv", [&](std::ostream& o) {
      const auto rows = pairwise_from_hits(pp, ph);
      write_pairwise(o, rows);
    });
  }

  void step_ingest() {
    const auto& ss = get_samples();
    std::vector<SampleAnomalies> anomalies;
    std::vector<StabilityRow> stability;
    stage("ingest", [&] {
      for (const auto& s : ss) anomalies.emplace_back(s.label(), flag_regional_anomalies(s));
      for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
        for (auto field : {MetricField::TPC, MetricField::APC, MetricField::GUM, MetricField::LUM,
                           MetricField::DomainAuthority, MetricField::ExternalLinks, MetricField::RootDomains,
                           MetricField::Citations, MetricField::Sales}) {
          StabilityRow row{ss[i].label(), ss[i + 1].label(), std::string(to_string(field)), {0.0, 1.0, 0}};
          try {
            row.result = sample_stability(ss[i], ss[i + 1], field);
          } catch (const ValidationError&) {
            row.result = {0.0, 1.0, 0};
          } catch (const ComputationError&) {
            row.result = {0.0, 1.0, 0};
          }
          stability.push_back(std::move(row));
        }
      }
    });
    emit("ingest", "anomalies.csv", [&](std::ostream& o) { write_anomalies(o, anomalies); });
    emit("ingest", "stability.csv", [&](std::ostream& o) { write_stability(o, stability); });
  }

  void stats_for(const std::string& tag, InstitutionKind kind, const std::vector<std::string>& variables) {
    const auto& sample = get_samples().front();
    std::map<std::string, InstitutionKind> kinds;
    for (const auto& inst : get_roster()) kinds[inst.id] = inst.kind;

    const DataTable raw = stage("stats", [&] { return sample_table(sample, kinds, kind, variables); });
    const auto desc = stage("stats", [&] { return describe_table(raw); });
    emit("stats", "descriptives_" + tag + ".csv", [&](std::ostream& o) { write_descriptives(o, desc); });

    const auto corr = stage("stats", [&] { return correlation_matrix(raw, variables, config.alpha_levels); });
    emit("stats", "correlation_" + tag + "_rho.csv", [&](std::ostream& o) { write_correlation_rho(o, corr); });
    emit("stats", "correlation_" + tag + "_p.csv", [&](std::ostream& o) { write_correlation_p(o, corr); });

    const auto result = stage("stats", [&] { return pca(log_table(raw), variables, config.components); });
    emit("stats", "pca_" + tag + "_loadings.csv", [&](std::ostream& o) { write_pca_loadings(o, result); });
    emit("stats", "pca_" + tag + "_eigenvalues.csv", [&](std::ostream& o) { write_pca_eigenvalues(o, result); });
  }

  void step_stats() {
    stats_for("universities", InstitutionKind::University, kUniversityVariables);
    stats_for("companies", InstitutionKind::Company, kCompanyVariables);
  }

  void step_net() {
    const auto& net = get_network();
    emit("network", "network.net", [&](std::ostream& o) { write_pajek(o, net); });
    const auto metrics = stage("network", [&] { return node_metrics(net, config.summary_mode); });
    emit("network", "node_metrics.csv", [&](std::ostream& o) { write_node_metrics(o, net, metrics); });
    const auto summary = stage("network", [&] { return network_summary(net, config.summary_mode); });
    emit("network", "network_summary.csv", [&](std::ostream& o) { write_network_summary(o, summary); });
    const auto taxonomy = stage("network", [&] { return classify_and_summarize(net); });
    emit("network", "taxonomy.csv", [&](std::ostream& o) { write_taxonomy(o, taxonomy); });
    const auto top = stage("network", [&] { return top_combinations(net, config.top_k); });
    emit("network", "top_combinations.csv", [&](std::ostream& o) { write_top_combinations(o, top); });
    const auto ranking = stage("network", [&] { return interaction_ranking(net); });
    emit("network", "interaction_ranking.csv", [&](std::ostream& o) { write_interaction_ranking(o, ranking); });
  }

  void step_layout() {
    const auto& pl = get_placements();
    emit("layout", "layout.csv", [&](std::ostream& o) { write_placements(o, pl); });
  }

  void step_export() {
    const auto& net = get_network();
    const auto& pl = get_placements();
    emit("export", "network.gexf", [&](std::ostream& o) { write_gexf(o, net, &pl); });
  }
};

Pipeline::Pipeline(PipelineConfig config) : state_(std::make_unique<State>()) {
  state_->config = std::move(config);
  state_->stage("config", [&] {
    validate(state_->config);
    std::error_code ec;
    std::filesystem::create_directories(state_->config.output_dir, ec);
    if (ec || !std::filesystem::is_directory(state_->config.output_dir))
      throw IoError("cannot create output_dir '" + state_->config.output_dir.string() + "'");
  });
}

Pipeline::~Pipeline() = default;

const PipelineConfig& Pipeline::config() const { return state_->config; }

std::vector<std::string> Pipeline::run(Step step) {
  const auto before = state_->written.size();
  switch (step) {
    case Step::Plan: state_->step_plan(); break;
    case Step::Collect: state_->step_collect(); break;
    case Step::Ingest: state_->step_ingest(); break;
    case Step::Stats: state_->step_stats(); break;
    case Step::Net: state_->step_net(); break;
    case Step::Layout: state_->step_layout(); break;
    case Step::Export: state_->step_export(); break;
  }
  return {state_->written.begin() + static_cast<std::ptrdiff_t>(before), state_->written.end()};
}

std::vector<std::string> Pipeline::run_all() {
  std::vector<std::string> out;
  for (auto step : {Step::Plan, Step::Collect, Step::Ingest, Step::Stats, Step::Net, Step::Layout, Step::Export}) {
    auto files = run(step);
    out.insert(out.end(), files.begin(), files.end());
  }
  return out;
}

std::vector<std::string> run_pipeline(const PipelineConfig& config) {
  Pipeline pipeline(config);
  return pipeline.run_all();
}

}  // namespace webimpact
