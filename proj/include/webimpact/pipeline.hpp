#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "webimpact/collector.hpp"
#include "webimpact/error.hpp"
#include "webimpact/layout.hpp"
#include "webimpact/model.hpp"
#include "webimpact/queryplan.hpp"

namespace webimpact {

struct SampleSource {
  std::string label;
  std::filesystem::path path;
};

struct PipelineConfig {
  std::filesystem::path roster_path;
  std::filesystem::path fixtures_path;
  std::vector<SampleSource> samples;
  std::filesystem::path output_dir;
  LayoutParams layout;
  SizeRange node_size;
  SummaryMode summary_mode = SummaryMode::Directed;
  std::array<double, 2> alpha_levels{0.01, 0.05};
  std::size_t top_k = 20;
  int components = 2;
  PairScope pair_scope = PairScope::AllPairs;
  CollectorConfig collector;
};

// Sets one key. Keys: roster, fixtures, samples (label:path[,label:path...]),
// output_dir, summary_mode, alpha (two levels), top_k, components,
// pair_scope (all|cross), collector.{min_interval (seconds), jitter,
// max_retries, workers, seed, region_default}, layout.{width, height,
// iterations, c, temperature, seed, size_min, size_max}. Relative paths are
// taken against base_dir. Throws ValidationError on unknown keys or values.
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});

// Flat "key = value" text; '#' starts a comment line.
PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

// Name of the variable that overrides output_dir.
inline constexpr const char* kOutputDirEnv = "WEBIMPACT_OUTPUT_DIR";
void apply_environment(PipelineConfig& config);

void validate(const PipelineConfig& config);

// Failure of a named stage. exit_code is 1 for computation errors and 2 for
// configuration or input errors.
class StageError : public Error {
 public:
  StageError(std::string stage, int exit_code, const std::string& what)
      : Error("stage '" + stage + "': " + what), stage_(std::move(stage)), exit_code_(exit_code) {}
  const std::string& stage() const { return stage_; }
  int exit_code() const { return exit_code_; }

 private:
  std::string stage_;
  int exit_code_;
};

enum class Step { Plan, Collect, Ingest, Stats, Net, Layout, Export };

std::string_view to_string(Step step);

// Runs the requested steps, computing their inputs on demand, and writes
// outputs under config.output_dir. Returns the written file names in order.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);
  ~Pipeline();
  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  std::vector<std::string> run(Step step);
  std::vector<std::string> run_all();

  const PipelineConfig& config() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// Convenience wrapper for the full pipeline.
std::vector<std::string> run_pipeline(const PipelineConfig& config);

}  // namespace webimpact
