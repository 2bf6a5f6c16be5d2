#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "webimpact/model.hpp"
#include "webimpact/queryplan.hpp"

namespace webimpact {

struct CollectorConfig {
  std::chrono::nanoseconds min_interval{std::chrono::seconds{1}};
  double jitter_fraction = 0.0;  // gaps drawn from min_interval * [1 - j, 1 + j]
  int max_retries = 2;
  // Region for metrics whose grammar does not fix one (TPC, APC, pairwise).
  Region region_default = Region::All;
  unsigned workers = 1;
  std::uint64_t seed = 0;  // jitter stream
};

// Throws ValidationError when a field is out of range.
void validate(const CollectorConfig& config);

// Monotonic time source. Tests substitute ManualClock so politeness delays
// cost nothing.
class Clock {
 public:
  using time_point = std::chrono::steady_clock::time_point;
  virtual ~Clock() = default;
  virtual time_point now() = 0;
  virtual void sleep_until(time_point t) = 0;
};

class SteadyClock final : public Clock {
 public:
  time_point now() override;
  void sleep_until(time_point t) override;
};

// Advances only when slept on.
class ManualClock final : public Clock {
 public:
  time_point now() override;
  void sleep_until(time_point t) override;

 private:
  std::mutex mutex_;
  time_point now_{};
};

// Global spacing of requests for one driver instance. Each grant is at least
// the drawn gap after the previous one.
class RateGate {
 public:
  RateGate(std::chrono::nanoseconds min_interval, double jitter_fraction, std::uint64_t seed, Clock& clock);

  Clock::time_point acquire();

 private:
  std::chrono::nanoseconds draw_gap();

  std::mutex mutex_;
  std::chrono::nanoseconds min_interval_;
  double jitter_;
  std::mt19937_64 rng_;
  Clock& clock_;
  std::optional<Clock::time_point> next_allowed_;
};

struct FetchResult {
  std::uint64_t value = 0;
  bool recorded = true;
  std::optional<Timestamp> retrieved_at;
};

// Executes one query against a search engine. Implementations may throw on
// transient failure; the collector retries. Must be safe to call from
// several workers at once.
class SearchDriver {
 public:
  virtual ~SearchDriver() = default;
  virtual FetchResult fetch(std::string_view query, Region region) = 0;
};

struct FixtureRow {
  std::string query;
  Region region = Region::All;
  std::uint64_t value = 0;
  Timestamp retrieved_at{};
};

// Replays recorded hit counts. Unknown queries yield value 0, recorded=false.
class FixtureDriver final : public SearchDriver {
 public:
  explicit FixtureDriver(std::vector<FixtureRow> rows);

  FetchResult fetch(std::string_view query, Region region) override;
  std::size_t size() const { return rows_.size(); }

 private:
  std::map<std::pair<std::string, Region>, FixtureRow, std::less<>> rows_;
};

// Returns a fixed value and logs call times; the first `failures` calls throw.
class CountingStubDriver final : public SearchDriver {
 public:
  explicit CountingStubDriver(Clock& clock, std::uint64_t value = 0, int failures = 0);

  FetchResult fetch(std::string_view query, Region region) override;
  std::vector<Clock::time_point> call_times() const;
  std::vector<std::string> queries() const;

 private:
  Clock& clock_;
  std::uint64_t value_;
  mutable std::mutex mutex_;
  int failures_left_;
  std::vector<Clock::time_point> times_;
  std::vector<std::string> queries_;
};

// Live-driver contract: a page fetcher returns the raw first results page,
// which is reduced to a hit count by parse_hce.
class SerpDriver final : public SearchDriver {
 public:
  using PageFetcher = std::function<std::string(std::string_view query, Region region)>;
  explicit SerpDriver(PageFetcher fetcher) : fetcher_(std::move(fetcher)) {}

  FetchResult fetch(std::string_view query, Region region) override;

 private:
  PageFetcher fetcher_;
};

// Hit-count estimate from the text of a first results page. Handles
// grouping separators ("723,000", "723.000", "723 000") and the English,
// Turkish, French and German result phrases. Throws ParseError
// "unparseable SERP" when no count phrase is present.
std::uint64_t parse_hce(std::string_view serp_text);

// One HitCount per spec, in plan order. Failed queries carry an error entry
// and value 0; the plan continues.
std::vector<HitCount> execute_plan(std::span<const QuerySpec> plan, SearchDriver& driver,
                                   const CollectorConfig& config, Clock& clock);
std::vector<HitCount> execute_plan(std::span<const QuerySpec> plan, SearchDriver& driver,
                                   const CollectorConfig& config);

// Region actually sent for a spec under a config.
Region effective_region(const QuerySpec& spec, const CollectorConfig& config);

}  // namespace webimpact
