#include "webimpact/collector.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <regex>
#include <thread>

#include "webimpact/error.hpp"

namespace webimpact {

void validate(const CollectorConfig& config) {
  if (config.min_interval <= std::chrono::nanoseconds::zero())
    throw ValidationError("collector min_interval must be positive");
  if (!(config.jitter_fraction >= 0.0 && config.jitter_fraction <= 1.0))
    throw ValidationError("collector jitter_fraction must lie in [0, 1]");
  if (config.max_retries < 0) throw ValidationError("collector max_retries must be >= 0");
  if (config.workers == 0) throw ValidationError("collector needs at least one worker");
}

Clock::time_point SteadyClock::now() { return std::chrono::steady_clock::now(); }

void SteadyClock::sleep_until(time_point t) { std::this_thread::sleep_until(t); }

Clock::time_point ManualClock::now() {
  std::lock_guard lock(mutex_);
  return now_;
}

void ManualClock::sleep_until(time_point t) {
  std::lock_guard lock(mutex_);
  now_ = std::max(now_, t);
}

RateGate::RateGate(std::chrono::nanoseconds min_interval, double jitter_fraction, std::uint64_t seed, Clock& clock)
    : min_interval_(min_interval), jitter_(jitter_fraction), rng_(seed), clock_(clock) {}

std::chrono::nanoseconds RateGate::draw_gap() {
  if (jitter_ == 0.0) return min_interval_;
  // 53 random bits -> u in [-1, 1).
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  const double scale = 1.0 + jitter_ * u;
  return std::chrono::nanoseconds{static_cast<std::int64_t>(static_cast<double>(min_interval_.count()) * scale)};
}

Clock::time_point RateGate::acquire() {
  std::lock_guard lock(mutex_);
  if (next_allowed_) {
    if (clock_.now() < *next_allowed_) clock_.sleep_until(*next_allowed_);
  }
  const auto granted = clock_.now();
  next_allowed_ = granted + draw_gap();
  return granted;
}

FixtureDriver::FixtureDriver(std::vector<FixtureRow> rows) {
  for (auto& row : rows) {
    auto key = std::make_pair(row.query, row.region);
    if (!rows_.emplace(std::move(key), std::move(row)).second)
      throw ValidationError("fixture records the same query/region twice");
  }
}

FetchResult FixtureDriver::fetch(std::string_view query, Region region) {
  const auto it = rows_.find(std::make_pair(std::string(query), region));
  // Misses carry the epoch so replayed output stays reproducible.
  if (it == rows_.end()) return {0, false, Timestamp{}};
  return {it->second.value, true, it->second.retrieved_at};
}

CountingStubDriver::CountingStubDriver(Clock& clock, std::uint64_t value, int failures)
    : clock_(clock), value_(value), failures_left_(failures) {}

FetchResult CountingStubDriver::fetch(std::string_view query, Region) {
  std::lock_guard lock(mutex_);
  times_.push_back(clock_.now());
  queries_.emplace_back(query);
  if (failures_left_ > 0) {
    --failures_left_;
    throw IoError("stub driver: simulated failure");
  }
  return {value_, true, std::nullopt};
}

std::vector<Clock::time_point> CountingStubDriver::call_times() const {
  std::lock_guard lock(mutex_);
  return times_;
}

std::vector<std::string> CountingStubDriver::queries() const {
  std::lock_guard lock(mutex_);
  return queries_;
}

FetchResult SerpDriver::fetch(std::string_view query, Region region) {
  return {parse_hce(fetcher_(query, region)), true, std::nullopt};
}

std::uint64_t parse_hce(std::string_view serp_text) {
  static const std::regex empty_result(
      "did not match any documents|no results found|hi\xC3\xA7" "bir belgeyle e\xC5\x9Fle\xC5\x9Fmedi|"
      "aucun document ne correspond|keine .{0,40}dokumente gefunden",
      std::regex::ECMAScript | std::regex::icase);
  // Number, optionally with thousands groups, followed by a result word.
  static const std::regex count_phrase(
      "([0-9]{1,3}(?:(?:,|\\.|'| |\xC2\xA0|\xE2\x80\xAF)[0-9]{3})+|[0-9]+)"
      "(?: |\xC2\xA0|\t)*(?:results?\\b|sonu\xC3\xA7|r\xC3\xA9sultats?|ergebnisse?\\b)",
      std::regex::ECMAScript | std::regex::icase);

  const std::string text(serp_text);
  std::smatch match;
  if (std::regex_search(text, match, count_phrase)) {
    std::uint64_t value = 0;
    for (char c : match[1].str()) {
      if (c < '0' || c > '9') continue;
      const std::uint64_t digit = static_cast<std::uint64_t>(c - '0');
      if (value > (UINT64_MAX - digit) / 10) throw ParseError("unparseable SERP: count overflows");
      value = value * 10 + digit;
    }
    return value;
  }
  if (std::regex_search(text, empty_result)) return 0;
  throw ParseError("unparseable SERP");
}

Region effective_region(const QuerySpec& spec, const CollectorConfig& config) {
  if (spec.metric == Metric::GUM || spec.metric == Metric::LUM) return spec.region;
  return config.region_default;
}

std::vector<HitCount> execute_plan(std::span<const QuerySpec> plan, SearchDriver& driver,
                                   const CollectorConfig& config, Clock& clock) {
  validate(config);
  if (plan.empty()) throw ValidationError("empty query plan");
  for (const auto& spec : plan) validate_spec(spec);

  RateGate gate(config.min_interval, config.jitter_fraction, config.seed, clock);
  std::vector<HitCount> out(plan.size());

  auto run_one = [&](std::size_t i) {
    const QuerySpec& spec = plan[i];
    HitCount& hc = out[i];
    hc.query = build_query(spec);
    hc.region = effective_region(spec, config);
    auto backoff = config.min_interval;
    for (int attempt = 0;; ++attempt) {
      gate.acquire();
      try {
        const FetchResult r = driver.fetch(hc.query, hc.region);
        hc.value = r.value;
        hc.recorded = r.recorded;
        hc.retrieved_at = r.retrieved_at.value_or(
            std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
        hc.error.clear();
        return;
      } catch (const std::exception& e) {
        if (attempt >= config.max_retries) {
          hc.value = 0;
          hc.recorded = false;
          hc.error = e.what();
          return;
        }
      }
      clock.sleep_until(clock.now() + backoff);
      backoff *= 2;
    }
  };

  if (config.workers == 1) {
    for (std::size_t i = 0; i < plan.size(); ++i) run_one(i);
    return out;
  }

  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    const unsigned n = std::min<std::size_t>(config.workers, plan.size());
    for (unsigned w = 0; w < n; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < plan.size(); i = next++) run_one(i);
      });
    }
  }
  return out;
}

std::vector<HitCount> execute_plan(std::span<const QuerySpec> plan, SearchDriver& driver,
                                   const CollectorConfig& config) {
  SteadyClock clock;
  return execute_plan(plan, driver, config, clock);
}

}  // namespace webimpact
