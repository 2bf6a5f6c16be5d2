#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "webimpact/model.hpp"
#include "webimpact/stats.hpp"

namespace webimpact {

// Records of one sampling round, at most one per institution.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(std::string label) : label_(std::move(label)) {}

  // Throws ValidationError on a second record for the same institution.
  void add(WebMetricsRecord record);

  const std::string& label() const { return label_; }
  const std::map<std::string, WebMetricsRecord, std::less<>>& records() const { return records_; }
  const WebMetricsRecord* find(std::string_view institution_id) const;
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

 private:
  std::string label_;
  std::map<std::string, WebMetricsRecord, std::less<>> records_;
};

// Domain with the highest page count; ties go to the earlier listed domain.
// Throws ValidationError when a listed domain has no count.
std::string resolve_multi_domain(const Institution& inst, const std::map<std::string, std::uint64_t>& per_domain_tpc);

// Owner of a domain claimed by several institutions: the best (smallest)
// source rank. Throws ValidationError on a tie for the best rank.
const Institution& assign_shared_domain(std::string_view domain, std::span<const Institution> claimants);

struct Exclusion {
  std::string institution_id;
  std::string reason;
};

struct ResolvedRoster {
  std::vector<ResolvedInstitution> nodes;  // roster order
  std::vector<Exclusion> excluded;
};

// Applies both dedup rules: one domain per institution (by page count), then
// one institution per domain (by rank). Institutions whose chosen domain goes
// to a better-ranked claimant are excluded.
ResolvedRoster resolve_roster(std::span<const Institution> roster,
                              const std::map<std::string, std::uint64_t>& per_domain_tpc);

struct RegionalAnomaly {
  std::string institution_id;
  std::int64_t gum = 0;
  std::int64_t lum = 0;
};

// Institutions whose region-restricted mentions exceed the unrestricted
// count (lum > gum), in id order.
std::vector<RegionalAnomaly> flag_regional_anomalies(const SampleSet& sample);

enum class MetricField { TPC, APC, GUM, LUM, DomainAuthority, ExternalLinks, RootDomains, Citations, Sales };

std::string_view to_string(MetricField field);
MetricField parse_metric_field(std::string_view text);

// Value of a field, nullopt when the field is absent from the record.
std::optional<double> field_value(const WebMetricsRecord& record, MetricField field);

// Spearman correlation of one variable across two samples, over the
// institutions present (with the field) in both. Throws ValidationError
// "insufficient overlap" below three pairs.
SpearmanResult sample_stability(const SampleSet& a, const SampleSet& b, MetricField variable);

// Notes on `record` when domain authority had to be taken from the
// registrable parent of `host` rather than the host itself.
void annotate_authority_scope(WebMetricsRecord& record, std::string_view host);

}  // namespace webimpact
