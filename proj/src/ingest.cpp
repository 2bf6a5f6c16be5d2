#include "webimpact/ingest.hpp"

#include <algorithm>
#include <set>

#include "webimpact/error.hpp"
#include "webimpact/queryplan.hpp"

namespace webimpact {

void SampleSet::add(WebMetricsRecord record) {
  auto id = record.institution_id;
  if (!records_.emplace(id, std::move(record)).second)
    throw ValidationError("sample '" + label_ + "' already has a record for '" + id + "'");
}

const WebMetricsRecord* SampleSet::find(std::string_view institution_id) const {
  const auto it = records_.find(institution_id);
  return it == records_.end() ? nullptr : &it->second;
}

std::string resolve_multi_domain(const Institution& inst, const std::map<std::string, std::uint64_t>& per_domain_tpc) {
  if (inst.domains.empty()) throw ValidationError("institution '" + inst.id + "' lists no domains");
  const std::string* best = nullptr;
  std::uint64_t best_tpc = 0;
  for (const auto& d : inst.domains) {
    const auto it = per_domain_tpc.find(d);
    if (it == per_domain_tpc.end())
      throw ValidationError("no page count for domain '" + d + "' of institution '" + inst.id + "'");
    if (best == nullptr || it->second > best_tpc) {
      best = &d;
      best_tpc = it->second;
    }
  }
  return *best;
}

const Institution& assign_shared_domain(std::string_view domain, std::span<const Institution> claimants) {
  if (claimants.empty()) throw ValidationError("domain '" + std::string(domain) + "' has no claimants");
  const auto best = std::min_element(claimants.begin(), claimants.end(),
                                     [](const Institution& a, const Institution& b) { return a.source_rank < b.source_rank; });
  const auto ties = std::count_if(claimants.begin(), claimants.end(),
                                  [&](const Institution& i) { return i.source_rank == best->source_rank; });
  if (ties > 1)
    throw ValidationError("domain '" + std::string(domain) + "' is claimed by institutions of equal rank " +
                          std::to_string(best->source_rank));
  return *best;
}

ResolvedRoster resolve_roster(std::span<const Institution> roster,
                              const std::map<std::string, std::uint64_t>& per_domain_tpc) {
  std::vector<std::string> chosen;
  chosen.reserve(roster.size());
  for (const auto& inst : roster) chosen.push_back(resolve_multi_domain(inst, per_domain_tpc));

  std::map<std::string, std::vector<Institution>> claims;
  for (std::size_t i = 0; i < roster.size(); ++i) claims[chosen[i]].push_back(roster[i]);

  ResolvedRoster out;
  for (std::size_t i = 0; i < roster.size(); ++i) {
    const auto& inst = roster[i];
    const auto& claimants = claims[chosen[i]];
    if (claimants.size() > 1 && assign_shared_domain(chosen[i], claimants).id != inst.id) {
      out.excluded.push_back({inst.id, "domain '" + chosen[i] + "' assigned to a better-ranked institution"});
      continue;
    }
    out.nodes.push_back({inst.id, chosen[i], inst.kind, inst.sector});
  }
  return out;
}

std::vector<RegionalAnomaly> flag_regional_anomalies(const SampleSet& sample) {
  std::vector<RegionalAnomaly> out;
  for (const auto& [id, rec] : sample.records())
    if (rec.lum > rec.gum) out.push_back({id, rec.gum, rec.lum});
  return out;
}

std::string_view to_string(MetricField field) {
  switch (field) {
    case MetricField::TPC: return "tpc";
    case MetricField::APC: return "apc";
    case MetricField::GUM: return "gum";
    case MetricField::LUM: return "lum";
    case MetricField::DomainAuthority: return "domain_authority";
    case MetricField::ExternalLinks: return "external_links";
    case MetricField::RootDomains: return "root_domains";
    case MetricField::Citations: return "citations";
    case MetricField::Sales: return "sales";
  }
  return "tpc";
}

MetricField parse_metric_field(std::string_view text) {
  for (auto f : {MetricField::TPC, MetricField::APC, MetricField::GUM, MetricField::LUM, MetricField::DomainAuthority,
                 MetricField::ExternalLinks, MetricField::RootDomains, MetricField::Citations, MetricField::Sales})
    if (text == to_string(f)) return f;
  throw ParseError("unknown metric field '" + std::string(text) + "'");
}

std::optional<double> field_value(const WebMetricsRecord& r, MetricField field) {
  switch (field) {
    case MetricField::TPC: return static_cast<double>(r.tpc);
    case MetricField::APC: return static_cast<double>(r.apc);
    case MetricField::GUM: return static_cast<double>(r.gum);
    case MetricField::LUM: return static_cast<double>(r.lum);
    case MetricField::DomainAuthority: return static_cast<double>(r.domain_authority);
    case MetricField::ExternalLinks: return static_cast<double>(r.external_links);
    case MetricField::RootDomains: return static_cast<double>(r.root_domains);
    case MetricField::Citations:
      return r.citations ? std::optional<double>(static_cast<double>(*r.citations)) : std::nullopt;
    case MetricField::Sales: return r.sales;
  }
  return std::nullopt;
}

SpearmanResult sample_stability(const SampleSet& a, const SampleSet& b, MetricField variable) {
  std::vector<double> xs, ys;
  for (const auto& [id, rec] : a.records()) {
    const auto* other = b.find(id);
    if (other == nullptr) continue;
    const auto x = field_value(rec, variable);
    const auto y = field_value(*other, variable);
    if (!x || !y) continue;
    xs.push_back(*x);
    ys.push_back(*y);
  }
  if (xs.size() < 3)
    throw ValidationError("insufficient overlap: " + std::to_string(xs.size()) + " common institutions between '" +
                          a.label() + "' and '" + b.label() + "'");
  return spearman(xs, ys);
}

void annotate_authority_scope(WebMetricsRecord& record, std::string_view host) {
  const std::string parent = registrable_domain(host);
  if (parent == host) return;
  if (!record.note.empty()) record.note += "; ";
  record.note += "domain authority measured at " + parent;
}

}  // namespace webimpact
