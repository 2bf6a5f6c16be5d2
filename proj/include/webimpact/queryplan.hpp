#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "webimpact/model.hpp"

namespace webimpact {

enum class Metric { TPC, APC, GUM, LUM, PairwiseMention };
enum class Engine { GeneralIndex, AcademicIndex };

std::string_view to_string(Metric metric);
std::string_view to_string(Engine engine);
Metric parse_metric(std::string_view text);
Engine parse_engine(std::string_view text);

// Lowercase host without scheme, credentials, port, path, query, fragment or
// leading "www." labels. Throws ValidationError on text with no usable host.
std::string canonicalize(std::string_view url);

// True when `host` is already in canonical form.
bool is_canonical_host(std::string_view host);

// Registrable part of a host ("ik.zaman.com.tr" -> "zaman.com.tr"), using a
// built-in table of common second-level public suffixes.
std::string registrable_domain(std::string_view host);

struct QuerySpec {
  Metric metric = Metric::TPC;
  std::string target_domain;
  std::optional<std::string> host_domain;  // PairwiseMention only
  Region region = Region::All;
  Engine engine = Engine::GeneralIndex;

  bool operator==(const QuerySpec&) const = default;
};

// Spec with the region and engine each metric requires (TPC/APC/pairwise
// default to region All).
QuerySpec make_spec(Metric metric, std::string target, std::optional<std::string> host = std::nullopt);

// Throws ValidationError when the spec breaks a metric/region/engine rule.
void validate_spec(const QuerySpec& spec);

// Search-engine query text:
//   TPC, APC          site:abc.com
//   GUM, LUM          "abc.com" -site:abc.com
//   PairwiseMention   "abc.com" site:xyz.com   (target quoted, host as site)
std::string build_query(const QuerySpec& spec);

// TPC, APC, GUM and LUM for every listed domain of every institution.
std::vector<QuerySpec> enumerate_metric_plan(std::span<const Institution> institutions);

enum class PairScope { AllPairs, CrossKindOnly };

// One PairwiseMention spec per ordered (host, target) pair, host-major in
// input order. Throws ValidationError on duplicate domains.
std::vector<QuerySpec> enumerate_pairwise_plan(std::span<const ResolvedInstitution> nodes,
                                               PairScope scope = PairScope::AllPairs);

}  // namespace webimpact
