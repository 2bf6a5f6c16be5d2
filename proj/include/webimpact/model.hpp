#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace webimpact {

enum class InstitutionKind { University, Company };

// The ten industrial sectors of the company sample, in legend order.
enum class Sector {
  FoodBeveragesTobacco,
  MiningQuarrying,
  ChemicalsPetroleumRubberPlastics,
  MetalProductsMachinery,
  MotorVehicles,
  NonMetallicMineral,
  Electricity,
  PaperPrinting,
  PrimaryMetals,
  TextilesApparel,
};

inline constexpr std::size_t kSectorCount = 10;

enum class Region { All, Turkey };

enum class EdgeType { UNI, COM, TRANSFER };

std::string_view to_string(InstitutionKind kind);
std::string_view to_string(Region region);
std::string_view to_string(EdgeType type);

// Human-readable legend label, e.g. "Motor vehicles".
std::string_view sector_label(Sector sector);
// Identifier-safe key, e.g. "motor_vehicles".
std::string_view sector_slug(Sector sector);

InstitutionKind parse_kind(std::string_view text);
Region parse_region(std::string_view text);
EdgeType parse_edge_type(std::string_view text);
// Accepts either the slug or the legend label, case-insensitively.
Sector parse_sector(std::string_view text);

std::span<const Sector> all_sectors();

// Arc type is fully determined by the endpoint kinds.
constexpr EdgeType edge_type_for(InstitutionKind host, InstitutionKind target) {
  if (host != target) return EdgeType::TRANSFER;
  return host == InstitutionKind::University ? EdgeType::UNI : EdgeType::COM;
}

using Date = std::chrono::year_month_day;
using Timestamp = std::chrono::sys_seconds;

// ISO 8601 calendar date "YYYY-MM-DD".
Date parse_date(std::string_view text);
std::string format_date(Date date);
// ISO 8601 UTC instant "YYYY-MM-DDTHH:MM:SSZ".
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

struct Institution {
  std::string id;
  std::string name;
  InstitutionKind kind = InstitutionKind::University;
  std::optional<Sector> sector;
  std::vector<std::string> domains;  // canonical hosts, preference order
  int source_rank = 1;               // position in the source ranking

  bool operator==(const Institution&) const = default;
};

// An institution after multi-domain and shared-domain resolution: exactly one
// host that no other resolved institution uses.
struct ResolvedInstitution {
  std::string id;
  std::string domain;
  InstitutionKind kind = InstitutionKind::University;
  std::optional<Sector> sector;

  bool operator==(const ResolvedInstitution&) const = default;
};

// Counts are signed so that out-of-range input survives parsing and is
// reported by validation instead of wrapping around.
struct WebMetricsRecord {
  std::string institution_id;
  Date sample_date{};
  std::int64_t tpc = 0;
  std::int64_t apc = 0;
  std::int64_t gum = 0;
  std::int64_t lum = 0;
  int domain_authority = 0;
  std::int64_t external_links = 0;
  std::int64_t root_domains = 0;
  std::optional<std::int64_t> citations;
  std::optional<double> sales;
  std::string note;  // provenance remarks, e.g. authority measured on parent domain

  bool operator==(const WebMetricsRecord&) const = default;
};

// Violated bounds of a record, empty when valid. The kind determines which
// of citations/sales may be present.
std::vector<std::string> validate_record(const WebMetricsRecord& record, InstitutionKind kind);

// Throws ValidationError listing every violated bound.
void check_record(const WebMetricsRecord& record, InstitutionKind kind);

struct HitCount {
  std::string query;
  Region region = Region::All;
  std::uint64_t value = 0;
  Timestamp retrieved_at{};
  bool recorded = true;  // false when the driver had no response for the query
  std::string error;     // non-empty when the query failed after all retries

  bool ok() const { return error.empty(); }
  bool operator==(const HitCount&) const = default;
};

struct MentionEdge {
  std::string host_id;    // site the mention lives on
  std::string target_id;  // institution whose URL is mentioned
  std::uint64_t hits = 0;
  EdgeType edge_type = EdgeType::UNI;

  bool operator==(const MentionEdge&) const = default;
};

struct NodeMetrics {
  std::string node_id;
  std::size_t degree = 0;
  std::size_t in_degree = 0;
  std::size_t out_degree = 0;
  double closeness = 0.0;
  double harmonic_closeness = 0.0;
  double betweenness = 0.0;
  double eigenvector = 0.0;
  double clustering = 0.0;
};

enum class SummaryMode { Directed, UndirectedView };

std::string_view to_string(SummaryMode mode);
SummaryMode parse_summary_mode(std::string_view text);

struct NetworkSummary {
  SummaryMode mode = SummaryMode::Directed;
  std::size_t n_nodes = 0;
  std::size_t n_arcs = 0;
  std::size_t n_edges = 0;  // distinct unordered adjacent pairs
  std::size_t n_isolated = 0;
  std::size_t largest_component = 0;  // node count of the component used for distances
  double avg_degree = 0.0;
  double density = 0.0;
  int diameter = 0;
  double avg_path_length = 0.0;
  double avg_clustering = 0.0;
};

enum class ViolationKind {
  DuplicateId,
  SharedDomain,
  NonCanonicalHost,
  EmptyDomains,
  SectorMismatch,
  InvalidRank,
};

std::string_view to_string(ViolationKind kind);

struct RosterViolation {
  ViolationKind kind;
  std::string institution_id;
  std::string detail;
};

// Structural problems of a roster. Domains listed in `resolved_shared` may be
// held by several institutions (ownership is settled by rank later).
std::vector<RosterViolation> validate_roster(std::span<const Institution> institutions,
                                             const std::set<std::string>& resolved_shared = {});

}  // namespace webimpact
