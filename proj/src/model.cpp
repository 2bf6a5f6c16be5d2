#include "webimpact/model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <map>

#include "webimpact/error.hpp"
#include "webimpact/queryplan.hpp"

namespace webimpact {

namespace {

struct SectorInfo {
  Sector sector;
  std::string_view label;
  std::string_view slug;
};

constexpr std::array<SectorInfo, kSectorCount> kSectors{{
    {Sector::FoodBeveragesTobacco, "Food, Beverages and Tobacco", "food_beverages_tobacco"},
    {Sector::MiningQuarrying, "Mining and Quarrying", "mining_quarrying"},
    {Sector::ChemicalsPetroleumRubberPlastics, "Chemicals, Petroleum products, Rubber and plastics",
     "chemicals_petroleum_rubber_plastics"},
    {Sector::MetalProductsMachinery, "Metal Products, Machinery and Equipment, Professional instruments",
     "metal_products_machinery"},
    {Sector::MotorVehicles, "Motor vehicles", "motor_vehicles"},
    {Sector::NonMetallicMineral, "Non-Metallic Mineral Products", "non_metallic_mineral"},
    {Sector::Electricity, "Electricity sector", "electricity"},
    {Sector::PaperPrinting, "Paper, Paper products, and printing", "paper_printing"},
    {Sector::PrimaryMetals, "Primary Metals", "primary_metals"},
    {Sector::TextilesApparel, "Textiles, Wearing Apparel, Leather and Footwear", "textiles_apparel"},
}};

constexpr std::array<Sector, kSectorCount> kSectorList{
    Sector::FoodBeveragesTobacco, Sector::MiningQuarrying, Sector::ChemicalsPetroleumRubberPlastics,
    Sector::MetalProductsMachinery, Sector::MotorVehicles, Sector::NonMetallicMineral,
    Sector::Electricity, Sector::PaperPrinting, Sector::PrimaryMetals, Sector::TextilesApparel};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; };
           return lower(x) == lower(y);
         });
}

int parse_fixed_int(std::string_view text, std::size_t pos, std::size_t len, std::string_view what) {
  int value = 0;
  auto digits = text.substr(pos, len);
  if (digits.size() != len || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw ParseError("malformed " + std::string(what) + " '" + std::string(text) + "'");
  std::from_chars(digits.data(), digits.data() + digits.size(), value);
  return value;
}

}  // namespace

std::string_view to_string(InstitutionKind kind) {
  return kind == InstitutionKind::University ? "university" : "company";
}

std::string_view to_string(Region region) { return region == Region::All ? "all" : "turkey"; }

std::string_view to_string(EdgeType type) {
  switch (type) {
    case EdgeType::UNI: return "UNI";
    case EdgeType::COM: return "COM";
    case EdgeType::TRANSFER: return "TRANSFER";
  }
  return "UNI";
}

std::string_view to_string(SummaryMode mode) {
  return mode == SummaryMode::Directed ? "directed" : "undirected";
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateId: return "duplicate id";
    case ViolationKind::SharedDomain: return "shared domain";
    case ViolationKind::NonCanonicalHost: return "non-canonical host";
    case ViolationKind::EmptyDomains: return "empty domains";
    case ViolationKind::SectorMismatch: return "sector mismatch";
    case ViolationKind::InvalidRank: return "invalid rank";
  }
  return "unknown";
}

std::string_view sector_label(Sector sector) { return kSectors[static_cast<std::size_t>(sector)].label; }
std::string_view sector_slug(Sector sector) { return kSectors[static_cast<std::size_t>(sector)].slug; }

std::span<const Sector> all_sectors() { return kSectorList; }

InstitutionKind parse_kind(std::string_view text) {
  if (iequals(text, "university") || iequals(text, "uni")) return InstitutionKind::University;
  if (iequals(text, "company") || iequals(text, "com")) return InstitutionKind::Company;
  throw ParseError("unknown institution kind '" + std::string(text) + "'");
}

Region parse_region(std::string_view text) {
  if (iequals(text, "all")) return Region::All;
  if (iequals(text, "turkey")) return Region::Turkey;
  throw ParseError("unknown region '" + std::string(text) + "'");
}

EdgeType parse_edge_type(std::string_view text) {
  if (iequals(text, "UNI")) return EdgeType::UNI;
  if (iequals(text, "COM")) return EdgeType::COM;
  if (iequals(text, "TRANSFER")) return EdgeType::TRANSFER;
  throw ParseError("unknown edge type '" + std::string(text) + "'");
}

Sector parse_sector(std::string_view text) {
  for (const auto& info : kSectors)
    if (iequals(text, info.slug) || iequals(text, info.label)) return info.sector;
  throw ParseError("unknown sector '" + std::string(text) + "'");
}

SummaryMode parse_summary_mode(std::string_view text) {
  if (iequals(text, "directed")) return SummaryMode::Directed;
  if (iequals(text, "undirected") || iequals(text, "undirectedview")) return SummaryMode::UndirectedView;
  throw ParseError("unknown summary mode '" + std::string(text) + "'");
}

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw ParseError("malformed date '" + std::string(text) + "'");
  const int y = parse_fixed_int(text, 0, 4, "date");
  const int m = parse_fixed_int(text, 5, 2, "date");
  const int d = parse_fixed_int(text, 8, 2, "date");
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)}, std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw ParseError("invalid calendar date '" + std::string(text) + "'");
  return date;
}

std::string format_date(Date date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

Timestamp parse_timestamp(std::string_view text) {
  if (text.size() != 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':' || text[19] != 'Z')
    throw ParseError("malformed timestamp '" + std::string(text) + "'");
  const Date date = parse_date(text.substr(0, 10));
  const int hh = parse_fixed_int(text, 11, 2, "timestamp");
  const int mm = parse_fixed_int(text, 14, 2, "timestamp");
  const int ss = parse_fixed_int(text, 17, 2, "timestamp");
  if (hh > 23 || mm > 59 || ss > 60) throw ParseError("invalid time of day '" + std::string(text) + "'");
  return std::chrono::sys_days{date} + std::chrono::hours{hh} + std::chrono::minutes{mm} + std::chrono::seconds{ss};
}

std::string format_timestamp(Timestamp ts) {
  const auto days = std::chrono::floor<std::chrono::days>(ts);
  const std::chrono::hh_mm_ss tod{ts - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", format_date(Date{days}).c_str(),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

std::vector<std::string> validate_record(const WebMetricsRecord& record, InstitutionKind kind) {
  std::vector<std::string> out;
  auto non_negative = [&](std::int64_t v, const char* name) {
    if (v < 0) out.push_back(std::string(name) + " is negative");
  };
  if (record.institution_id.empty()) out.emplace_back("institution_id is empty");
  if (!record.sample_date.ok()) out.emplace_back("sample_date is not a valid date");
  non_negative(record.tpc, "tpc");
  non_negative(record.apc, "apc");
  non_negative(record.gum, "gum");
  non_negative(record.lum, "lum");
  non_negative(record.external_links, "external_links");
  non_negative(record.root_domains, "root_domains");
  if (record.domain_authority < 0 || record.domain_authority > 100)
    out.emplace_back("domain_authority outside [0, 100]");
  if (record.root_domains > 0 && record.external_links > 0 && record.root_domains > record.external_links)
    out.emplace_back("root_domains exceeds external_links");
  if (record.citations) {
    if (*record.citations < 0) out.emplace_back("citations is negative");
    if (kind != InstitutionKind::University) out.emplace_back("citations present for a company");
  }
  if (record.sales) {
    if (!(*record.sales >= 0.0)) out.emplace_back("sales is negative or not a number");
    if (kind != InstitutionKind::Company) out.emplace_back("sales present for a university");
  }
  return out;
}

void check_record(const WebMetricsRecord& record, InstitutionKind kind) {
  const auto problems = validate_record(record, kind);
  if (problems.empty()) return;
  std::string msg = "invalid metrics record for '" + record.institution_id + "':";
  for (const auto& p : problems) msg += " " + p + ";";
  throw ValidationError(msg);
}

std::vector<RosterViolation> validate_roster(std::span<const Institution> institutions,
                                             const std::set<std::string>& resolved_shared) {
  std::vector<RosterViolation> out;
  std::set<std::string> ids;
  std::map<std::string, std::vector<std::string>> holders;

  for (const auto& inst : institutions) {
    if (!ids.insert(inst.id).second)
      out.push_back({ViolationKind::DuplicateId, inst.id, "id '" + inst.id + "' appears more than once"});
    if (inst.domains.empty()) out.push_back({ViolationKind::EmptyDomains, inst.id, "no domains listed"});
    if (inst.source_rank < 1)
      out.push_back({ViolationKind::InvalidRank, inst.id, "source_rank " + std::to_string(inst.source_rank) + " < 1"});
    if (inst.kind == InstitutionKind::University && inst.sector)
      out.push_back({ViolationKind::SectorMismatch, inst.id, "university with a sector"});
    if (inst.kind == InstitutionKind::Company && !inst.sector)
      out.push_back({ViolationKind::SectorMismatch, inst.id, "company without a sector"});

    std::set<std::string> own;
    for (const auto& d : inst.domains) {
      if (!is_canonical_host(d)) out.push_back({ViolationKind::NonCanonicalHost, inst.id, "'" + d + "'"});
      if (own.insert(d).second) holders[d].push_back(inst.id);
    }
  }

  for (const auto& [domain, who] : holders) {
    if (who.size() < 2 || resolved_shared.contains(domain)) continue;
    std::string detail = "'" + domain + "' held by";
    for (const auto& id : who) detail += " " + id;
    for (const auto& id : who) out.push_back({ViolationKind::SharedDomain, id, detail});
  }
  return out;
}

}  // namespace webimpact
