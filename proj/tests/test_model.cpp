#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "webimpact/error.hpp"
#include "webimpact/model.hpp"

using namespace webimpact;

namespace {

Institution uni(std::string id, std::string domain, int rank = 1) {
  return {std::move(id), "U", InstitutionKind::University, std::nullopt, {std::move(domain)}, rank};
}

Institution com(std::string id, std::string domain, int rank = 1, Sector s = Sector::Electricity) {
  return {std::move(id), "C", InstitutionKind::Company, s, {std::move(domain)}, rank};
}

WebMetricsRecord good_record() {
  WebMetricsRecord r;
  r.institution_id = "U01";
  r.sample_date = std::chrono::year{2014} / 12 / 31;
  r.tpc = 600000;
  r.apc = 12000;
  r.gum = 62200;
  r.lum = 5000;
  r.domain_authority = 75;
  r.external_links = 100000;
  r.root_domains = 2000;
  r.citations = 15000;
  return r;
}

bool has_kind(const std::vector<RosterViolation>& v, ViolationKind k) {
  return std::any_of(v.begin(), v.end(), [&](const auto& x) { return x.kind == k; });
}

}  // namespace

TEST_CASE("edge type is a function of the endpoint kinds") {
  using K = InstitutionKind;
  CHECK(edge_type_for(K::University, K::University) == EdgeType::UNI);
  CHECK(edge_type_for(K::Company, K::Company) == EdgeType::COM);
  CHECK(edge_type_for(K::University, K::Company) == EdgeType::TRANSFER);
  CHECK(edge_type_for(K::Company, K::University) == EdgeType::TRANSFER);
}

TEST_CASE("legend sector labels and slugs round-trip") {
  CHECK(all_sectors().size() == 10);
  for (auto s : all_sectors()) {
    CHECK(parse_sector(sector_slug(s)) == s);
    CHECK(parse_sector(sector_label(s)) == s);
  }
  CHECK(sector_label(Sector::FoodBeveragesTobacco) == "Food, Beverages and Tobacco");
  CHECK(sector_label(Sector::TextilesApparel) == "Textiles, Wearing Apparel, Leather and Footwear");
  CHECK(parse_sector("MOTOR VEHICLES") == Sector::MotorVehicles);
  CHECK_THROWS_AS(parse_sector("software"), ParseError);
}

TEST_CASE("enum text forms") {
  CHECK(parse_kind("University") == InstitutionKind::University);
  CHECK(parse_kind("com") == InstitutionKind::Company);
  CHECK(parse_region("Turkey") == Region::Turkey);
  CHECK(to_string(Region::All) == "all");
  CHECK(parse_edge_type("transfer") == EdgeType::TRANSFER);
  CHECK(parse_summary_mode("undirected") == SummaryMode::UndirectedView);
  CHECK_THROWS_AS(parse_kind("school"), ParseError);
  CHECK_THROWS_AS(parse_region("europe"), ParseError);
}

TEST_CASE("dates and timestamps") {
  const Date d = parse_date("2014-11-30");
  CHECK(format_date(d) == "2014-11-30");
  CHECK_THROWS_AS(parse_date("2014-02-30"), ParseError);
  CHECK_THROWS_AS(parse_date("2014/11/30"), ParseError);
  const Timestamp t = parse_timestamp("2014-11-15T10:00:00Z");
  CHECK(format_timestamp(t) == "2014-11-15T10:00:00Z");
  CHECK(format_timestamp(Timestamp{}) == "1970-01-01T00:00:00Z");
  CHECK_THROWS_AS(parse_timestamp("2014-11-15 10:00:00"), ParseError);
  CHECK_THROWS_AS(parse_timestamp("2014-11-15T25:00:00Z"), ParseError);
}

TEST_CASE("validate_roster") {
  SUBCASE("empty roster is valid") { CHECK(validate_roster({}).empty()); }

  SUBCASE("shared domain without resolution") {
    std::vector<Institution> r{com("C06", "zorlu.com.tr", 20), com("C07", "zorlu.com.tr", 33)};
    const auto v = validate_roster(r);
    REQUIRE(v.size() == 2);
    CHECK(v[0].kind == ViolationKind::SharedDomain);
    CHECK(to_string(v[0].kind) == "shared domain");
    CHECK(validate_roster(r, {"zorlu.com.tr"}).empty());
  }

  SUBCASE("non-canonical host") {
    std::vector<Institution> r{uni("U01", "HTTP://WWW.UPV.ES/x")};
    const auto v = validate_roster(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::NonCanonicalHost);
    CHECK(to_string(v[0].kind) == "non-canonical host");
  }

  SUBCASE("structural rules") {
    auto bad_sector = uni("U02", "sdu.edu.tr");
    bad_sector.sector = Sector::Electricity;
    auto no_sector = com("C01", "aygaz.com.tr");
    no_sector.sector.reset();
    auto no_domains = uni("U03", "x.edu.tr");
    no_domains.domains.clear();
    std::vector<Institution> r{uni("U01", "metu.edu.tr"), uni("U01", "itu.edu.tr"), bad_sector, no_sector, no_domains,
                               uni("U04", "ege.edu.tr", 0)};
    const auto v = validate_roster(r);
    CHECK(has_kind(v, ViolationKind::DuplicateId));
    CHECK(has_kind(v, ViolationKind::SectorMismatch));
    CHECK(has_kind(v, ViolationKind::EmptyDomains));
    CHECK(has_kind(v, ViolationKind::InvalidRank));
    CHECK(std::count_if(v.begin(), v.end(), [](auto& x) { return x.kind == ViolationKind::SectorMismatch; }) == 2);
  }

  SUBCASE("a valid mixed roster") {
    std::vector<Institution> r{uni("U01", "sdu.edu.tr"), com("C01", "arcelik.com.tr")};
    r[1].domains.push_back("arcelikas.com");
    CHECK(validate_roster(r).empty());
  }
}

TEST_CASE("validate_record accepts a good record") {
  CHECK(validate_record(good_record(), InstitutionKind::University).empty());
  CHECK_NOTHROW(check_record(good_record(), InstitutionKind::University));
  auto c = good_record();
  c.citations.reset();
  c.sales = 1234.5;
  CHECK(validate_record(c, InstitutionKind::Company).empty());
}

TEST_CASE("validate_record boundaries") {
  auto r = good_record();
  r.domain_authority = 100;
  CHECK(validate_record(r, InstitutionKind::University).empty());
  r.domain_authority = 0;
  CHECK(validate_record(r, InstitutionKind::University).empty());
  r.domain_authority = 101;
  CHECK(validate_record(r, InstitutionKind::University).size() == 1);
  r = good_record();
  r.root_domains = r.external_links;
  CHECK(validate_record(r, InstitutionKind::University).empty());
  r.root_domains = r.external_links + 1;
  CHECK(validate_record(r, InstitutionKind::University).size() == 1);
  r.external_links = 0;  // rule only binds when both are positive
  CHECK(validate_record(r, InstitutionKind::University).empty());
  r = good_record();
  CHECK(validate_record(r, InstitutionKind::Company).size() == 1);  // citations on a company
  r.citations.reset();
  r.sales = 5.0;
  CHECK(validate_record(r, InstitutionKind::University).size() == 1);  // sales on a university
  CHECK_THROWS_AS(check_record(r, InstitutionKind::University), ValidationError);
}

TEST_CASE("property: a record breaking any single bound is rejected") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> which(0, 10);
  std::uniform_int_distribution<std::int64_t> mag(1, 1000000);
  for (int trial = 0; trial < 2000; ++trial) {
    auto r = good_record();
    const auto kind = InstitutionKind::University;
    switch (which(rng)) {
      case 0: r.tpc = -mag(rng); break;
      case 1: r.apc = -mag(rng); break;
      case 2: r.gum = -mag(rng); break;
      case 3: r.lum = -mag(rng); break;
      case 4: r.domain_authority = -static_cast<int>(mag(rng) % 1000) - 1; break;
      case 5: r.domain_authority = 101 + static_cast<int>(mag(rng) % 1000); break;
      case 6: r.external_links = -mag(rng); break;
      case 7: r.root_domains = -mag(rng); break;
      case 8: r.root_domains = r.external_links + mag(rng); break;
      case 9: r.citations = -mag(rng); break;
      case 10: r.sales = static_cast<double>(mag(rng)); break;
    }
    CHECK_FALSE(validate_record(r, kind).empty());
  }
}
