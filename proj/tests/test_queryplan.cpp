#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <tuple>

#include "webimpact/csv.hpp"
#include "webimpact/error.hpp"
#include "webimpact/queryplan.hpp"

using namespace webimpact;

namespace {

std::vector<ResolvedInstitution> nodes(int unis, int companies) {
  std::vector<ResolvedInstitution> out;
  for (int i = 0; i < unis; ++i)
    out.push_back({"U" + std::to_string(i), "u" + std::to_string(i) + ".edu.tr", InstitutionKind::University, {}});
  for (int i = 0; i < companies; ++i)
    out.push_back({"C" + std::to_string(i), "c" + std::to_string(i) + ".com.tr", InstitutionKind::Company,
                   Sector::Electricity});
  return out;
}

}  // namespace

TEST_CASE("query templates") {
  CHECK(build_query(make_spec(Metric::TPC, "abc.com")) == "site:abc.com");
  CHECK(build_query(make_spec(Metric::GUM, "abc.com")) == "\"abc.com\" -site:abc.com");
  CHECK(build_query(make_spec(Metric::LUM, "abc.com")) == "\"abc.com\" -site:abc.com");
  CHECK(build_query(make_spec(Metric::APC, "abc.com")) == "site:abc.com");
  CHECK(build_query(make_spec(Metric::PairwiseMention, "abc.com", "xyz.com")) == "\"abc.com\" site:xyz.com");
  CHECK(build_query(make_spec(Metric::PairwiseMention, "istanbul.edu.tr", "sdu.edu.tr")) ==
        "\"istanbul.edu.tr\" site:sdu.edu.tr");
}

TEST_CASE("make_spec fills region and engine") {
  CHECK(make_spec(Metric::LUM, "abc.com").region == Region::Turkey);
  CHECK(make_spec(Metric::GUM, "abc.com").region == Region::All);
  CHECK(make_spec(Metric::APC, "abc.com").engine == Engine::AcademicIndex);
  CHECK(make_spec(Metric::TPC, "abc.com").engine == Engine::GeneralIndex);
}

TEST_CASE("invalid specs are rejected") {
  auto lum = make_spec(Metric::LUM, "abc.com");
  lum.region = Region::All;
  CHECK_THROWS_AS(build_query(lum), ValidationError);
  auto gum = make_spec(Metric::GUM, "abc.com");
  gum.region = Region::Turkey;
  CHECK_THROWS_AS(build_query(gum), ValidationError);
  auto apc = make_spec(Metric::APC, "abc.com");
  apc.engine = Engine::GeneralIndex;
  CHECK_THROWS_AS(build_query(apc), ValidationError);
  CHECK_THROWS_AS(build_query(make_spec(Metric::PairwiseMention, "abc.com")), ValidationError);
  CHECK_THROWS_AS(build_query(make_spec(Metric::PairwiseMention, "abc.com", "abc.com")), ValidationError);
  CHECK_THROWS_AS(build_query(make_spec(Metric::TPC, "abc.com", "xyz.com")), ValidationError);
  CHECK_THROWS_AS(build_query(make_spec(Metric::TPC, "www.abc.com")), ValidationError);
  CHECK_THROWS_AS(build_query(make_spec(Metric::TPC, "ABC.com")), ValidationError);
}

TEST_CASE("subdomain hosts are queried as listed") {
  CHECK(build_query(make_spec(Metric::TPC, "ik.zaman.com.tr")) == "site:ik.zaman.com.tr");
}

TEST_CASE("golden query file") {
  const auto table = read_csv_file(WEBIMPACT_TEST_DATA "/query_golden.csv");
  REQUIRE(table.rows.size() == 50);
  const auto cm = table.column("metric"), ct = table.column("target"), ch = table.column("host"),
             cq = table.column("query_string");
  for (const auto& row : table.rows) {
    std::optional<std::string> host;
    if (!row[ch].empty()) host = row[ch];
    CHECK(build_query(make_spec(parse_metric(row[cm]), row[ct], host)) == row[cq]);
  }
}

TEST_CASE("property: build_query is injective over (metric class, target, host) with engine and region") {
  const std::vector<std::string> hosts{"abc.com", "xyz.com", "sdu.edu.tr", "istanbul.edu.tr", "ik.zaman.com.tr"};
  std::set<std::tuple<std::string, Region, Engine>> seen;
  std::size_t specs = 0;
  for (const auto& t : hosts) {
    for (auto m : {Metric::TPC, Metric::APC, Metric::GUM, Metric::LUM}) {
      const auto s = make_spec(m, t);
      seen.emplace(build_query(s), s.region, s.engine);
      ++specs;
    }
    for (const auto& h : hosts) {
      if (h == t) continue;
      const auto s = make_spec(Metric::PairwiseMention, t, h);
      seen.emplace(build_query(s), s.region, s.engine);
      ++specs;
    }
  }
  CHECK(seen.size() == specs);
}

TEST_CASE("canonicalize") {
  CHECK(canonicalize("http://www.sdu.edu.tr/dept") == "sdu.edu.tr");
  CHECK(canonicalize("sdu.edu.tr") == "sdu.edu.tr");
  CHECK(canonicalize("HTTPS://Arcelik.com.TR") == "arcelik.com.tr");
  CHECK(canonicalize("  https://user@www.metu.edu.tr:8080/?q=1#top ") == "metu.edu.tr");
  CHECK(canonicalize("//www.itu.edu.tr") == "itu.edu.tr");
  CHECK(canonicalize("ege.edu.tr.") == "ege.edu.tr");
  CHECK(canonicalize("www.com") == "www.com");
  CHECK_THROWS_AS(canonicalize(""), ValidationError);
  CHECK_THROWS_AS(canonicalize("localhost"), ValidationError);
  CHECK_THROWS_AS(canonicalize("http://bad_host.com"), ValidationError);
  CHECK_THROWS_AS(canonicalize("abc.com:http"), ValidationError);
  CHECK(is_canonical_host("sdu.edu.tr"));
  CHECK_FALSE(is_canonical_host("www.sdu.edu.tr"));
}

TEST_CASE("property: canonicalize is idempotent") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> schemes{"", "http://", "HTTPS://", "//", "ftp://"};
  const std::vector<std::string> prefixes{"", "www.", "WWW.", "www.www."};
  const std::vector<std::string> bodies{"abc.com", "sdu.edu.tr", "Arcelik.com.TR", "ik.zaman.com.tr", "a-b.co.uk"};
  const std::vector<std::string> tails{"", "/", "/dept/x", "?q=1", "#f", ":8080/p", "."};
  for (int i = 0; i < 500; ++i) {
    const std::string url = schemes[rng() % schemes.size()] + prefixes[rng() % prefixes.size()] +
                            bodies[rng() % bodies.size()] + tails[rng() % tails.size()];
    const auto once = canonicalize(url);
    CHECK(canonicalize(once) == once);
    CHECK(is_canonical_host(once));
  }
}

TEST_CASE("registrable_domain") {
  CHECK(registrable_domain("ik.zaman.com.tr") == "zaman.com.tr");
  CHECK(registrable_domain("zaman.com.tr") == "zaman.com.tr");
  CHECK(registrable_domain("news.bbc.co.uk") == "bbc.co.uk");
  CHECK(registrable_domain("mail.abc.com") == "abc.com");
  CHECK(registrable_domain("abc.com") == "abc.com");
}

TEST_CASE("pairwise plan sizes") {
  CHECK(enumerate_pairwise_plan(nodes(3, 0)).size() == 6);
  CHECK(enumerate_pairwise_plan(nodes(25, 98)).size() == 15006);
  CHECK(enumerate_pairwise_plan(nodes(25, 98), PairScope::CrossKindOnly).size() == 4900);
  CHECK(enumerate_pairwise_plan(nodes(0, 0)).empty());
  CHECK(enumerate_pairwise_plan(nodes(1, 0)).empty());
}

TEST_CASE("property: |pairwise plan| = N^2 - N with distinct ordered pairs") {
  for (int n = 0; n <= 30; ++n) {
    const auto plan = enumerate_pairwise_plan(nodes(n / 2, n - n / 2));
    CHECK(plan.size() == static_cast<std::size_t>(n * n - n));
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& s : plan) {
      CHECK(s.metric == Metric::PairwiseMention);
      CHECK(*s.host_domain != s.target_domain);
      pairs.emplace(*s.host_domain, s.target_domain);
    }
    CHECK(pairs.size() == plan.size());
  }
}

TEST_CASE("pairwise plan is host-major in input order") {
  const auto plan = enumerate_pairwise_plan(nodes(3, 0));
  CHECK(*plan[0].host_domain == "u0.edu.tr");
  CHECK(plan[0].target_domain == "u1.edu.tr");
  CHECK(plan[1].target_domain == "u2.edu.tr");
  CHECK(*plan[2].host_domain == "u1.edu.tr");
}

TEST_CASE("duplicate resolved domains are rejected") {
  auto n = nodes(2, 0);
  n[1].domain = n[0].domain;
  CHECK_THROWS_AS(enumerate_pairwise_plan(n), ValidationError);
}

TEST_CASE("metric plan covers every domain with four metrics") {
  std::vector<Institution> roster{
      {"U01", "SDU", InstitutionKind::University, std::nullopt, {"sdu.edu.tr"}, 1},
      {"C01", "Arcelik", InstitutionKind::Company, Sector::MetalProductsMachinery, {"arcelikas.com", "arcelik.com.tr"}, 3}};
  const auto plan = enumerate_metric_plan(roster);
  REQUIRE(plan.size() == 12);
  CHECK(plan[4].target_domain == "arcelikas.com");
  CHECK(plan[7].metric == Metric::LUM);
  CHECK(plan[7].region == Region::Turkey);
}
