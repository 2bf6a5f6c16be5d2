#include "webimpact/queryplan.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "webimpact/error.hpp"

namespace webimpact {

namespace {

constexpr std::array<std::string_view, 24> kSecondLevelSuffixes{
    "com.tr", "edu.tr", "gov.tr", "org.tr", "net.tr", "gen.tr", "bel.tr", "k12.tr",
    "av.tr",  "biz.tr", "co.uk",  "ac.uk",  "org.uk", "gov.uk", "com.au", "edu.au",
    "co.jp",  "ac.jp",  "com.br", "com.cn", "edu.cn", "co.kr",  "ac.kr",  "com.mx"};

bool valid_label(std::string_view label) {
  if (label.empty() || label.size() > 63) return false;
  if (label.front() == '-' || label.back() == '-') return false;
  return std::all_of(label.begin(), label.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || u >= 0x80;
  });
}

std::vector<std::string_view> split_labels(std::string_view host) {
  std::vector<std::string_view> labels;
  std::size_t start = 0;
  while (true) {
    const auto dot = host.find('.', start);
    labels.push_back(host.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return labels;
}

}  // namespace

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::TPC: return "TPC";
    case Metric::APC: return "APC";
    case Metric::GUM: return "GUM";
    case Metric::LUM: return "LUM";
    case Metric::PairwiseMention: return "PairwiseMention";
  }
  return "TPC";
}

std::string_view to_string(Engine engine) {
  return engine == Engine::GeneralIndex ? "GeneralIndex" : "AcademicIndex";
}

Metric parse_metric(std::string_view text) {
  for (auto m : {Metric::TPC, Metric::APC, Metric::GUM, Metric::LUM, Metric::PairwiseMention})
    if (text == to_string(m)) return m;
  throw ParseError("unknown metric '" + std::string(text) + "'");
}

Engine parse_engine(std::string_view text) {
  if (text == "GeneralIndex") return Engine::GeneralIndex;
  if (text == "AcademicIndex") return Engine::AcademicIndex;
  throw ParseError("unknown engine '" + std::string(text) + "'");
}

std::string canonicalize(std::string_view url) {
  const auto first = url.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ValidationError("empty URL");
  url = url.substr(first, url.find_last_not_of(" \t\r\n") - first + 1);

  std::string s(url);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; });

  std::string_view view = s;
  if (const auto scheme = view.find("://"); scheme != std::string_view::npos) {
    view.remove_prefix(scheme + 3);
  } else if (view.starts_with("//")) {
    view.remove_prefix(2);
  }
  view = view.substr(0, view.find_first_of("/?#"));
  if (const auto at = view.rfind('@'); at != std::string_view::npos) view.remove_prefix(at + 1);
  if (const auto colon = view.find(':'); colon != std::string_view::npos) {
    const auto port = view.substr(colon + 1);
    if (!std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw ValidationError("unparseable URL '" + std::string(url) + "'");
    view = view.substr(0, colon);
  }
  if (view.ends_with('.')) view.remove_suffix(1);
  // Every leading "www." label goes, as long as a registrable name remains.
  while (view.starts_with("www.") && view.substr(4).find('.') != std::string_view::npos) view.remove_prefix(4);

  const auto labels = split_labels(view);
  if (labels.size() < 2 || !std::all_of(labels.begin(), labels.end(), valid_label))
    throw ValidationError("unparseable URL '" + std::string(url) + "'");
  return std::string(view);
}

bool is_canonical_host(std::string_view host) {
  try {
    return canonicalize(host) == host;
  } catch (const ValidationError&) {
    return false;
  }
}

std::string registrable_domain(std::string_view host) {
  const auto labels = split_labels(host);
  if (labels.size() <= 2) return std::string(host);
  const auto n = labels.size();
  const std::string last_two = std::string(labels[n - 2]) + "." + std::string(labels[n - 1]);
  const bool second_level =
      std::find(kSecondLevelSuffixes.begin(), kSecondLevelSuffixes.end(), last_two) != kSecondLevelSuffixes.end();
  if (!second_level) return last_two;
  return std::string(labels[n - 3]) + "." + last_two;
}

QuerySpec make_spec(Metric metric, std::string target, std::optional<std::string> host) {
  QuerySpec spec;
  spec.metric = metric;
  spec.target_domain = std::move(target);
  spec.host_domain = std::move(host);
  spec.region = metric == Metric::LUM ? Region::Turkey : Region::All;
  spec.engine = metric == Metric::APC ? Engine::AcademicIndex : Engine::GeneralIndex;
  return spec;
}

void validate_spec(const QuerySpec& spec) {
  if (!is_canonical_host(spec.target_domain))
    throw ValidationError("query target '" + spec.target_domain + "' is not a canonical host");
  if (spec.metric == Metric::LUM && spec.region != Region::Turkey)
    throw ValidationError("LUM queries must be restricted to region Turkey");
  if (spec.metric == Metric::GUM && spec.region != Region::All)
    throw ValidationError("GUM queries must use region All");
  const Engine wanted = spec.metric == Metric::APC ? Engine::AcademicIndex : Engine::GeneralIndex;
  if (spec.engine != wanted)
    throw ValidationError(std::string(to_string(spec.metric)) + " queries must use " + std::string(to_string(wanted)));
  if (spec.metric == Metric::PairwiseMention) {
    if (!spec.host_domain) throw ValidationError("pairwise query without a host domain");
    if (!is_canonical_host(*spec.host_domain))
      throw ValidationError("query host '" + *spec.host_domain + "' is not a canonical host");
    if (*spec.host_domain == spec.target_domain) throw ValidationError("pairwise query with host equal to target");
  } else if (spec.host_domain) {
    throw ValidationError("host domain given for a non-pairwise query");
  }
}

std::string build_query(const QuerySpec& spec) {
  validate_spec(spec);
  const std::string quoted = "\"" + spec.target_domain + "\"";
  switch (spec.metric) {
    case Metric::TPC:
    case Metric::APC: return "site:" + spec.target_domain;
    case Metric::GUM:
    case Metric::LUM: return quoted + " -site:" + spec.target_domain;
    case Metric::PairwiseMention: return quoted + " site:" + *spec.host_domain;
  }
  return {};
}

std::vector<QuerySpec> enumerate_metric_plan(std::span<const Institution> institutions) {
  std::vector<QuerySpec> plan;
  for (const auto& inst : institutions)
    for (const auto& domain : inst.domains)
      for (auto m : {Metric::TPC, Metric::APC, Metric::GUM, Metric::LUM}) plan.push_back(make_spec(m, domain));
  return plan;
}

std::vector<QuerySpec> enumerate_pairwise_plan(std::span<const ResolvedInstitution> nodes, PairScope scope) {
  std::set<std::string_view> seen;
  for (const auto& n : nodes)
    if (!seen.insert(n.domain).second)
      throw ValidationError("domain '" + n.domain + "' is held by more than one node; resolve it first");

  std::vector<QuerySpec> plan;
  plan.reserve(nodes.size() * (nodes.size() > 0 ? nodes.size() - 1 : 0));
  for (const auto& host : nodes) {
    for (const auto& target : nodes) {
      if (&host == &target) continue;
      if (scope == PairScope::CrossKindOnly && host.kind == target.kind) continue;
      plan.push_back(make_spec(Metric::PairwiseMention, target.domain, host.domain));
    }
  }
  return plan;
}

}  // namespace webimpact
