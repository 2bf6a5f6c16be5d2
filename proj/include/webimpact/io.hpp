#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "webimpact/collector.hpp"
#include "webimpact/ingest.hpp"
#include "webimpact/layout.hpp"
#include "webimpact/model.hpp"
#include "webimpact/network.hpp"
#include "webimpact/queryplan.hpp"

namespace webimpact {

// Roster: id,name,kind,sector,domains,source_rank. Domains are
// semicolon-separated; sector may be a slug or a legend label.
std::vector<Institution> read_roster(std::istream& in);
std::vector<Institution> read_roster(const std::filesystem::path& path);
void write_roster(std::ostream& out, std::span<const Institution> roster);

// Metric import: institution_id,sample_date,tpc,apc,gum,lum,domain_authority,
// external_links,root_domains,citations,sales. Only citations and sales may
// be empty. Values are parsed, not validated.
std::vector<WebMetricsRecord> read_metrics(std::istream& in);

// Reads a metric file into a sample, checking every record against the kind
// of its roster institution. Records for unknown institutions are errors.
SampleSet load_sample(const std::filesystem::path& path, std::string label, std::span<const Institution> roster);
void write_metrics(std::ostream& out, std::span<const WebMetricsRecord> records);

// Fixture: query_string,region,value,retrieved_at (further columns ignored).
std::vector<FixtureRow> read_fixtures(std::istream& in);
std::vector<FixtureRow> read_fixtures(const std::filesystem::path& path);

// Collected counts in fixture layout plus recorded,error columns, so a
// collection can be replayed.
void write_hit_counts(std::ostream& out, std::span<const HitCount> hits);
std::vector<HitCount> read_hit_counts(std::istream& in);

// Pairwise: host_domain,target_domain,hits.
std::vector<PairwiseHits> read_pairwise(std::istream& in);
void write_pairwise(std::ostream& out, std::span<const PairwiseHits> rows);

// Pairwise rows from collected hit counts of pairwise queries.
std::vector<PairwiseHits> pairwise_from_hits(std::span<const QuerySpec> plan, std::span<const HitCount> hits);

// Query plan: metric,target,host,region,engine,query_string.
void write_query_plan(std::ostream& out, std::span<const QuerySpec> plan);
std::vector<QuerySpec> read_query_plan(std::istream& in);

// Pajek NET: "*Vertices N" with 1-based quoted labels (domains), then
// "*Arcs" lines "src dst hits". Node id, kind, sector and page count ride in
// "% node" comment lines that other Pajek readers skip. LF endings.
void write_pajek(std::ostream& out, const MentionNetwork& net);
// Inverse of write_pajek. Files without node comments get id = label and a
// kind guessed from the label (".edu" hosts are universities). Throws
// ParseError with the line number on malformed input.
MentionNetwork read_pajek(std::istream& in);

// GEXF 1.2 (draft namespace), directed by default, with kind/sector/tpc node
// attributes and edge_type edge attribute; viz size, position and color
// when placements are given.
void write_gexf(std::ostream& out, const MentionNetwork& net, const std::vector<NodePlacement>* placements = nullptr);

// Layout export: node_id,x,y,size,color.
void write_placements(std::ostream& out, std::span<const NodePlacement> placements);
std::vector<NodePlacement> read_placements(std::istream& in);

// Whole-file helpers that throw IoError naming the path.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace webimpact
