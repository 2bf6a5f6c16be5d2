#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "webimpact/model.hpp"

namespace webimpact {

struct NetworkNode {
  std::string id;
  std::string label;  // the queried domain
  InstitutionKind kind = InstitutionKind::University;
  std::optional<Sector> sector;
  std::uint64_t tpc = 0;

  bool operator==(const NetworkNode&) const = default;
};

// Directed weighted graph of URL mentions. Node and arc order is insertion
// order; every arc has hits >= 1, distinct endpoints, and at most one arc
// exists per ordered pair.
class MentionNetwork {
 public:
  // Throws ValidationError on a duplicate id.
  std::size_t add_node(NetworkNode node);

  // The edge type follows from the endpoint kinds. Throws ValidationError on
  // unknown endpoints, self-loops, zero hits and repeated ordered pairs.
  void add_arc(std::string_view host_id, std::string_view target_id, std::uint64_t hits);

  const std::vector<NetworkNode>& nodes() const { return nodes_; }
  const std::vector<MentionEdge>& arcs() const { return arcs_; }
  // Node indices of arc i.
  std::pair<std::size_t, std::size_t> endpoints(std::size_t arc) const { return arc_index_[arc]; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  std::optional<std::size_t> index_of(std::string_view id) const;
  bool has_arc(std::size_t host, std::size_t target) const { return pairs_.contains({host, target}); }

  bool operator==(const MentionNetwork& other) const { return nodes_ == other.nodes_ && arcs_ == other.arcs_; }

 private:
  std::vector<NetworkNode> nodes_;
  std::vector<MentionEdge> arcs_;
  std::vector<std::pair<std::size_t, std::size_t>> arc_index_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::set<std::pair<std::size_t, std::size_t>> pairs_;
};

// Sorted neighbour lists by node index.
struct Adjacency {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::vector<std::size_t>> in;
  std::vector<std::vector<std::size_t>> undirected;
};

Adjacency adjacency(const MentionNetwork& net);

struct PairwiseHits {
  std::string host_domain;
  std::string target_domain;
  std::uint64_t hits = 0;
};

struct BuildReport {
  std::size_t rows = 0;
  std::size_t active_rows = 0;       // rows with hits >= 1, before dedup
  std::size_t duplicate_pairs = 0;   // repeated ordered pairs folded into one arc
  std::size_t arcs = 0;
};

// Arcs run host -> target for every pair with hits >= 1; a repeated ordered
// pair keeps its largest count. All listed nodes are kept, isolated or not.
// Throws ValidationError naming any domain that is not a node.
MentionNetwork build_network(std::span<const PairwiseHits> pairwise, std::span<const ResolvedInstitution> nodes,
                             const std::map<std::string, std::uint64_t>& tpc_by_id = {},
                             BuildReport* report = nullptr);

// Node-level centralities. Distances are unweighted hops; in Directed mode
// they follow arc direction, otherwise the undirected view. Closeness is
// (reached - 1) / sum of distances over reachable nodes, and the harmonic
// variant the mean inverse distance over the same nodes, so both are local
// to a component. Undirected betweenness counts each unordered pair once.
// Eigenvector centrality and clustering always use the undirected view.
std::vector<NodeMetrics> node_metrics(const MentionNetwork& net, SummaryMode mode);

// Leading eigenvector of the undirected adjacency by power iteration on
// A + I from the all-ones vector, scaled to max 1. All zero without edges.
std::vector<double> eigenvector_centrality(const MentionNetwork& net);

// Local clustering on the undirected view; 0 below degree 2.
std::vector<double> clustering_coefficients(const MentionNetwork& net);

// Weakly connected components, labelled 0.. in order of first node.
std::vector<std::size_t> connected_components(const MentionNetwork& net);

// Whole-graph statistics. Diameter and average path length are taken over
// the largest (weakly) connected component, first-found on ties; both are 0
// without edges.
NetworkSummary network_summary(const MentionNetwork& net, SummaryMode mode);

struct IntensitySummary {
  EdgeType edge_type = EdgeType::UNI;
  std::size_t active_pairs = 0;
  std::uint64_t total_hits = 0;
  double mean_hits = 0.0;
  double share_percent = 0.0;  // of all active pairs
};

struct TransferSymmetry {
  std::size_t university_to_company = 0;
  std::size_t company_to_university = 0;
  double share_university_to_company = 0.0;  // percent of TRANSFER arcs
  double share_company_to_university = 0.0;
};

struct TaxonomyReport {
  std::array<IntensitySummary, 3> by_type;  // UNI, COM, TRANSFER
  std::size_t active_pairs = 0;
  TransferSymmetry transfer;

  const IntensitySummary& of(EdgeType type) const { return by_type[static_cast<std::size_t>(type)]; }
};

TaxonomyReport classify_and_summarize(const MentionNetwork& net);

struct Combination {
  std::string host;    // domain label
  std::string target;  // domain label
  std::uint64_t hits = 0;
  EdgeType edge_type = EdgeType::UNI;
};

// Arcs by hits descending, then host and target label ascending. Throws
// ValidationError for k < 1.
std::vector<Combination> top_combinations(const MentionNetwork& net, std::size_t k);

struct InteractionRank {
  std::string university_id;
  std::string label;
  std::size_t interaction_degree = 0;  // companies with an arc either way
  std::uint64_t interaction_hits = 0;  // hits on those arcs, both directions
};

// One entry per university, by degree then hits descending, id ascending on
// full ties. Throws ValidationError unless both kinds are present.
std::vector<InteractionRank> interaction_ranking(const MentionNetwork& net);

}  // namespace webimpact
