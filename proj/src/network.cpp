#include "webimpact/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <tuple>

#include "webimpact/error.hpp"

namespace webimpact {

std::size_t MentionNetwork::add_node(NetworkNode node) {
  const std::size_t idx = nodes_.size();
  if (!index_.emplace(node.id, idx).second) throw ValidationError("duplicate node id '" + node.id + "'");
  nodes_.push_back(std::move(node));
  return idx;
}

void MentionNetwork::add_arc(std::string_view host_id, std::string_view target_id, std::uint64_t hits) {
  const auto h = index_of(host_id);
  const auto t = index_of(target_id);
  if (!h) throw ValidationError("arc host '" + std::string(host_id) + "' is not a node");
  if (!t) throw ValidationError("arc target '" + std::string(target_id) + "' is not a node");
  if (*h == *t) throw ValidationError("self-loop on '" + std::string(host_id) + "'");
  if (hits == 0) throw ValidationError("arc with zero hits");
  if (!pairs_.insert({*h, *t}).second)
    throw ValidationError("second arc from '" + std::string(host_id) + "' to '" + std::string(target_id) + "'");
  arcs_.push_back({nodes_[*h].id, nodes_[*t].id, hits, edge_type_for(nodes_[*h].kind, nodes_[*t].kind)});
  arc_index_.emplace_back(*h, *t);
}

std::optional<std::size_t> MentionNetwork::index_of(std::string_view id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Adjacency adjacency(const MentionNetwork& net) {
  const std::size_t n = net.node_count();
  Adjacency adj;
  adj.out.resize(n);
  adj.in.resize(n);
  adj.undirected.resize(n);
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    const auto [h, t] = net.endpoints(a);
    adj.out[h].push_back(t);
    adj.in[t].push_back(h);
    adj.undirected[h].push_back(t);
    adj.undirected[t].push_back(h);
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adj.out[v].begin(), adj.out[v].end());
    std::sort(adj.in[v].begin(), adj.in[v].end());
    auto& u = adj.undirected[v];
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
  }
  return adj;
}

MentionNetwork build_network(std::span<const PairwiseHits> pairwise, std::span<const ResolvedInstitution> nodes,
                             const std::map<std::string, std::uint64_t>& tpc_by_id, BuildReport* report) {
  MentionNetwork net;
  std::map<std::string, std::string, std::less<>> id_by_domain;
  for (const auto& n : nodes) {
    if (!id_by_domain.emplace(n.domain, n.id).second)
      throw ValidationError("domain '" + n.domain + "' belongs to more than one node");
    const auto tpc = tpc_by_id.find(n.id);
    net.add_node({n.id, n.domain, n.kind, n.sector, tpc == tpc_by_id.end() ? 0 : tpc->second});
  }

  auto resolve = [&](const std::string& domain) -> const std::string& {
    const auto it = id_by_domain.find(domain);
    if (it == id_by_domain.end()) throw ValidationError("unresolved domain '" + domain + "'");
    return it->second;
  };

  BuildReport rep;
  std::map<std::pair<std::string, std::string>, std::uint64_t> best;
  std::vector<std::pair<std::string, std::string>> order;
  for (const auto& row : pairwise) {
    ++rep.rows;
    const auto& h = resolve(row.host_domain);
    const auto& t = resolve(row.target_domain);
    if (h == t) throw ValidationError("pairwise row mentions '" + row.host_domain + "' on its own site");
    if (row.hits == 0) continue;
    ++rep.active_rows;
    auto key = std::make_pair(h, t);
    auto [it, inserted] = best.emplace(key, row.hits);
    if (inserted) {
      order.push_back(std::move(key));
    } else {
      ++rep.duplicate_pairs;
      it->second = std::max(it->second, row.hits);
    }
  }
  for (const auto& key : order) net.add_arc(key.first, key.second, best[key]);
  rep.arcs = net.arc_count();
  if (report) *report = rep;
  return net;
}

namespace {

using NeighbourLists = std::vector<std::vector<std::size_t>>;

constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);

std::vector<std::size_t> bfs_distances(const NeighbourLists& nbrs, std::size_t source) {
  std::vector<std::size_t> dist(nbrs.size(), kUnreached);
  std::queue<std::size_t> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    const auto v = q.front();
    q.pop();
    for (auto w : nbrs[v]) {
      if (dist[w] != kUnreached) continue;
      dist[w] = dist[v] + 1;
      q.push(w);
    }
  }
  return dist;
}

// Brandes accumulation over unweighted single-source shortest paths.
std::vector<double> brandes(const NeighbourLists& nbrs) {
  const std::size_t n = nbrs.size();
  std::vector<double> cb(n, 0.0);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<std::size_t> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    stack.clear();
    for (std::size_t v = 0; v < n; ++v) {
      preds[v].clear();
      sigma[v] = 0.0;
      delta[v] = 0.0;
      dist[v] = kUnreached;
    }
    sigma[s] = 1.0;
    dist[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      stack.push_back(v);
      for (auto w : nbrs[v]) {
        if (dist[w] == kUnreached) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    while (!stack.empty()) {
      const auto w = stack.back();
      stack.pop_back();
      for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }
  return cb;
}

}  // namespace

std::vector<double> eigenvector_centrality(const MentionNetwork& net) {
  const std::size_t n = net.node_count();
  std::vector<double> x(n, 0.0);
  if (net.arc_count() == 0) return x;
  const auto nbrs = adjacency(net).undirected;
  std::fill(x.begin(), x.end(), 1.0);
  std::vector<double> next(n);
  for (int iter = 0; iter < 100000; ++iter) {
    for (std::size_t v = 0; v < n; ++v) {
      double s = x[v];
      for (auto w : nbrs[v]) s += x[w];
      next[v] = s;
    }
    const double peak = *std::max_element(next.begin(), next.end());
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      next[v] /= peak;
      change = std::max(change, std::abs(next[v] - x[v]));
    }
    x.swap(next);
    if (change < 1e-13) break;
  }
  return x;
}

std::vector<double> clustering_coefficients(const MentionNetwork& net) {
  const auto nbrs = adjacency(net).undirected;
  std::vector<double> cc(nbrs.size(), 0.0);
  for (std::size_t v = 0; v < nbrs.size(); ++v) {
    const auto& nv = nbrs[v];
    const std::size_t k = nv.size();
    if (k < 2) continue;
    std::size_t links = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& ni = nbrs[nv[i]];
      for (std::size_t j = i + 1; j < k; ++j)
        if (std::binary_search(ni.begin(), ni.end(), nv[j])) ++links;
    }
    cc[v] = static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1) / 2.0);
  }
  return cc;
}

std::vector<std::size_t> connected_components(const MentionNetwork& net) {
  const auto nbrs = adjacency(net).undirected;
  std::vector<std::size_t> comp(nbrs.size(), kUnreached);
  std::size_t next = 0;
  for (std::size_t s = 0; s < nbrs.size(); ++s) {
    if (comp[s] != kUnreached) continue;
    const auto dist = bfs_distances(nbrs, s);
    for (std::size_t v = 0; v < nbrs.size(); ++v)
      if (dist[v] != kUnreached) comp[v] = next;
    ++next;
  }
  return comp;
}

std::vector<NodeMetrics> node_metrics(const MentionNetwork& net, SummaryMode mode) {
  const std::size_t n = net.node_count();
  const Adjacency adj = adjacency(net);
  const NeighbourLists& walk = mode == SummaryMode::Directed ? adj.out : adj.undirected;

  std::vector<double> betweenness = brandes(walk);
  if (mode == SummaryMode::UndirectedView)
    for (auto& b : betweenness) b /= 2.0;
  const auto eigen = eigenvector_centrality(net);
  const auto cc = clustering_coefficients(net);

  std::vector<NodeMetrics> out(n);
  for (std::size_t v = 0; v < n; ++v) {
    NodeMetrics& m = out[v];
    m.node_id = net.nodes()[v].id;
    m.in_degree = adj.in[v].size();
    m.out_degree = adj.out[v].size();
    m.degree = mode == SummaryMode::Directed ? m.in_degree + m.out_degree : adj.undirected[v].size();

    const auto dist = bfs_distances(walk, v);
    std::size_t reached = 0;
    double total = 0.0;
    double inverse = 0.0;
    for (std::size_t w = 0; w < n; ++w) {
      if (w == v || dist[w] == kUnreached) continue;
      ++reached;
      total += static_cast<double>(dist[w]);
      inverse += 1.0 / static_cast<double>(dist[w]);
    }
    m.closeness = reached > 0 ? static_cast<double>(reached) / total : 0.0;
    m.harmonic_closeness = reached > 0 ? inverse / static_cast<double>(reached) : 0.0;
    m.betweenness = betweenness[v];
    m.eigenvector = eigen[v];
    m.clustering = cc[v];
  }
  return out;
}

NetworkSummary network_summary(const MentionNetwork& net, SummaryMode mode) {
  const std::size_t n = net.node_count();
  const Adjacency adj = adjacency(net);
  NetworkSummary s;
  s.mode = mode;
  s.n_nodes = n;
  s.n_arcs = net.arc_count();
  for (const auto& u : adj.undirected) s.n_edges += u.size();
  s.n_edges /= 2;
  s.n_isolated = static_cast<std::size_t>(
      std::count_if(adj.undirected.begin(), adj.undirected.end(), [](const auto& u) { return u.empty(); }));
  if (n == 0) return s;

  const double count = mode == SummaryMode::Directed ? static_cast<double>(s.n_arcs) : 2.0 * static_cast<double>(s.n_edges);
  s.avg_degree = count / static_cast<double>(n);
  s.density = n > 1 ? count / (static_cast<double>(n) * static_cast<double>(n - 1)) : 0.0;

  const auto cc = clustering_coefficients(net);
  s.avg_clustering = std::accumulate(cc.begin(), cc.end(), 0.0) / static_cast<double>(n);

  const auto comp = connected_components(net);
  const std::size_t n_comp = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> sizes(n_comp, 0);
  for (auto c : comp) ++sizes[c];
  const auto largest = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  s.largest_component = sizes[largest];

  const NeighbourLists& walk = mode == SummaryMode::Directed ? adj.out : adj.undirected;
  std::size_t pairs = 0;
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    if (comp[v] != largest) continue;
    const auto dist = bfs_distances(walk, v);
    for (std::size_t w = 0; w < n; ++w) {
      if (w == v || dist[w] == kUnreached) continue;
      ++pairs;
      total += static_cast<double>(dist[w]);
      s.diameter = std::max(s.diameter, static_cast<int>(dist[w]));
    }
  }
  s.avg_path_length = pairs > 0 ? total / static_cast<double>(pairs) : 0.0;
  return s;
}

TaxonomyReport classify_and_summarize(const MentionNetwork& net) {
  TaxonomyReport r;
  for (auto t : {EdgeType::UNI, EdgeType::COM, EdgeType::TRANSFER}) r.by_type[static_cast<std::size_t>(t)].edge_type = t;
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    const auto& arc = net.arcs()[a];
    auto& s = r.by_type[static_cast<std::size_t>(arc.edge_type)];
    ++s.active_pairs;
    s.total_hits += arc.hits;
    if (arc.edge_type == EdgeType::TRANSFER) {
      const auto host = net.endpoints(a).first;
      if (net.nodes()[host].kind == InstitutionKind::University)
        ++r.transfer.university_to_company;
      else
        ++r.transfer.company_to_university;
    }
  }
  r.active_pairs = net.arc_count();
  for (auto& s : r.by_type) {
    s.mean_hits = s.active_pairs > 0 ? static_cast<double>(s.total_hits) / static_cast<double>(s.active_pairs) : 0.0;
    s.share_percent = r.active_pairs > 0 ? 100.0 * static_cast<double>(s.active_pairs) / static_cast<double>(r.active_pairs) : 0.0;
  }
  const auto transfers = r.of(EdgeType::TRANSFER).active_pairs;
  if (transfers > 0) {
    r.transfer.share_university_to_company = 100.0 * static_cast<double>(r.transfer.university_to_company) / static_cast<double>(transfers);
    r.transfer.share_company_to_university = 100.0 * static_cast<double>(r.transfer.company_to_university) / static_cast<double>(transfers);
  }
  return r;
}

std::vector<Combination> top_combinations(const MentionNetwork& net, std::size_t k) {
  if (k < 1) throw ValidationError("top_combinations needs k >= 1");
  std::vector<Combination> all;
  all.reserve(net.arc_count());
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    const auto [h, t] = net.endpoints(a);
    all.push_back({net.nodes()[h].label, net.nodes()[t].label, net.arcs()[a].hits, net.arcs()[a].edge_type});
  }
  std::sort(all.begin(), all.end(), [](const Combination& a, const Combination& b) {
    if (a.hits != b.hits) return a.hits > b.hits;
    return std::tie(a.host, a.target) < std::tie(b.host, b.target);
  });
  if (all.size() > k) all.resize(k);
  return all;
}

std::vector<InteractionRank> interaction_ranking(const MentionNetwork& net) {
  const auto& nodes = net.nodes();
  const bool has_uni = std::any_of(nodes.begin(), nodes.end(), [](const auto& n) { return n.kind == InstitutionKind::University; });
  const bool has_com = std::any_of(nodes.begin(), nodes.end(), [](const auto& n) { return n.kind == InstitutionKind::Company; });
  if (!has_uni || !has_com) throw ValidationError("interaction ranking needs both universities and companies");

  std::vector<std::set<std::size_t>> partners(nodes.size());
  std::vector<std::uint64_t> hits(nodes.size(), 0);
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    if (net.arcs()[a].edge_type != EdgeType::TRANSFER) continue;
    auto [h, t] = net.endpoints(a);
    const auto uni = nodes[h].kind == InstitutionKind::University ? h : t;
    const auto com = uni == h ? t : h;
    partners[uni].insert(com);
    hits[uni] += net.arcs()[a].hits;
  }

  std::vector<InteractionRank> out;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (nodes[v].kind != InstitutionKind::University) continue;
    out.push_back({nodes[v].id, nodes[v].label, partners[v].size(), hits[v]});
  }
  std::sort(out.begin(), out.end(), [](const InteractionRank& a, const InteractionRank& b) {
    if (a.interaction_degree != b.interaction_degree) return a.interaction_degree > b.interaction_degree;
    if (a.interaction_hits != b.interaction_hits) return a.interaction_hits > b.interaction_hits;
    return a.university_id < b.university_id;
  });
  return out;
}

}  // namespace webimpact
