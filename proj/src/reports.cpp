#include "webimpact/reports.hpp"

#include <ostream>

#include "webimpact/csv.hpp"

namespace webimpact {

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

void write_row(std::ostream& out, const std::vector<std::string>& fields) { write_csv_row(out, std::span(fields)); }

}  // namespace

void write_descriptives(std::ostream& out, std::span<const std::pair<std::string, Descriptives>> rows) {
  write_csv_row(out, {"variable", "n", "mean", "median", "std_dev", "min", "max", "skewness", "kurtosis"});
  for (const auto& [name, d] : rows)
    write_csv_row(out, {name, std::to_string(d.n), format_number(d.mean), format_number(d.median),
                        format_number(d.std_dev), format_number(d.min), format_number(d.max), opt_number(d.skewness),
                        opt_number(d.kurtosis)});
}

void write_correlation_rho(std::ostream& out, const CorrelationMatrix& m) {
  std::vector<std::string> header{"variable"};
  header.insert(header.end(), m.variables.begin(), m.variables.end());
  write_row(out, header);
  for (Eigen::Index i = 0; i < m.rho.rows(); ++i) {
    std::vector<std::string> row{m.variables[static_cast<std::size_t>(i)]};
    for (Eigen::Index j = 0; j < m.rho.cols(); ++j) {
      std::string cell = format_number(m.rho(i, j));
      if (m.significant_01(i, j))
        cell += "**";
      else if (m.significant_05(i, j))
        cell += "*";
      row.push_back(std::move(cell));
    }
    write_row(out, row);
  }
}

void write_correlation_p(std::ostream& out, const CorrelationMatrix& m) {
  std::vector<std::string> header{"variable"};
  header.insert(header.end(), m.variables.begin(), m.variables.end());
  write_row(out, header);
  for (Eigen::Index i = 0; i < m.p_value.rows(); ++i) {
    std::vector<std::string> row{m.variables[static_cast<std::size_t>(i)]};
    for (Eigen::Index j = 0; j < m.p_value.cols(); ++j) row.push_back(format_number(m.p_value(i, j)));
    write_row(out, row);
  }
}

void write_pca_loadings(std::ostream& out, const PcaResult& pca) {
  const Eigen::Index k = pca.loadings.cols();
  std::vector<std::string> header{"variable"};
  for (Eigen::Index c = 0; c < k; ++c) header.push_back("PC" + std::to_string(c + 1));
  for (Eigen::Index c = 0; c < k; ++c) header.push_back("RC" + std::to_string(c + 1));
  header.push_back("communality");
  write_row(out, header);

  for (Eigen::Index v = 0; v < pca.loadings.rows(); ++v) {
    std::vector<std::string> row{pca.variables[static_cast<std::size_t>(v)]};
    for (Eigen::Index c = 0; c < k; ++c) row.push_back(format_number(pca.loadings(v, c)));
    for (Eigen::Index c = 0; c < k; ++c) row.push_back(format_number(pca.rotated_loadings(v, c)));
    row.push_back(format_number(pca.loadings.row(v).squaredNorm()));
    write_row(out, row);
  }

  auto summary_row = [&](const std::string& name, const Vector& unrotated, const Vector* rotated) {
    std::vector<std::string> row{name};
    for (Eigen::Index c = 0; c < k; ++c) row.push_back(format_number(unrotated(c)));
    for (Eigen::Index c = 0; c < k; ++c) row.push_back(rotated ? format_number((*rotated)(c)) : "");
    row.emplace_back();
    write_row(out, row);
  };
  summary_row("eigenvalue", pca.explained_variance, &pca.rotated_variance);
  const Vector rotated_ratio = pca.rotated_variance / static_cast<double>(pca.variables.size());
  summary_row("explained_ratio", pca.explained_ratio, &rotated_ratio);
}

void write_pca_eigenvalues(std::ostream& out, const PcaResult& pca) {
  write_csv_row(out, {"component", "eigenvalue", "explained_ratio"});
  const double p = static_cast<double>(pca.variables.size());
  for (Eigen::Index c = 0; c < pca.eigenvalues.size(); ++c)
    write_csv_row(out, {std::to_string(c + 1), format_number(pca.eigenvalues(c)), format_number(pca.eigenvalues(c) / p)});
}

void write_node_metrics(std::ostream& out, const MentionNetwork& net, std::span<const NodeMetrics> metrics) {
  write_csv_row(out, {"node_id", "label", "kind", "sector", "degree", "in_degree", "out_degree", "closeness",
                      "harmonic_closeness", "betweenness", "eigenvector", "clustering"});
  for (std::size_t v = 0; v < metrics.size(); ++v) {
    const auto& m = metrics[v];
    const auto& node = net.nodes()[v];
    write_csv_row(out, {m.node_id, node.label, to_string(node.kind), node.sector ? sector_slug(*node.sector) : "",
                        std::to_string(m.degree), std::to_string(m.in_degree), std::to_string(m.out_degree),
                        format_number(m.closeness), format_number(m.harmonic_closeness), format_number(m.betweenness),
                        format_number(m.eigenvector), format_number(m.clustering)});
  }
}

void write_network_summary(std::ostream& out, const NetworkSummary& s) {
  write_csv_row(out, {"measure", "value"});
  write_csv_row(out, {"mode", to_string(s.mode)});
  write_csv_row(out, {"nodes", std::to_string(s.n_nodes)});
  write_csv_row(out, {"arcs", std::to_string(s.n_arcs)});
  write_csv_row(out, {"edges", std::to_string(s.n_edges)});
  write_csv_row(out, {"isolated_nodes", std::to_string(s.n_isolated)});
  write_csv_row(out, {"largest_component", std::to_string(s.largest_component)});
  write_csv_row(out, {"average_degree", format_number(s.avg_degree)});
  write_csv_row(out, {"network_diameter", std::to_string(s.diameter)});
  write_csv_row(out, {"graph_density", format_number(s.density)});
  write_csv_row(out, {"average_path_length", format_number(s.avg_path_length)});
  write_csv_row(out, {"average_clustering_coefficient", format_number(s.avg_clustering)});
}

void write_top_combinations(std::ostream& out, std::span<const Combination> rows) {
  write_csv_row(out, {"rank", "host", "target", "hits", "edge_type"});
  for (std::size_t i = 0; i < rows.size(); ++i)
    write_csv_row(out, {std::to_string(i + 1), rows[i].host, rows[i].target, std::to_string(rows[i].hits),
                        to_string(rows[i].edge_type)});
}

void write_taxonomy(std::ostream& out, const TaxonomyReport& r) {
  write_csv_row(out, {"edge_type", "active_pairs", "share_percent", "total_hits", "mean_hits"});
  for (const auto& s : r.by_type)
    write_csv_row(out, {to_string(s.edge_type), std::to_string(s.active_pairs), format_number(s.share_percent),
                        std::to_string(s.total_hits), format_number(s.mean_hits)});
  write_csv_row(out, {"all", std::to_string(r.active_pairs), r.active_pairs ? "100" : "0", "", ""});
  write_csv_row(out, {"TRANSFER university->company", std::to_string(r.transfer.university_to_company),
                      format_number(r.transfer.share_university_to_company), "", ""});
  write_csv_row(out, {"TRANSFER company->university", std::to_string(r.transfer.company_to_university),
                      format_number(r.transfer.share_company_to_university), "", ""});
}

void write_interaction_ranking(std::ostream& out, std::span<const InteractionRank> rows) {
  write_csv_row(out, {"rank", "university_id", "label", "interaction_degree", "interaction_hits"});
  for (std::size_t i = 0; i < rows.size(); ++i)
    write_csv_row(out, {std::to_string(i + 1), rows[i].university_id, rows[i].label,
                        std::to_string(rows[i].interaction_degree), std::to_string(rows[i].interaction_hits)});
}

void write_anomalies(std::ostream& out, std::span<const SampleAnomalies> samples) {
  write_csv_row(out, {"sample", "institution_id", "gum", "lum"});
  for (const auto& [sample, rows] : samples)
    for (const auto& a : rows)
      write_csv_row(out, {sample, a.institution_id, std::to_string(a.gum), std::to_string(a.lum)});
}

void write_stability(std::ostream& out, std::span<const StabilityRow> rows) {
  write_csv_row(out, {"sample_a", "sample_b", "variable", "n", "rho", "p_value"});
  for (const auto& r : rows) {
    const bool have = r.result.n > 0;
    write_csv_row(out, {r.sample_a, r.sample_b, r.variable, std::to_string(r.result.n),
                        have ? format_number(r.result.rho) : "", have ? format_number(r.result.p_value) : ""});
  }
}

void write_exclusions(std::ostream& out, std::span<const Exclusion> rows) {
  write_csv_row(out, {"institution_id", "reason"});
  for (const auto& e : rows) write_csv_row(out, {e.institution_id, e.reason});
}

}  // namespace webimpact
