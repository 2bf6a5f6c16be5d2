#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "webimpact/ingest.hpp"
#include "webimpact/model.hpp"
#include "webimpact/network.hpp"
#include "webimpact/stats.hpp"

namespace webimpact {

// Tabular outputs of the pipeline. All are CSV with a header row and numbers
// in the locale-independent shortest round-trip form.

// variable,n,mean,median,std_dev,min,max,skewness,kurtosis
void write_descriptives(std::ostream& out, std::span<const std::pair<std::string, Descriptives>> rows);

// Square matrix with a leading variable column. Cells carry "**" when
// significant at the first alpha level and "*" at the second.
void write_correlation_rho(std::ostream& out, const CorrelationMatrix& m);
void write_correlation_p(std::ostream& out, const CorrelationMatrix& m);

// variable,PC1..PCk,RC1..RCk,communality followed by eigenvalue, explained
// and rotated-variance rows.
void write_pca_loadings(std::ostream& out, const PcaResult& pca);
// component,eigenvalue,explained_ratio for every eigenvalue.
void write_pca_eigenvalues(std::ostream& out, const PcaResult& pca);

// node_id,label,kind,sector,degree,in_degree,out_degree,closeness,
// harmonic_closeness,betweenness,eigenvector,clustering
void write_node_metrics(std::ostream& out, const MentionNetwork& net, std::span<const NodeMetrics> metrics);

// measure,value rows in the layout of the network summary table.
void write_network_summary(std::ostream& out, const NetworkSummary& summary);

// rank,host,target,hits,edge_type
void write_top_combinations(std::ostream& out, std::span<const Combination> rows);

// edge_type,active_pairs,share_percent,total_hits,mean_hits, then the two
// transfer directions.
void write_taxonomy(std::ostream& out, const TaxonomyReport& report);

// rank,university_id,label,interaction_degree,interaction_hits
void write_interaction_ranking(std::ostream& out, std::span<const InteractionRank> rows);

// sample,institution_id,gum,lum
using SampleAnomalies = std::pair<std::string, std::vector<RegionalAnomaly>>;
void write_anomalies(std::ostream& out, std::span<const SampleAnomalies> samples);

// sample_a,sample_b,variable,n,rho,p_value; n = 0 marks insufficient overlap.
struct StabilityRow {
  std::string sample_a;
  std::string sample_b;
  std::string variable;
  SpearmanResult result;
};
void write_stability(std::ostream& out, std::span<const StabilityRow> rows);

// institution_id,reason
void write_exclusions(std::ostream& out, std::span<const Exclusion> rows);

}  // namespace webimpact
