#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "webimpact/error.hpp"

namespace webimpact {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct Descriptives {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double std_dev = 0.0;  // sample (n - 1); 0 for a single value
  double min = 0.0;
  double max = 0.0;
  std::optional<double> skewness;  // bias-corrected G1, n >= 3 and non-constant
  std::optional<double> kurtosis;  // bias-corrected excess G2, n >= 4 and non-constant
};

Descriptives describe(std::span<const double> values);

// x -> log10(1 + x). Throws ValidationError on negative or NaN input.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime> log_transform(
    const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  if (!(values.array() >= Scalar(0)).all()) throw ValidationError("log_transform: negative or NaN value");
  return (values.array().log1p() / std::log(Scalar(10))).matrix();
}

std::vector<double> log_transform(std::span<const double> values);

// 1-based ranks with ties sharing the mean of the positions they occupy.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> average_ranks(const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ranks(n);
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i;
    while (j + 1 < n && values(order[j + 1]) == values(order[i])) ++j;
    const Scalar shared = Scalar(i + j + 2) / Scalar(2);
    for (Eigen::Index k = i; k <= j; ++k) ranks(order[k]) = shared;
    i = j + 1;
  }
  return ranks;
}

// Product-moment correlation. Throws ComputationError when either side is
// constant.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar pearson(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  const auto dx = (x.array() - x.mean()).matrix();
  const auto dy = (y.array() - y.mean()).matrix();
  const Scalar sxx = dx.squaredNorm();
  const Scalar syy = dy.squaredNorm();
  if (sxx == Scalar(0) || syy == Scalar(0)) throw ComputationError("undefined correlation: constant variable");
  const Scalar r = dx.dot(dy) / std::sqrt(sxx * syy);
  return std::clamp(r, Scalar(-1), Scalar(1));
}

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;  // two-tailed
  std::size_t n = 0;
};

// Two-tailed p-value of a correlation coefficient through the Student t
// approximation with n - 2 degrees of freedom; |rho| = 1 gives 0.
double correlation_p_value(double rho, std::size_t n);

// Smallest |rho| that is significant at two-tailed level alpha for n pairs.
double critical_rho(std::size_t n, double alpha);

// Rank correlation with average ranks for ties. Requires equal lengths >= 3.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

// Observations in rows, variables in columns; NaN marks a missing value.
struct DataTable {
  std::vector<std::string> columns;
  Matrix values;

  Eigen::Index column(std::string_view name) const;
};

struct CorrelationMatrix {
  std::vector<std::string> variables;
  Matrix rho;
  Matrix p_value;
  Eigen::MatrixXi pairs;  // complete observations behind each cell
  std::array<double, 2> alpha_levels{0.01, 0.05};
  BoolMatrix significant_01;  // p < alpha_levels[0], off-diagonal
  BoolMatrix significant_05;  // p < alpha_levels[1], off-diagonal
};

// Pairwise-complete Spearman matrix. Throws ValidationError naming a
// variable that is missing from the table or entirely empty, or a cell with
// fewer than three complete pairs.
CorrelationMatrix correlation_matrix(const DataTable& table, std::span<const std::string> variables,
                                     std::array<double, 2> alpha_levels = {0.01, 0.05});

// Raw varimax criterion of row-normalized loadings: sum over components of
// the variance of squared loadings.
double varimax_criterion(const Matrix& loadings);

struct VarimaxResult {
  Matrix loadings;  // rotated
  Matrix rotation;  // orthogonal, loadings = input * rotation
  double criterion_before = 0.0;
  double criterion_after = 0.0;
  int sweeps = 0;
};

// Kaiser-normalized varimax by successive planar rotations. Stops once a
// sweep gains less than `tolerance` or after `max_sweeps`. A single component
// is returned unchanged.
VarimaxResult varimax(const Matrix& loadings, int max_sweeps = 100, double tolerance = 1e-10);

struct PcaResult {
  std::vector<std::string> variables;
  std::size_t n_observations = 0;
  Vector eigenvalues;          // all, descending
  Matrix loadings;             // variables x components, eigvec * sqrt(eigval)
  Matrix rotated_loadings;     // after varimax
  Matrix rotation;
  Vector explained_variance;   // retained eigenvalues
  Vector explained_ratio;      // explained_variance / number of variables
  Vector rotated_variance;     // column sums of squared rotated loadings
  Matrix scores;               // observations x components, centered
  Matrix rotated_scores;
};

// Correlation-based PCA on complete rows followed by varimax. Throws
// ValidationError when there are not more observations than variables and
// ComputationError "degenerate variables" when a variable is constant.
PcaResult pca(const Matrix& observations, std::vector<std::string> variables, int n_components = 2);
PcaResult pca(const DataTable& table, std::span<const std::string> variables, int n_components = 2);

}  // namespace webimpact
