#include "webimpact/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>

namespace webimpact {

namespace {

Eigen::Map<const Vector> as_vector(std::span<const double> values) {
  return {values.data(), static_cast<Eigen::Index>(values.size())};
}

// Rows with no NaN in any of the selected columns.
Matrix complete_rows(const Matrix& m) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    if (!m.row(r).array().isNaN().any()) keep.push_back(r);
  Matrix out(static_cast<Eigen::Index>(keep.size()), m.cols());
  for (std::size_t i = 0; i < keep.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(keep[i]);
  return out;
}

}  // namespace

Descriptives describe(std::span<const double> values) {
  if (values.empty()) throw ValidationError("describe: empty input");
  const auto x = as_vector(values);
  const double n = static_cast<double>(values.size());

  Descriptives d;
  d.n = values.size();
  d.mean = x.mean();
  d.min = x.minCoeff();
  d.max = x.maxCoeff();

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  d.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  if (d.n < 2) return d;
  const Vector centered = x.array() - d.mean;
  d.std_dev = std::sqrt(centered.squaredNorm() / (n - 1.0));
  if (d.std_dev == 0.0) return d;

  const Eigen::ArrayXd z = centered.array() / d.std_dev;
  if (d.n >= 3) d.skewness = n / ((n - 1.0) * (n - 2.0)) * z.cube().sum();
  if (d.n >= 4) {
    d.kurtosis = n * (n + 1.0) / ((n - 1.0) * (n - 2.0) * (n - 3.0)) * z.square().square().sum() -
                 3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
  }
  return d;
}

std::vector<double> log_transform(std::span<const double> values) {
  const Vector out = log_transform(as_vector(values));
  return {out.data(), out.data() + out.size()};
}

double correlation_p_value(double rho, std::size_t n) {
  if (n < 3) throw ValidationError("correlation significance needs n >= 3");
  const double r = std::clamp(rho, -1.0, 1.0);
  if (std::abs(r) == 1.0) return 0.0;
  const double dof = static_cast<double>(n - 2);
  const double t = r * std::sqrt(dof / ((1.0 - r) * (1.0 + r)));
  const boost::math::students_t_distribution<double> dist(dof);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

double critical_rho(std::size_t n, double alpha) {
  if (n < 3) throw ValidationError("critical_rho needs n >= 3");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  const double dof = static_cast<double>(n - 2);
  const boost::math::students_t_distribution<double> dist(dof);
  const double t = boost::math::quantile(boost::math::complement(dist, alpha / 2.0));
  return t / std::sqrt(dof + t * t);
}

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("spearman: inputs differ in length");
  if (x.size() < 3) throw ValidationError("spearman: needs at least 3 pairs");
  const Vector rx = average_ranks(as_vector(x));
  const Vector ry = average_ranks(as_vector(y));
  SpearmanResult result;
  result.n = x.size();
  result.rho = pearson(rx, ry);
  result.p_value = correlation_p_value(result.rho, result.n);
  return result;
}

Eigen::Index DataTable::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ValidationError("variable '" + std::string(name) + "' is not in the table");
  return static_cast<Eigen::Index>(it - columns.begin());
}

CorrelationMatrix correlation_matrix(const DataTable& table, std::span<const std::string> variables,
                                     std::array<double, 2> alpha_levels) {
  const auto p = static_cast<Eigen::Index>(variables.size());
  std::vector<Eigen::Index> cols;
  for (const auto& v : variables) {
    const Eigen::Index c = table.column(v);
    if (table.values.col(c).array().isNaN().all())
      throw ValidationError("variable '" + v + "' has no observations");
    cols.push_back(c);
  }

  CorrelationMatrix cm;
  cm.variables.assign(variables.begin(), variables.end());
  cm.alpha_levels = alpha_levels;
  cm.rho = Matrix::Identity(p, p);
  cm.p_value = Matrix::Zero(p, p);
  cm.pairs = Eigen::MatrixXi::Zero(p, p);
  cm.significant_01 = BoolMatrix::Constant(p, p, false);
  cm.significant_05 = BoolMatrix::Constant(p, p, false);

  for (Eigen::Index i = 0; i < p; ++i) {
    cm.pairs(i, i) = static_cast<int>((!table.values.col(cols[i]).array().isNaN()).count());
    for (Eigen::Index j = i + 1; j < p; ++j) {
      std::vector<double> xs, ys;
      for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
        const double a = table.values(r, cols[i]);
        const double b = table.values(r, cols[j]);
        if (std::isnan(a) || std::isnan(b)) continue;
        xs.push_back(a);
        ys.push_back(b);
      }
      if (xs.size() < 3)
        throw ValidationError("fewer than 3 complete pairs for '" + cm.variables[i] + "' x '" + cm.variables[j] + "'");
      SpearmanResult s;
      try {
        s = spearman(xs, ys);
      } catch (const ComputationError& e) {
        throw ComputationError(std::string(e.what()) + " ('" + cm.variables[i] + "' x '" + cm.variables[j] + "')");
      }
      cm.rho(i, j) = cm.rho(j, i) = s.rho;
      cm.p_value(i, j) = cm.p_value(j, i) = s.p_value;
      cm.pairs(i, j) = cm.pairs(j, i) = static_cast<int>(s.n);
      cm.significant_01(i, j) = cm.significant_01(j, i) = s.p_value < alpha_levels[0];
      cm.significant_05(i, j) = cm.significant_05(j, i) = s.p_value < alpha_levels[1];
    }
  }
  return cm;
}

namespace {

Vector row_norms(const Matrix& m) { return m.rowwise().norm(); }

Matrix normalize_rows(const Matrix& m, const Vector& norms) {
  Matrix out = m;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    if (norms(r) > 0.0) out.row(r) /= norms(r);
  return out;
}

double raw_criterion(const Matrix& a) {
  const double p = static_cast<double>(a.rows());
  const Eigen::ArrayXXd sq = a.array().square();
  double v = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double m2 = sq.col(j).sum() / p;
    v += sq.col(j).square().sum() / p - m2 * m2;
  }
  return v;
}

}  // namespace

double varimax_criterion(const Matrix& loadings) {
  if (loadings.rows() == 0) return 0.0;
  return raw_criterion(normalize_rows(loadings, row_norms(loadings)));
}

VarimaxResult varimax(const Matrix& loadings, int max_sweeps, double tolerance) {
  const Eigen::Index p = loadings.rows();
  const Eigen::Index k = loadings.cols();
  VarimaxResult out;
  out.loadings = loadings;
  out.rotation = Matrix::Identity(k, k);
  if (k < 2 || p == 0) {
    out.criterion_before = out.criterion_after = varimax_criterion(loadings);
    return out;
  }

  const Vector h = row_norms(loadings);
  Matrix a = normalize_rows(loadings, h);
  Matrix t = Matrix::Identity(k, k);
  const double pd = static_cast<double>(p);
  double current = raw_criterion(a);
  out.criterion_before = current;

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (Eigen::Index j = 0; j < k - 1; ++j) {
      for (Eigen::Index l = j + 1; l < k; ++l) {
        const Eigen::ArrayXd x = a.col(j).array();
        const Eigen::ArrayXd y = a.col(l).array();
        const Eigen::ArrayXd u = x.square() - y.square();
        const Eigen::ArrayXd v = 2.0 * x * y;
        const double sa = u.sum();
        const double sb = v.sum();
        const double sc = (u.square() - v.square()).sum();
        const double sd = 2.0 * (u * v).sum();
        const double num = sd - 2.0 * sa * sb / pd;
        const double den = sc - (sa * sa - sb * sb) / pd;
        const double phi = 0.25 * std::atan2(num, den);
        if (std::abs(phi) < 1e-15) continue;
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        const Vector aj = a.col(j);
        a.col(j) = c * aj + s * a.col(l);
        a.col(l) = -s * aj + c * a.col(l);
        const Vector tj = t.col(j);
        t.col(j) = c * tj + s * t.col(l);
        t.col(l) = -s * tj + c * t.col(l);
      }
    }
    out.sweeps = sweep;
    const double next = raw_criterion(a);
    const double gain = next - current;
    current = std::max(current, next);
    if (gain < tolerance) break;
  }

  // Orient each rotated component so its loadings sum to a positive value.
  Matrix rotated = loadings * t;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (rotated.col(j).sum() < 0.0) {
      rotated.col(j) *= -1.0;
      t.col(j) *= -1.0;
    }
  }
  out.loadings = rotated;
  out.rotation = t;
  out.criterion_after = varimax_criterion(rotated);
  return out;
}

PcaResult pca(const Matrix& observations, std::vector<std::string> variables, int n_components) {
  const Matrix x = complete_rows(observations);
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (static_cast<Eigen::Index>(variables.size()) != p) throw ValidationError("pca: variable names do not match columns");
  if (p == 0) throw ValidationError("pca: no variables");
  if (n <= p) throw ValidationError("pca: needs more complete observations than variables");
  if (n_components < 1 || n_components > p) throw ValidationError("pca: n_components out of range");

  const Eigen::RowVectorXd mean = x.colwise().mean();
  Matrix z = x.rowwise() - mean;
  for (Eigen::Index c = 0; c < p; ++c) {
    const double sd = std::sqrt(z.col(c).squaredNorm() / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw ComputationError("degenerate variables: '" + variables[c] + "' is constant");
    z.col(c) /= sd;
  }
  const Matrix corr = (z.transpose() * z) / static_cast<double>(n - 1);

  const Eigen::SelfAdjointEigenSolver<Matrix> solver(corr);
  if (solver.info() != Eigen::Success) throw ComputationError("pca: eigen decomposition failed");
  const Vector evals = solver.eigenvalues().reverse();
  Matrix evecs = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::Index arg = 0;
    evecs.col(j).cwiseAbs().maxCoeff(&arg);
    if (evecs(arg, j) < 0.0) evecs.col(j) *= -1.0;
  }

  const Eigen::Index k = n_components;
  PcaResult r;
  r.variables = std::move(variables);
  r.n_observations = static_cast<std::size_t>(n);
  r.eigenvalues = evals;
  r.explained_variance = evals.head(k).cwiseMax(0.0);
  r.explained_ratio = r.explained_variance / static_cast<double>(p);
  r.loadings = evecs.leftCols(k) * r.explained_variance.cwiseSqrt().asDiagonal();
  r.scores = z * evecs.leftCols(k);

  const VarimaxResult vr = varimax(r.loadings);
  r.rotated_loadings = vr.loadings;
  r.rotation = vr.rotation;
  r.rotated_variance = r.rotated_loadings.array().square().colwise().sum().transpose();
  r.rotated_scores = r.scores * r.rotation;
  return r;
}

PcaResult pca(const DataTable& table, std::span<const std::string> variables, int n_components) {
  Matrix sub(table.values.rows(), static_cast<Eigen::Index>(variables.size()));
  for (std::size_t i = 0; i < variables.size(); ++i)
    sub.col(static_cast<Eigen::Index>(i)) = table.values.col(table.column(variables[i]));
  return pca(sub, std::vector<std::string>(variables.begin(), variables.end()), n_components);
}

}  // namespace webimpact
