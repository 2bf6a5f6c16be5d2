#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "webimpact/stats.hpp"

using namespace webimpact;

namespace {

struct Moments {
  double mean, sd, skew, kurt;
};

Moments direct_moments(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double sd = std::sqrt(m2 / (n - 1));
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double g1 = m3 / std::pow(m2, 1.5);
  const double g2 = m4 / (m2 * m2) - 3.0;
  return {mean, sd, std::sqrt(n * (n - 1)) / (n - 2) * g1, (n - 1) / ((n - 2) * (n - 3)) * ((n + 1) * g2 + 6.0)};
}

// Varimax criterion of Kaiser-normalized loadings, written out directly.
double criterion(const Matrix& l) {
  const Eigen::Index p = l.rows(), k = l.cols();
  double total = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    std::vector<double> sq;
    for (Eigen::Index i = 0; i < p; ++i) {
      const double h = l.row(i).norm();
      const double v = h > 0 ? l(i, j) / h : 0.0;
      sq.push_back(v * v);
    }
    double mean = 0.0;
    for (double s : sq) mean += s;
    mean /= static_cast<double>(p);
    double var = 0.0;
    for (double s : sq) var += (s - mean) * (s - mean);
    total += var / static_cast<double>(p);
  }
  return total;
}

Matrix random_loadings(std::mt19937_64& rng, int p) {
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  Matrix l(p, 2);
  for (int i = 0; i < p; ++i) {
    l(i, 0) = u(rng);
    l(i, 1) = u(rng) * 0.6;
  }
  return l;
}

oracle::RealMatrix correlation_of(const Matrix& data) {
  const Eigen::Index n = data.rows(), p = data.cols();
  oracle::RealMatrix r(static_cast<std::size_t>(p), std::vector<double>(static_cast<std::size_t>(p)));
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = 0; b < p; ++b) {
      std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = data(i, a);
        y[static_cast<std::size_t>(i)] = data(i, b);
      }
      r[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = oracle::pearson(x, y);
    }
  return r;
}

}  // namespace

TEST_CASE("describe") {
  const std::vector<double> a{1, 2, 3};
  const auto d = describe(a);
  CHECK(d.n == 3);
  CHECK(d.mean == 2.0);
  CHECK(d.median == 2.0);
  CHECK(d.std_dev == doctest::Approx(1.0));
  CHECK(d.skewness.has_value());
  CHECK_FALSE(d.kurtosis.has_value());

  const std::vector<double> c{4, 4, 4, 4, 4};
  const auto dc = describe(c);
  CHECK(dc.std_dev == 0.0);
  CHECK_FALSE(dc.skewness.has_value());
  CHECK_FALSE(dc.kurtosis.has_value());

  const std::vector<double> one{7};
  CHECK(describe(one).std_dev == 0.0);
  CHECK_THROWS_AS(describe(std::vector<double>{}), ValidationError);

  const std::vector<double> even{4, 1, 3, 2};
  CHECK(describe(even).median == 2.5);
}

TEST_CASE("describe matches direct moment formulas") {
  const std::vector<double> x{600000, 2150000, 43000, 72000, 975000, 12000, 310000, 5100, 88000, 1450000};
  const auto d = describe(x);
  const auto m = direct_moments(x);
  CHECK(std::abs(d.mean - m.mean) <= 1e-12 * std::abs(m.mean));
  CHECK(std::abs(d.std_dev - m.sd) <= 1e-12 * m.sd);
  CHECK(std::abs(*d.skewness - m.skew) <= 1e-12);
  CHECK(std::abs(*d.kurtosis - m.kurt) <= 1e-12);
}

TEST_CASE("property: describe location and spread") {
  std::mt19937_64 rng(31);
  std::lognormal_distribution<double> dist(3.0, 1.5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(2 + rng() % 50);
    for (auto& v : x) v = dist(rng);
    const auto d = describe(x);
    CHECK(d.mean >= d.min);
    CHECK(d.mean <= d.max);
    CHECK(d.median >= d.min);
    CHECK(d.median <= d.max);
    CHECK(d.std_dev >= 0.0);
    std::vector<double> shifted = x;
    for (auto& v : shifted) v += 1000.0;
    CHECK(describe(shifted).std_dev == doctest::Approx(d.std_dev).epsilon(1e-9));
  }
}

TEST_CASE("log_transform") {
  const std::vector<double> x{0, 99, 9};
  const auto y = log_transform(x);
  CHECK(y[0] == 0.0);
  CHECK(y[1] == doctest::Approx(2.0));
  CHECK(y[2] == doctest::Approx(1.0));
  const std::vector<double> zeros(20, 0.0);
  for (double v : log_transform(zeros)) CHECK(v == 0.0);
  CHECK_THROWS_AS(log_transform(std::vector<double>{1, -1}), ValidationError);
  Vector v(2);
  v << 0, 999;
  CHECK(log_transform(v)(1) == doctest::Approx(3.0));
}

TEST_CASE("spearman basics") {
  std::vector<double> x, sq, rev;
  for (int i = 1; i <= 12; ++i) {
    x.push_back(i);
    sq.push_back(i * i);
    rev.push_back(-i);
  }
  CHECK(spearman(x, sq).rho == doctest::Approx(1.0));
  CHECK(spearman(x, sq).p_value == 0.0);
  CHECK(spearman(x, rev).rho == doctest::Approx(-1.0));
  CHECK_THROWS_WITH_AS(spearman(x, std::vector<double>(12, 3.0)), doctest::Contains("undefined correlation"),
                       ComputationError);
  CHECK_THROWS_AS(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}), ValidationError);
  CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 2, 3}), ValidationError);
}

TEST_CASE("spearman with ties matches the oracle") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 60;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng() % 10);
      y[i] = static_cast<double>(rng() % 10) + 0.1 * x[i];
    }
    if (*std::min_element(x.begin(), x.end()) == *std::max_element(x.begin(), x.end())) continue;
    if (*std::min_element(y.begin(), y.end()) == *std::max_element(y.begin(), y.end())) continue;
    const auto r = spearman(x, y);
    const double rho = oracle::spearman(x, y);
    CHECK(std::abs(r.rho - rho) <= 1e-12);
    CHECK(std::abs(r.p_value - oracle::correlation_p(rho, n)) <= 1e-6);
  }
}

TEST_CASE("property: spearman is invariant under monotone maps") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(20), y(20);
    for (std::size_t i = 0; i < 20; ++i) {
      x[i] = g(rng);
      y[i] = x[i] + g(rng);
    }
    const double a = 0.5 + static_cast<double>(rng() % 100) / 10.0;
    std::vector<double> fx(20), fy(20);
    for (std::size_t i = 0; i < 20; ++i) {
      fx[i] = std::exp(a * x[i]);
      fy[i] = y[i] * y[i] * y[i] + a;
    }
    CHECK(spearman(fx, fy).rho == doctest::Approx(spearman(x, y).rho).epsilon(1e-12));
  }
}

TEST_CASE("significance threshold for n = 100") {
  const double crit = critical_rho(100, 0.01);
  CHECK(crit == doctest::Approx(0.2565).epsilon(0.0005 / 0.2565));
  CHECK(std::abs(crit - oracle::critical_rho(100, 0.01)) <= 1e-6);
  CHECK(correlation_p_value(0.30, 100) < 0.01);
  CHECK(correlation_p_value(0.20, 100) > 0.01);
  CHECK(correlation_p_value(1.0, 10) == 0.0);
  CHECK(correlation_p_value(0.0, 10) == doctest::Approx(1.0));
}

TEST_CASE("correlation matrix") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> g;
  DataTable t;
  t.columns = {"a", "b", "c", "d"};
  t.values.resize(30, 4);
  for (int i = 0; i < 30; ++i) {
    t.values(i, 0) = g(rng);
    t.values(i, 1) = t.values(i, 0);
    t.values(i, 2) = g(rng);
    t.values(i, 3) = t.values(i, 2) + 0.3 * g(rng);
  }
  t.values(4, 3) = std::nan("");
  const std::vector<std::string> vars{"a", "b", "c", "d"};
  const auto m = correlation_matrix(t, vars);
  CHECK(m.rho(0, 1) == doctest::Approx(1.0));
  CHECK(m.significant_01(0, 1));
  CHECK(m.pairs(2, 3) == 29);
  CHECK(m.pairs(0, 1) == 30);
  for (int i = 0; i < 4; ++i) {
    CHECK(m.rho(i, i) == 1.0);
    CHECK_FALSE(m.significant_01(i, i));
    for (int j = 0; j < 4; ++j) {
      CHECK(m.rho(i, j) == m.rho(j, i));
      CHECK(std::abs(m.rho(i, j)) <= 1.0);
      CHECK(m.significant_01(i, j) == m.significant_01(j, i));
      CHECK(m.significant_05(i, j) == m.significant_05(j, i));
      if (m.significant_01(i, j)) CHECK(m.significant_05(i, j));
    }
  }

  SUBCASE("order equivariance") {
    const std::vector<std::string> perm{"d", "b", "a", "c"};
    const std::vector<int> idx{3, 1, 0, 2};
    const auto pm = correlation_matrix(t, perm);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(pm.rho(i, j) == m.rho(idx[i], idx[j]));
  }

  SUBCASE("missing or empty variables are named") {
    const std::vector<std::string> bad{"a", "zz"};
    CHECK_THROWS_WITH_AS(correlation_matrix(t, bad), doctest::Contains("zz"), ValidationError);
    DataTable e = t;
    e.values.col(2).setConstant(std::nan(""));
    CHECK_THROWS_WITH_AS(correlation_matrix(e, vars), doctest::Contains("c"), ValidationError);
  }
}

TEST_CASE("independent noise is rarely significant") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u;
  int cells = 0, flagged = 0;
  for (int trial = 0; trial < 20; ++trial) {
    DataTable t;
    t.columns = {"a", "b", "c", "d", "e"};
    t.values.resize(100, 5);
    for (int i = 0; i < 100; ++i)
      for (int j = 0; j < 5; ++j) t.values(i, j) = u(rng);
    const auto m = correlation_matrix(t, t.columns);
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) {
        ++cells;
        flagged += m.significant_01(i, j) ? 1 : 0;
      }
  }
  CHECK(flagged <= cells / 20);
}

TEST_CASE("pca on perfectly correlated variables") {
  Matrix x(10, 2);
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = i;
    x(i, 1) = 3.0 * i + 1.0;
  }
  const auto r = pca(x, {"a", "b"}, 1);
  CHECK(r.eigenvalues(0) == doctest::Approx(2.0));
  CHECK(std::abs(r.eigenvalues(1)) < 1e-12);
  CHECK(r.explained_ratio(0) == doctest::Approx(1.0));
}

TEST_CASE("pca on independent standardized variables") {
  // Orthogonal +-1 columns give an exact identity correlation matrix.
  Matrix x(8, 3);
  for (int i = 0; i < 8; ++i) {
    x(i, 0) = (i & 1) ? 1 : -1;
    x(i, 1) = (i & 2) ? 1 : -1;
    x(i, 2) = (i & 4) ? 1 : -1;
  }
  const auto r = pca(x, {"a", "b", "c"}, 2);
  for (int i = 0; i < 3; ++i) CHECK(r.eigenvalues(i) == doctest::Approx(1.0));
}

TEST_CASE("pca eigenvalues match a Jacobi eigensolver") {
  std::mt19937_64 rng(53);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x(40, 6);
    for (int i = 0; i < 40; ++i) {
      const double f1 = g(rng), f2 = g(rng);
      for (int j = 0; j < 6; ++j) x(i, j) = (j < 3 ? f1 : f2) * (0.5 + 0.1 * j) + g(rng);
    }
    const auto r = pca(x, {"v1", "v2", "v3", "v4", "v5", "v6"}, 2);
    const auto e = oracle::jacobi(correlation_of(x));
    for (int i = 0; i < 6; ++i) CHECK(std::abs(r.eigenvalues(i) - e.values[static_cast<std::size_t>(i)]) <= 1e-9);

    const Matrix ltl = r.loadings.transpose() * r.loadings;
    CHECK(std::abs(ltl(0, 1)) <= 1e-9);
    CHECK(r.explained_variance.sum() == doctest::Approx(r.eigenvalues.head(2).sum()));
    CHECK(r.explained_variance.sum() <= 6.0 + 1e-9);
    for (int j = 0; j < 2; ++j) CHECK(std::abs(r.scores.col(j).mean()) <= 1e-9);
    const Vector h_before = r.loadings.rowwise().squaredNorm();
    const Vector h_after = r.rotated_loadings.rowwise().squaredNorm();
    CHECK((h_before - h_after).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("pca preconditions") {
  Matrix few(3, 3);
  few << 1, 2, 3, 2, 1, 4, 3, 5, 1;
  CHECK_THROWS_AS(pca(few, {"a", "b", "c"}), ValidationError);
  Matrix flat(10, 2);
  for (int i = 0; i < 10; ++i) {
    flat(i, 0) = i;
    flat(i, 1) = 5;
  }
  CHECK_THROWS_WITH_AS(pca(flat, {"a", "b"}), doctest::Contains("degenerate variables"), ComputationError);
}

TEST_CASE("varimax keeps simple structure") {
  Matrix l(4, 2);
  l << 0.9, 0.0, 0.8, 0.0, 0.0, 0.7, 0.0, 0.85;
  const auto v = varimax(l);
  const Matrix abs_r = v.rotation.cwiseAbs();
  const bool identity = abs_r(0, 0) > 1 - 1e-9 && abs_r(1, 1) > 1 - 1e-9;
  const bool swap = abs_r(0, 1) > 1 - 1e-9 && abs_r(1, 0) > 1 - 1e-9;
  CHECK((identity || swap));
}

TEST_CASE("varimax single component is a no-op") {
  Matrix l(3, 1);
  l << 0.5, 0.6, 0.7;
  const auto v = varimax(l);
  CHECK(v.loadings == l);
  CHECK(v.rotation.isIdentity());
}

TEST_CASE("varimax reaches the grid-search optimum and preserves communalities") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix l = random_loadings(rng, 7);
    const auto v = varimax(l);
    CHECK(v.criterion_after >= v.criterion_before - 1e-12);
    CHECK((v.rotation.transpose() * v.rotation - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((l * v.rotation - v.loadings).cwiseAbs().maxCoeff() <= 1e-12);
    const Vector h0 = l.rowwise().squaredNorm();
    const Vector h1 = v.loadings.rowwise().squaredNorm();
    CHECK((h0 - h1).cwiseAbs().maxCoeff() <= 1e-9);

    double best = 0.0;
    const int steps = 20000;
    for (int s = 0; s < steps; ++s) {
      const double th = std::numbers::pi / 2 * s / steps;
      Matrix rot(2, 2);
      rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
      best = std::max(best, criterion(l * rot));
    }
    CHECK(criterion(v.loadings) >= best - 1e-7);
    CHECK(criterion(v.loadings) >= criterion(l) - 1e-12);
  }
}
