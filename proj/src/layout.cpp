#include "webimpact/layout.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "webimpact/error.hpp"

namespace webimpact {

namespace {

constexpr LegendColor kUniversityColor{"blue", {0, 0, 255}};

// Legend order matches the Sector enumeration.
constexpr std::array<LegendColor, kSectorCount> kSectorColors{{
    {"light brown", {181, 137, 94}},
    {"dark brown", {101, 67, 33}},
    {"green", {0, 160, 0}},
    {"cyan", {0, 200, 200}},
    {"red", {220, 0, 0}},
    {"purple", {128, 0, 128}},
    {"pink", {255, 105, 180}},
    {"grey", {128, 128, 128}},
    {"yellow", {230, 200, 0}},
    {"orange", {255, 140, 0}},
}};

constexpr double kMinDistance = 1e-9;

}  // namespace

void validate(const LayoutParams& p) {
  if (!(p.width > 0.0 && p.height > 0.0)) throw ValidationError("layout frame must have positive size");
  if (p.iterations < 1) throw ValidationError("layout needs at least one iteration");
  if (!(p.c_constant > 0.0)) throw ValidationError("layout c_constant must be positive");
  if (!(p.temperature0() > 0.0)) throw ValidationError("layout initial temperature must be positive");
}

double optimal_distance(const LayoutParams& params, std::size_t n_nodes) {
  return params.c_constant * std::sqrt(params.width * params.height / static_cast<double>(std::max<std::size_t>(n_nodes, 1)));
}

Positions random_positions(std::size_t n, const LayoutParams& params) {
  std::mt19937_64 rng(params.seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  Positions pos(static_cast<Eigen::Index>(n), 2);
  for (Eigen::Index i = 0; i < pos.rows(); ++i) {
    pos(i, 0) = unit() * params.width;
    pos(i, 1) = unit() * params.height;
  }
  return pos;
}

Positions fruchterman_reingold(const MentionNetwork& net, const LayoutParams& params, LayoutTrace* trace) {
  return fruchterman_reingold(net, params, random_positions(net.node_count(), params), trace);
}

Positions fruchterman_reingold(const MentionNetwork& net, const LayoutParams& params, Positions pos, LayoutTrace* trace) {
  validate(params);
  const auto n = static_cast<Eigen::Index>(net.node_count());
  if (pos.rows() != n) throw ValidationError("initial positions do not match the node count");
  if (trace) *trace = {};
  if (n == 0) return pos;
  if (n == 1) {
    pos.row(0) << params.width / 2.0, params.height / 2.0;
    return pos;
  }

  const double k = optimal_distance(params, net.node_count());
  const double k2 = k * k;
  const double t0 = params.temperature0();

  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
  const auto nbrs = adjacency(net).undirected;
  for (std::size_t v = 0; v < nbrs.size(); ++v)
    for (auto w : nbrs[v])
      if (v < w) edges.emplace_back(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w));

  Positions disp(n, 2);
  for (int it = 0; it < params.iterations; ++it) {
    const double temperature = t0 * (1.0 - static_cast<double>(it) / static_cast<double>(params.iterations));
    disp.setZero();

    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        Eigen::RowVector2d delta = pos.row(i) - pos.row(j);
        double d = delta.norm();
        if (d < kMinDistance) {
          delta << kMinDistance, 0.0;
          d = kMinDistance;
        }
        const Eigen::RowVector2d f = delta * (k2 / (d * d));
        disp.row(i) += f;
        disp.row(j) -= f;
      }
    }
    for (const auto& [u, v] : edges) {
      const Eigen::RowVector2d delta = pos.row(u) - pos.row(v);
      const double d = delta.norm();
      if (d < kMinDistance) continue;
      const Eigen::RowVector2d f = delta * (d / k);
      disp.row(u) -= f;
      disp.row(v) += f;
    }

    double max_move = 0.0;
    for (Eigen::Index v = 0; v < n; ++v) {
      const double len = disp.row(v).norm();
      if (len == 0.0) continue;
      const Eigen::RowVector2d before = pos.row(v);
      Eigen::RowVector2d step = disp.row(v) * (std::min(len, temperature) / len);
      Eigen::RowVector2d next;
      for (;;) {
        next << std::clamp(before(0) + step(0), 0.0, params.width), std::clamp(before(1) + step(1), 0.0, params.height);
        // Rounding in the scaled step or the addition may overshoot the cap by an ulp.
        if ((next - before).norm() <= temperature) break;
        step *= 1.0 - 1e-12;
      }
      pos.row(v) = next;
      max_move = std::max(max_move, (next - before).norm());
    }
    if (trace) {
      trace->temperature.push_back(temperature);
      trace->max_displacement.push_back(max_move);
    }
  }
  return pos;
}

LegendColor legend_color(InstitutionKind kind, std::optional<Sector> sector) {
  if (kind == InstitutionKind::University) return kUniversityColor;
  if (!sector) throw ValidationError("company without a sector has no legend color");
  return kSectorColors[static_cast<std::size_t>(*sector)];
}

std::vector<NodeEncoding> encode_nodes(const MentionNetwork& net, const std::map<std::string, std::uint64_t>& tpc_by_id,
                                       SizeRange range) {
  if (!(range.min > 0.0 && range.max >= range.min)) throw ValidationError("invalid node size range");
  std::vector<std::uint64_t> tpc;
  tpc.reserve(net.node_count());
  for (const auto& node : net.nodes()) {
    const auto it = tpc_by_id.find(node.id);
    tpc.push_back(it == tpc_by_id.end() ? node.tpc : it->second);
  }
  const std::uint64_t max_tpc = tpc.empty() ? 0 : *std::max_element(tpc.begin(), tpc.end());
  const double denom = std::log10(1.0 + static_cast<double>(max_tpc));

  std::vector<NodeEncoding> out;
  out.reserve(net.node_count());
  for (std::size_t v = 0; v < net.node_count(); ++v) {
    const auto& node = net.nodes()[v];
    const auto color = legend_color(node.kind, node.sector);
    double size = range.min;
    if (max_tpc > 0) {
      size = tpc[v] == max_tpc ? range.max
                               : range.min + (range.max - range.min) * std::log10(1.0 + static_cast<double>(tpc[v])) / denom;
    }
    out.push_back({node.id, size, std::string(color.name), color.rgb});
  }
  return out;
}

std::vector<NodePlacement> place_nodes(const MentionNetwork& net, const Positions& positions,
                                       const std::vector<NodeEncoding>& encodings) {
  if (positions.rows() != static_cast<Eigen::Index>(net.node_count()) || encodings.size() != net.node_count())
    throw ValidationError("placements do not cover every node");
  std::vector<NodePlacement> out;
  out.reserve(net.node_count());
  for (std::size_t v = 0; v < net.node_count(); ++v) {
    const auto row = static_cast<Eigen::Index>(v);
    out.push_back({net.nodes()[v].id, positions(row, 0), positions(row, 1), encodings[v].size, encodings[v].color});
  }
  return out;
}

}  // namespace webimpact
