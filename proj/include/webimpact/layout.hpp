#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "webimpact/network.hpp"

namespace webimpact {

// Node positions, one row per node in network order.
using Positions = Eigen::Matrix<double, Eigen::Dynamic, 2>;

struct LayoutParams {
  double width = 1000.0;
  double height = 1000.0;
  int iterations = 500;
  double c_constant = 1.0;                     // k = c * sqrt(area / N)
  std::optional<double> initial_temperature;   // defaults to width / 10
  std::uint64_t seed = 1;

  double temperature0() const { return initial_temperature.value_or(width / 10.0); }
};

// Throws ValidationError on non-positive dimensions, iterations or constants.
void validate(const LayoutParams& params);

double optimal_distance(const LayoutParams& params, std::size_t n_nodes);

// Uniform positions in the frame from a seeded 64-bit Mersenne Twister; the
// bit-to-real mapping is fixed so the stream is portable.
Positions random_positions(std::size_t n, const LayoutParams& params);

struct LayoutTrace {
  std::vector<double> temperature;       // per iteration
  std::vector<double> max_displacement;  // largest node move in that iteration
};

// Fruchterman-Reingold placement: repulsion k^2/d between every pair,
// attraction d^2/k along undirected edges, moves capped by a temperature that
// cools linearly to 0, positions clamped to the frame. A single node sits at
// the frame centre. Forces are summed in node order, so the result is
// reproducible bit for bit.
Positions fruchterman_reingold(const MentionNetwork& net, const LayoutParams& params,
                               LayoutTrace* trace = nullptr);
Positions fruchterman_reingold(const MentionNetwork& net, const LayoutParams& params, Positions initial,
                               LayoutTrace* trace = nullptr);

struct Rgb {
  int r = 0;
  int g = 0;
  int b = 0;
};

struct LegendColor {
  std::string_view name;  // e.g. "blue", "light brown"
  Rgb rgb;
};

// Universities share one color; each sector has its own.
LegendColor legend_color(InstitutionKind kind, std::optional<Sector> sector);

struct NodeEncoding {
  std::string node_id;
  double size = 0.0;
  std::string color;
  Rgb rgb;
};

struct SizeRange {
  double min = 4.0;
  double max = 40.0;
};

// size = min + (max - min) * log10(1 + tpc) / log10(1 + max_tpc), min for
// every node when all page counts are 0. Uses tpc_by_id when given, the node
// attribute otherwise. Throws ValidationError for a company without sector.
std::vector<NodeEncoding> encode_nodes(const MentionNetwork& net, const std::map<std::string, std::uint64_t>& tpc_by_id = {},
                                       SizeRange range = {});

struct NodePlacement {
  std::string node_id;
  double x = 0.0;
  double y = 0.0;
  double size = 0.0;
  std::string color;
};

std::vector<NodePlacement> place_nodes(const MentionNetwork& net, const Positions& positions,
                                       const std::vector<NodeEncoding>& encodings);

}  // namespace webimpact
