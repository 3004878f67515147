#pragma once

// Engagement Index of an interaction network and its per-node share.
//
//   equality  = 1 - Gini(edge weights)
//   intensity = log2(n * total_weight)
//   ei        = equality * intensity
//   ei(v)     = n * strength(v) * ei / (2 * total_weight)
//
// total_weight is half the sum of node strengths, so ei(v) averages to ei.

#include <engage/core.hpp>
#include <engage/netbuild.hpp>

#include <algorithm>
#include <concepts>
#include <iosfwd>
#include <span>
#include <vector>

namespace engage {

/// Gini coefficient of a multiset of positive values, via the sorted form
///   G = sum_i (2i - k - 1) x_(i) / (k * sum x),  i = 1..k ascending.
/// Throws Error{domain} on empty or non-positive input.
template <typename T>
  requires std::is_arithmetic_v<T>
double gini(std::span<const T> values) {
  if (values.empty()) throw Error(ErrorKind::domain, "Gini of an empty multiset");
  std::vector<double> x(values.begin(), values.end());
  for (double v : x) {
    if (!(v > 0.0)) throw Error(ErrorKind::domain, "Gini requires positive values");
  }
  std::sort(x.begin(), x.end());
  const auto k = static_cast<double>(x.size());
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    weighted += (2.0 * static_cast<double>(i + 1) - k - 1.0) * x[i];
    total += x[i];
  }
  return weighted / (k * total);
}

inline double gini(std::initializer_list<double> values) {
  return gini(std::span<const double>(values.begin(), values.size()));
}

struct EngagementMetrics {
  std::size_t n = 0;
  Weight total_weight = 0;
  double gini = 0.0;
  double equality = 0.0;
  double intensity = 0.0;
  double ei = 0.0;
};

struct NodeEngagement {
  UserId user = 0;
  Weight strength = 0;
  double ei_centrality = 0.0;
};

/// Each throws Error{not_conversation} when n < 2.
double equality(const InteractionNetwork& net);
double intensity(const InteractionNetwork& net);
EngagementMetrics engagement_index(const InteractionNetwork& net);

/// One entry per node, ascending user ID.
std::vector<NodeEngagement> node_centralities(const InteractionNetwork& net,
                                              const EngagementMetrics& metrics);

/// Metrics of one conversation network, tagged with its window.
struct WindowMetrics {
  Timestamp window_start = 0;
  std::int64_t window_index = 0;
  EngagementMetrics metrics;
};

/// Node centralities of one conversation network, tagged with its window.
struct WindowCentralities {
  Timestamp window_start = 0;
  std::int64_t window_index = 0;
  double ei = 0.0;
  std::vector<NodeEngagement> nodes;
};

/// Metrics of every conversation network of the ensemble (n > 1), in order.
std::vector<WindowMetrics> ensemble_metrics(const NetworkEnsemble& ensemble);

/// Per-window centralities of every conversation network, in order.
std::vector<WindowCentralities> ensemble_centralities(const NetworkEnsemble& ensemble);

/// CSV: window_start,window_index,n,total_weight,equality,intensity,ei
void write_metrics(std::ostream& out, std::span<const WindowMetrics> rows);
std::vector<WindowMetrics> read_metrics(std::istream& in);

/// CSV: window_start,user_id,strength,ei_centrality
void write_centralities(std::ostream& out, std::span<const WindowCentralities> rows);

}  // namespace engage
