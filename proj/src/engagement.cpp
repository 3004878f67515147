#include <engage/engagement.hpp>
#include <engage/io.hpp>

#include <fmt/format.h>

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace engage {

namespace {

void require_conversation(const InteractionNetwork& net) {
  if (!net.is_conversation()) {
    throw Error(ErrorKind::not_conversation,
                fmt::format("window {} has fewer than two interacting users", net.window_index()));
  }
}

double equality_of(const InteractionNetwork& net, double& gini_out) {
  std::vector<Weight> weights;
  weights.reserve(net.edges().size());
  for (const auto& e : net.edges()) weights.push_back(e.weight);
  gini_out = gini(std::span<const Weight>(weights));
  return 1.0 - gini_out;
}

double intensity_of(const InteractionNetwork& net) {
  return std::log2(static_cast<double>(net.n()) * static_cast<double>(net.total_weight()));
}

}  // namespace

double equality(const InteractionNetwork& net) {
  require_conversation(net);
  double g = 0.0;
  return equality_of(net, g);
}

double intensity(const InteractionNetwork& net) {
  require_conversation(net);
  return intensity_of(net);
}

EngagementMetrics engagement_index(const InteractionNetwork& net) {
  require_conversation(net);
  EngagementMetrics m;
  m.n = net.n();
  m.total_weight = net.total_weight();
  m.equality = equality_of(net, m.gini);
  m.intensity = intensity_of(net);
  m.ei = m.equality * m.intensity;
  return m;
}

std::vector<NodeEngagement> node_centralities(const InteractionNetwork& net,
                                              const EngagementMetrics& metrics) {
  const auto nodes = net.nodes();
  const auto strengths = net.strengths();
  const double scale = static_cast<double>(metrics.n) * metrics.ei /
                       (2.0 * static_cast<double>(metrics.total_weight));
  std::vector<NodeEngagement> out;
  out.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out.push_back({nodes[i], strengths[i], scale * static_cast<double>(strengths[i])});
  }
  return out;
}

std::vector<WindowMetrics> ensemble_metrics(const NetworkEnsemble& ensemble) {
  std::vector<WindowMetrics> rows;
  for (const auto& net : ensemble.networks()) {
    if (!net.is_conversation()) continue;
    rows.push_back({net.window_start(), net.window_index(), engagement_index(net)});
  }
  return rows;
}

std::vector<WindowCentralities> ensemble_centralities(const NetworkEnsemble& ensemble) {
  std::vector<WindowCentralities> rows;
  for (const auto& net : ensemble.networks()) {
    if (!net.is_conversation()) continue;
    const auto m = engagement_index(net);
    rows.push_back({net.window_start(), net.window_index(), m.ei, node_centralities(net, m)});
  }
  return rows;
}

void write_metrics(std::ostream& out, std::span<const WindowMetrics> rows) {
  out << "window_start,window_index,n,total_weight,equality,intensity,ei\n";
  for (const auto& r : rows) {
    out << r.window_start << ',' << r.window_index << ',' << r.metrics.n << ','
        << r.metrics.total_weight << ',' << io::format_real(r.metrics.equality) << ','
        << io::format_real(r.metrics.intensity) << ',' << io::format_real(r.metrics.ei) << '\n';
  }
}

std::vector<WindowMetrics> read_metrics(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      io::trim(line) != "window_start,window_index,n,total_weight,equality,intensity,ei") {
    throw Error(ErrorKind::schema, "metrics file header mismatch", 1);
  }
  std::vector<WindowMetrics> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    const auto f = io::split_csv(line);
    WindowMetrics r;
    std::int64_t n = 0;
    bool ok = f.size() == 7 && io::parse_int(f[0], r.window_start) &&
              io::parse_int(f[1], r.window_index) && io::parse_int(f[2], n) &&
              io::parse_int(f[3], r.metrics.total_weight) &&
              io::parse_real(f[4], r.metrics.equality) &&
              io::parse_real(f[5], r.metrics.intensity) && io::parse_real(f[6], r.metrics.ei);
    if (!ok || n < 2 || r.metrics.total_weight < 1) {
      throw Error(ErrorKind::schema, fmt::format("bad metrics row at line {}", line_no), line_no);
    }
    r.metrics.n = static_cast<std::size_t>(n);
    r.metrics.gini = 1.0 - r.metrics.equality;
    rows.push_back(r);
  }
  return rows;
}

void write_centralities(std::ostream& out, std::span<const WindowCentralities> rows) {
  out << "window_start,user_id,strength,ei_centrality\n";
  for (const auto& r : rows) {
    for (const auto& node : r.nodes) {
      out << r.window_start << ',' << node.user << ',' << node.strength << ','
          << io::format_real(node.ei_centrality) << '\n';
    }
  }
}

}  // namespace engage
