#include <engage/netbuild.hpp>

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <istream>
#include <ostream>

namespace engage {

Alignment parse_alignment(std::string_view name) {
  if (name == "wall") return Alignment::wall_clock;
  if (name == "first") return Alignment::first_message;
  throw Error(ErrorKind::parameter, fmt::format("unknown alignment '{}'", name));
}

std::string_view to_string(Alignment alignment) {
  return alignment == Alignment::wall_clock ? "wall" : "first";
}

void WindowSpec::validate() const {
  if (delta_t <= 0) throw Error(ErrorKind::parameter, "window length must be positive");
  if (from && to && *from >= *to) throw Error(ErrorKind::parameter, "empty time range");
}

namespace {

bool in_range(Timestamp t, const WindowSpec& spec) {
  return (!spec.from || t >= *spec.from) && (!spec.to || t < *spec.to);
}

}  // namespace

Timestamp window_origin(const MessageLog& log, const WindowSpec& spec) {
  spec.validate();
  std::optional<Timestamp> anchor = spec.from;
  if (!anchor || spec.alignment == Alignment::first_message) {
    for (const auto& e : log.events()) {
      if (in_range(e.timestamp, spec)) {
        anchor = e.timestamp;
        break;
      }
    }
  }
  if (!anchor) return spec.from.value_or(0);
  if (spec.alignment == Alignment::first_message) return *anchor;
  return floor_div(*anchor, spec.delta_t) * spec.delta_t;
}

std::vector<WindowSlice> slice_windows(const MessageLog& log, const WindowSpec& spec) {
  const Timestamp origin = window_origin(log, spec);
  const auto events = log.events();

  std::vector<WindowSlice> slices;
  std::size_t i = 0;
  while (i < events.size()) {
    if (!in_range(events[i].timestamp, spec)) {
      ++i;
      continue;
    }
    const std::int64_t index = floor_div(events[i].timestamp - origin, spec.delta_t);
    const Timestamp start = origin + index * spec.delta_t;
    const Timestamp end = start + spec.delta_t;
    std::size_t j = i;
    while (j < events.size() && events[j].timestamp < end && in_range(events[j].timestamp, spec)) {
      ++j;
    }
    slices.push_back({start, index, events.subspan(i, j - i)});
    i = j;
  }
  return slices;
}

// ---------------------------------------------------------------------------
// InteractionNetwork

InteractionNetwork::InteractionNetwork(Timestamp window_start, std::int64_t window_index,
                                       std::vector<Edge> edges,
                                       std::optional<std::size_t> message_count,
                                       std::vector<UserId> isolated)
    : window_start_(window_start), window_index_(window_index), message_count_(message_count) {
  for (auto& e : edges) {
    if (e.u == e.v) throw Error(ErrorKind::schema, fmt::format("self-pair on user {}", e.u));
    if (e.weight <= 0) throw Error(ErrorKind::schema, "edge weight must be positive");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (const auto& e : edges) {
    if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
      edges_.back().weight += e.weight;
    } else {
      edges_.push_back(e);
    }
    total_weight_ += e.weight;
    nodes_.push_back(e.u);
    nodes_.push_back(e.v);
  }
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

  std::sort(isolated.begin(), isolated.end());
  isolated.erase(std::unique(isolated.begin(), isolated.end()), isolated.end());
  std::set_difference(isolated.begin(), isolated.end(), nodes_.begin(), nodes_.end(),
                      std::back_inserter(isolated_));
}

Weight InteractionNetwork::weight(UserId a, UserId b) const {
  if (a > b) std::swap(a, b);
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{a, b, 0},
                                   [](const Edge& x, const Edge& y) {
                                     return std::tie(x.u, x.v) < std::tie(y.u, y.v);
                                   });
  return it != edges_.end() && it->u == a && it->v == b ? it->weight : 0;
}

Weight InteractionNetwork::strength(UserId user) const {
  Weight s = 0;
  for (const auto& e : edges_) {
    if (e.u == user || e.v == user) s += e.weight;
  }
  return s;
}

std::vector<Weight> InteractionNetwork::strengths() const {
  std::vector<Weight> out(nodes_.size(), 0);
  auto slot = [&](UserId u) {
    return static_cast<std::size_t>(std::lower_bound(nodes_.begin(), nodes_.end(), u) -
                                    nodes_.begin());
  };
  for (const auto& e : edges_) {
    out[slot(e.u)] += e.weight;
    out[slot(e.v)] += e.weight;
  }
  return out;
}

InteractionNetwork build_network(std::span<const MessageEvent> events, Timestamp window_start,
                                 std::int64_t window_index) {
  std::vector<Edge> transitions;
  std::vector<UserId> senders;
  senders.reserve(events.size());
  for (std::size_t k = 0; k < events.size(); ++k) {
    senders.push_back(events[k].user);
    if (k + 1 < events.size() && events[k].user != events[k + 1].user) {
      transitions.push_back({events[k].user, events[k + 1].user, 1});
    }
  }
  return InteractionNetwork(window_start, window_index, std::move(transitions), events.size(),
                            std::move(senders));
}

// ---------------------------------------------------------------------------
// NetworkEnsemble

NetworkEnsemble::NetworkEnsemble(WindowSpec spec, std::string group_name,
                                 std::vector<InteractionNetwork> networks)
    : spec_(spec), group_name_(std::move(group_name)), networks_(std::move(networks)) {
  for (std::size_t i = 1; i < networks_.size(); ++i) {
    if (networks_[i].window_start() <= networks_[i - 1].window_start() ||
        networks_[i].window_index() <= networks_[i - 1].window_index()) {
      throw Error(ErrorKind::schema,
                  fmt::format("networks out of window order at position {}", i));
    }
  }
}

std::size_t NetworkEnsemble::conversation_count() const {
  return static_cast<std::size_t>(std::count_if(networks_.begin(), networks_.end(),
                                                [](const auto& n) { return n.is_conversation(); }));
}

NetworkEnsemble build_ensemble(const MessageLog& log, const WindowSpec& spec) {
  const auto slices = slice_windows(log, spec);
  std::vector<InteractionNetwork> networks;
  networks.reserve(slices.size());
  for (const auto& s : slices) networks.push_back(build_network(s.events, s.window_start, s.window_index));
  return NetworkEnsemble(spec, log.group_name(), std::move(networks));
}

void write_ensemble(std::ostream& out, const NetworkEnsemble& ensemble) {
  for (const auto& net : ensemble.networks()) {
    out << "{\"w\":" << net.window_start() << ",\"i\":" << net.window_index() << ",\"nodes\":[";
    const auto nodes = net.nodes();
    for (std::size_t k = 0; k < nodes.size(); ++k) out << (k ? "," : "") << nodes[k];
    out << "],\"edges\":[";
    const auto edges = net.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
      out << (k ? "," : "") << '[' << edges[k].u << ',' << edges[k].v << ',' << edges[k].weight
          << ']';
    }
    out << "]}\n";
  }
}

NetworkEnsemble read_ensemble(std::istream& in, std::string group_name) {
  std::vector<InteractionNetwork> networks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](std::string_view what) {
      return Error(ErrorKind::schema, fmt::format("ensemble line {}: {}", line_no, what), line_no);
    };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw fail(e.what());
    }
    for (const char* key : {"w", "i", "nodes", "edges"}) {
      if (!j.is_object() || !j.contains(key)) throw fail(fmt::format("missing field '{}'", key));
    }
    if (!j["w"].is_number_integer() || !j["i"].is_number_integer()) throw fail("bad window fields");
    if (!j["nodes"].is_array() || !j["edges"].is_array()) throw fail("bad node/edge arrays");

    std::vector<Edge> edges;
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
          !e[1].is_number_integer() || !e[2].is_number_integer()) {
        throw fail("edge must be [u,v,w]");
      }
      edges.push_back({e[0].get<UserId>(), e[1].get<UserId>(), e[2].get<Weight>()});
    }
    std::vector<UserId> nodes;
    for (const auto& v : j["nodes"]) {
      if (!v.is_number_integer()) throw fail("node ids must be integers");
      nodes.push_back(v.get<UserId>());
    }
    try {
      InteractionNetwork net(j["w"].get<Timestamp>(), j["i"].get<std::int64_t>(), std::move(edges));
      if (!std::equal(nodes.begin(), nodes.end(), net.nodes().begin(), net.nodes().end())) {
        throw fail("node list does not match edge endpoints");
      }
      networks.push_back(std::move(net));
    } catch (const Error& e) {
      if (e.line()) throw;
      throw fail(e.what());
    }
  }
  try {
    return NetworkEnsemble(WindowSpec{}, std::move(group_name), std::move(networks));
  } catch (const Error& e) {
    throw Error(ErrorKind::schema, e.what());
  }
}

}  // namespace engage
