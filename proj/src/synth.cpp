#include <engage/engagement.hpp>
#include <engage/io.hpp>
#include <engage/synth.hpp>

#include <fmt/format.h>

#include <map>
#include <ostream>
#include <random>

namespace engage {

RegimeKind parse_regime_kind(std::string_view name) {
  if (name == "round-robin") return RegimeKind::round_robin;
  if (name == "broadcaster") return RegimeKind::broadcaster;
  if (name == "dominant-pair") return RegimeKind::dominant_pair;
  if (name == "uniform-random") return RegimeKind::uniform_random;
  if (name == "planted-dropout") return RegimeKind::planted_dropout;
  throw Error(ErrorKind::parameter, fmt::format("unknown regime '{}'", name));
}

std::string_view to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::round_robin: return "round-robin";
    case RegimeKind::broadcaster: return "broadcaster";
    case RegimeKind::dominant_pair: return "dominant-pair";
    case RegimeKind::uniform_random: return "uniform-random";
    case RegimeKind::planted_dropout: return "planted-dropout";
  }
  return "unknown";
}

void Regime::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::parameter, what); };
  if (users < 1) fail("regime needs at least one user");
  if (rate < 1) fail("regime needs at least one message per window");
  if (windows < 1) fail("regime needs at least one window");
  switch (kind) {
    case RegimeKind::round_robin:
      if (rate < users) fail(fmt::format("round-robin rate {} is below user count {}", rate, users));
      break;
    case RegimeKind::dominant_pair:
      if (users < 2) fail("dominant-pair needs at least two users");
      break;
    case RegimeKind::planted_dropout: {
      if (planted < 1) fail("planted-dropout needs at least one planted user");
      if (users < 2) fail("planted-dropout needs at least two background users");
      if (windows < 2) fail("planted-dropout needs at least two windows");
      const int split = split_window.value_or(windows / 2);
      if (split < 1 || split >= windows) fail("split window must leave both periods nonempty");
      break;
    }
    default:
      break;
  }
}

namespace {

class SenderStream {
 public:
  explicit SenderStream(const Regime& r) : r_(r), rng_(r.seed) {}

  UserId next(int window, int j) {
    const int k = r_.users;
    switch (r_.kind) {
      case RegimeKind::round_robin:
        return j % k;
      case RegimeKind::broadcaster: {
        if (k == 1 || j % 2 == 0) return 0;
        const int audience = 1 + window % (k - 1);
        return 1 + (j / 2) % audience;
      }
      case RegimeKind::dominant_pair: {
        const int p = j % 6;
        if (p == 5 && k > 2) return 2 + (j / 6) % (k - 2);
        return p % 2;
      }
      case RegimeKind::uniform_random:
        return draw(k);
      case RegimeKind::planted_dropout: {
        const int split = r_.split_window.value_or(r_.windows / 2);
        if (window < split && j % 2 == 0) return (j / 2) % r_.planted;
        return r_.planted + draw(k);
      }
    }
    return 0;
  }

 private:
  UserId draw(int count) {
    return static_cast<UserId>(rng_() % static_cast<std::uint64_t>(count));
  }

  const Regime& r_;
  std::mt19937_64 rng_;
};

InteractionNetwork simulate_window(const std::vector<UserId>& senders, Timestamp start,
                                   std::int64_t index) {
  std::map<std::pair<UserId, UserId>, Weight> counts;
  for (std::size_t j = 1; j < senders.size(); ++j) {
    const UserId a = senders[j - 1];
    const UserId b = senders[j];
    if (a == b) continue;
    ++counts[{std::min(a, b), std::max(a, b)}];
  }
  std::vector<Edge> edges;
  for (const auto& [pair, w] : counts) edges.push_back({pair.first, pair.second, w});
  return InteractionNetwork(start, index, std::move(edges), senders.size(), senders);
}

}  // namespace

SyntheticCorpus generate(const Regime& regime, const WindowSpec& spec) {
  regime.validate();
  spec.validate();
  const std::int64_t dt = spec.delta_t;
  const Timestamp base = floor_div(regime.base, dt) * dt;

  SyntheticCorpus corpus;
  SenderStream stream(regime);
  std::vector<MessageEvent> events;
  events.reserve(static_cast<std::size_t>(regime.rate) * static_cast<std::size_t>(regime.windows));

  for (int w = 0; w < regime.windows; ++w) {
    const std::int64_t index = 2 * static_cast<std::int64_t>(w);
    const Timestamp start = base + index * dt;
    std::vector<UserId> senders;
    senders.reserve(static_cast<std::size_t>(regime.rate));
    for (int j = 0; j < regime.rate; ++j) {
      const UserId u = stream.next(w, j);
      senders.push_back(u);
      const Timestamp t = start + (static_cast<std::int64_t>(j) * dt) / regime.rate;
      events.push_back({u, t, static_cast<std::int64_t>(events.size())});
    }
    corpus.expected.push_back(simulate_window(senders, start, index));
  }

  if (regime.kind == RegimeKind::planted_dropout) {
    for (int p = 0; p < regime.planted; ++p) corpus.planted.push_back(p);
    corpus.split = base + 2 * static_cast<std::int64_t>(regime.split_window.value_or(regime.windows / 2)) * dt;
  }
  corpus.log = MessageLog(std::string(to_string(regime.kind)), std::move(events));
  return corpus;
}

void write_ground_truth(std::ostream& out, const SyntheticCorpus& corpus) {
  for (const auto& net : corpus.expected) {
    out << "{\"w\":" << net.window_start() << ",\"i\":" << net.window_index() << ",\"nodes\":[";
    const auto nodes = net.nodes();
    for (std::size_t k = 0; k < nodes.size(); ++k) out << (k ? "," : "") << nodes[k];
    out << "],\"edges\":[";
    const auto edges = net.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
      out << (k ? "," : "") << '[' << edges[k].u << ',' << edges[k].v << ',' << edges[k].weight
          << ']';
    }
    out << ']';
    if (net.is_conversation()) {
      const auto m = engagement_index(net);
      out << ",\"n\":" << m.n << ",\"total_weight\":" << m.total_weight
          << ",\"equality\":" << io::format_real(m.equality)
          << ",\"intensity\":" << io::format_real(m.intensity)
          << ",\"ei\":" << io::format_real(m.ei);
    }
    out << "}\n";
  }
}

}  // namespace engage
