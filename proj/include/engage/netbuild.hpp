#pragma once

// Windowing of a message log and per-window interaction networks.
//
// Inside one window, every pair of consecutive messages from different
// senders adds 1 to the weight of the undirected edge between them.
// Consecutive messages from the same sender add nothing, and transitions
// never cross a window boundary.

#include <engage/chatlog.hpp>
#include <engage/core.hpp>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace engage {

enum class Alignment { wall_clock, first_message };

Alignment parse_alignment(std::string_view name);  // "wall" | "first"
std::string_view to_string(Alignment alignment);

struct WindowSpec {
  std::int64_t delta_t = 600;  // seconds
  Alignment alignment = Alignment::wall_clock;
  std::optional<Timestamp> from;  // inclusive
  std::optional<Timestamp> to;    // exclusive

  /// Throws Error{parameter} unless delta_t > 0 and from < to.
  void validate() const;
};

/// Events of one nonempty window. `events` views into the source log.
struct WindowSlice {
  Timestamp window_start = 0;
  std::int64_t window_index = 0;
  std::span<const MessageEvent> events;
};

/// Start of window 0. Wall-clock alignment floors the anchor (range start or
/// first in-range event) to a multiple of delta_t.
Timestamp window_origin(const MessageLog& log, const WindowSpec& spec);

/// Nonempty windows in chronological order. Empty windows are skipped but
/// window_index counts them. An empty result means the range excludes every
/// event.
std::vector<WindowSlice> slice_windows(const MessageLog& log, const WindowSpec& spec);

struct Edge {
  UserId u = 0;  // u < v
  UserId v = 0;
  Weight weight = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class InteractionNetwork {
 public:
  InteractionNetwork() = default;

  /// Builds from canonical parts. Edges are canonicalized (u < v), merged and
  /// sorted; throws Error{schema} on self-pairs or non-positive weights.
  InteractionNetwork(Timestamp window_start, std::int64_t window_index, std::vector<Edge> edges,
                     std::optional<std::size_t> message_count = std::nullopt,
                     std::vector<UserId> isolated = {});

  Timestamp window_start() const { return window_start_; }
  std::int64_t window_index() const { return window_index_; }

  /// Interacting users, ascending.
  std::span<const UserId> nodes() const { return nodes_; }
  /// Edges sorted by (u, v), u < v.
  std::span<const Edge> edges() const { return edges_; }
  /// Senders with no cross-sender transition in the window; not part of n.
  std::span<const UserId> isolated() const { return isolated_; }

  std::size_t n() const { return nodes_.size(); }
  Weight total_weight() const { return total_weight_; }
  /// Messages in the window; absent for networks read back from an export.
  std::optional<std::size_t> message_count() const { return message_count_; }

  /// A conversation has at least two interacting users.
  bool is_conversation() const { return nodes_.size() >= 2; }

  /// Symmetric lookup; 0 when the pair is not linked.
  Weight weight(UserId a, UserId b) const;
  /// Weighted degree; 0 for users outside the network.
  Weight strength(UserId user) const;
  /// Strengths aligned with nodes().
  std::vector<Weight> strengths() const;

  friend bool operator==(const InteractionNetwork&, const InteractionNetwork&) = default;

 private:
  Timestamp window_start_ = 0;
  std::int64_t window_index_ = 0;
  std::vector<UserId> nodes_;
  std::vector<Edge> edges_;
  std::vector<UserId> isolated_;
  Weight total_weight_ = 0;
  std::optional<std::size_t> message_count_;
};

/// Network of one window from its chronologically ordered events.
InteractionNetwork build_network(std::span<const MessageEvent> events, Timestamp window_start = 0,
                                 std::int64_t window_index = 0);

class NetworkEnsemble {
 public:
  NetworkEnsemble() = default;
  /// Throws Error{schema} unless window_start is strictly increasing.
  NetworkEnsemble(WindowSpec spec, std::string group_name,
                  std::vector<InteractionNetwork> networks);

  const WindowSpec& spec() const { return spec_; }
  const std::string& group_name() const { return group_name_; }
  std::span<const InteractionNetwork> networks() const { return networks_; }
  std::size_t size() const { return networks_.size(); }

  std::size_t conversation_count() const;

 private:
  WindowSpec spec_;
  std::string group_name_;
  std::vector<InteractionNetwork> networks_;
};

/// One network per nonempty window, in window order.
NetworkEnsemble build_ensemble(const MessageLog& log, const WindowSpec& spec);

/// JSONL, one network per line:
///   {"w":window_start,"i":index,"nodes":[...],"edges":[[u,v,w],...]}
void write_ensemble(std::ostream& out, const NetworkEnsemble& ensemble);
NetworkEnsemble read_ensemble(std::istream& in, std::string group_name = {});

}  // namespace engage
