#pragma once

// Synthetic message logs with known per-window networks.
//
// Window w of a corpus starts at base + 2*w*delta_t (an idle window sits
// between consecutive active ones) and its `rate` messages are spaced evenly
// inside it. Senders per regime, with k = users and j the message position
// inside the window:
//
//   round_robin     j mod k
//   broadcaster     hub 0 on even j; odd j cycle through an audience of
//                   1 + (w mod (k-1)) users
//   dominant_pair   period 6: 0,1,0,1,0,c with crowd member c cycling
//                   through users 2..k-1
//   uniform_random  uniform over k users
//   planted_dropout planted users 0..p-1 take every even j before the split
//                   window; background users p..p+k-1 fill the rest uniformly
//
// Random draws use std::mt19937_64 seeded with `seed`, one draw per random
// sender, mapped to a user as `draw % count`.

#include <engage/chatlog.hpp>
#include <engage/netbuild.hpp>

#include <iosfwd>
#include <optional>
#include <vector>

namespace engage {

enum class RegimeKind { round_robin, broadcaster, dominant_pair, uniform_random, planted_dropout };

RegimeKind parse_regime_kind(std::string_view name);
std::string_view to_string(RegimeKind kind);

struct Regime {
  RegimeKind kind = RegimeKind::round_robin;
  int users = 4;      // background users for planted_dropout
  int rate = 33;      // messages per active window
  int windows = 3;    // active windows
  std::uint64_t seed = 0;
  int planted = 5;                       // planted_dropout only
  std::optional<int> split_window;       // planted_dropout; default windows / 2
  Timestamp base = 1538352000;           // 2018-10-01T00:00:00Z, floored to delta_t

  /// Throws Error{parameter} on inconsistent settings.
  void validate() const;
};

struct SyntheticCorpus {
  MessageLog log;
  /// Expected network of every active window, from simulated transitions.
  std::vector<InteractionNetwork> expected;
  std::vector<UserId> planted;       // planted_dropout only
  std::optional<Timestamp> split;    // planted_dropout only
};

SyntheticCorpus generate(const Regime& regime, const WindowSpec& spec);

/// JSONL, one line per expected network: the ensemble fields plus
/// n, total_weight, equality, intensity and ei for conversations.
void write_ground_truth(std::ostream& out, const SyntheticCorpus& corpus);

}  // namespace engage
