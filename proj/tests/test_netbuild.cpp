#include <doctest.h>

#include "oracles.hpp"

#include <engage/netbuild.hpp>

#include <random>
#include <sstream>

using namespace engage;

namespace {

std::vector<MessageEvent> sequence(const std::vector<UserId>& users, Timestamp t0 = 0) {
  std::vector<MessageEvent> events;
  for (std::size_t i = 0; i < users.size(); ++i) {
    events.push_back({users[i], t0 + static_cast<Timestamp>(i), static_cast<std::int64_t>(i)});
  }
  return events;
}

MessageLog log_at(const std::vector<std::pair<UserId, Timestamp>>& rows) {
  std::vector<MessageEvent> events;
  for (const auto& [u, t] : rows) events.push_back({u, t, static_cast<std::int64_t>(events.size())});
  return MessageLog("g", std::move(events));
}

// 2018-07-15 23:00:00 UTC
constexpr Timestamp k2300 = 1531695600;

}  // namespace

TEST_CASE("slice_windows: bin membership") {
  SUBCASE("23:31 and 23:39 share the 23:30 window") {
    auto log = log_at({{0, k2300 + 31 * 60}, {1, k2300 + 39 * 60}});
    auto slices = slice_windows(log, WindowSpec{});
    REQUIRE(slices.size() == 1);
    CHECK(slices[0].window_start == k2300 + 30 * 60);
    CHECK(slices[0].events.size() == 2);
  }
  SUBCASE("23:39 and 23:41 straddle a boundary") {
    auto log = log_at({{0, k2300 + 39 * 60}, {1, k2300 + 41 * 60}});
    auto slices = slice_windows(log, WindowSpec{});
    REQUIRE(slices.size() == 2);
    CHECK(slices[0].window_start == k2300 + 30 * 60);
    CHECK(slices[1].window_start == k2300 + 40 * 60);
    CHECK(slices[1].window_index == slices[0].window_index + 1);
  }
}

TEST_CASE("slice_windows: indices stay gap-aware and alignment modes differ") {
  auto log = log_at({{0, k2300 + 5 * 60}, {1, k2300 + 47 * 60}});
  auto wall = slice_windows(log, WindowSpec{});
  REQUIRE(wall.size() == 2);
  CHECK(wall[0].window_start == k2300);
  CHECK(wall[0].window_index == 0);
  CHECK(wall[1].window_index == 4);

  WindowSpec first;
  first.alignment = Alignment::first_message;
  auto anchored = slice_windows(log, first);
  REQUIRE(anchored.size() == 2);
  CHECK(anchored[0].window_start == k2300 + 5 * 60);
  CHECK(anchored[1].window_start == k2300 + 45 * 60);
  CHECK(anchored[1].window_index == 4);
}

TEST_CASE("slice_windows: range filtering") {
  auto log = log_at({{0, 100}, {1, 700}, {0, 1300}});
  WindowSpec spec;
  spec.from = 600;
  spec.to = 1200;
  auto slices = slice_windows(log, spec);
  REQUIRE(slices.size() == 1);
  CHECK(slices[0].events.size() == 1);
  CHECK(slices[0].window_start == 600);

  spec.from = 5000;
  spec.to = 6000;
  CHECK(slice_windows(log, spec).empty());

  WindowSpec bad;
  bad.delta_t = 0;
  CHECK_THROWS_AS(slice_windows(log, bad), Error);
}

TEST_CASE("slice_windows: counts match a direct histogram over three days") {
  std::mt19937_64 rng(2018);
  std::vector<std::pair<UserId, Timestamp>> rows;
  Timestamp t = 1531612800;  // 2018-07-15
  while (t < 1531612800 + 3 * 86400) {
    rows.push_back({static_cast<UserId>(rng() % 40), t});
    // Bursty gaps: mostly seconds apart, occasionally hours.
    t += rng() % 10 == 0 ? static_cast<Timestamp>(rng() % 7200) : static_cast<Timestamp>(rng() % 120);
  }
  auto log = log_at(rows);

  std::map<Timestamp, std::size_t> histogram;
  for (const auto& [u, ts] : rows) histogram[ts - ts % 600] += 1;

  auto slices = slice_windows(log, WindowSpec{});
  REQUIRE(slices.size() == histogram.size());
  std::size_t i = 0;
  std::size_t total = 0;
  for (const auto& [start, count] : histogram) {
    CHECK(slices[i].window_start == start);
    CHECK(slices[i].events.size() == count);
    total += slices[i].events.size();
    ++i;
  }
  CHECK(total == log.size());
}

TEST_CASE("build_network: construction examples") {
  const UserId A = 0, B = 1, C = 2, D = 3;

  SUBCASE("A then D links A and D") {
    auto events = sequence({A, D});
    auto net = build_network(events);
    CHECK(net.n() == 2);
    CHECK(net.total_weight() == 1);
    CHECK(net.weight(A, D) == 1);
    CHECK(net.is_conversation());
  }
  SUBCASE("a monologue is not a conversation") {
    auto events = sequence({A, A, A});
    auto net = build_network(events);
    CHECK(net.edges().empty());
    CHECK(net.n() == 0);
    CHECK_FALSE(net.is_conversation());
    REQUIRE(net.isolated().size() == 1);
    CHECK(net.isolated()[0] == A);
    CHECK(net.message_count() == 3u);
  }
  SUBCASE("A,B,A,B,C,A") {
    // Adjacent pairs: (A,B) (B,A) (A,B) (B,C) (C,A).
    auto events = sequence({A, B, A, B, C, A});
    auto net = build_network(events);
    CHECK(net.weight(A, B) == 3);
    CHECK(net.weight(B, C) == 1);
    CHECK(net.weight(A, C) == 1);
    CHECK(net.weight(C, A) == 1);
    CHECK(net.total_weight() == 5);
    CHECK(net.n() == 3);
  }
  SUBCASE("empty input") {
    auto net = build_network({});
    CHECK_FALSE(net.is_conversation());
    CHECK(net.total_weight() == 0);
  }
}

TEST_CASE("build_network agrees with the adjacent-pair oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int len = static_cast<int>(rng() % 120);
    const int users = 1 + static_cast<int>(rng() % 8);
    std::vector<int> senders;
    std::vector<UserId> ids;
    for (int i = 0; i < len; ++i) {
      senders.push_back(static_cast<int>(rng() % users));
      ids.push_back(senders.back());
    }
    auto events = sequence(ids);
    auto net = build_network(events);
    auto expect = oracle::adjacent_pairs(senders);

    REQUIRE(net.edges().size() == expect.edges.size());
    for (const auto& e : net.edges()) {
      CHECK(expect.edges.at({e.u, e.v}) == e.weight);
      CHECK(net.weight(e.v, e.u) == e.weight);
    }
    CHECK(net.n() == expect.nodes.size());
    CHECK(net.total_weight() == expect.total_weight);

    Weight strength_sum = 0;
    for (auto s : net.strengths()) strength_sum += s;
    CHECK(strength_sum == 2 * net.total_weight());
    if (len > 0) CHECK(net.total_weight() <= len - 1);
  }
}

TEST_CASE("InteractionNetwork canonicalizes and validates edges") {
  InteractionNetwork net(0, 0, {{3, 1, 2}, {1, 3, 1}, {2, 1, 4}});
  REQUIRE(net.edges().size() == 2);
  CHECK(net.edges()[0] == Edge{1, 2, 4});
  CHECK(net.edges()[1] == Edge{1, 3, 3});
  CHECK(net.strength(1) == 7);
  CHECK(net.strength(9) == 0);
  CHECK_THROWS_AS(InteractionNetwork(0, 0, {{1, 1, 1}}), Error);
  CHECK_THROWS_AS(InteractionNetwork(0, 0, {{1, 2, 0}}), Error);
}

TEST_CASE("build_ensemble: conservation, ordering and window independence") {
  std::mt19937_64 rng(99);
  std::vector<std::pair<UserId, Timestamp>> rows;
  Timestamp t = 1538352000;
  for (int i = 0; i < 2000; ++i) {
    rows.push_back({static_cast<UserId>(rng() % 12), t});
    t += static_cast<Timestamp>(rng() % 200);
  }
  auto log = log_at(rows);
  WindowSpec spec;
  auto ensemble = build_ensemble(log, spec);

  std::size_t total = 0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const auto& net = ensemble.networks()[i];
    total += *net.message_count();
    CHECK(net.window_start() == window_origin(log, spec) + net.window_index() * spec.delta_t);
    if (i > 0) CHECK(net.window_start() > ensemble.networks()[i - 1].window_start());
  }
  CHECK(total == log.size());

  // Drop every event of the third network's window; the rest are unchanged.
  const auto dropped = ensemble.networks()[2].window_start();
  std::vector<std::pair<UserId, Timestamp>> kept;
  for (const auto& r : rows) {
    if (r.second < dropped || r.second >= dropped + spec.delta_t) kept.push_back(r);
  }
  auto reduced = build_ensemble(log_at(kept), spec);
  REQUIRE(reduced.size() == ensemble.size() - 1);
  std::size_t j = 0;
  for (const auto& net : ensemble.networks()) {
    if (net.window_start() == dropped) continue;
    CHECK(reduced.networks()[j].edges().size() == net.edges().size());
    CHECK(std::equal(net.edges().begin(), net.edges().end(), reduced.networks()[j].edges().begin()));
    ++j;
  }
}

TEST_CASE("build_ensemble: single-user log has no conversations") {
  auto log = log_at({{4, 0}, {4, 100}, {4, 900}, {4, 2000}});
  auto ensemble = build_ensemble(log, WindowSpec{});
  CHECK(ensemble.size() == 3);
  CHECK(ensemble.conversation_count() == 0);
}

TEST_CASE("ensemble JSONL export") {
  auto log = log_at({{0, 0}, {2, 1}, {0, 2}, {1, 3}, {1, 700}});
  auto ensemble = build_ensemble(log, WindowSpec{});
  std::stringstream out;
  write_ensemble(out, ensemble);
  CHECK(out.str() ==
        "{\"w\":0,\"i\":0,\"nodes\":[0,1,2],\"edges\":[[0,1,1],[0,2,2]]}\n"
        "{\"w\":600,\"i\":1,\"nodes\":[],\"edges\":[]}\n");

  auto back = read_ensemble(out, "g");
  REQUIRE(back.size() == 2);
  CHECK(back.networks()[0].weight(2, 0) == 2);
  CHECK_FALSE(back.networks()[0].message_count().has_value());
  std::stringstream again;
  write_ensemble(again, back);
  CHECK(again.str() == out.str());

  std::istringstream bad("{\"w\":0,\"i\":0,\"nodes\":[0,1,5],\"edges\":[[0,1,1]]}\n");
  CHECK_THROWS_AS(read_ensemble(bad), Error);
  std::istringstream missing("{\"w\":0,\"nodes\":[],\"edges\":[]}\n");
  CHECK_THROWS_AS(read_ensemble(missing), Error);
}
