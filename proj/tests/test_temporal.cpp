#include <doctest.h>

#include "oracles.hpp"

#include <engage/synth.hpp>
#include <engage/temporal.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace engage;
using doctest::Approx;

namespace {

std::vector<WindowCentralities> centralities_of(const MessageLog& log) {
  return ensemble_centralities(build_ensemble(log, WindowSpec{}));
}

SyntheticCorpus dropout_corpus(std::uint64_t seed = 4) {
  Regime regime;
  regime.kind = RegimeKind::planted_dropout;
  regime.users = 50;
  regime.planted = 5;
  regime.rate = 40;
  regime.windows = 80;
  regime.seed = seed;
  return generate(regime, WindowSpec{});
}

}  // namespace

TEST_CASE("user_series examples") {
  auto log = MessageLog("g", {{0, 0, 0}, {1, 1, 1}, {0, 2, 2}, {1, 3, 3}, {0, 4, 4}});
  auto cents = centralities_of(log);
  // Users 0 and 1 with a single edge of weight 4: centrality 3.
  auto s = user_series(cents, 1);
  REQUIRE(s.points.size() == 1);
  CHECK(s.points[0].ei_centrality == 3.0);
  CHECK(s.points[0].window_start == 0);
  CHECK(user_series(cents, 42).points.empty());

  std::ostringstream out;
  write_series(out, s);
  CHECK(out.str() == "window_start,ei_centrality\n0,3\n");
}

TEST_CASE("period_compare: identical periods give zero diffs") {
  // Same round-robin window repeated on both sides of the split.
  Regime regime;
  regime.kind = RegimeKind::round_robin;
  regime.users = 3;
  regime.rate = 10;
  regime.windows = 4;
  auto corpus = generate(regime, WindowSpec{});
  auto cents = centralities_of(corpus.log);
  const Timestamp split = cents[2].window_start;
  auto cmp = period_compare(cents, split);
  CHECK(cmp.p1_networks == 2);
  CHECK(cmp.p2_networks == 2);
  for (const auto& r : cmp.users) CHECK(r.diff == Approx(0.0));
}

TEST_CASE("period_compare invariants on random corpora") {
  Regime regime;
  regime.kind = RegimeKind::uniform_random;
  regime.users = 20;
  regime.rate = 15;
  regime.windows = 60;
  regime.seed = 12;
  auto corpus = generate(regime, WindowSpec{});
  auto cents = centralities_of(corpus.log);
  const Timestamp split = cents[cents.size() / 3].window_start;
  auto cmp = period_compare(cents, split);

  double max_whole = 0, max_p1 = 0, max_p2 = 0;
  std::set<UserId> seen;
  for (std::size_t i = 0; i < cmp.users.size(); ++i) {
    const auto& r = cmp.users[i];
    CHECK(seen.insert(r.user).second);
    CHECK(r.diff >= -1.0);
    CHECK(r.diff <= 1.0);
    if (i > 0) CHECK(cmp.users[i - 1].whole >= r.whole);
    max_whole = std::max(max_whole, r.whole);
    max_p1 = std::max(max_p1, r.p1);
    max_p2 = std::max(max_p2, r.p2);
    const double n1 = static_cast<double>(cmp.p1_networks);
    const double n2 = static_cast<double>(cmp.p2_networks);
    CHECK(r.whole_mean == Approx((n1 * r.p1_mean + n2 * r.p2_mean) / (n1 + n2)).epsilon(1e-12));
  }
  CHECK(max_whole == 1.0);
  CHECK(max_p1 == 1.0);
  CHECK(max_p2 == 1.0);

  // Shifting every timestamp and the split together changes nothing.
  std::vector<MessageEvent> shifted(corpus.log.events().begin(), corpus.log.events().end());
  const Timestamp offset = 7 * 86400;
  for (auto& e : shifted) e.timestamp += offset;
  auto cmp2 = period_compare(centralities_of(MessageLog("g", shifted)), split + offset);
  REQUIRE(cmp2.users.size() == cmp.users.size());
  for (std::size_t i = 0; i < cmp.users.size(); ++i) {
    CHECK(cmp2.users[i].user == cmp.users[i].user);
    CHECK(cmp2.users[i].diff == cmp.users[i].diff);
  }

  auto top = period_compare(cents, split, 5);
  REQUIRE(top.users.size() == 5);
  CHECK(top.users[0].user == cmp.users[0].user);
}

TEST_CASE("period_compare needs both periods") {
  auto corpus = dropout_corpus();
  auto cents = centralities_of(corpus.log);
  CHECK_THROWS_AS(period_compare(cents, cents.front().window_start), Error);
  CHECK_THROWS_AS(period_compare(cents, cents.back().window_start + 1), Error);
}

TEST_CASE("planted dropouts have the most negative diffs") {
  auto corpus = dropout_corpus();
  auto cents = centralities_of(corpus.log);
  auto cmp = period_compare(cents, *corpus.split);

  auto drops = engagement_drop_report(cmp, -0.61);
  std::set<UserId> flagged;
  for (const auto& r : drops) flagged.insert(r.user);
  CHECK(flagged == std::set<UserId>(corpus.planted.begin(), corpus.planted.end()));
  for (std::size_t i = 1; i < drops.size(); ++i) CHECK(drops[i - 1].diff <= drops[i].diff);

  // Exhaustive recomputation from the raw log.
  auto means = oracle::period_means(corpus.log, 600, *corpus.split);
  double mw = 0, m1 = 0, m2 = 0;
  for (const auto& [u, m] : means) {
    mw = std::max(mw, m.whole);
    m1 = std::max(m1, m.p1);
    m2 = std::max(m2, m.p2);
  }
  for (const auto& r : cmp.users) {
    const auto& m = means.at(r.user);
    CHECK(r.diff == Approx(m.p2 / m2 - m.p1 / m1).epsilon(1e-12));
    CHECK(r.whole == Approx(m.whole / mw).epsilon(1e-12));
  }
}

TEST_CASE("engagement_drop_report bounds") {
  auto corpus = dropout_corpus(9);
  auto cmp = period_compare(centralities_of(corpus.log), *corpus.split);
  CHECK(engagement_drop_report(cmp, -1.5).empty());
  CHECK(engagement_drop_report(cmp, 1.0).size() == cmp.users.size());
}

TEST_CASE("period comparison outputs") {
  PeriodComparison cmp;
  cmp.split = 100;
  cmp.users = {{3, 1.0, 1.0, 0.5, -0.5, 0, 0, 0}, {1, 0.5, 0.25, 1.0, 0.75, 0, 0, 0}};
  std::ostringstream csv;
  write_period_compare(csv, cmp.users);
  CHECK(csv.str() == "user_id,whole,p1,p2,diff\n3,1,1,0.5,-0.5\n1,0.5,0.25,1,0.75\n");
  std::ostringstream plot;
  write_period_plot(plot, cmp);
  CHECK(plot.str() ==
        "{\"split\":100,\"users\":[3,1],\"whole\":[1,0.5],\"p1\":[1,0.25],\"p2\":[0.5,1],"
        "\"diff\":[-0.5,0.75]}\n");
}
