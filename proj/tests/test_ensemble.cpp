#include <doctest.h>

#include <engage/ensemble.hpp>
#include <engage/synth.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

using namespace engage;
using doctest::Approx;

namespace {

std::vector<WindowMetrics> with_ei(const std::vector<double>& values) {
  std::vector<WindowMetrics> rows;
  for (std::size_t i = 0; i < values.size(); ++i) {
    WindowMetrics r;
    r.window_index = static_cast<std::int64_t>(i);
    r.window_start = static_cast<Timestamp>(600 * i);
    r.metrics.ei = values[i];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("ensemble_stats") {
  auto flat = ensemble_stats(with_ei({4, 4, 4}));
  CHECK(flat.mean_ei == 4.0);
  CHECK(flat.std_ei == 0.0);
  CHECK(flat.count == 3);

  auto two = ensemble_stats(with_ei({2, 6}));
  CHECK(two.mean_ei == 4.0);
  CHECK(two.std_ei == 2.0);
  CHECK(ensemble_stats(with_ei({2, 6}), StdMode::sample).std_ei == Approx(std::sqrt(8.0)));

  CHECK_THROWS_AS(ensemble_stats(with_ei({3})), Error);
  try {
    ensemble_stats(with_ei({}));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::insufficient_data);
  }
}

TEST_CASE("zscore_classify thresholds are inclusive") {
  auto rows = with_ei({2, 4, 6});
  // mean 4, population std sqrt(8/3); use explicit stats for exact z.
  EnsembleStats stats{4.0, 2.0, 3};
  auto classified = zscore_classify(rows, stats);
  CHECK(classified[0].z == -1.0);
  CHECK(classified[0].label == EngagementClass::low);
  CHECK(classified[1].z == 0.0);
  CHECK(classified[1].label == EngagementClass::medium);
  CHECK(classified[2].z == 1.0);
  CHECK(classified[2].label == EngagementClass::high);

  CHECK(classify_z(0.999) == EngagementClass::medium);
  CHECK(classify_z(-0.999) == EngagementClass::medium);
  CHECK(classify_z(0.5, {-0.5, 0.5}) == EngagementClass::high);

  CHECK_THROWS_AS(zscore_classify(rows, EnsembleStats{4.0, 0.0, 3}), Error);
  CHECK_THROWS_AS(zscore_classify(rows, stats, {1.0, -1.0}), Error);
}

TEST_CASE("z-scores are standardized and labels are affine invariant") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> ei(2 + rng() % 200);
    for (auto& v : ei) v = static_cast<double>(rng() % 10000) / 1000.0;
    if (std::all_of(ei.begin(), ei.end(), [&](double v) { return v == ei[0]; })) continue;
    auto rows = with_ei(ei);
    auto classified = zscore_classify(rows, ensemble_stats(rows));
    double mean = 0, sq = 0;
    for (const auto& c : classified) mean += c.z;
    mean /= static_cast<double>(classified.size());
    for (const auto& c : classified) sq += (c.z - mean) * (c.z - mean);
    CHECK(std::fabs(mean) < 1e-9);
    CHECK(std::fabs(std::sqrt(sq / static_cast<double>(classified.size())) - 1.0) < 1e-9);

    const double a = 0.5 + static_cast<double>(rng() % 100) / 10.0;
    const double b = static_cast<double>(rng() % 100) - 50.0;
    std::vector<double> moved(ei);
    for (auto& v : moved) v = a * v + b;
    auto rows2 = with_ei(moved);
    auto classified2 = zscore_classify(rows2, ensemble_stats(rows2));
    for (std::size_t i = 0; i < classified.size(); ++i) {
      // Values sitting on a threshold can flip by rounding; skip those.
      if (std::fabs(std::fabs(classified[i].z) - 1.0) < 1e-9) continue;
      CHECK(classified[i].label == classified2[i].label);
    }
  }
}

TEST_CASE("rank_users: equal pair, absent users and tie order") {
  // One class network where users 0 and 1 interact equally, plus a second
  // network (another class) with users 2 and 3.
  std::vector<WindowCentralities> cents = {
      {0, 0, 1.0, {{0, 1, 1.0}, {1, 1, 1.0}}},
      {600, 1, 2.0, {{2, 2, 2.0}, {3, 2, 2.0}}},
  };
  std::vector<ClassifiedNetwork> classified = {
      {0, 0, 1.0, 1.0, EngagementClass::high},
      {600, 1, 2.0, 0.0, EngagementClass::medium},
  };
  auto high = rank_users(cents, classified, RankClass::high, 0);
  REQUIRE(high.entries.size() == 4);
  CHECK(high.network_count == 1);
  CHECK(high.entries[0].user == 0);
  CHECK(high.entries[1].user == 1);
  CHECK(high.entries[0].mean_ei_centrality == high.entries[1].mean_ei_centrality);
  CHECK(high.entries[2].mean_ei_centrality == 0.0);
  CHECK(high.entries[2].user == 2);

  auto present = rank_users(cents, classified, RankClass::high, 0, AveragingMode::appearances_only);
  CHECK(present.entries.size() == 2);

  auto low = rank_users(cents, classified, RankClass::low, 5);
  CHECK(low.entries.empty());
  CHECK(low.network_count == 0);

  auto global = rank_users(cents, classified, RankClass::global, 1);
  REQUIRE(global.entries.size() == 1);
  CHECK(global.entries[0].user == 2);
  CHECK(global.entries[0].mean_ei_centrality == 1.0);
}

TEST_CASE("rankings: partition identity and order independence") {
  Regime regime;
  regime.kind = RegimeKind::uniform_random;
  regime.users = 15;
  regime.rate = 25;
  regime.windows = 120;
  regime.seed = 41;
  auto corpus = generate(regime, WindowSpec{});
  auto ensemble = build_ensemble(corpus.log, WindowSpec{});
  auto metrics = ensemble_metrics(ensemble);
  auto classified = zscore_classify(metrics, ensemble_stats(metrics));
  auto cents = ensemble_centralities(ensemble);

  std::size_t sizes[3] = {0, 0, 0};
  for (const auto& c : classified) ++sizes[static_cast<int>(c.label)];
  CHECK(sizes[0] + sizes[1] + sizes[2] == metrics.size());

  auto global = rank_users(cents, classified, RankClass::global, 0);
  std::map<UserId, double> combined;
  for (auto cls : {RankClass::high, RankClass::medium, RankClass::low}) {
    auto r = rank_users(cents, classified, cls, 0);
    for (const auto& e : r.entries) {
      combined[e.user] += e.mean_ei_centrality * static_cast<double>(r.network_count);
    }
  }
  for (const auto& e : global.entries) {
    CHECK(e.mean_ei_centrality ==
          Approx(combined[e.user] / static_cast<double>(metrics.size())).epsilon(1e-12));
  }

  std::mt19937_64 rng(1);
  auto shuffled_cents = cents;
  auto shuffled_classes = classified;
  std::shuffle(shuffled_cents.begin(), shuffled_cents.end(), rng);
  std::shuffle(shuffled_classes.begin(), shuffled_classes.end(), rng);
  for (auto cls : {RankClass::high, RankClass::medium, RankClass::low, RankClass::global}) {
    auto a = rank_users(cents, classified, cls, 0);
    auto b = rank_users(shuffled_cents, shuffled_classes, cls, 0);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      CHECK(a.entries[i].user == b.entries[i].user);
      CHECK(a.entries[i].mean_ei_centrality == b.entries[i].mean_ei_centrality);
    }
  }
}

TEST_CASE("broadcaster hub tops the HIGH ranking") {
  Regime regime;
  regime.kind = RegimeKind::broadcaster;
  regime.users = 8;
  regime.rate = 40;
  regime.windows = 70;
  auto corpus = generate(regime, WindowSpec{});
  auto ensemble = build_ensemble(corpus.log, WindowSpec{});
  auto metrics = ensemble_metrics(ensemble);
  auto classified = zscore_classify(metrics, ensemble_stats(metrics));
  auto cents = ensemble_centralities(ensemble);

  auto high = rank_users(cents, classified, RankClass::high, 3);
  REQUIRE_FALSE(high.entries.empty());
  CHECK(high.entries[0].user == 0);

  // Exhaustive recomputation of the hub's HIGH mean.
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& c : classified) {
    if (c.label != EngagementClass::high) continue;
    ++count;
    for (const auto& row : cents) {
      if (row.window_index != c.window_index) continue;
      for (const auto& node : row.nodes) {
        if (node.user == 0) sum += node.ei_centrality;
      }
    }
  }
  CHECK(high.entries[0].mean_ei_centrality == Approx(sum / static_cast<double>(count)));
}

TEST_CASE("z histogram bins") {
  std::vector<ClassifiedNetwork> rows;
  for (double z : {-5.0, -3.0, -0.1, 0.0, 0.49, 2.99, 3.0, 9.0}) rows.push_back({0, 0, 0.0, z, classify_z(z)});
  auto h = z_histogram(rows);
  REQUIRE(h.edges.size() == 13);
  REQUIRE(h.counts.size() == 12);
  CHECK(h.edges.front() == -3.0);
  CHECK(h.edges.back() == 3.0);
  CHECK(h.counts[0] == 2);
  CHECK(h.counts[5] == 1);
  CHECK(h.counts[6] == 2);
  CHECK(h.counts[11] == 3);
  std::ostringstream out;
  write_histogram(out, h);
  CHECK(out.str().rfind("{\"edges\":[-3,-2.5,", 0) == 0);
}

TEST_CASE("classified and ranking CSVs") {
  std::vector<ClassifiedNetwork> rows = {{0, 3, 2.5, -1.0, EngagementClass::low},
                                         {0, 7, 4.25, 1.0, EngagementClass::high}};
  std::stringstream out;
  write_classified(out, rows);
  CHECK(out.str() == "window_index,ei,z,label\n3,2.5,-1,LOW\n7,4.25,1,HIGH\n");
  auto back = read_classified(out);
  REQUIRE(back.size() == 2);
  CHECK(back[1].label == EngagementClass::high);
  CHECK(back[1].ei == 4.25);

  UserRanking ranking{RankClass::global, 2, {{5, 0.75}, {2, 0.5}}};
  std::ostringstream r;
  write_ranking(r, ranking);
  CHECK(r.str() == "rank,user_id,mean_ei_centrality\n1,5,0.75\n2,2,0.5\n");

  std::istringstream bad("window_index,ei,z,label\n1,2,3,EXTREME\n");
  CHECK_THROWS_AS(read_classified(bad), Error);
}

TEST_CASE("identical EI values are a degenerate ensemble") {
  Regime regime;
  regime.kind = RegimeKind::dominant_pair;
  regime.users = 9;
  regime.rate = 25;
  regime.windows = 50;
  const auto ensemble = build_ensemble(generate(regime, WindowSpec{}).log, WindowSpec{});
  const auto metrics = ensemble_metrics(ensemble);
  const auto stats = ensemble_stats(metrics);
  CHECK(stats.std_ei == 0.0);
  CHECK(stats.mean_ei == metrics.front().metrics.ei);
  CHECK_THROWS_AS(zscore_classify(metrics, stats), Error);
}
