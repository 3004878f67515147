#include <engage/ensemble.hpp>
#include <engage/io.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>

namespace engage {

StdMode parse_std_mode(std::string_view name) {
  if (name == "pop") return StdMode::population;
  if (name == "sample") return StdMode::sample;
  throw Error(ErrorKind::parameter, fmt::format("unknown std mode '{}'", name));
}

AveragingMode parse_averaging_mode(std::string_view name) {
  if (name == "zero") return AveragingMode::absent_as_zero;
  if (name == "present") return AveragingMode::appearances_only;
  throw Error(ErrorKind::parameter, fmt::format("unknown averaging mode '{}'", name));
}

std::string_view to_string(StdMode mode) { return mode == StdMode::population ? "pop" : "sample"; }

std::string_view to_string(AveragingMode mode) {
  return mode == AveragingMode::absent_as_zero ? "zero" : "present";
}

std::string_view to_string(EngagementClass label) {
  switch (label) {
    case EngagementClass::high: return "HIGH";
    case EngagementClass::medium: return "MEDIUM";
    case EngagementClass::low: return "LOW";
  }
  return "MEDIUM";
}

std::string_view to_string(RankClass cls) {
  switch (cls) {
    case RankClass::high: return "high";
    case RankClass::medium: return "medium";
    case RankClass::low: return "low";
    case RankClass::global: return "global";
  }
  return "global";
}

EngagementClass parse_class_label(std::string_view label) {
  if (label == "HIGH") return EngagementClass::high;
  if (label == "MEDIUM") return EngagementClass::medium;
  if (label == "LOW") return EngagementClass::low;
  throw Error(ErrorKind::schema, fmt::format("unknown class label '{}'", label));
}

EnsembleStats ensemble_stats(std::span<const WindowMetrics> metrics, StdMode mode) {
  if (metrics.size() < 2) {
    throw Error(ErrorKind::insufficient_data,
                fmt::format("need at least 2 conversation networks, have {}", metrics.size()));
  }
  const auto count = static_cast<double>(metrics.size());
  const auto [lo, hi] = std::minmax_element(
      metrics.begin(), metrics.end(),
      [](const WindowMetrics& a, const WindowMetrics& b) { return a.metrics.ei < b.metrics.ei; });
  // Identical values: report the mean and a zero spread exactly.
  if (lo->metrics.ei == hi->metrics.ei) return {lo->metrics.ei, 0.0, metrics.size()};
  double sum = 0.0;
  for (const auto& m : metrics) sum += m.metrics.ei;
  const double mean = sum / count;
  double squares = 0.0;
  for (const auto& m : metrics) {
    const double d = m.metrics.ei - mean;
    squares += d * d;
  }
  const double denom = mode == StdMode::population ? count : count - 1.0;
  return {mean, std::sqrt(squares / denom), metrics.size()};
}

EngagementClass classify_z(double z, Thresholds thresholds) {
  if (z >= thresholds.hi) return EngagementClass::high;
  if (z <= thresholds.lo) return EngagementClass::low;
  return EngagementClass::medium;
}

std::vector<ClassifiedNetwork> zscore_classify(std::span<const WindowMetrics> metrics,
                                               const EnsembleStats& stats,
                                               Thresholds thresholds) {
  if (!(thresholds.lo < thresholds.hi)) {
    throw Error(ErrorKind::parameter, "class thresholds must satisfy lo < hi");
  }
  if (!(stats.std_ei > 0.0)) {
    throw Error(ErrorKind::degenerate, "EI has zero spread across the ensemble");
  }
  std::vector<ClassifiedNetwork> out;
  out.reserve(metrics.size());
  for (const auto& m : metrics) {
    const double z = (m.metrics.ei - stats.mean_ei) / stats.std_ei;
    out.push_back({m.window_start, m.window_index, m.metrics.ei, z, classify_z(z, thresholds)});
  }
  return out;
}

namespace {

bool in_class(RankClass cls, EngagementClass label) {
  switch (cls) {
    case RankClass::high: return label == EngagementClass::high;
    case RankClass::medium: return label == EngagementClass::medium;
    case RankClass::low: return label == EngagementClass::low;
    case RankClass::global: return true;
  }
  return false;
}

}  // namespace

UserRanking rank_users(std::span<const WindowCentralities> centralities,
                       std::span<const ClassifiedNetwork> classified, RankClass cls,
                       std::size_t top_k, AveragingMode mode) {
  std::unordered_map<std::int64_t, EngagementClass> labels;
  for (const auto& c : classified) labels.emplace(c.window_index, c.label);

  // Canonical order keeps floating sums independent of input order.
  std::vector<const WindowCentralities*> rows;
  std::map<UserId, std::pair<double, std::size_t>> totals;  // sum, appearances
  for (const auto& row : centralities) {
    for (const auto& node : row.nodes) totals.try_emplace(node.user, 0.0, 0);
    if (cls != RankClass::global) {
      const auto it = labels.find(row.window_index);
      if (it == labels.end() || !in_class(cls, it->second)) continue;
    }
    rows.push_back(&row);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto* a, const auto* b) { return a->window_index < b->window_index; });

  UserRanking ranking;
  ranking.cls = cls;
  ranking.network_count = rows.size();
  if (rows.empty()) return ranking;

  for (const auto* row : rows) {
    for (const auto& node : row->nodes) {
      auto& t = totals[node.user];
      t.first += node.ei_centrality;
      ++t.second;
    }
  }
  for (const auto& [user, t] : totals) {
    if (mode == AveragingMode::absent_as_zero) {
      ranking.entries.push_back({user, t.first / static_cast<double>(rows.size())});
    } else if (t.second > 0) {
      ranking.entries.push_back({user, t.first / static_cast<double>(t.second)});
    }
  }
  std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                   [](const RankEntry& a, const RankEntry& b) {
                     return a.mean_ei_centrality > b.mean_ei_centrality;
                   });
  if (top_k > 0 && ranking.entries.size() > top_k) ranking.entries.resize(top_k);
  return ranking;
}

UserRanking rank_users(const NetworkEnsemble& ensemble,
                       std::span<const ClassifiedNetwork> classified, RankClass cls,
                       std::size_t top_k, AveragingMode mode) {
  const auto centralities = ensemble_centralities(ensemble);
  return rank_users(centralities, classified, cls, top_k, mode);
}

ZHistogram z_histogram(std::span<const ClassifiedNetwork> classified) {
  constexpr int kBins = 12;
  constexpr double kLo = -3.0;
  constexpr double kWidth = 0.5;
  ZHistogram h;
  for (int i = 0; i <= kBins; ++i) h.edges.push_back(kLo + kWidth * i);
  h.counts.assign(kBins, 0);
  for (const auto& c : classified) {
    const auto bin = static_cast<int>(std::floor((c.z - kLo) / kWidth));
    ++h.counts[static_cast<std::size_t>(std::clamp(bin, 0, kBins - 1))];
  }
  return h;
}

void write_classified(std::ostream& out, std::span<const ClassifiedNetwork> rows) {
  out << "window_index,ei,z,label\n";
  for (const auto& r : rows) {
    out << r.window_index << ',' << io::format_real(r.ei) << ',' << io::format_real(r.z) << ','
        << to_string(r.label) << '\n';
  }
}

std::vector<ClassifiedNetwork> read_classified(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || io::trim(line) != "window_index,ei,z,label") {
    throw Error(ErrorKind::schema, "classified file header mismatch", 1);
  }
  std::vector<ClassifiedNetwork> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    const auto f = io::split_csv(line);
    ClassifiedNetwork r;
    if (f.size() != 4 || !io::parse_int(f[0], r.window_index) || !io::parse_real(f[1], r.ei) ||
        !io::parse_real(f[2], r.z)) {
      throw Error(ErrorKind::schema, fmt::format("bad classified row at line {}", line_no),
                  line_no);
    }
    r.label = parse_class_label(io::trim(f[3]));
    rows.push_back(r);
  }
  return rows;
}

void write_ranking(std::ostream& out, const UserRanking& ranking) {
  out << "rank,user_id,mean_ei_centrality\n";
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    out << i + 1 << ',' << ranking.entries[i].user << ','
        << io::format_real(ranking.entries[i].mean_ei_centrality) << '\n';
  }
}

void write_histogram(std::ostream& out, const ZHistogram& histogram) {
  out << "{\"edges\":[";
  for (std::size_t i = 0; i < histogram.edges.size(); ++i) {
    out << (i ? "," : "") << io::format_real(histogram.edges[i]);
  }
  out << "],\"counts\":[";
  for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
    out << (i ? "," : "") << histogram.counts[i];
  }
  out << "]}\n";
}

}  // namespace engage
