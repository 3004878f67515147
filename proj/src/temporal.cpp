#include <engage/io.hpp>
#include <engage/temporal.hpp>

#include <algorithm>
#include <map>
#include <ostream>

namespace engage {

UserSeries user_series(std::span<const WindowCentralities> centralities, UserId user) {
  UserSeries series{user, {}};
  for (const auto& row : centralities) {
    for (const auto& node : row.nodes) {
      if (node.user == user) series.points.push_back({row.window_start, node.ei_centrality});
    }
  }
  std::sort(series.points.begin(), series.points.end(),
            [](const auto& a, const auto& b) { return a.window_start < b.window_start; });
  return series;
}

namespace {

struct Accumulator {
  double sum[3] = {0.0, 0.0, 0.0};         // whole, p1, p2
  std::size_t present[3] = {0, 0, 0};
};

double mean_of(const Accumulator& a, int column, std::size_t networks, AveragingMode mode) {
  const std::size_t denom = mode == AveragingMode::absent_as_zero ? networks : a.present[column];
  return denom == 0 ? 0.0 : a.sum[column] / static_cast<double>(denom);
}

}  // namespace

PeriodComparison period_compare(std::span<const WindowCentralities> centralities,
                                Timestamp split, std::size_t top_k, AveragingMode mode) {
  std::vector<const WindowCentralities*> rows;
  rows.reserve(centralities.size());
  for (const auto& row : centralities) rows.push_back(&row);
  std::sort(rows.begin(), rows.end(),
            [](const auto* a, const auto* b) { return a->window_index < b->window_index; });

  PeriodComparison cmp;
  cmp.split = split;
  std::map<UserId, Accumulator> acc;
  for (const auto* row : rows) {
    const int period = row->window_start < split ? 1 : 2;
    ++(period == 1 ? cmp.p1_networks : cmp.p2_networks);
    for (const auto& node : row->nodes) {
      auto& a = acc[node.user];
      for (int column : {0, period}) {
        a.sum[column] += node.ei_centrality;
        ++a.present[column];
      }
    }
  }
  if (cmp.p1_networks == 0 || cmp.p2_networks == 0) {
    throw Error(ErrorKind::insufficient_data,
                "both periods need at least one conversation network");
  }

  const std::size_t networks[3] = {rows.size(), cmp.p1_networks, cmp.p2_networks};
  double max[3] = {0.0, 0.0, 0.0};
  for (const auto& [user, a] : acc) {
    PeriodRow r;
    r.user = user;
    r.whole_mean = mean_of(a, 0, networks[0], mode);
    r.p1_mean = mean_of(a, 1, networks[1], mode);
    r.p2_mean = mean_of(a, 2, networks[2], mode);
    if (!(r.whole_mean > 0.0)) continue;
    max[0] = std::max(max[0], r.whole_mean);
    max[1] = std::max(max[1], r.p1_mean);
    max[2] = std::max(max[2], r.p2_mean);
    cmp.users.push_back(r);
  }
  auto normalized = [](double v, double m) { return m > 0.0 ? v / m : 0.0; };
  for (auto& r : cmp.users) {
    r.whole = normalized(r.whole_mean, max[0]);
    r.p1 = normalized(r.p1_mean, max[1]);
    r.p2 = normalized(r.p2_mean, max[2]);
    r.diff = r.p2 - r.p1;
  }
  std::stable_sort(cmp.users.begin(), cmp.users.end(),
                   [](const PeriodRow& a, const PeriodRow& b) { return a.whole_mean > b.whole_mean; });
  if (top_k > 0 && cmp.users.size() > top_k) cmp.users.resize(top_k);
  return cmp;
}

std::vector<PeriodRow> engagement_drop_report(const PeriodComparison& comparison,
                                              double threshold) {
  std::vector<PeriodRow> out;
  for (const auto& r : comparison.users) {
    if (r.diff <= threshold) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const PeriodRow& a, const PeriodRow& b) {
    return a.diff != b.diff ? a.diff < b.diff : a.user < b.user;
  });
  return out;
}

void write_series(std::ostream& out, const UserSeries& series) {
  out << "window_start,ei_centrality\n";
  for (const auto& p : series.points) {
    out << p.window_start << ',' << io::format_real(p.ei_centrality) << '\n';
  }
}

void write_period_compare(std::ostream& out, std::span<const PeriodRow> rows) {
  out << "user_id,whole,p1,p2,diff\n";
  for (const auto& r : rows) {
    out << r.user << ',' << io::format_real(r.whole) << ',' << io::format_real(r.p1) << ','
        << io::format_real(r.p2) << ',' << io::format_real(r.diff) << '\n';
  }
}

void write_period_plot(std::ostream& out, const PeriodComparison& comparison) {
  auto column = [&](const char* name, auto field) {
    out << ",\"" << name << "\":[";
    for (std::size_t i = 0; i < comparison.users.size(); ++i) {
      out << (i ? "," : "") << field(comparison.users[i]);
    }
    out << ']';
  };
  out << "{\"split\":" << comparison.split;
  column("users", [](const PeriodRow& r) { return std::to_string(r.user); });
  column("whole", [](const PeriodRow& r) { return io::format_real(r.whole); });
  column("p1", [](const PeriodRow& r) { return io::format_real(r.p1); });
  column("p2", [](const PeriodRow& r) { return io::format_real(r.p2); });
  column("diff", [](const PeriodRow& r) { return io::format_real(r.diff); });
  out << "}\n";
}

}  // namespace engage
