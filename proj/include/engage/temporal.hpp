#pragma once

// Per-user engagement over time and two-period comparison.

#include <engage/core.hpp>
#include <engage/engagement.hpp>
#include <engage/ensemble.hpp>

#include <iosfwd>
#include <span>
#include <vector>

namespace engage {

struct SeriesPoint {
  Timestamp window_start = 0;
  double ei_centrality = 0.0;
};

struct UserSeries {
  UserId user = 0;
  std::vector<SeriesPoint> points;  // ascending window_start
};

/// Every conversation window the user takes part in. Unknown users get an
/// empty series.
UserSeries user_series(std::span<const WindowCentralities> centralities, UserId user);

struct PeriodRow {
  UserId user = 0;
  double whole = 0.0;  // each column divided by its own maximum
  double p1 = 0.0;
  double p2 = 0.0;
  double diff = 0.0;  // p2 - p1, in [-1, 1]
  // Mean EI centrality before normalization.
  double whole_mean = 0.0;
  double p1_mean = 0.0;
  double p2_mean = 0.0;
};

struct PeriodComparison {
  Timestamp split = 0;
  std::size_t p1_networks = 0;
  std::size_t p2_networks = 0;
  std::vector<PeriodRow> users;  // descending whole, ties by ascending ID
};

/// Mean EI centrality per user over the whole span, P1 = [.., split) and
/// P2 = [split, ..] (by window start), each column max-normalized. Users
/// with zero whole-period engagement are dropped. Returns the top_k users by
/// whole-period value (top_k = 0 keeps all). Throws Error{insufficient_data}
/// when either period has no conversation network.
PeriodComparison period_compare(std::span<const WindowCentralities> centralities,
                                Timestamp split, std::size_t top_k = 0,
                                AveragingMode mode = AveragingMode::absent_as_zero);

/// Rows with diff <= threshold, ascending diff (ties by ascending ID).
std::vector<PeriodRow> engagement_drop_report(const PeriodComparison& comparison,
                                              double threshold);

/// CSV: window_start,ei_centrality
void write_series(std::ostream& out, const UserSeries& series);
/// CSV: user_id,whole,p1,p2,diff
void write_period_compare(std::ostream& out, std::span<const PeriodRow> rows);
/// Bar-chart data: {"split":..,"users":[..],"whole":[..],"p1":[..],"p2":[..],"diff":[..]}
void write_period_plot(std::ostream& out, const PeriodComparison& comparison);

}  // namespace engage
