#pragma once

// Ensemble-level statistics: z-scores of the network EI, HIGH/MEDIUM/LOW
// classes and per-class user rankings by mean EI centrality.

#include <engage/core.hpp>
#include <engage/engagement.hpp>

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace engage {

enum class StdMode { population, sample };
enum class AveragingMode { absent_as_zero, appearances_only };
enum class EngagementClass { high, medium, low };
enum class RankClass { high, medium, low, global };

StdMode parse_std_mode(std::string_view name);            // "pop" | "sample"
AveragingMode parse_averaging_mode(std::string_view name);  // "zero" | "present"
std::string_view to_string(StdMode mode);
std::string_view to_string(AveragingMode mode);
std::string_view to_string(EngagementClass label);  // "HIGH" | "MEDIUM" | "LOW"
std::string_view to_string(RankClass cls);          // "high" | ... | "global"
EngagementClass parse_class_label(std::string_view label);

struct EnsembleStats {
  double mean_ei = 0.0;
  double std_ei = 0.0;
  std::size_t count = 0;
};

/// Mean and standard deviation of the EI values. Throws
/// Error{insufficient_data} for fewer than two networks.
EnsembleStats ensemble_stats(std::span<const WindowMetrics> metrics,
                             StdMode mode = StdMode::population);

/// z >= hi is HIGH, z <= lo is LOW, anything between is MEDIUM.
struct Thresholds {
  double lo = -1.0;
  double hi = 1.0;
};

struct ClassifiedNetwork {
  Timestamp window_start = 0;
  std::int64_t window_index = 0;
  double ei = 0.0;
  double z = 0.0;
  EngagementClass label = EngagementClass::medium;
};

EngagementClass classify_z(double z, Thresholds thresholds = {});

/// Throws Error{degenerate} when std_ei is 0 and Error{parameter} when
/// lo >= hi.
std::vector<ClassifiedNetwork> zscore_classify(std::span<const WindowMetrics> metrics,
                                               const EnsembleStats& stats,
                                               Thresholds thresholds = {});

struct RankEntry {
  UserId user = 0;
  double mean_ei_centrality = 0.0;
};

struct UserRanking {
  RankClass cls = RankClass::global;
  std::size_t network_count = 0;  // networks in the class
  std::vector<RankEntry> entries;  // descending mean, ties by ascending ID
};

/// Mean EI centrality per user over the networks of one class. With
/// absent_as_zero the denominator is the class size and every user seen in
/// any conversation network is listed; with appearances_only it is the number
/// of class networks the user appears in. Returns at most top_k entries
/// (top_k = 0 means all). An empty class yields an empty ranking.
UserRanking rank_users(std::span<const WindowCentralities> centralities,
                       std::span<const ClassifiedNetwork> classified, RankClass cls,
                       std::size_t top_k, AveragingMode mode = AveragingMode::absent_as_zero);

/// Convenience overload that derives centralities from the ensemble.
UserRanking rank_users(const NetworkEnsemble& ensemble,
                       std::span<const ClassifiedNetwork> classified, RankClass cls,
                       std::size_t top_k, AveragingMode mode = AveragingMode::absent_as_zero);

/// z-score histogram: fixed 0.5-wide bins over [-3, 3]; values outside fall
/// into the first or last bin.
struct ZHistogram {
  std::vector<double> edges;         // 13 edges
  std::vector<std::size_t> counts;  // 12 bins
};

ZHistogram z_histogram(std::span<const ClassifiedNetwork> classified);

/// CSV: window_index,ei,z,label
void write_classified(std::ostream& out, std::span<const ClassifiedNetwork> rows);
std::vector<ClassifiedNetwork> read_classified(std::istream& in);
/// CSV: rank,user_id,mean_ei_centrality
void write_ranking(std::ostream& out, const UserRanking& ranking);
/// JSON: {"edges":[...],"counts":[...]}
void write_histogram(std::ostream& out, const ZHistogram& histogram);

}  // namespace engage
