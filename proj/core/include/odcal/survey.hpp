#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "odcal/rng.hpp"

namespace odcal {

/// Position at which a respondent named the topic among their top three
/// problems; 0 means not mentioned.
using MentionRank = std::uint8_t;

struct SurveyDataset {
  std::vector<MentionRank> ranks;
  std::string label;

  std::size_t size() const noexcept { return ranks.size(); }
  /// Fraction of respondents with rank >= 1.
  double mentioned_fraction() const noexcept;
};

struct TargetPoint {
  std::string period;
  std::optional<double> proportion;  // empty when the month has no data
};

struct TargetSeries {
  std::vector<TargetPoint> points;

  std::size_t size() const noexcept { return points.size(); }
  std::size_t present_count() const noexcept;
};

/// Opinion level at or above which an agent counts as concerned.
class ConcernThreshold {
 public:
  explicit ConcernThreshold(double value);
  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

 private:
  double value_;
};

/// Sampling law for one rank category: Normal(mean, sd) restricted to
/// [lo, hi) (or [lo, hi] when `closed_hi`).
struct OpinionCategory {
  double mean;
  double sd;
  double lo;
  double hi;
  bool closed_hi;

  bool contains(double x) const noexcept { return x >= lo && (closed_hi ? x <= hi : x < hi); }
};

/// Rank 0 maps below the threshold; ranks 1..3 split [c_th, 1] into thirds
/// with rank 1 on top.
OpinionCategory opinion_category(MentionRank rank, ConcernThreshold c_th);

/// One truncated-Gaussian draw per respondent, in respondent order.
std::vector<double> initialize_opinions(const SurveyDataset& dataset, ConcernThreshold c_th,
                                        Rng& rng);

/// Draws a single opinion for `rank` by rejection resampling.
double sample_opinion(MentionRank rank, ConcernThreshold c_th, Rng& rng);

/// CSV "respondent_id,rank".
SurveyDataset parse_survey(const std::filesystem::path& path);
void write_survey(const SurveyDataset& dataset, const std::filesystem::path& path);

/// CSV "period,proportion"; empty proportion = missing month.
TargetSeries parse_targets(const std::filesystem::path& path);
void write_targets(const TargetSeries& series, const std::filesystem::path& path);

/// Validates proportions in (0,1] and at least one present value.
void validate_targets(const TargetSeries& series);

/// i.i.d. ranks with P(k) = p[k-1] for k = 1..3 and P(0) = 1 - sum.
SurveyDataset synth_dataset(std::size_t n, double p1, double p2, double p3, std::uint64_t seed);

}  // namespace odcal
