#include "odcal/survey.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "odcal/csv.hpp"
#include "odcal/error.hpp"

namespace odcal {

namespace {

std::ifstream open_with_header(const std::filesystem::path& path, std::string_view header) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": missing header", 1);
  auto fields = csv::split(line);
  std::string joined;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) joined += ',';
    joined += csv::trim(fields[i]);
  }
  if (!joined.empty() && static_cast<unsigned char>(joined[0]) == 0xEF && joined.size() >= 3)
    joined.erase(0, 3);  // UTF-8 BOM
  if (joined != header)
    throw ParseError(path.string() + ": expected header '" + std::string(header) + "'", 1);
  return in;
}

bool blank(std::string_view line) {
  return csv::trim(line).empty();
}

}  // namespace

double SurveyDataset::mentioned_fraction() const noexcept {
  if (ranks.empty()) return 0.0;
  const auto hits = std::count_if(ranks.begin(), ranks.end(), [](MentionRank r) { return r > 0; });
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

std::size_t TargetSeries::present_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      points.begin(), points.end(), [](const TargetPoint& p) { return p.proportion.has_value(); }));
}

ConcernThreshold::ConcernThreshold(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0))
    throw InvalidParameter("concern threshold must lie in (0,1), got " + csv::format(value));
}

OpinionCategory opinion_category(MentionRank rank, ConcernThreshold c_th) {
  const double c = c_th.value();
  const double third = (1.0 - c) / 3.0;
  switch (rank) {
    case 0:
      return {c / 2.0, c / 6.0, 0.0, c, false};
    case 1:
      return {c + 5.0 / 6.0 * (1.0 - c), (1.0 - c) / 18.0, c + 2.0 * third, 1.0, true};
    case 2:
      return {c + 3.0 / 6.0 * (1.0 - c), (1.0 - c) / 18.0, c + third, c + 2.0 * third, false};
    case 3:
      return {c + 1.0 / 6.0 * (1.0 - c), (1.0 - c) / 18.0, c, c + third, false};
    default:
      throw InvalidParameter("mention rank must be 0..3, got " + std::to_string(rank));
  }
}

double sample_opinion(MentionRank rank, ConcernThreshold c_th, Rng& rng) {
  const OpinionCategory cat = opinion_category(rank, c_th);
  for (;;) {
    const double x = rng.normal(cat.mean, cat.sd);
    if (cat.contains(x)) return x;
  }
}

std::vector<double> initialize_opinions(const SurveyDataset& dataset, ConcernThreshold c_th,
                                        Rng& rng) {
  if (dataset.ranks.empty()) throw InvalidParameter("survey dataset has no respondents");
  std::vector<double> x;
  x.reserve(dataset.size());
  for (MentionRank r : dataset.ranks) x.push_back(sample_opinion(r, c_th, rng));
  return x;
}

SurveyDataset parse_survey(const std::filesystem::path& path) {
  auto in = open_with_header(path, "respondent_id,rank");
  SurveyDataset out;
  out.label = path.stem().string();
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto fields = csv::split(line);
    if (fields.size() != 2 || csv::trim(fields[0]).empty())
      throw ParseError("malformed survey row", lineno);
    auto rank = csv::to_int(fields[1]);
    if (!rank) throw ParseError("rank is not an integer", lineno);
    if (*rank < 0 || *rank > 3)
      throw ParseError("rank " + std::to_string(*rank) + " outside {0,1,2,3}", lineno);
    out.ranks.push_back(static_cast<MentionRank>(*rank));
  }
  if (out.ranks.empty()) throw ParseError("no respondents in " + path.string());
  return out;
}

void write_survey(const SurveyDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "respondent_id,rank\n";
  for (std::size_t i = 0; i < dataset.ranks.size(); ++i)
    out << (i + 1) << ',' << static_cast<int>(dataset.ranks[i]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void validate_targets(const TargetSeries& series) {
  for (const auto& p : series.points) {
    if (p.proportion && !(*p.proportion > 0.0 && *p.proportion <= 1.0))
      throw InvalidParameter("target proportion for " + p.period + " must lie in (0,1], got " +
                             csv::format(*p.proportion));
  }
  if (series.present_count() == 0) throw InvalidParameter("target series has no present values");
}

TargetSeries parse_targets(const std::filesystem::path& path) {
  auto in = open_with_header(path, "period,proportion");
  TargetSeries out;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto fields = csv::split(line);
    if (fields.size() != 2) throw ParseError("malformed target row", lineno);
    TargetPoint point{std::string(csv::trim(fields[0])), std::nullopt};
    if (point.period.empty()) throw ParseError("empty period label", lineno);
    if (!csv::trim(fields[1]).empty()) {
      auto v = csv::to_double(fields[1]);
      if (!v) throw ParseError("proportion is not a number", lineno);
      if (!(*v > 0.0 && *v <= 1.0))
        throw ParseError("proportion " + csv::format(*v) + " outside (0,1]", lineno);
      point.proportion = *v;
    }
    out.points.push_back(std::move(point));
  }
  if (out.present_count() == 0) throw ParseError("target series has no present values");
  return out;
}

void write_targets(const TargetSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "period,proportion\n";
  for (const auto& p : series.points) {
    out << p.period << ',';
    if (p.proportion) out << csv::format(*p.proportion);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SurveyDataset synth_dataset(std::size_t n, double p1, double p2, double p3, std::uint64_t seed) {
  if (p1 < 0 || p2 < 0 || p3 < 0 || p1 + p2 + p3 > 1.0 + 1e-12)
    throw InvalidParameter("rank proportions must be non-negative with sum <= 1");
  if (n == 0) throw InvalidParameter("respondent count must be positive");
  Rng rng(seed);
  SurveyDataset out;
  out.label = "synthetic";
  out.ranks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    MentionRank r = 0;
    if (u < p1)
      r = 1;
    else if (u < p1 + p2)
      r = 2;
    else if (u < p1 + p2 + p3)
      r = 3;
    out.ranks.push_back(r);
  }
  return out;
}

}  // namespace odcal
