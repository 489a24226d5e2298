#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tropescope/model.hpp"

namespace tropescope {

enum class Axis {
  TropesPerFilm,  // one value per film
  FilmsPerTrope,  // one value per trope
};

std::string_view to_string(Axis axis);
/// Accepts "films"/"tropes-per-film" and "tropes"/"films-per-trope".
Axis axis_from_string(std::string_view text);

/// nobs, min, max, mean, sample variance (n - 1), and the population-moment
/// skewness m3/m2^1.5 and excess kurtosis m4/m2^2 - 3. Skewness and
/// kurtosis are empty when every value is equal.
struct DescriptiveSummary {
  std::size_t nobs = 0;
  double min = 0;
  double max = 0;
  double mean = 0;
  double variance = 0;
  std::optional<double> skewness;
  std::optional<double> kurtosis;
};

using FrequencyHistogram = std::map<std::size_t, std::size_t>;

struct BoxplotSummary {
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double iqr = 0;
  double whisker_low = 0;
  double whisker_high = 0;
  std::size_t outlier_count = 0;
};

/// Sorted ascending. Films with no tropes contribute zeros.
std::vector<std::size_t> degree_sequence(const BipartiteSnapshot& snapshot, Axis axis);

/// Throws EmptyInput on an empty span.
DescriptiveSummary describe(std::span<const double> values);
DescriptiveSummary describe(std::span<const std::size_t> values);

FrequencyHistogram histogram(const BipartiteSnapshot& snapshot, Axis axis);
FrequencyHistogram histogram(std::span<const std::size_t> degrees);

/// Quantile p at position (n - 1) * p of the sorted data, linearly
/// interpolated. Whiskers are the extreme points inside
/// [q1 - 1.5 iqr, q3 + 1.5 iqr]. Throws EmptyInput.
BoxplotSummary boxplot(std::span<const double> values);
BoxplotSummary boxplot(std::span<const std::size_t> values);

double quantile_sorted(std::span<const double> sorted, double p);

}  // namespace tropescope
