#include "tropescope/stats.hpp"

#include <algorithm>
#include <cmath>

#include "tropescope/error.hpp"

namespace tropescope {

namespace {

std::vector<double> to_doubles(std::span<const std::size_t> values) {
  return {values.begin(), values.end()};
}

}  // namespace

std::string_view to_string(Axis axis) {
  return axis == Axis::TropesPerFilm ? "tropes-per-film" : "films-per-trope";
}

Axis axis_from_string(std::string_view text) {
  if (text == "films" || text == "tropes-per-film") return Axis::TropesPerFilm;
  if (text == "tropes" || text == "films-per-trope") return Axis::FilmsPerTrope;
  throw std::invalid_argument("unknown axis '" + std::string(text) + "' (use films or tropes)");
}

std::vector<std::size_t> degree_sequence(const BipartiteSnapshot& snapshot, Axis axis) {
  const auto& index = axis == Axis::TropesPerFilm ? snapshot.films() : snapshot.tropes();
  std::vector<std::size_t> degrees;
  degrees.reserve(index.size());
  for (const auto& [key, neighbours] : index) degrees.push_back(neighbours.size());
  std::sort(degrees.begin(), degrees.end());
  return degrees;
}

DescriptiveSummary describe(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("describe needs at least one value");
  const auto n = static_cast<double>(values.size());

  DescriptiveSummary out;
  out.nobs = values.size();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  out.min = *lo;
  out.max = *hi;

  double sum = 0;
  for (const double x : values) sum += x;
  const double mean = sum / n;
  // Second pass on deviations; a compensation term absorbs the rounding
  // left in the mean.
  double d1 = 0;
  double m2 = 0;
  double m3 = 0;
  double m4 = 0;
  for (const double x : values) {
    const double d = x - mean;
    const double d2 = d * d;
    d1 += d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  out.mean = mean + d1 / n;
  m2 = (m2 - d1 * d1 / n) / n;
  m3 /= n;
  m4 /= n;
  out.mean = std::clamp(out.mean, out.min, out.max);

  if (out.min == out.max || !(m2 > 0)) {
    out.variance = 0;
    return out;
  }
  out.variance = values.size() > 1 ? m2 * n / (n - 1) : 0.0;
  out.skewness = m3 / std::pow(m2, 1.5);
  out.kurtosis = m4 / (m2 * m2) - 3.0;
  return out;
}

DescriptiveSummary describe(std::span<const std::size_t> values) {
  const auto doubles = to_doubles(values);
  return describe(std::span<const double>(doubles));
}

FrequencyHistogram histogram(std::span<const std::size_t> degrees) {
  FrequencyHistogram out;
  for (const auto degree : degrees) ++out[degree];
  return out;
}

FrequencyHistogram histogram(const BipartiteSnapshot& snapshot, Axis axis) {
  const auto degrees = degree_sequence(snapshot, axis);
  return histogram(std::span<const std::size_t>(degrees));
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw EmptyInput("quantile of an empty sequence");
  const double position = static_cast<double>(sorted.size() - 1) * p;
  const auto below = static_cast<std::size_t>(std::floor(position));
  const auto above = std::min(below + 1, sorted.size() - 1);
  const double fraction = position - static_cast<double>(below);
  return sorted[below] + (sorted[above] - sorted[below]) * fraction;
}

BoxplotSummary boxplot(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("boxplot needs at least one value");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  BoxplotSummary out;
  out.q1 = quantile_sorted(sorted, 0.25);
  out.median = quantile_sorted(sorted, 0.5);
  out.q3 = quantile_sorted(sorted, 0.75);
  out.iqr = out.q3 - out.q1;
  const double low_fence = out.q1 - 1.5 * out.iqr;
  const double high_fence = out.q3 + 1.5 * out.iqr;

  const auto first_in = std::lower_bound(sorted.begin(), sorted.end(), low_fence);
  const auto last_in = std::upper_bound(sorted.begin(), sorted.end(), high_fence);
  out.whisker_low = *first_in;
  out.whisker_high = *std::prev(last_in);
  out.outlier_count = static_cast<std::size_t>(first_in - sorted.begin()) +
                      static_cast<std::size_t>(sorted.end() - last_in);
  return out;
}

BoxplotSummary boxplot(std::span<const std::size_t> values) {
  const auto doubles = to_doubles(values);
  return boxplot(std::span<const double>(doubles));
}

}  // namespace tropescope
