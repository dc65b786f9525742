#include "deming/numeric.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "deming/error.hpp"

namespace deming {

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  CompensatedSum s;
  for (double x : v) s += x;
  return s.value() / static_cast<double>(v.size());
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  CompensatedSum s;
  for (double x : v) s += (x - m) * (x - m);
  return s.value() / static_cast<double>(v.size() - 1);
}

double quantile(std::vector<double> v, double prob) {
  if (v.empty()) throw Error(ErrorKind::insufficient_data, "quantile of empty set");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double student_t_quantile(double prob, double df) {
  boost::math::students_t dist(df);
  return boost::math::quantile(dist, prob);
}

double chi_square_1_sf(double statistic) {
  if (statistic <= 0.0) return 1.0;
  boost::math::chi_squared dist(1.0);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace deming
