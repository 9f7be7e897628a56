#include "gsa/uncertainty.hpp"

#include <algorithm>
#include <cmath>

#include "gsa/error.hpp"
#include "gsa/io.hpp"

namespace gsa {

double percentile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(Errc::size, "percentile of empty data");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::domain, "percentile probability outside [0,1]");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::size_t sturges_bins(std::size_t n) {
  if (n <= 1) return 1;
  return static_cast<std::size_t>(std::ceil(1.0 + std::log2(static_cast<double>(n))));
}

Histogram histogram(std::span<const double> values, std::size_t bins) {
  if (values.empty()) throw Error(Errc::size, "histogram of empty data");
  if (bins == 0) throw Error(Errc::parameter, "histogram needs at least one bin");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  Histogram h;
  if (*mn == *mx) {
    h.edges = {*mn, *mx};
    h.counts = {values.size()};
    return h;
  }
  const double width = (*mx - *mn) / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(b == bins ? *mx : *mn + width * static_cast<double>(b));
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - *mn) / width);
    if (b >= bins) b = bins - 1;
    ++h.counts[b];
  }
  return h;
}

Interval tchebycheff_bound(double mean, double sd, double coverage) {
  if (!(coverage > 0.0 && coverage < 1.0)) throw Error(Errc::domain, "coverage must lie in (0,1)");
  if (!(sd >= 0.0)) throw Error(Errc::domain, "standard deviation must be >= 0");
  const double k = 1.0 / std::sqrt(1.0 - coverage);
  return {mean - k * sd, mean + k * sd, k};
}

double kolmogorov_band(std::size_t n, double alpha) {
  if (n == 0) throw Error(Errc::domain, "Kolmogorov band needs n >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::domain, "alpha must lie in (0,1)");
  // Written as c / sqrt(n) so that quadrupling n halves the width exactly.
  return std::sqrt(0.5 * std::log(2.0 / alpha)) / std::sqrt(static_cast<double>(n));
}

double sign_fraction(const OutputVector& y) {
  const auto v = y.valid_values();
  if (v.empty()) throw Error(Errc::size, "sign fraction of empty data");
  const auto pos = std::count_if(v.begin(), v.end(), [](double x) { return x > 0.0; });
  return static_cast<double>(pos) / static_cast<double>(v.size());
}

UaSummary summarize(const OutputVector& y, const UaOptions& options) {
  auto v = y.valid_values();
  const std::size_t n = v.size();
  if (n < 2) {
    throw Error(Errc::size, "uncertainty analysis of '" + y.name + "' needs at least 2 valid values, got " +
                                std::to_string(n));
  }
  UaSummary s;
  s.name = y.name;
  s.n_effective = n;
  s.n_faults = y.fault_rows.size();
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    const double d = x - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  s.sd = std::sqrt(m2 / static_cast<double>(n - 1));
  if (m2 > 0.0 && n > 2) {
    const double dn = static_cast<double>(n);
    const double g1 = (m3 / dn) / std::pow(m2 / dn, 1.5);
    s.skewness = g1 * std::sqrt(dn * (dn - 1.0)) / (dn - 2.0);
  }
  std::sort(v.begin(), v.end());
  s.min = v.front();
  s.max = v.back();
  s.probabilities = options.probabilities;
  for (double p : options.probabilities) s.percentiles.push_back(percentile(v, p));
  s.histogram = histogram(v, options.bins ? options.bins : sturges_bins(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n && v[i + 1] == v[i]) continue;
    s.ecdf.push_back({v[i], static_cast<double>(i + 1) / static_cast<double>(n)});
  }
  s.alpha = options.alpha;
  s.coverage = 1.0 - options.alpha;
  s.tchebycheff = tchebycheff_bound(s.mean, s.sd, s.coverage);
  s.kolmogorov_halfwidth = kolmogorov_band(n, options.alpha);
  s.sign_fraction = sign_fraction(y);
  return s;
}

std::string to_csv(const UaSummary& s) {
  std::string out = "statistic,value\n";
  auto line = [&](const std::string& k, double v) { out += k + "," + format_number(v) + "\n"; };
  out += "output," + s.name + "\n";
  out += "n_effective," + std::to_string(s.n_effective) + "\n";
  out += "n_faults_excluded," + std::to_string(s.n_faults) + "\n";
  line("mean", s.mean);
  line("sd", s.sd);
  line("min", s.min);
  line("max", s.max);
  line("skewness", s.skewness);
  for (std::size_t i = 0; i < s.probabilities.size(); ++i) {
    line("p" + format_number(100.0 * s.probabilities[i]), s.percentiles[i]);
  }
  line("tchebycheff_coverage", s.coverage);
  line("tchebycheff_k", s.tchebycheff.k);
  line("tchebycheff_lower", s.tchebycheff.lower);
  line("tchebycheff_upper", s.tchebycheff.upper);
  line("kolmogorov_alpha", s.alpha);
  line("kolmogorov_halfwidth", s.kolmogorov_halfwidth);
  line("positive_fraction", s.sign_fraction);
  return out;
}

std::string histogram_csv(const UaSummary& s) {
  std::string out = "bin_lower,bin_upper,count\n";
  for (std::size_t b = 0; b < s.histogram.counts.size(); ++b) {
    out += format_number(s.histogram.edges[b]) + "," + format_number(s.histogram.edges[b + 1]) + "," +
           std::to_string(s.histogram.counts[b]) + "\n";
  }
  return out;
}

std::string ecdf_csv(const UaSummary& s) {
  std::string out = "x,ecdf,lower_band,upper_band\n";
  for (const auto& p : s.ecdf) {
    out += format_number(p.x) + "," + format_number(p.f) + "," +
           format_number(std::max(0.0, p.f - s.kolmogorov_halfwidth)) + "," +
           format_number(std::min(1.0, p.f + s.kolmogorov_halfwidth)) + "\n";
  }
  return out;
}

}  // namespace gsa
