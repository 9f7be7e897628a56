#include "gsa/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gsa/correlate.hpp"
#include "gsa/io.hpp"

namespace gsa::plots {

namespace {

using Idx = Eigen::Index;

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(int w, int h, const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" +
         std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<text x=\"" + std::to_string(w / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title) + "</text>\n";
}

// Plot frame mapping data ranges onto a pixel box.
struct Frame {
  double x0, y0, w, h;  // pixel box
  double lo_x, hi_x, lo_y, hi_y;
  double px(double x) const { return x0 + (hi_x > lo_x ? (x - lo_x) / (hi_x - lo_x) : 0.5) * w; }
  double py(double y) const { return y0 + h - (hi_y > lo_y ? (y - lo_y) / (hi_y - lo_y) : 0.5) * h; }
  std::string axes() const {
    return "<rect x=\"" + f2(x0) + "\" y=\"" + f2(y0) + "\" width=\"" + f2(w) + "\" height=\"" + f2(h) +
           "\" fill=\"none\" stroke=\"black\"/>\n" + "<text x=\"" + f2(x0) + "\" y=\"" + f2(y0 + h + 14) + "\">" +
           label(lo_x) + "</text>\n" + "<text x=\"" + f2(x0 + w) + "\" y=\"" + f2(y0 + h + 14) +
           "\" text-anchor=\"end\">" + label(hi_x) + "</text>\n" + "<text x=\"" + f2(x0 - 4) + "\" y=\"" +
           f2(y0 + h) + "\" text-anchor=\"end\">" + label(lo_y) + "</text>\n" + "<text x=\"" + f2(x0 - 4) +
           "\" y=\"" + f2(y0 + 10) + "\" text-anchor=\"end\">" + label(hi_y) + "</text>\n";
  }
};

std::vector<std::size_t> valid_rows(const OutputVector& y) {
  std::vector<std::size_t> rows;
  const auto mask = y.valid_mask();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) rows.push_back(i);
  }
  return rows;
}

// Every stride-th row so large samples stay a manageable size.
std::vector<std::size_t> thin(const std::vector<std::size_t>& rows, std::size_t limit) {
  if (rows.size() <= limit) return rows;
  std::vector<std::size_t> out;
  const std::size_t stride = (rows.size() + limit - 1) / limit;
  for (std::size_t i = 0; i < rows.size(); i += stride) out.push_back(rows[i]);
  return out;
}

}  // namespace

std::string histogram_svg(const UaSummary& s) {
  const auto& h = s.histogram;
  const std::size_t peak = *std::max_element(h.counts.begin(), h.counts.end());
  Frame fr{60, 35, 500, 300, h.edges.front(), h.edges.back(), 0.0, static_cast<double>(peak)};
  if (fr.hi_x == fr.lo_x) {
    fr.lo_x -= 0.5;
    fr.hi_x += 0.5;
  }
  std::string out = header(600, 370, "Histogram of " + s.name + " (n=" + std::to_string(s.n_effective) + ")");
  out += fr.axes();
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    double l = h.edges[b], r = h.edges[b + 1];
    if (l == r) {
      l = fr.lo_x;
      r = fr.hi_x;
    }
    const double top = fr.py(static_cast<double>(h.counts[b]));
    out += "<rect x=\"" + f2(fr.px(l)) + "\" y=\"" + f2(top) + "\" width=\"" + f2(fr.px(r) - fr.px(l)) +
           "\" height=\"" + f2(fr.y0 + fr.h - top) + "\" fill=\"steelblue\" stroke=\"white\"/>\n";
  }
  return out + "</svg>\n";
}

std::string ecdf_svg(const UaSummary& s) {
  Frame fr{60, 35, 500, 300, s.min, s.max, 0.0, 1.0};
  if (fr.hi_x == fr.lo_x) {
    fr.lo_x -= 0.5;
    fr.hi_x += 0.5;
  }
  std::string out = header(600, 370, "Empirical CDF of " + s.name + " with Kolmogorov band");
  out += fr.axes();
  const double eps = s.kolmogorov_halfwidth;
  auto path = [&](double shift, const char* colour, const char* dash) {
    std::string d = "M " + f2(fr.px(s.ecdf.front().x)) + " " + f2(fr.py(std::clamp(shift, 0.0, 1.0)));
    double prev = 0.0;
    for (const auto& p : s.ecdf) {
      d += " L " + f2(fr.px(p.x)) + " " + f2(fr.py(std::clamp(prev + shift, 0.0, 1.0)));
      d += " L " + f2(fr.px(p.x)) + " " + f2(fr.py(std::clamp(p.f + shift, 0.0, 1.0)));
      prev = p.f;
    }
    return "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + colour + "\"" +
           (dash[0] ? std::string(" stroke-dasharray=\"") + dash + "\"" : std::string()) + "/>\n";
  };
  out += path(0.0, "black", "");
  out += path(eps, "grey", "4 3");
  out += path(-eps, "grey", "4 3");
  return out + "</svg>\n";
}

std::string scatter_svg(const Matrix& values, const OutputVector& y, const std::vector<std::string>& names) {
  const auto k = static_cast<std::size_t>(values.cols());
  const std::size_t per_row = std::min<std::size_t>(k, 4);
  const std::size_t grid_rows = (k + per_row - 1) / per_row;
  const int pw = 220, ph = 180;
  const int W = static_cast<int>(per_row) * pw + 20;
  const int H = static_cast<int>(grid_rows) * ph + 30;
  const auto rows = thin(valid_rows(y), 2000);
  std::string out = header(W, H, "Scatter plots of " + y.name);
  if (rows.empty()) return out + "</svg>\n";
  double ylo = y.y[rows[0]], yhi = ylo;
  for (auto r : rows) {
    ylo = std::min(ylo, y.y[r]);
    yhi = std::max(yhi, y.y[r]);
  }
  for (std::size_t j = 0; j < k; ++j) {
    const auto col = static_cast<Idx>(j);
    double xlo = values(static_cast<Idx>(rows[0]), col), xhi = xlo;
    for (auto r : rows) {
      xlo = std::min(xlo, values(static_cast<Idx>(r), col));
      xhi = std::max(xhi, values(static_cast<Idx>(r), col));
    }
    const double ox = 50.0 + static_cast<double>(j % per_row) * pw;
    const double oy = 35.0 + static_cast<double>(j / per_row) * ph;
    Frame fr{ox, oy, pw - 60.0, ph - 50.0, xlo, xhi, ylo, yhi};
    out += fr.axes();
    out += "<text x=\"" + f2(ox + fr.w / 2) + "\" y=\"" + f2(oy + fr.h + 26) + "\" text-anchor=\"middle\">" +
           escape(names[j]) + "</text>\n";
    for (auto r : rows) {
      out += "<circle cx=\"" + f2(fr.px(values(static_cast<Idx>(r), col))) + "\" cy=\"" + f2(fr.py(y.y[r])) +
             "\" r=\"1.2\" fill=\"steelblue\"/>\n";
    }
  }
  return out + "</svg>\n";
}

std::string cobweb_csv(const Matrix& values, const OutputVector& y, const std::vector<std::string>& names) {
  const auto rows = valid_rows(y);
  const std::size_t k = static_cast<std::size_t>(values.cols());
  std::vector<std::vector<double>> ranks(k + 1);
  std::vector<double> col(rows.size());
  for (std::size_t j = 0; j <= k; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      col[i] = j < k ? values(static_cast<Idx>(rows[i]), static_cast<Idx>(j)) : y.y[rows[i]];
    }
    ranks[j] = average_ranks(col);
  }
  std::string out = "row";
  for (const auto& n : names) out += "," + n;
  out += "," + y.name + "\n";
  const double n = static_cast<double>(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += std::to_string(rows[i] + 1);
    for (std::size_t j = 0; j <= k; ++j) out += "," + format_number((ranks[j][i] - 0.5) / n);
    out += "\n";
  }
  return out;
}

std::string cobweb_svg(const Matrix& values, const OutputVector& y, const std::vector<std::string>& names) {
  const auto all = valid_rows(y);
  const std::size_t k = static_cast<std::size_t>(values.cols());
  const int W = static_cast<int>(std::max<std::size_t>(k + 1, 2) * 110) + 60;
  std::string out = header(W, 360, "Cobweb plot (ranks) of inputs and " + y.name);
  if (all.empty()) return out + "</svg>\n";
  std::vector<std::vector<double>> ranks(k + 1);
  std::vector<double> col(all.size());
  for (std::size_t j = 0; j <= k; ++j) {
    for (std::size_t i = 0; i < all.size(); ++i) {
      col[i] = j < k ? values(static_cast<Idx>(all[i]), static_cast<Idx>(j)) : y.y[all[i]];
    }
    ranks[j] = average_ranks(col);
  }
  const double n = static_cast<double>(all.size());
  const double top = 40, height = 280;
  auto ax = [&](std::size_t j) { return 60.0 + 110.0 * static_cast<double>(j); };
  for (std::size_t j = 0; j <= k; ++j) {
    out += "<line x1=\"" + f2(ax(j)) + "\" y1=\"" + f2(top) + "\" x2=\"" + f2(ax(j)) + "\" y2=\"" + f2(top + height) +
           "\" stroke=\"black\"/>\n<text x=\"" + f2(ax(j)) + "\" y=\"" + f2(top + height + 16) +
           "\" text-anchor=\"middle\">" + escape(j < k ? names[j] : y.name) + "</text>\n";
  }
  const std::size_t stride = std::max<std::size_t>(1, (all.size() + 499) / 500);
  for (std::size_t i = 0; i < all.size(); i += stride) {
    std::string pts;
    for (std::size_t j = 0; j <= k; ++j) {
      const double u = (ranks[j][i] - 0.5) / n;
      pts += (j ? " " : "") + f2(ax(j)) + "," + f2(top + height * (1.0 - u));
    }
    out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"steelblue\" stroke-opacity=\"0.3\"/>\n";
  }
  return out + "</svg>\n";
}

}  // namespace gsa::plots
