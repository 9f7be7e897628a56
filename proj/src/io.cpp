#include "gsa/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "gsa/error.hpp"

namespace gsa {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

struct Line {
  std::size_t number;
  std::string_view text;
};

// Non-blank lines, comment lines split off.
std::vector<Line> content_lines(std::string_view text, std::vector<Line>* comments) {
  std::vector<Line> out;
  std::size_t number = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(pos, end - pos);
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos) {
      if (line[first] == '#') {
        if (comments) comments->push_back({number, line.substr(first + 1)});
      } else {
        out.push_back({number, line});
      }
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

bool parse_double(std::string_view tok, double& out) {
  if (tok == "NaN" || tok == "nan" || tok == "NAN") {
    out = kNaN;
    return true;
  }
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::size_t parse_count(const Line& line, std::string_view tok, const char* what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line.number, "line " + std::to_string(line.number) + ": invalid " + what + " '" +
                                      std::string(tok) + "'");
  }
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "NaN";
  char buf[32];
  // Shortest representation that round-trips.
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_sample(const Matrix& m) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_sample_file(const std::filesystem::path& path, const Matrix& m) {
  write_text_file(path, format_sample(m));
}

Matrix parse_sample(const std::string& text) {
  const auto lines = content_lines(text, nullptr);
  if (lines.empty()) throw ParseError(1, "line 1: empty sample file, expected header 'n k'");
  const auto header = split_ws(lines[0].text);
  if (header.size() != 2) {
    throw ParseError(lines[0].number,
                     "line " + std::to_string(lines[0].number) + ": expected header 'n k'");
  }
  const std::size_t n = parse_count(lines[0], header[0], "row count");
  const std::size_t k = parse_count(lines[0], header[1], "column count");
  if (n == 0 || k == 0) {
    throw ParseError(lines[0].number, "line " + std::to_string(lines[0].number) +
                                          ": row and column counts must be positive");
  }
  if (lines.size() - 1 != n) {
    const std::size_t at = lines.size() > n + 1 ? lines[n + 1].number : lines.back().number;
    throw ParseError(at, "line " + std::to_string(at) + ": header declares " + std::to_string(n) +
                             " rows, file has " + std::to_string(lines.size() - 1));
  }
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < n; ++i) {
    const Line& line = lines[i + 1];
    const auto toks = split_ws(line.text);
    if (toks.size() != k) {
      throw ParseError(line.number, "line " + std::to_string(line.number) + ": expected " +
                                        std::to_string(k) + " values, found " +
                                        std::to_string(toks.size()));
    }
    for (std::size_t j = 0; j < k; ++j) {
      double v;
      if (!parse_double(toks[j], v) || !std::isfinite(v)) {
        throw ParseError(line.number, "line " + std::to_string(line.number) + ": invalid number '" +
                                          std::string(toks[j]) + "'");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return m;
}

Matrix read_sample_file(const std::filesystem::path& path) { return parse_sample(read_text_file(path)); }

void write_output_file(const std::filesystem::path& path, const std::vector<OutputVector>& outputs) {
  std::string out = "#";
  for (const auto& o : outputs) out += " " + o.name;
  out += '\n';
  const std::size_t n = outputs.empty() ? 0 : outputs.front().size();
  char buf[40];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < outputs.size(); ++j) {
      const double v = outputs[j].y[i];
      if (std::isnan(v)) {
        std::snprintf(buf, sizeof buf, "NaN");
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", v);
      }
      if (j) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<OutputVector> parse_output(const std::string& text, std::size_t expected_rows,
                                       std::size_t expected_outputs) {
  std::vector<Line> comments;
  const auto lines = content_lines(text, &comments);
  std::vector<std::string> names;
  if (!comments.empty() && comments.front().number == 1) {
    for (auto tok : split_ws(comments.front().text)) names.emplace_back(tok);
  }
  if (lines.size() != expected_rows) {
    throw ParseError(lines.empty() ? 1 : lines.back().number,
                     "output row count mismatch: expected " + std::to_string(expected_rows) +
                         " rows, found " + std::to_string(lines.size()));
  }
  std::size_t m = expected_outputs;
  if (m == 0) {
    m = names.empty() ? (lines.empty() ? 1 : split_ws(lines.front().text).size()) : names.size();
  }
  if (!names.empty() && names.size() != m) {
    throw ParseError(1, "line 1: header names " + std::to_string(names.size()) + " outputs, expected " +
                            std::to_string(m));
  }
  std::vector<OutputVector> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    out[j].name = names.empty() ? (m == 1 ? std::string("y") : "y" + std::to_string(j + 1)) : names[j];
    out[j].y.resize(expected_rows);
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto toks = split_ws(lines[i].text);
    if (toks.size() != m) {
      throw ParseError(lines[i].number, "line " + std::to_string(lines[i].number) + ": expected " +
                                            std::to_string(m) + " values, found " +
                                            std::to_string(toks.size()));
    }
    for (std::size_t j = 0; j < m; ++j) {
      double v;
      if (!parse_double(toks[j], v)) {
        throw ParseError(lines[i].number, "line " + std::to_string(lines[i].number) +
                                              ": invalid number '" + std::string(toks[j]) + "'");
      }
      out[j].y[i] = v;
      if (!std::isfinite(v)) {
        out[j].y[i] = kNaN;
        out[j].fault_rows.push_back(i);
      }
    }
  }
  return out;
}

std::vector<OutputVector> read_output_file(const std::filesystem::path& path, std::size_t expected_rows,
                                           std::size_t expected_outputs) {
  return parse_output(read_text_file(path), expected_rows, expected_outputs);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(Errc::io, "write failed for '" + path.string() + "'");
}

std::vector<double> OutputVector::valid_values() const {
  std::vector<double> out;
  out.reserve(n_effective());
  for (double v : y) {
    if (!std::isnan(v)) out.push_back(v);
  }
  return out;
}

std::vector<bool> OutputVector::valid_mask() const {
  std::vector<bool> mask(y.size(), true);
  for (auto r : fault_rows) mask[r] = false;
  return mask;
}

}  // namespace gsa
