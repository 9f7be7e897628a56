#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gsa/output.hpp"
#include "gsa/types.hpp"

namespace gsa {

/// Shortest-round-trip decimal for a double (17 significant digits at most).
std::string format_number(double v);

/// Sample file: "n k" then n rows of k values; '#' lines are comments.
void write_sample_file(const std::filesystem::path& path, const Matrix& m);
std::string format_sample(const Matrix& m);
Matrix parse_sample(const std::string& text);
Matrix read_sample_file(const std::filesystem::path& path);

/// Output file: optional "# name1 name2 ..." header, then n rows of m values;
/// "NaN" marks a faulted row.
void write_output_file(const std::filesystem::path& path, const std::vector<OutputVector>& outputs);
std::vector<OutputVector> parse_output(const std::string& text, std::size_t expected_rows,
                                       std::size_t expected_outputs);
std::vector<OutputVector> read_output_file(const std::filesystem::path& path,
                                           std::size_t expected_rows,
                                           std::size_t expected_outputs);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace gsa
