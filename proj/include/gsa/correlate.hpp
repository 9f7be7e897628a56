#pragma once

#include <span>
#include <vector>

#include "gsa/types.hpp"

namespace gsa {

/// Average ranks (1-based; ties share the mean of their positions).
std::vector<double> average_ranks(std::span<const double> x);

double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

/// k x k Spearman matrix of the columns of an n x k matrix (n >= 2).
Matrix measured_spearman(const Matrix& m);

/// Reorders the entries of each column so the rank correlation approaches
/// `target` (Iman & Conover).  Columns remain permutations of the input.
/// Throws Errc::not_positive_definite naming the first failing leading minor,
/// Errc::size when n <= k.
Matrix iman_conover(const Matrix& unit, const Matrix& target, Seed seed);

}  // namespace gsa
