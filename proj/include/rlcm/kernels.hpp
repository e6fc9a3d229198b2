#pragma once

// Dense inner loops over response patterns and attribute profiles.
//
// Every kernel exists twice: `serial` evaluates the defining formula entry by
// entry and is kept as the test reference; `parallel` is the production path
// (OpenMP when available). Each parallel kernel writes every output entry from
// a fixed sequence of operations, so results do not depend on thread count.
//
// Layouts: theta is J x C row-major (C = 2^K, column = profile code), a
// T-matrix is 2^J x C row-major (row = response-pattern code).

#include <span>

#include "rlcm/core.hpp"

namespace rlcm::kernels {

namespace serial {

// out[r, a] = prod_{j in r} theta[j, a].
void tmatrix_rows(std::span<const double> theta, int J, std::size_t C, std::span<double> out);

// out[r] = sum_a p[a] prod_j theta[j,a]^r_j (1 - theta[j,a])^(1 - r_j).
void response_distribution(std::span<const double> theta, int J, std::size_t C,
                           std::span<const double> p, std::span<double> out);

// out[u, a] = prod_j clamp(theta)^r_j (1 - clamp(theta))^(1 - r_j) with r = patterns[u],
// theta clamped to [clamp, 1 - clamp].
void pattern_likelihoods(std::span<const Code> patterns, std::span<const double> theta, int J,
                         std::size_t C, double clamp, std::span<double> out);

// In place, over the J-cube: f[r] <- sum_{r' >= r} f[r'].
void superset_sums(std::span<double> f, int J);

// In place, inverse of superset_sums: f[r] <- sum_{r' >= r} (-1)^{|r'|-|r|} f[r'].
void superset_mobius(std::span<double> f, int J);

// In place on a 2^J x C table: row r <- sum_{r' <= r} prod_{j in r \ r'} (-shift_j) row r'.
void shift_transform(std::span<double> table, int J, std::size_t C, std::span<const double> shift);

}  // namespace serial

namespace parallel {

// Doubling recurrence: rows [2^j, 2^{j+1}) = rows [0, 2^j) times theta row j.
void tmatrix_rows(std::span<const double> theta, int J, std::size_t C, std::span<double> out);

void response_distribution(std::span<const double> theta, int J, std::size_t C,
                           std::span<const double> p, std::span<double> out);

void pattern_likelihoods(std::span<const Code> patterns, std::span<const double> theta, int J,
                         std::size_t C, double clamp, std::span<double> out);

// Per-bit butterflies, O(J 2^J).
void superset_sums(std::span<double> f, int J);
void superset_mobius(std::span<double> f, int J);
void shift_transform(std::span<double> table, int J, std::size_t C, std::span<const double> shift);

}  // namespace parallel

int max_threads();

}  // namespace rlcm::kernels
