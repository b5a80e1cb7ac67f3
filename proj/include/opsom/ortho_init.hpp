#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "opsom/errors.hpp"
#include "opsom/objective.hpp"
#include "opsom/random.hpp"

namespace opsom {

/// Strength-2 orthogonal array A_rows(levels^cols) with entries in 1..levels,
/// stored row-major.
struct OrthogonalArray {
  std::size_t levels = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<int> entries;

  int at(std::size_t row, std::size_t col) const { return entries[row * cols + col]; }
  int& at(std::size_t row, std::size_t col) { return entries[row * cols + col]; }
};

inline bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

inline constexpr std::size_t kDefaultRowCap = 4096;

/// Smallest array of the basic-plus-interaction-column family with at least
/// `min_factors` columns. For J basic columns the array has levels^J rows and
/// (levels^J - 1) / (levels - 1) columns; basic column k sits at 0-based index
/// (levels^(k-1) - 1) / (levels - 1) and every other column is a mod-levels
/// linear combination of earlier basic columns with the newest one.
inline OrthogonalArray construct_oa(std::size_t levels, std::size_t min_factors,
                                    std::size_t row_cap = kDefaultRowCap) {
  if (!is_prime(levels)) {
    throw InvalidArgument("construct_oa: level count " + std::to_string(levels) + " is not prime");
  }
  if (min_factors < 1) throw InvalidArgument("construct_oa: min_factors must be >= 1");

  std::size_t basic = 1;
  std::size_t rows = levels;
  std::size_t cols = 1;
  while (cols < min_factors) {
    ++basic;
    rows *= levels;
    cols = (rows - 1) / (levels - 1);
    if (rows > row_cap) {
      throw InvalidArgument("construct_oa: " + std::to_string(min_factors) +
                            " factors need more than " + std::to_string(row_cap) + " rows");
    }
  }

  OrthogonalArray oa{levels, rows, cols, std::vector<int>(rows * cols, 0)};
  const auto a = static_cast<int>(levels);

  std::size_t stride = rows;
  for (std::size_t k = 1; k <= basic; ++k) {
    stride /= levels;
    std::size_t power = 1;
    for (std::size_t i = 1; i < k; ++i) power *= levels;
    const std::size_t j = (power - 1) / (levels - 1);
    for (std::size_t r = 0; r < rows; ++r) {
      oa.at(r, j) = static_cast<int>((r / stride) % levels);
    }
    for (std::size_t s = 0; s < j; ++s) {
      for (std::size_t t = 1; t < levels; ++t) {
        const std::size_t col = j + s * (levels - 1) + t;
        for (std::size_t r = 0; r < rows; ++r) {
          oa.at(r, col) = (oa.at(r, s) * static_cast<int>(t) + oa.at(r, j)) % a;
        }
      }
    }
  }
  for (auto& v : oa.entries) v += 1;
  return oa;
}

/// Exhaustive strength-2 check: every ordered level pair appears equally often
/// in every pair of distinct columns. Single-column arrays need balanced
/// level counts. Malformed arrays return false.
inline bool verify_oa(const OrthogonalArray& oa) {
  const std::size_t a = oa.levels;
  if (a < 2 || oa.rows == 0 || oa.cols == 0 || oa.entries.size() != oa.rows * oa.cols) return false;
  for (int v : oa.entries) {
    if (v < 1 || v > static_cast<int>(a)) return false;
  }
  if (oa.rows % a != 0) return false;
  for (std::size_t c = 0; c < oa.cols; ++c) {
    std::vector<std::size_t> counts(a, 0);
    for (std::size_t r = 0; r < oa.rows; ++r) ++counts[oa.at(r, c) - 1];
    for (auto n : counts) {
      if (n != oa.rows / a) return false;
    }
  }
  if (oa.cols < 2) return true;
  if (oa.rows % (a * a) != 0) return false;
  const std::size_t expected = oa.rows / (a * a);
  std::vector<std::size_t> counts(a * a);
  for (std::size_t c1 = 0; c1 < oa.cols; ++c1) {
    for (std::size_t c2 = c1 + 1; c2 < oa.cols; ++c2) {
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t r = 0; r < oa.rows; ++r) {
        ++counts[(oa.at(r, c1) - 1) * a + (oa.at(r, c2) - 1)];
      }
      for (auto n : counts) {
        if (n != expected) return false;
      }
    }
  }
  return true;
}

/// Maps one level to the box. Level 1 lands exactly on the lower bound and
/// level `levels` exactly on the upper bound.
inline double map_level(int level, std::size_t levels, const SearchBounds& bounds) {
  const auto top = static_cast<int>(levels);
  if (level <= 1) return bounds.lower;
  if (level >= top) return bounds.upper;
  return bounds.lower + static_cast<double>(level - 1) * bounds.width() / static_cast<double>(top - 1);
}

/// x_jk = (a_jk - 1) * (upper - lower) / (levels - 1) + lower, over the first
/// `dimension` columns. The level offset keeps level `levels` on the upper bound.
inline std::vector<std::vector<double>> map_to_search_space(const OrthogonalArray& oa,
                                                            const SearchBounds& bounds,
                                                            std::size_t dimension) {
  if (oa.cols < dimension) {
    throw InvalidArgument("map_to_search_space: array has " + std::to_string(oa.cols) +
                          " factors, need " + std::to_string(dimension));
  }
  if (oa.levels < 2) throw InvalidArgument("map_to_search_space: need at least two levels");
  std::vector<std::vector<double>> points(oa.rows, std::vector<double>(dimension));
  for (std::size_t r = 0; r < oa.rows; ++r) {
    for (std::size_t k = 0; k < dimension; ++k) {
      points[r][k] = map_level(oa.at(r, k), oa.levels, bounds);
    }
  }
  return points;
}

struct InitialSwarm {
  std::vector<std::vector<double>> positions;
  std::vector<double> fitness;
  std::size_t oa_rows = 0;  // rows of the array that seeded the swarm
};

/// Evaluations build_initial_swarm will spend for this population and array size.
inline std::size_t oa_init_cost(std::size_t n, std::size_t oa_rows) { return std::max(n, oa_rows); }

/// Orthogonal-array initialization. With rows >= n all rows are evaluated and
/// the n fittest kept (ties by row order); otherwise every row is kept and the
/// remaining n - rows slots are filled uniformly at random inside the box.
template <RandomSource R>
InitialSwarm build_initial_swarm(std::size_t n, const ObjectiveSpec& spec,
                                 EvaluationCounter& counter, R& rng, std::size_t levels = 2,
                                 std::size_t row_cap = kDefaultRowCap) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("build_initial_swarm: n must be even and >= 2");
  const auto oa = construct_oa(levels, spec.dimension, row_cap);
  const std::size_t cost = oa_init_cost(n, oa.rows);
  if (counter.remaining() < cost) {
    throw BudgetExceeded("build_initial_swarm: needs " + std::to_string(cost) +
                         " evaluations, " + std::to_string(counter.remaining()) + " remain");
  }
  auto points = map_to_search_space(oa, spec.bounds, spec.dimension);

  InitialSwarm out;
  out.oa_rows = oa.rows;
  if (oa.rows >= n) {
    std::vector<double> fitness(oa.rows);
    for (std::size_t r = 0; r < oa.rows; ++r) fitness[r] = evaluate(spec, points[r], counter);
    std::vector<std::size_t> order(oa.rows);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
    for (std::size_t i = 0; i < n; ++i) {
      out.positions.push_back(std::move(points[order[i]]));
      out.fitness.push_back(fitness[order[i]]);
    }
    return out;
  }

  out.positions = std::move(points);
  while (out.positions.size() < n) {
    std::vector<double> x(spec.dimension);
    for (auto& v : x) v = spec.bounds.lower + spec.bounds.width() * rng.uniform();
    out.positions.push_back(std::move(x));
  }
  for (const auto& x : out.positions) out.fitness.push_back(evaluate(spec, x, counter));
  return out;
}

}  // namespace opsom
