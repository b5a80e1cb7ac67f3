#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "opsom/errors.hpp"
#include "opsom/random.hpp"

namespace opsom {

struct SearchBounds {
  double lower = -100.0;
  double upper = 100.0;

  bool contains(double x) const { return x >= lower && x <= upper; }
  double width() const { return upper - lower; }
};

enum class Category { unimodal, multimodal, hybrid, composite };
enum class BaseFunction { sphere, bent_cigar, rastrigin, ackley, griewank, schwefel };

inline const char* to_string(Category c) {
  switch (c) {
    case Category::unimodal: return "unimodal";
    case Category::multimodal: return "multimodal";
    case Category::hybrid: return "hybrid";
    case Category::composite: return "composite";
  }
  return "?";
}

inline const char* to_string(BaseFunction f) {
  switch (f) {
    case BaseFunction::sphere: return "sphere";
    case BaseFunction::bent_cigar: return "bent_cigar";
    case BaseFunction::rastrigin: return "rastrigin";
    case BaseFunction::ackley: return "ackley";
    case BaseFunction::griewank: return "griewank";
    case BaseFunction::schwefel: return "schwefel";
  }
  return "?";
}

// Contiguous coordinate range [begin, end) evaluated with one base function.
struct HybridBlock {
  BaseFunction base;
  std::size_t begin;
  std::size_t end;
};

struct CompositeComponent {
  BaseFunction base;
  std::vector<double> shift;
  double sigma;
  double bias;
};

struct ObjectiveSpec {
  std::string id;
  std::string name;
  Category category = Category::unimodal;
  std::size_t dimension = 0;
  SearchBounds bounds;
  std::vector<double> shift;
  std::vector<double> rotation;  // row-major, dimension x dimension
  double f_opt = 0.0;
  std::uint64_t suite_seed = 0;

  BaseFunction base = BaseFunction::sphere;  // unimodal / multimodal
  std::vector<HybridBlock> blocks;            // hybrid
  std::vector<CompositeComponent> components;  // composite
};

struct EvaluationCounter {
  std::uint64_t used = 0;
  std::uint64_t budget = 0;

  std::uint64_t remaining() const { return used >= budget ? 0 : budget - used; }
};

namespace detail {

inline double sphere(std::span<const double> z) {
  double sum = 0.0;
  for (double v : z) sum += v * v;
  return sum;
}

inline double bent_cigar(std::span<const double> z) {
  if (z.empty()) return 0.0;
  double tail = 0.0;
  for (std::size_t i = 1; i < z.size(); ++i) tail += z[i] * z[i];
  return z[0] * z[0] + 1e6 * tail;
}

// Written as z^2 + 10(1 - cos) so that every term is non-negative and the
// origin evaluates to exactly 0.
inline double rastrigin(std::span<const double> z) {
  double sum = 0.0;
  for (double v : z) sum += v * v + 10.0 * (1.0 - std::cos(2.0 * std::numbers::pi * v));
  return sum;
}

inline double ackley(std::span<const double> z) {
  if (z.empty()) return 0.0;
  const double n = static_cast<double>(z.size());
  double sq = 0.0;
  double cs = 0.0;
  for (double v : z) {
    sq += v * v;
    cs += std::cos(2.0 * std::numbers::pi * v);
  }
  return 20.0 * (1.0 - std::exp(-0.2 * std::sqrt(sq / n))) + (std::numbers::e - std::exp(cs / n));
}

inline double griewank(std::span<const double> z) {
  double sum = 0.0;
  double prod = 1.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    sum += z[i] * z[i] / 4000.0;
    prod *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return (1.0 - prod) + sum;
}

// Modified Schwefel term y*sin(sqrt|y|) with the out-of-range fold.
inline double schwefel_term(double y, double dims) {
  if (y > 500.0) {
    const double m = 500.0 - std::fmod(y, 500.0);
    return m * std::sin(std::sqrt(m)) - (y - 500.0) * (y - 500.0) / (10000.0 * dims);
  }
  if (y < -500.0) {
    const double m = std::fmod(std::fabs(y), 500.0) - 500.0;
    return m * std::sin(std::sqrt(std::fabs(m))) - (y + 500.0) * (y + 500.0) / (10000.0 * dims);
  }
  return y * std::sin(std::sqrt(std::fabs(y)));
}

inline constexpr double kSchwefelPeak = 420.9687462275036;
inline constexpr double kSchwefelScale = 5.0;  // [-100,100] -> [-500,500]

// Shifted so the optimum sits at the origin with value exactly 0.
inline double schwefel(std::span<const double> z) {
  const double dims = static_cast<double>(z.size());
  const double peak = schwefel_term(kSchwefelPeak, dims);
  double sum = 0.0;
  for (double v : z) {
    // clamp: rounding near the maximizer can dip a hair below zero
    sum += std::max(0.0, peak - schwefel_term(kSchwefelScale * v + kSchwefelPeak, dims));
  }
  return sum;
}

inline double base_value(BaseFunction f, std::span<const double> z) {
  switch (f) {
    case BaseFunction::sphere: return sphere(z);
    case BaseFunction::bent_cigar: return bent_cigar(z);
    case BaseFunction::rastrigin: return rastrigin(z);
    case BaseFunction::ackley: return ackley(z);
    case BaseFunction::griewank: return griewank(z);
    case BaseFunction::schwefel: return schwefel(z);
  }
  return 0.0;
}

// z = R * (x - shift)
inline std::vector<double> shift_rotate(std::span<const double> x, std::span<const double> shift,
                                        std::span<const double> rotation) {
  const std::size_t d = x.size();
  std::vector<double> diff(d);
  for (std::size_t i = 0; i < d; ++i) diff[i] = x[i] - shift[i];
  std::vector<double> z(d, 0.0);
  for (std::size_t r = 0; r < d; ++r) {
    double acc = 0.0;
    const double* row = rotation.data() + r * d;
    for (std::size_t c = 0; c < d; ++c) acc += row[c] * diff[c];
    z[r] = acc;
  }
  return z;
}

// Per-component values g_i(R(x - o_i)) + bias_i, excluding the function-level f_opt.
inline std::vector<double> composite_component_values(const ObjectiveSpec& spec,
                                                      std::span<const double> x) {
  std::vector<double> values;
  values.reserve(spec.components.size());
  for (const auto& comp : spec.components) {
    const auto z = shift_rotate(x, comp.shift, spec.rotation);
    values.push_back(base_value(comp.base, z) + comp.bias);
  }
  return values;
}

inline double composite_value(const ObjectiveSpec& spec, std::span<const double> x) {
  const std::size_t k = spec.components.size();
  const double d = static_cast<double>(spec.dimension);
  const auto values = composite_component_values(spec, x);
  std::vector<double> weights(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& comp = spec.components[i];
    double dist2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double t = x[j] - comp.shift[j];
      dist2 += t * t;
    }
    if (dist2 == 0.0) return spec.f_opt + values[i];
    weights[i] = std::exp(-dist2 / (2.0 * d * comp.sigma * comp.sigma)) / std::sqrt(dist2);
    total += weights[i];
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = total > 0.0 ? weights[i] / total : 1.0 / static_cast<double>(k);
    acc += w * values[i];
  }
  return spec.f_opt + acc;
}

inline double raw_value(const ObjectiveSpec& spec, std::span<const double> x) {
  switch (spec.category) {
    case Category::unimodal:
    case Category::multimodal: {
      const auto z = shift_rotate(x, spec.shift, spec.rotation);
      return spec.f_opt + base_value(spec.base, z);
    }
    case Category::hybrid: {
      const auto z = shift_rotate(x, spec.shift, spec.rotation);
      const std::span<const double> all(z);
      double sum = 0.0;
      for (const auto& block : spec.blocks) {
        sum += base_value(block.base, all.subspan(block.begin, block.end - block.begin));
      }
      return spec.f_opt + sum;
    }
    case Category::composite:
      return composite_value(spec, x);
  }
  return 0.0;
}

inline std::vector<double> identity_matrix(std::size_t d) {
  std::vector<double> m(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) m[i * d + i] = 1.0;
  return m;
}

// Orthonormalized (modified Gram-Schmidt) Gaussian matrix, row-major.
inline std::vector<double> random_rotation(std::size_t d, Rng& rng) {
  std::vector<double> m(d * d);
  for (auto& v : m) v = rng.normal();
  for (std::size_t r = 0; r < d; ++r) {
    double* row = m.data() + r * d;
    for (std::size_t p = 0; p < r; ++p) {
      const double* prev = m.data() + p * d;
      double dot = 0.0;
      for (std::size_t c = 0; c < d; ++c) dot += row[c] * prev[c];
      for (std::size_t c = 0; c < d; ++c) row[c] -= dot * prev[c];
    }
    double norm = 0.0;
    for (std::size_t c = 0; c < d; ++c) norm += row[c] * row[c];
    norm = std::sqrt(norm);
    for (std::size_t c = 0; c < d; ++c) row[c] /= norm;
  }
  return m;
}

inline std::vector<double> random_shift(std::size_t d, Rng& rng) {
  // [-80, 80] keeps every optimum strictly inside the default box
  std::vector<double> s(d);
  for (auto& v : s) v = rng.uniform(-80.0, 80.0);
  return s;
}

inline std::vector<HybridBlock> partition(std::size_t d,
                                          std::initializer_list<std::pair<BaseFunction, double>> parts) {
  std::vector<HybridBlock> blocks;
  double cumulative = 0.0;
  std::size_t begin = 0;
  std::size_t i = 0;
  for (const auto& [base, fraction] : parts) {
    cumulative += fraction;
    const std::size_t end = (++i == parts.size())
                                ? d
                                : std::min(d, static_cast<std::size_t>(std::floor(cumulative * static_cast<double>(d))));
    blocks.push_back({base, begin, std::max(begin, end)});
    begin = std::max(begin, end);
  }
  return blocks;
}

}  // namespace detail

// Counted evaluation: throws BudgetExceeded without evaluating once the budget is spent.
inline double evaluate(const ObjectiveSpec& spec, std::span<const double> point,
                       EvaluationCounter& counter) {
  if (point.size() != spec.dimension) {
    throw InvalidArgument("evaluate: point has dimension " + std::to_string(point.size()) +
                          ", expected " + std::to_string(spec.dimension));
  }
  if (counter.used >= counter.budget) {
    throw BudgetExceeded("evaluation budget of " + std::to_string(counter.budget) + " exhausted");
  }
  ++counter.used;
  return detail::raw_value(spec, point);
}

inline double error_of(const ObjectiveSpec& spec, double best_fitness) {
  return std::fabs(best_fitness - spec.f_opt);
}

// Builds a single shifted/rotated base-function spec. Used by make_suite and
// handy for tests that want one function in isolation.
inline ObjectiveSpec make_base_spec(BaseFunction base, std::size_t d, std::vector<double> shift,
                                    std::vector<double> rotation, double f_opt = 0.0) {
  ObjectiveSpec spec;
  spec.id = to_string(base);
  spec.name = to_string(base);
  spec.category = (base == BaseFunction::sphere || base == BaseFunction::bent_cigar)
                      ? Category::unimodal
                      : Category::multimodal;
  spec.dimension = d;
  spec.base = base;
  spec.shift = std::move(shift);
  spec.rotation = rotation.empty() ? detail::identity_matrix(d) : std::move(rotation);
  spec.f_opt = f_opt;
  return spec;
}

/// Emulated four-category suite with seeded shifts and rotations.
///
/// Fixed order, ten functions:
///   F01 sphere, F02 bent cigar                                  (unimodal)
///   F03 rastrigin, F04 ackley, F05 griewank, F06 schwefel       (multimodal)
///   F07, F08 contiguous-block mixes sharing one shift           (hybrid)
///   F09, F10 distance-weighted blends of three shifted bases    (composite)
/// Function i carries f_opt = 100 * i, attained at its `shift`.
inline std::vector<ObjectiveSpec> make_suite(std::uint64_t suite_seed, std::size_t d) {
  if (d < 2) throw InvalidArgument("make_suite: dimension must be >= 2");

  std::vector<ObjectiveSpec> suite;
  auto rng_for = [&](std::size_t index) {
    return Rng(suite_seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  };
  auto finish = [&](ObjectiveSpec spec, std::string name) {
    const std::size_t index = suite.size() + 1;
    spec.id = (index < 10 ? "F0" : "F") + std::to_string(index);
    spec.name = std::move(name);
    spec.f_opt = 100.0 * static_cast<double>(index);
    spec.suite_seed = suite_seed;
    suite.push_back(std::move(spec));
  };

  const BaseFunction singles[] = {BaseFunction::sphere, BaseFunction::bent_cigar,
                                  BaseFunction::rastrigin, BaseFunction::ackley,
                                  BaseFunction::griewank, BaseFunction::schwefel};
  for (BaseFunction base : singles) {
    Rng rng = rng_for(suite.size());
    auto shift = detail::random_shift(d, rng);
    auto rotation = detail::random_rotation(d, rng);
    finish(make_base_spec(base, d, std::move(shift), std::move(rotation)), to_string(base));
  }

  auto hybrid = [&](std::string name, std::initializer_list<std::pair<BaseFunction, double>> parts) {
    Rng rng = rng_for(suite.size());
    ObjectiveSpec spec;
    spec.category = Category::hybrid;
    spec.dimension = d;
    spec.shift = detail::random_shift(d, rng);
    spec.rotation = detail::random_rotation(d, rng);
    spec.blocks = detail::partition(d, parts);
    finish(std::move(spec), std::move(name));
  };
  hybrid("hybrid_cigar_rastrigin_schwefel", {{BaseFunction::bent_cigar, 0.3},
                                             {BaseFunction::rastrigin, 0.3},
                                             {BaseFunction::schwefel, 0.4}});
  hybrid("hybrid_griewank_ackley_rastrigin", {{BaseFunction::griewank, 0.2},
                                              {BaseFunction::ackley, 0.3},
                                              {BaseFunction::rastrigin, 0.5}});

  auto composite = [&](std::string name, std::initializer_list<BaseFunction> bases) {
    Rng rng = rng_for(suite.size());
    ObjectiveSpec spec;
    spec.category = Category::composite;
    spec.dimension = d;
    spec.rotation = detail::random_rotation(d, rng);
    double sigma = 10.0;
    double bias = 0.0;
    for (BaseFunction base : bases) {
      spec.components.push_back({base, detail::random_shift(d, rng), sigma, bias});
      sigma += 10.0;
      bias += 100.0;
    }
    spec.shift = spec.components.front().shift;
    finish(std::move(spec), std::move(name));
  };
  composite("composite_rastrigin_griewank_schwefel",
            {BaseFunction::rastrigin, BaseFunction::griewank, BaseFunction::schwefel});
  composite("composite_ackley_rastrigin_griewank",
            {BaseFunction::ackley, BaseFunction::rastrigin, BaseFunction::griewank});

  return suite;
}

// One JSON object per line: id, name, category, dimension, bounds, f_opt, suite_seed.
inline std::string describe_suite(const std::vector<ObjectiveSpec>& suite) {
  std::string out;
  for (const auto& spec : suite) {
    nlohmann::ordered_json rec;
    rec["id"] = spec.id;
    rec["name"] = spec.name;
    rec["category"] = to_string(spec.category);
    rec["dimension"] = spec.dimension;
    rec["lower"] = spec.bounds.lower;
    rec["upper"] = spec.bounds.upper;
    rec["f_opt"] = spec.f_opt;
    rec["suite_seed"] = spec.suite_seed;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

}  // namespace opsom
