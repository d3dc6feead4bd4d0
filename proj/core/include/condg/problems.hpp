#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "condg/box.hpp"

namespace condg {

/// Smooth vector objective H : R^n -> R^m with its Jacobian (rows are the
/// component gradients).
struct SmoothObjective {
  int n = 0;
  int m = 0;
  std::function<Vector(const Vector&)> eval;
  std::function<Matrix(const Vector&)> jacobian;
};

enum class HolderProvenance { analytic, estimated };

/// Hölder exponent nu in (0, 1] and modulus M_nu shared by all gradients.
struct HolderParams {
  double nu = 1.0;
  double m_nu = 1.0;
  HolderProvenance provenance = HolderProvenance::analytic;

  /// Throws std::invalid_argument unless nu in (0,1] and m_nu > 0.
  void validate() const;
};

struct ProblemInstance {
  std::string name;
  SmoothObjective smooth;
  BoxBounds box;
  HolderParams holder;
  /// Lower bound on min_i inf_{x in box} h_i(x).
  double h_lower_bound = 0.0;

  int n() const noexcept { return smooth.n; }
  int m() const noexcept { return smooth.m; }
};

/// Names accepted by construct_problem, in the order of the benchmark table
/// followed by the synthetic shared-minimizer problem.
const std::vector<std::string>& problem_names();

/// The fourteen benchmark rows (everything except SHARED-MIN).
const std::vector<std::string>& benchmark_problem_names();

/// Builds a registered problem. `p` overrides the MAN exponent (MAN1/2/3 fix
/// p = 1.3 / 1.6 / 2 by default). Throws std::invalid_argument on unknown names.
ProblemInstance construct_problem(std::string_view name, std::optional<double> p = std::nullopt);

Vector evaluate_h(const ProblemInstance& p, const Vector& x);
Matrix evaluate_jacobian(const ProblemInstance& p, const Vector& x);

/// 1.1 * max over sampled box pairs and components of
/// ||grad h_i(x) - grad h_i(y)|| / ||x - y||^nu. Deterministic in `seed`.
double estimate_holder_constant(const ProblemInstance& p, double nu, int samples,
                                std::uint64_t seed);

inline constexpr double kHolderSafetyFactor = 1.1;
inline constexpr int kHolderEstimateSamples = 10000;
inline constexpr std::uint64_t kHolderEstimateSeed = 7;

}  // namespace condg
