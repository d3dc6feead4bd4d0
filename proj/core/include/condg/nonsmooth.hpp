#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "condg/box.hpp"
#include "condg/lp.hpp"

namespace condg {

/// Every g_i is the indicator of the same box.
struct IndicatorModel {
  BoxBounds box;
};

/// g_i(x) = max { <x, z> : -delta e <= B_i z <= delta e }, with dom g_i = domain.
class SupportFunctionModel {
 public:
  SupportFunctionModel(std::vector<Matrix> b, double delta, BoxBounds domain);

  int dim() const noexcept { return domain_.dim(); }
  int num_objectives() const noexcept { return static_cast<int>(b_.size()); }
  double delta() const noexcept { return delta_; }
  const BoxBounds& domain() const noexcept { return domain_; }
  const Matrix& b(int i) const { return b_.at(i); }
  /// C_i = [B_i; -B_i].
  const Matrix& c(int i) const { return c_.at(i); }
  /// b_i = delta * e in R^{2n}.
  Vector rhs() const { return Vector::Constant(2 * dim(), delta_); }

 private:
  std::vector<Matrix> b_;
  std::vector<Matrix> c_;
  double delta_;
  BoxBounds domain_;
};

using NonsmoothModel = std::variant<IndicatorModel, SupportFunctionModel>;

inline constexpr double kMaxConditionNumber = 1e8;
inline constexpr int kMaxModelRegenerations = 100;
inline constexpr double kDeltaMin = 0.01;
inline constexpr double kDeltaMax = 0.1;
inline constexpr double kIndicatorSlack = 1e-12;

/// 2-norm condition number via SVD.
double condition_number(const Matrix& a);

/// B_i entries uniform on [0,1], one shared delta uniform on [0.01, 0.1].
SupportFunctionModel sample_support_model(int n, int m, const BoxBounds& domain,
                                          std::uint64_t seed);

struct EvalCounters {
  long long g_evals = 0;
  long long lp_solves = 0;
};

/// Indicator: 0 inside the box (1e-12 slack), +inf outside. Support function:
/// LP value of max <x,z> over Z_i. Throws NumericalError on LP failure.
double evaluate_g(const NonsmoothModel& model, int i, const Vector& x,
                  EvalCounters* counters = nullptr);

/// Support-function branch of evaluate_g.
double evaluate_support(const SupportFunctionModel& model, int i, const Vector& x,
                        EvalCounters* counters = nullptr);

/// The LP whose optimal value is -g_i(x) (minimize -<x,z> s.t. C_i z <= b_i).
LinearProgram support_function_lp(const SupportFunctionModel& model, int i, const Vector& x);

const BoxBounds& domain_of(const NonsmoothModel& model);

bool is_indicator(const NonsmoothModel& model) noexcept;

}  // namespace condg
