#include "condg/nonsmooth.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "condg/rng.hpp"

namespace condg {

SupportFunctionModel::SupportFunctionModel(std::vector<Matrix> b, double delta, BoxBounds domain)
    : b_(std::move(b)), delta_(delta), domain_(std::move(domain)) {
  if (b_.empty()) throw std::invalid_argument("SupportFunctionModel: need at least one B_i");
  if (!(delta_ > 0.0)) throw std::invalid_argument("SupportFunctionModel: delta must be positive");
  const int n = domain_.dim();
  c_.reserve(b_.size());
  for (const Matrix& bi : b_) {
    if (bi.rows() != n || bi.cols() != n) {
      throw std::invalid_argument("SupportFunctionModel: B_i must be n x n");
    }
    if (!(condition_number(bi) <= kMaxConditionNumber)) {
      throw std::invalid_argument("SupportFunctionModel: B_i singular or ill-conditioned");
    }
    Matrix ci(2 * n, n);
    ci << bi, -bi;
    c_.push_back(std::move(ci));
  }
}

double condition_number(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  const double smin = s[s.size() - 1];
  return smin > 0.0 ? s[0] / smin : kInf;
}

SupportFunctionModel sample_support_model(int n, int m, const BoxBounds& domain,
                                          std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("sample_support_model: n, m >= 1");
  if (domain.dim() != n) throw std::invalid_argument("sample_support_model: domain dimension");
  Rng rng(seed);
  std::vector<Matrix> bs;
  bs.reserve(m);
  for (int i = 0; i < m; ++i) {
    int attempts = 0;
    for (;;) {
      Matrix bi(n, n);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) bi(r, c) = rng.uniform();
      }
      if (condition_number(bi) <= kMaxConditionNumber) {
        bs.push_back(std::move(bi));
        break;
      }
      if (++attempts >= kMaxModelRegenerations) {
        throw std::runtime_error("sample_support_model: no well-conditioned B_i after " +
                                 std::to_string(kMaxModelRegenerations) + " draws");
      }
    }
  }
  const double delta = rng.uniform(kDeltaMin, kDeltaMax);
  return SupportFunctionModel(std::move(bs), delta, domain);
}

LinearProgram support_function_lp(const SupportFunctionModel& model, int i, const Vector& x) {
  const int n = model.dim();
  LinearProgram lp = LinearProgram::with_variables(n);
  lp.objective = -x;
  lp.a_ub = model.c(i);
  lp.b_ub = model.rhs();
  return lp;
}

double evaluate_support(const SupportFunctionModel& model, int i, const Vector& x,
                        EvalCounters* counters) {
  if (i < 0 || i >= model.num_objectives()) throw std::out_of_range("evaluate_g: objective index");
  const LpSolution sol = solve_lp(support_function_lp(model, i, x));
  if (counters) ++counters->lp_solves;
  if (!sol.optimal()) {
    throw NumericalError("evaluate_g: support-function LP returned " +
                         std::string(to_string(sol.status)));
  }
  return -sol.objective_value;
}

double evaluate_g(const NonsmoothModel& model, int i, const Vector& x, EvalCounters* counters) {
  if (counters) ++counters->g_evals;
  if (const auto* ind = std::get_if<IndicatorModel>(&model)) {
    return ind->box.contains(x, kIndicatorSlack) ? 0.0 : kInf;
  }
  return evaluate_support(std::get<SupportFunctionModel>(model), i, x, counters);
}

const BoxBounds& domain_of(const NonsmoothModel& model) {
  return std::visit(
      [](const auto& m) -> const BoxBounds& {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, IndicatorModel>) {
          return m.box;
        } else {
          return m.domain();
        }
      },
      model);
}

bool is_indicator(const NonsmoothModel& model) noexcept {
  return std::holds_alternative<IndicatorModel>(model);
}

}  // namespace condg
