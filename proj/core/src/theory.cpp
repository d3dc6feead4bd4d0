#include "condg/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace condg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Floating-point slack for comparing a difference of two values of magnitude |a|, |b|.
double rounding_slack(double a, double b) { return 8.0 * kEps * std::max(std::abs(a), std::abs(b)); }

double min_abs_prefix(const std::vector<IterationRecord>& records, std::size_t upto) {
  double best = kInf;
  for (std::size_t j = 0; j <= upto; ++j) best = std::min(best, std::abs(records[j].theta));
  return best;
}

}  // namespace

double smoothing_constant(double nu, double m_nu, double eps) {
  if (!(nu > 0.0 && nu <= 1.0) || !(m_nu > 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("smoothing_constant: need nu in (0,1], M > 0, eps > 0");
  }
  const double e = (1.0 - nu) / (1.0 + nu);
  const double base = (1.0 - nu) / (1.0 + nu) / (2.0 * eps);
  return (e == 0.0 ? 1.0 : std::pow(base, e)) * std::pow(m_nu, 2.0 / (1.0 + nu));
}

double linesearch_threshold(double theta, double s_minus_x_norm, const HolderParams& holder) {
  if (!(theta < 0.0) || !(s_minus_x_norm > 0.0)) {
    throw std::invalid_argument("linesearch_threshold: need theta < 0 and a positive norm");
  }
  holder.validate();
  const double a = std::abs(theta);
  const double first = smoothing_constant(holder.nu, holder.m_nu, a / 2.0);
  const double inner =
      smoothing_constant(holder.nu, holder.m_nu, a * a / (4.0 * s_minus_x_norm * s_minus_x_norm));
  const double second = std::pow(inner, (1.0 + holder.nu) / (2.0 * holder.nu));
  return std::max(first, second);
}

double envelope_L_bar(double xi, double diameter, const HolderParams& holder) {
  if (!(xi > 0.0) || !(diameter > 0.0)) {
    throw std::invalid_argument("envelope_L_bar: need xi > 0 and D > 0");
  }
  holder.validate();
  const double nu = holder.nu;
  const double m = holder.m_nu;
  if (nu == 1.0) return m;
  const double r = (1.0 - nu) / (1.0 + nu);
  const double first = std::pow(r / xi, r) * std::pow(m, 2.0 / (1.0 + nu));
  const double second = std::pow(2.0 * r, (1.0 - nu) / (2.0 * nu)) * std::pow(m, 1.0 / nu) *
                        std::pow(diameter / xi, (1.0 - nu) / nu);
  return std::max(first, second);
}

void RateInputs::validate() const {
  if (!(diameter > 0.0)) throw std::invalid_argument("RateInputs: D must be positive");
  if (!(f0_max >= f_inf)) throw std::invalid_argument("RateInputs: f0_max must be >= f_inf");
  holder.validate();
}

double rate_bound_pgm(const RateInputs& in, int k) {
  in.validate();
  if (k < 0) throw std::invalid_argument("rate_bound_pgm: k >= 0");
  const double nu = in.holder.nu;
  const double gap = in.f0_max - in.f_inf;
  const double kk = static_cast<double>(k) + 1.0;
  const double first = (1.0 + nu) * gap / (nu * kk);
  const double second = std::pow((1.0 + nu) * std::pow(in.holder.m_nu, 1.0 / nu) *
                                     std::pow(in.diameter, (1.0 + nu) / nu) * gap / (nu * kk),
                                 nu / (1.0 + nu));
  return std::max(first, second);
}

double rate_bound_fgm(const RateInputs& in, int k, int k_tilde0) {
  in.validate();
  if (k_tilde0 < 0 || k < k_tilde0) throw std::invalid_argument("rate_bound_fgm: need k >= k_tilde0 >= 0");
  const double nu = in.holder.nu;
  const double gap = in.f0_max - in.f_inf;
  const double kk = static_cast<double>(k - k_tilde0) + 1.0;
  const double first = 4.0 * gap / kk;
  const double second = std::pow(std::pow(2.0, 2.0 + 1.0 / nu) * std::pow(in.holder.m_nu, 1.0 / nu) *
                                     std::pow(in.diameter, (1.0 + nu) / nu) * gap / kk,
                                 nu / (1.0 + nu));
  return std::max(first, second);
}

int burn_in_index(double l_init, double l_tilde0) {
  if (!(l_init > 0.0) || !(l_tilde0 > 0.0)) throw std::invalid_argument("burn_in_index: positive inputs");
  const double v = std::log2(l_init / l_tilde0);
  return v > 0.0 ? static_cast<int>(std::ceil(v)) : 0;
}

void RecurrenceParams::validate() const {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("RecurrenceParams: c in (0,1)");
  if (!(alpha > 0.0)) throw std::invalid_argument("RecurrenceParams: alpha > 0");
  if (!(a > 0.0)) throw std::invalid_argument("RecurrenceParams: A > 0");
  if (!(gamma0 >= 0.0)) throw std::invalid_argument("RecurrenceParams: gamma0 >= 0");
}

int recurrence_k0(const RecurrenceParams& params) {
  params.validate();
  if (params.gamma0 == 0.0) return 0;
  const double v = std::log(params.gamma0 / (params.c * std::pow(params.a, 1.0 / params.alpha)));
  return v > 0.0 ? static_cast<int>(std::ceil(v / params.c)) : 0;
}

RecurrenceEnvelope recurrence_envelope(const RecurrenceParams& params, int k,
                                       std::optional<double> gamma_at_k0) {
  RecurrenceEnvelope out;
  out.k0 = recurrence_k0(params);
  if (k < out.k0) throw std::invalid_argument("recurrence_envelope: k < k0");
  const double g = gamma_at_k0.value_or(params.gamma0);
  if (!(g >= 0.0)) throw std::invalid_argument("recurrence_envelope: gamma_{k0} >= 0");
  if (g == 0.0) return out;
  const double denom = std::pow(g, -params.alpha) +
                       params.c * params.alpha * static_cast<double>(k - out.k0) / params.a;
  out.gamma_bound = std::pow(denom, -1.0 / params.alpha);
  return out;
}

void TheoryReport::record(const std::string& name, int k, double lhs, double rhs, double tol) {
  CheckTally& t = checks[name];
  ++t.checked;
  if (lhs <= rhs + tol) return;
  ++t.violated;
  const double excess = lhs - rhs;
  if (t.violated == 1 || excess > t.worst_excess) t.worst_excess = excess;
  if (t.first_violation_k < 0) t.first_violation_k = k;
}

long long TheoryReport::violations(const std::string& name) const {
  const auto it = checks.find(name);
  return it == checks.end() ? 0 : it->second.violated;
}

long long TheoryReport::total_violations() const {
  long long n = 0;
  for (const auto& [name, t] : checks) n += t.violated;
  return n;
}

void TheoryReport::merge(const TheoryReport& other) {
  for (const auto& [name, t] : other.checks) {
    CheckTally& mine = checks[name];
    if (t.violated > 0) {
      if (mine.violated == 0 || t.worst_excess > mine.worst_excess) mine.worst_excess = t.worst_excess;
      if (mine.first_violation_k < 0) mine.first_violation_k = t.first_violation_k;
    }
    mine.checked += t.checked;
    mine.violated += t.violated;
  }
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  if (!k_tilde0) k_tilde0 = other.k_tilde0;
}

RateInputs make_rate_inputs(const RunResult& run, const ProblemInstance& p,
                            const NonsmoothModel& model) {
  RateInputs in;
  in.diameter = domain_of(model).diameter();
  in.holder = p.holder;
  // g >= 0 on the domain in both cases (indicator, or a support function of a
  // set containing the origin), so the h lower bound also bounds F from below.
  in.f_inf = p.h_lower_bound;
  in.f0_max = run.records.empty() ? in.f_inf : run.records.front().f_x.maxCoeff();
  return in;
}

RecurrenceParams convex_recurrence_params(SolverKind solver, const HolderParams& holder,
                                          double diameter, double gamma0) {
  holder.validate();
  const double nu = holder.nu;
  RecurrenceParams r;
  r.alpha = 1.0 / nu;
  r.gamma0 = gamma0;
  if (solver == SolverKind::pgm) {
    r.c = nu / (1.0 + nu);
    r.a = std::pow(holder.m_nu, 1.0 / nu) * std::pow(diameter, (1.0 + nu) / nu);
  } else {
    r.c = 0.25;
    r.a = std::pow(2.0 * holder.m_nu, 1.0 / nu) * std::pow(diameter, (1.0 + nu) / nu);
  }
  return r;
}

TheoryReport replay_run(const RunResult& run, const ProblemInstance& p,
                        const NonsmoothModel& model, const ReplayOptions& opts) {
  TheoryReport rep;
  const auto& recs = run.records;
  if (recs.empty()) {
    rep.notes.push_back("no iterations recorded");
    return rep;
  }
  const BoxBounds& dom = domain_of(model);
  const HolderParams& holder = p.holder;
  const double nu = holder.nu;
  const double slack = run.config.descent_slack;
  const bool fgm = run.solver == SolverKind::fgm;

  for (const auto& r : recs) rep.record("in_domain", r.k, dom.violation(r.x), 0.0, 1e-12);

  // Per-step inequalities need both endpoints recorded.
  for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
    const IterationRecord& cur = recs[k];
    const IterationRecord& nxt = recs[k + 1];
    const double abs_theta = std::abs(cur.theta);
    const double norm = cur.s_minus_x_norm;
    for (int i = 0; i < p.m(); ++i) {
      rep.record("monotonicity", cur.k, nxt.f_x[i] - cur.f_x[i], 0.0, slack);
    }
    if (!fgm) {
      const double ratio = abs_theta / (holder.m_nu * std::pow(norm, 1.0 + nu));
      const double dec = nu / (1.0 + nu) * abs_theta * std::min(1.0, std::pow(ratio, 1.0 / nu));
      for (int i = 0; i < p.m(); ++i) {
        const double tol = opts.decrease_tol + rounding_slack(cur.f_x[i], nxt.f_x[i]);
        rep.record("pgm_decrease", cur.k, dec, cur.f_x[i] - nxt.f_x[i], tol);
      }
      continue;
    }
    if (!cur.l_k || !cur.step) {
      rep.notes.push_back("FGM record " + std::to_string(cur.k) + " lacks L_k or t_k");
      continue;
    }
    const double l = *cur.l_k;
    const double t = *cur.step;
    const Vector f_next = opts.reevaluate ? evaluate_f(p, model, nxt.x) : nxt.f_x;
    const double dec = 0.25 * abs_theta * std::min(1.0, abs_theta / (2.0 * l * norm * norm));
    for (int i = 0; i < p.m(); ++i) {
      rep.record("fgm_acceptance", cur.k, f_next[i],
                 fgm_acceptance_bound(cur.f_x[i], t, abs_theta, l, norm));
      rep.record("fgm_descent", cur.k, f_next[i] - cur.f_x[i], -dec,
                 slack + rounding_slack(cur.f_x[i], f_next[i]));
    }
    rep.record("fgm_inner_cap", cur.k, cur.inner_trials, run.config.max_inner - 1);
  }

  // Curvature thresholds, defined wherever a step was taken (theta < 0, s != x).
  std::vector<double> l_tilde;
  for (const auto& r : recs) {
    if (!(r.theta < 0.0) || !(r.s_minus_x_norm > 0.0)) break;
    const double lt = linesearch_threshold(r.theta, r.s_minus_x_norm, holder);
    l_tilde.push_back(lt);
    const double lbar = envelope_L_bar(std::abs(r.theta), dom.diameter(), holder);
    rep.record("l_tilde_envelope", r.k, lt, lbar, 1e-12 * lbar);
  }

  int k_tilde0 = 0;
  if (fgm && !l_tilde.empty()) {
    k_tilde0 = burn_in_index(run.config.l_init, l_tilde.front());
    rep.k_tilde0 = k_tilde0;
    double max_lt = 0.0;
    for (std::size_t k = 0; k < l_tilde.size() && k < recs.size(); ++k) {
      max_lt = std::max(max_lt, l_tilde[k]);
      if (static_cast<int>(k) < k_tilde0 || !recs[k].l_k) continue;
      rep.record("fgm_l_bound", recs[k].k, *recs[k].l_k, 2.0 * max_lt, 1e-12 * max_lt);
    }
  }

  if (opts.check_rates) {
    const RateInputs in = make_rate_inputs(run, p, model);
    if (!(in.f0_max >= in.f_inf)) {
      rep.notes.push_back("rate checks skipped: f0_max below the lower bound on F");
    } else {
      for (std::size_t k = 0; k < recs.size(); ++k) {
        const double best = min_abs_prefix(recs, k);
        const int kk = recs[k].k;
        if (!fgm) {
          const double b = rate_bound_pgm(in, kk);
          rep.record("rate_pgm", kk, best, b, 1e-12 * b);
        } else if (kk >= k_tilde0) {
          const double b = rate_bound_fgm(in, kk, k_tilde0);
          rep.record("rate_fgm", kk, best, b, 1e-12 * b);
        }
      }
    }
  }
  return rep;
}

TheoryReport convex_rate_check(const RunResult& run, const Vector& x_star,
                               const ProblemInstance& p, const NonsmoothModel& model) {
  TheoryReport rep;
  const auto& recs = run.records;
  if (recs.empty()) {
    rep.notes.push_back("no iterations recorded");
    return rep;
  }
  const Vector f_star = evaluate_f(p, model, x_star);
  std::vector<double> delta;
  delta.reserve(recs.size());
  for (const auto& r : recs) {
    const Vector diff = r.f_x - f_star;
    if (diff.minCoeff() < -1e-12 * (1.0 + f_star.cwiseAbs().maxCoeff())) {
      rep.notes.push_back("convex checks skipped: F(x*) does not dominate F(x^" +
                          std::to_string(r.k) + ")");
      return rep;
    }
    delta.push_back(std::max(0.0, diff.minCoeff()));
  }

  for (std::size_t k = 0; k < recs.size(); ++k) {
    const double tol = 1e-12 * (1.0 + recs[k].f_x.cwiseAbs().maxCoeff());
    rep.record("convex_sandwich", recs[k].k, delta[k], std::abs(recs[k].theta), tol);
  }

  // FGM's recurrence only starts after the line-search burn-in.
  int shift = 0;
  if (run.solver == SolverKind::fgm) {
    const auto& r0 = recs.front();
    if (r0.theta < 0.0 && r0.s_minus_x_norm > 0.0) {
      shift = burn_in_index(run.config.l_init,
                            linesearch_threshold(r0.theta, r0.s_minus_x_norm, p.holder));
    }
    rep.k_tilde0 = shift;
  }
  if (static_cast<std::size_t>(shift) >= recs.size()) return rep;

  const RecurrenceParams params = convex_recurrence_params(
      run.solver, p.holder, domain_of(model).diameter(), delta[shift]);
  const int k0 = recurrence_k0(params);
  const std::size_t start = static_cast<std::size_t>(shift) + static_cast<std::size_t>(k0);
  if (start >= recs.size()) return rep;
  for (std::size_t idx = start; idx < recs.size(); ++idx) {
    const int j = static_cast<int>(idx) - shift;
    const double bound = recurrence_envelope(params, j, delta[start]).gamma_bound;
    rep.record("convex_envelope", recs[idx].k, delta[idx], bound, 1e-12 * (1.0 + bound));
  }
  return rep;
}

}  // namespace condg
