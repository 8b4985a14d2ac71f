#include "sintermech/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/LU>

namespace sintermech::integrator {

namespace {

using tensorlab::BasicSymTensor3;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using Mat76 = Eigen::Matrix<double, 7, 6>;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Everything held fixed during the implicit solve of one step.
struct StepContext {
  const MaterialParams* params = nullptr;
  SymTensor3 eps_e_trial;
  double T_new = 0.0;
  double R_new = 0.0;
  double rho_n = 0.0;
  double eta = 0.0;
  double dt = 0.0;
  double band = 0.0;
  bool sintering = true;
};

template <class S>
S smooth_macaulay_t(const S& F, double band) {
  const double v = value_of(F);
  if (v <= 0.0) return S(0.0);
  if (v < band) return S(F * F / (2.0 * band));
  return S(F - 0.5 * band);
}

template <class S>
struct Evaluation {
  std::array<S, 7> r;
  BasicSymTensor3<S> sigma;
  BasicSymTensor3<S> sigma_hat;
  BasicSymTensor3<S> dep;
  S rho;
  S F;
  double F_noise = 0.0;  ///< rounding level of ℱ at this point [MPa]
};

/// Residual of the implicit step at x = (Δε_p, Δλ).  Throws DomainError
/// for iterates outside 0 < ρ̂ < 1.
template <class S>
Evaluation<S> evaluate(const std::array<S, 7>& x, const BasicSymTensor3<S>& eps_e_trial,
                       const StepContext& c) {
  using std::exp;
  const MaterialParams& params = *c.params;
  Evaluation<S> e;
  for (int i = 0; i < 6; ++i) e.dep[i] = x[i];
  const S dlam = x[6];

  e.sigma = matmodel::elastic_stress(BasicSymTensor3<S>(eps_e_trial - e.dep), c.T_new, params);
  e.rho = S(c.rho_n * exp(-tensorlab::trace(e.dep)));
  const double rho = value_of(e.rho);
  if (!(rho > 0.0 && rho < 1.0) || !std::isfinite(rho)) {
    throw DomainError("return map: relative density left (0, 1): " + fmt(rho));
  }
  const micromech::HardeningState<S> h = micromech::hardening_bundle(e.rho, c.T_new, params);
  const S ss = c.sintering ? matmodel::sintering_stress(e.rho, c.R_new, params) : S(0.0);
  e.sigma_hat = matmodel::effective_stress(e.sigma, ss);
  e.F = matmodel::bp_yield(e.sigma_hat, h, params);
  {
    const SymTensor3 sh = tensorlab::tensor_cast<double>(e.sigma_hat);
    const auto hd = micromech::HardeningState<double>{value_of(h.p_c), value_of(h.c),
                                                      value_of(h.M), value_of(h.A_c)};
    const double slope = tensorlab::norm(matmodel::bp_yield_derivative(sh, hd, params));
    e.F_noise = std::numeric_limits<double>::epsilon() *
                (slope * tensorlab::norm(sh) + std::abs(hd.M * hd.p_c));
  }
  const BasicSymTensor3<S> Q = matmodel::bp_yield_gradient(e.sigma_hat, h, params);
  for (int i = 0; i < 6; ++i) e.r[i] = S(e.dep[i] - dlam * Q[i]);
  // scaled so the row stays O(1) from the rate-independent limit to η/Δt ≫ σ_m
  e.r[6] = S((smooth_macaulay_t(e.F, c.band) - (c.eta / c.dt) * dlam) /
             (params.sigma_m + c.eta / c.dt));
  return e;
}

Evaluation<double> evaluate_value(const Vec7& x, const StepContext& c) {
  std::array<double, 7> xs{};
  for (int i = 0; i < 7; ++i) xs[i] = x(i);
  return evaluate<double>(xs, c.eps_e_trial, c);
}

Vec7 residual_vector(const Evaluation<double>& e) {
  Vec7 r;
  for (int i = 0; i < 7; ++i) r(i) = e.r[i];
  return r;
}

/// Residual and Jacobian with respect to x.
Vec7 residual_and_jacobian(const Vec7& x, const StepContext& c, Mat7& J, double& F,
                           double& F_noise) {
  using AD = AdScalar<7>;
  std::array<AD, 7> xs;
  for (int i = 0; i < 7; ++i) xs[i] = AD(x(i), 7, i);
  const BasicSymTensor3<AD> trial = tensorlab::tensor_cast<AD>(c.eps_e_trial);
  const Evaluation<AD> e = evaluate<AD>(xs, trial, c);
  F = e.F.value();
  F_noise = e.F_noise;
  Vec7 r;
  for (int i = 0; i < 7; ++i) {
    r(i) = e.r[i].value();
    J.row(i) = e.r[i].derivatives().transpose();
  }
  return r;
}

/// ∂r/∂ε_e^trial at fixed x.
Mat76 residual_strain_jacobian(const Vec7& x, const StepContext& c) {
  using AD = AdScalar<6>;
  std::array<AD, 7> xs;
  for (int i = 0; i < 7; ++i) xs[i] = AD(x(i));
  BasicSymTensor3<AD> trial;
  for (int i = 0; i < 6; ++i) trial[i] = AD(c.eps_e_trial[i], 6, i);
  const Evaluation<AD> e = evaluate<AD>(xs, trial, c);
  Mat76 Je;
  for (int i = 0; i < 7; ++i) Je.row(i) = e.r[i].derivatives().transpose();
  return Je;
}

bool finite(const Vec7& v) { return v.allFinite(); }

struct NewtonOutcome {
  bool converged = false;
  Vec7 x = Vec7::Zero();
  Mat7 J = Mat7::Zero();
  int iterations = 0;
  std::string failure;
};

/// Inverse of the smoothed Macaulay bracket on y ≥ 0.
double inverse_smooth_macaulay(double y, double band) {
  if (y <= 0.0) return 0.0;
  if (y < 0.5 * band) return std::sqrt(2.0 * band * y);
  return y + 0.5 * band;
}

/// Convergence measure.  The consistency row is compared in yield-value
/// space: inside the smoothing band ⟨ℱ⟩ ~ ℱ², where the raw residual would
/// bound ℱ only by the square root of the tolerance.  A yield-space error
/// within a few hundred ulps of ℱ's own rounding level counts as zero: on
/// the stretched surfaces of loose powder ‖∂ℱ/∂σ̂‖ reaches 1e8 and ℱ cannot
/// be resolved any finer.
double convergence_norm(const Vec7& r, const Vec7& x, double F, double F_noise,
                        const StepContext& c) {
  const double n = r.head<6>().lpNorm<Eigen::Infinity>();
  double r6 = r(6);
  if (F > 0.0) {
    const double y = c.eta / c.dt * x(6);
    double gap = F - inverse_smooth_macaulay(y, c.band);
    if (std::abs(gap) <= 256.0 * F_noise) gap = 0.0;
    r6 = gap / (c.params->sigma_m + c.eta / c.dt);
  }
  return std::max(n, std::abs(r6));
}

/// Damped Newton on the seven-equation system starting from x = 0.
NewtonOutcome solve_plastic(const StepContext& c, const IntegratorSettings& settings) {
  NewtonOutcome out;
  Vec7 x = Vec7::Zero();
  for (int it = 0; it <= settings.newton_max_iter; ++it) {
    Mat7 J;
    Vec7 r;
    double F = 0.0;
    double F_noise = 0.0;
    try {
      r = residual_and_jacobian(x, c, J, F, F_noise);
    } catch (const NumericalError& err) {
      out.failure = err.what();
      return out;
    }
    if (!finite(r) || !J.allFinite()) {
      out.failure = "non-finite residual at iteration " + std::to_string(it);
      return out;
    }
    const double rn = convergence_norm(r, x, F, F_noise, c);
    if (rn <= settings.newton_tol) {
      out.converged = true;
      out.x = x;
      out.J = J;
      out.iterations = it;
      return out;
    }
    if (it == settings.newton_max_iter) break;

    const Eigen::FullPivLU<Mat7> lu(J);
    const Vec7 delta = lu.solve(-r);
    if (!lu.isInvertible() || !finite(delta)) {
      out.failure = "singular Jacobian at iteration " + std::to_string(it);
      return out;
    }

    const double merit0 = 0.5 * r.squaredNorm();
    double alpha = 1.0;
    // Δλ < 0 has no admissible solution; stop short of the boundary
    if (delta(6) < 0.0 && x(6) + delta(6) < 0.0) alpha = 0.99 * x(6) / -delta(6);
    if (alpha < 1e-8) {
      out.failure = "multiplier driven to zero at iteration " + std::to_string(it);
      return out;
    }
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
      const Vec7 xt = x + alpha * delta;
      try {
        const Evaluation<double> et = evaluate_value(xt, c);
        const Vec7 rt = residual_vector(et);
        // the raw merit stalls at rounding level before the yield-space
        // measure does, so a decrease in either is progress
        if (finite(rt) && (0.5 * rt.squaredNorm() <= (1.0 - 1e-4 * alpha) * merit0 ||
                           convergence_norm(rt, xt, et.F, et.F_noise, c) <= (1.0 - 1e-4 * alpha) * rn)) {
          x = xt;
          accepted = true;
          break;
        }
      } catch (const NumericalError&) {
        // rejected trial point, keep backtracking
      }
    }
    if (!accepted) {
      out.failure = "line search failed at iteration " + std::to_string(it) +
                    ", residual " + fmt(rn);
      return out;
    }
  }
  out.failure = "no convergence in " + std::to_string(settings.newton_max_iter) +
                " iterations";
  return out;
}

double step_viscosity(double T, double R, const MaterialParams& params,
                      const IntegratorSettings& settings) {
  if (settings.viscosity_override) return *settings.viscosity_override;
  return matmodel::viscosity(T, R, params);
}

/// One unsubdivided step.  Returns false (with a reason) when the plastic
/// solve fails; errors in the trial state propagate.
bool single_step(const MaterialState& state, const SymTensor3& deps, double T_new, double dt,
                 const MaterialParams& params, const IntegratorSettings& settings,
                 StepResult& result, std::string& failure) {
  StepContext c;
  c.params = &params;
  c.eps_e_trial = state.eps_e + deps;
  c.T_new = T_new;
  c.R_new = matmodel::grain_growth_step(state.R_grain, 0.5 * (state.T + T_new), dt, params);
  c.rho_n = state.rho_hat;
  c.eta = step_viscosity(T_new, c.R_new, params, settings);
  c.dt = dt;
  c.band = 1e-6 * params.sigma_m;
  c.sintering = settings.sintering_stress;
  if (!(c.eta > 0.0) || !std::isfinite(c.eta)) {
    throw DomainError("return map: viscosity must be positive and finite, got " + fmt(c.eta));
  }

  const Evaluation<double> trial = evaluate_value(Vec7::Zero(), c);
  result = StepResult{};
  result.substeps_used = 1;
  result.converged = true;

  if (trial.F <= 0.0) {
    result.state = state;
    result.state.eps_e = c.eps_e_trial;
    result.state.T = T_new;
    result.state.R_grain = c.R_new;
    result.sigma = trial.sigma;
    result.sigma_hat = trial.sigma_hat;
    result.yield_value = trial.F;
    result.tangent = elastic_stiffness(params);
    return true;
  }

  const NewtonOutcome n = solve_plastic(c, settings);
  if (!n.converged) {
    failure = n.failure;
    return false;
  }
  const Evaluation<double> e = evaluate_value(n.x, c);
  result.plastic = true;
  result.newton_iterations = n.iterations;
  result.state.eps_e = c.eps_e_trial - e.dep;
  result.state.eps_p = state.eps_p + e.dep;
  result.state.rho_hat = e.rho;
  result.state.R_grain = c.R_new;
  result.state.T = T_new;
  result.sigma = e.sigma;
  result.sigma_hat = e.sigma_hat;
  result.yield_value = e.F;
  result.dlambda = n.x(6);
  result.dissipation = tensorlab::dot(e.sigma_hat, e.dep);

  // dσ/dε = C (I − dΔε_p/dε) with dx/dε = −J⁻¹ ∂r/∂ε
  const Mat76 Je = residual_strain_jacobian(n.x, c);
  const Mat76 dx = -Eigen::FullPivLU<Mat7>(n.J).solve(Je);
  const Matrix6 ddep = dx.topRows<6>();
  result.tangent = elastic_stiffness(params) * (Matrix6::Identity() - ddep);
  if (!result.tangent.allFinite()) result.tangent = elastic_stiffness(params);
  return true;
}

StepResult step_recursive(const MaterialState& state, const SymTensor3& deps, double T_new,
                          double dt, const MaterialParams& params,
                          const IntegratorSettings& settings, int level) {
  StepResult result;
  std::string failure;
  if (single_step(state, deps, T_new, dt, params, settings, result, failure)) return result;
  if (level >= settings.substep_max_levels) {
    throw NonConvergence("return map: " + failure + " after " + std::to_string(level) +
                         " bisection levels (dt = " + fmt(dt) + " s, T = " + fmt(T_new) +
                         " C, rho_hat = " + fmt(state.rho_hat) + ")");
  }
  const double T_mid = 0.5 * (state.T + T_new);
  const SymTensor3 half = 0.5 * deps;
  const StepResult a = step_recursive(state, half, T_mid, 0.5 * dt, params, settings, level + 1);
  StepResult b = step_recursive(a.state, half, T_new, 0.5 * dt, params, settings, level + 1);
  b.dlambda += a.dlambda;
  b.dissipation += a.dissipation;
  b.substeps_used += a.substeps_used;
  b.newton_iterations += a.newton_iterations;
  b.plastic = a.plastic || b.plastic;
  return b;
}

struct MixedResult {
  StepResult step;
  SymTensor3 increment;
};

/// Finds the strain increment whose stress-controlled components reach
/// `target`; strain-controlled components of `increment` are prescribed.
MixedResult mixed_step(const MaterialState& state, const std::array<bool, 6>& stress_slot,
                       SymTensor3 increment, const SymTensor3& target, double T_new, double dt,
                       const MaterialParams& params, const IntegratorSettings& settings) {
  std::array<int, 6> idx{};
  int n = 0;
  for (int i = 0; i < 6; ++i) {
    if (stress_slot[i]) idx[n++] = i;
  }
  const double tol = 1e-8 * params.sigma_m;
  // once within tol a few more updates are cheap and keep near-zero stress
  // states from carrying elastic strain noise
  const double polish_tol = 1e-13 * params.sigma_m;
  constexpr int kPolish = 3;
  double err_norm = 0.0;
  int polished = 0;
  std::optional<MixedResult> best;
  double best_err = 0.0;
  for (int it = 0; it <= settings.newton_max_iter; ++it) {
    StepResult r = return_map_step(state, increment, T_new, dt, params, settings);
    if (n == 0) return {r, increment};
    Eigen::VectorXd err(n);
    Eigen::MatrixXd D(n, n);
    for (int a = 0; a < n; ++a) {
      err(a) = r.sigma[idx[a]] - target[idx[a]];
      for (int b = 0; b < n; ++b) D(a, b) = r.tangent(idx[a], idx[b]);
    }
    err_norm = err.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(err_norm)) break;
    if (err_norm <= tol) {
      if (!best || err_norm < best_err) {
        best = MixedResult{r, increment};
        best_err = err_norm;
      }
      if (err_norm <= polish_tol || polished++ >= kPolish) return *best;
    } else if (best) {
      return *best;
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(D);
    if (!lu.isInvertible()) {
      throw NonConvergence("mixed control: singular tangent");
    }
    const Eigen::VectorXd delta = lu.solve(-err);
    for (int a = 0; a < n; ++a) increment[idx[a]] += delta(a);
  }
  if (best) return *best;
  throw NonConvergence("mixed control: stress residual " + fmt(err_norm) + " MPa not below " +
                       fmt(tol));
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void IntegratorSettings::validate() const {
  if (!(newton_tol > 0.0)) throw ConfigError("newton_tol must be positive");
  if (newton_max_iter < 1) throw ConfigError("newton_max_iter must be at least 1");
  if (substep_max_levels < 0) throw ConfigError("substep_max_levels must be non-negative");
  if (!(dt_initial > 0.0) || !std::isfinite(dt_initial)) {
    throw ConfigError("dt_initial must be positive");
  }
  if (viscosity_override && !(*viscosity_override > 0.0)) {
    throw ConfigError("viscosity_override must be positive");
  }
}

Matrix6 elastic_stiffness(const MaterialParams& params) {
  const double lambda = params.lame_lambda();
  const double mu = params.shear_modulus();
  Matrix6 C = Matrix6::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) C(i, j) = lambda;
    C(i, i) += 2.0 * mu;
    C(i + 3, i + 3) = 2.0 * mu;
  }
  return C;
}

double smooth_macaulay(double F, double band) { return smooth_macaulay_t(F, band); }

StepResult return_map_step(const MaterialState& state, const SymTensor3& strain_increment,
                           double T_new, double dt, const MaterialParams& params,
                           const IntegratorSettings& settings) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError("return_map_step: dt must be positive, got " + fmt(dt));
  }
  for (int i = 0; i < 6; ++i) {
    if (!std::isfinite(strain_increment[i])) {
      throw DomainError("return_map_step: non-finite strain increment");
    }
  }
  return step_recursive(state, strain_increment, T_new, dt, params, settings, 0);
}

StepResult evaluate_state(const MaterialState& state, const MaterialParams& params,
                          const IntegratorSettings& settings) {
  StepResult r;
  r.state = state;
  r.converged = true;
  r.substeps_used = 0;
  r.sigma = matmodel::elastic_stress(state.eps_e, state.T, params);
  const auto h = micromech::hardening_bundle(state.rho_hat, state.T, params);
  const double ss =
      settings.sintering_stress ? matmodel::sintering_stress(state.rho_hat, state.R_grain, params)
                                : 0.0;
  r.sigma_hat = matmodel::effective_stress(r.sigma, ss);
  r.yield_value = matmodel::bp_yield(r.sigma_hat, h, params);
  r.tangent = elastic_stiffness(params);
  return r;
}

TimeSeriesRecord make_record(double time, const StepResult& step, const MaterialParams& params) {
  TimeSeriesRecord rec;
  const MaterialState& s = step.state;
  const tensorlab::StressInvariants inv = tensorlab::stress_invariants(step.sigma, params.q_eps);
  rec.time_s = time;
  rec.T_C = s.T;
  rec.p_MPa = inv.p;
  rec.q_MPa = inv.q;
  rec.eps = s.total_strain();
  rec.eps_p = s.eps_p;
  rec.sigma = step.sigma;
  rec.eps_axial = rec.eps[0];
  rec.eps_axial_corrected = rec.eps_axial - params.alpha0 / 3.0 * (s.T - params.T0);
  rec.eps_p_trace = tensorlab::trace(s.eps_p);
  rec.rho_hat = s.rho_hat;
  rec.R_grain_m = s.R_grain;
  rec.yield_value_MPa = step.yield_value;
  rec.dissipation_MPa = step.dissipation;
  rec.dlambda = step.dlambda;
  rec.substeps = step.substeps_used;
  return rec;
}

double temperature_at(const TemperatureSchedule& schedule, double t, double T_segment_start) {
  return std::visit(
      Overloaded{
          [](const ConstantTemperature& c) { return c.T_C; },
          [&](const TemperatureRamp& r) {
            return r.start_C.value_or(T_segment_start) + r.rate_C_per_min * t / 60.0;
          },
          [&](const TemperatureTable& tab) {
            const auto& pts = tab.points;
            if (t <= pts.front().first) return pts.front().second;
            if (t >= pts.back().first) return pts.back().second;
            const auto hi = std::upper_bound(
                pts.begin(), pts.end(), t,
                [](double v, const std::pair<double, double>& p) { return v < p.first; });
            const auto lo = hi - 1;
            const double w = (t - lo->first) / (hi->first - lo->first);
            return lo->second + w * (hi->second - lo->second);
          }},
      schedule);
}

LoadSegment LoadSegment::strain_rate(double duration, const SymTensor3& rate) {
  LoadSegment s;
  s.duration = duration;
  for (int i = 0; i < 6; ++i) s.control[i] = {ControlMode::StrainRate, rate[i]};
  return s;
}

LoadSegment LoadSegment::stress_target(double duration, const SymTensor3& target) {
  LoadSegment s;
  s.duration = duration;
  for (int i = 0; i < 6; ++i) s.control[i] = {ControlMode::Stress, target[i]};
  return s;
}

bool LoadSegment::has_stress_control() const {
  return std::any_of(control.begin(), control.end(),
                     [](const AxisControl& a) { return a.mode == ControlMode::Stress; });
}

void LoadSegment::validate() const {
  const std::string who = name.empty() ? "load segment" : "load segment '" + name + "'";
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ConfigError(who + ": duration must be positive");
  }
  if (!(max_dt > 0.0) || !std::isfinite(max_dt)) {
    throw ConfigError(who + ": max_dt must be positive");
  }
  for (const AxisControl& a : control) {
    if (!std::isfinite(a.value)) throw ConfigError(who + ": non-finite control value");
  }
  if (viscosity_override && !(*viscosity_override > 0.0)) {
    throw ConfigError(who + ": viscosity override must be positive");
  }
  if (const auto* tab = std::get_if<TemperatureTable>(&temperature)) {
    if (tab->points.empty()) throw ConfigError(who + ": empty temperature table");
    for (std::size_t i = 1; i < tab->points.size(); ++i) {
      if (!(tab->points[i].first > tab->points[i - 1].first)) {
        throw ConfigError(who + ": temperature table times must increase");
      }
    }
  }
  if (const auto* r = std::get_if<TemperatureRamp>(&temperature)) {
    if (!std::isfinite(r->rate_C_per_min)) throw ConfigError(who + ": non-finite ramp rate");
  }
}

void advance_segment(MaterialState& state, SymTensor3& sigma, const LoadSegment& segment,
                     double t_start, const MaterialParams& params,
                     const IntegratorSettings& base_settings, std::vector<TimeSeriesRecord>& out) {
  segment.validate();
  IntegratorSettings settings = base_settings;
  if (segment.viscosity_override) settings.viscosity_override = segment.viscosity_override;
  if (segment.sintering_stress) settings.sintering_stress = *segment.sintering_stress;

  std::array<bool, 6> stress_slot{};
  SymTensor3 target_end;
  SymTensor3 strain_rate;
  for (int i = 0; i < 6; ++i) {
    stress_slot[i] = segment.control[i].mode == ControlMode::Stress;
    if (stress_slot[i]) {
      target_end[i] = segment.control[i].value;
    } else {
      strain_rate[i] = segment.control[i].value;
    }
  }

  const SymTensor3 sigma0 = sigma;
  const double T_start = state.T;
  const double duration = segment.duration;
  double dt = std::min(settings.dt_initial, segment.max_dt);
  double t = 0.0;
  int streak = 0;
  int halvings = 0;
  SymTensor3 rate_guess;  // last strain rate of the stress-controlled slots

  while (t < duration) {
    double h = std::min(dt, duration - t);
    if (duration - (t + h) <= 1e-12 * duration) h = duration - t;
    const double t_new = t + h;
    const double T_new = temperature_at(segment.temperature, t_new, T_start);
    const double w = t_new / duration;

    SymTensor3 increment;
    SymTensor3 target;
    for (int i = 0; i < 6; ++i) {
      if (stress_slot[i]) {
        increment[i] = rate_guess[i] * h;
        target[i] = sigma0[i] + w * (target_end[i] - sigma0[i]);
      } else {
        increment[i] = strain_rate[i] * h;
      }
    }

    try {
      const MixedResult m =
          mixed_step(state, stress_slot, increment, target, T_new, h, params, settings);
      state = m.step.state;
      sigma = m.step.sigma;
      out.push_back(make_record(t_start + t_new, m.step, params));
      for (int i = 0; i < 6; ++i) {
        if (stress_slot[i]) rate_guess[i] = m.increment[i] / h;
      }
      t = t_new;
      halvings = 0;
      if (++streak >= 3) {
        dt = std::min(2.0 * dt, segment.max_dt);
        streak = 0;
      }
    } catch (const NumericalError& e) {
      if (++halvings > settings.substep_max_levels) {
        throw NonConvergence((segment.name.empty() ? std::string("segment")
                                                   : "segment '" + segment.name + "'") +
                             " at t = " + fmt(t_start + t) + " s: " + e.what());
      }
      dt = 0.5 * h;
      streak = 0;
    }
  }
}

ProgramResult drive_program(const MaterialState& state0, const std::vector<LoadSegment>& program,
                            const MaterialParams& params, const IntegratorSettings& settings) {
  params.validate();
  settings.validate();
  for (const LoadSegment& s : program) s.validate();

  ProgramResult result;
  MaterialState state = state0;
  IntegratorSettings first = settings;
  if (!program.empty() && program.front().sintering_stress) {
    first.sintering_stress = *program.front().sintering_stress;
  }
  const StepResult initial = evaluate_state(state, params, first);
  result.records.push_back(make_record(0.0, initial, params));
  SymTensor3 sigma = initial.sigma;
  double t = 0.0;
  for (const LoadSegment& seg : program) {
    advance_segment(state, sigma, seg, t, params, settings, result.records);
    t += seg.duration;
  }
  result.final_state = state;
  return result;
}

ProgramResult dilatometer_run(const MaterialParams& params, const DilatometerOptions& options,
                              const IntegratorSettings& settings) {
  if (!(options.ramp_rate_C_per_min > 0.0)) {
    throw ConfigError("dilatometer: ramp rate must be positive");
  }
  if (!(options.T_max_C > options.T_start_C)) {
    throw ConfigError("dilatometer: T_max must exceed T_start");
  }
  MaterialState state = MaterialState::initial(params);
  state.T = options.T_start_C;
  // stress-free at the start temperature
  state.eps_e = SymTensor3::identity() * (params.alpha0 / 3.0 * (state.T - params.T0));

  LoadSegment seg = LoadSegment::stress_target(
      (options.T_max_C - options.T_start_C) / options.ramp_rate_C_per_min * 60.0,
      SymTensor3::zero());
  seg.temperature = TemperatureRamp{options.T_start_C, options.ramp_rate_C_per_min};
  seg.max_dt = options.max_dt;
  seg.name = "heating";
  return drive_program(state, {seg}, params, settings);
}

ProgramResult oedometric_press_run(const MaterialParams& params, const PressOptions& options,
                                   const IntegratorSettings& settings) {
  if (!(options.stroke_ratio >= 0.0 && options.stroke_ratio < 1.0)) {
    throw ConfigError("press: stroke ratio must lie in [0, 1)");
  }
  if (!(options.strain_rate > 0.0)) throw ConfigError("press: strain rate must be positive");
  if (!(options.unload_duration > 0.0)) {
    throw ConfigError("press: unload duration must be positive");
  }

  MaterialState state = MaterialState::initial(params);
  state.T = options.T_C;
  state.eps_e = SymTensor3::identity() * (params.alpha0 / 3.0 * (state.T - params.T0));

  std::vector<LoadSegment> program;
  const double axial = std::log1p(-options.stroke_ratio);
  if (axial < 0.0) {
    SymTensor3 rate;
    rate[0] = -options.strain_rate;
    LoadSegment load = LoadSegment::strain_rate(-axial / options.strain_rate, rate);
    load.name = "loading";
    program.push_back(load);
  }
  LoadSegment unload = LoadSegment::strain_rate(options.unload_duration, SymTensor3::zero());
  unload.control[0] = {ControlMode::Stress, 0.0};
  unload.name = "unloading";
  program.push_back(unload);

  for (LoadSegment& seg : program) {
    seg.temperature = ConstantTemperature{options.T_C};
    seg.max_dt = options.max_dt;
    seg.viscosity_override = options.viscosity;
    seg.sintering_stress = options.sintering_stress;
  }
  return drive_program(state, program, params, settings);
}

}  // namespace sintermech::integrator
