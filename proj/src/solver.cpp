#include "tdirac/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tdirac/kernels.hpp"
#include "tdirac/norms.hpp"
#include "tdirac/sampling.hpp"

namespace tdirac::solver {
namespace {

SpinorField apply_constant(const CMatrix& A, const SpinorField& f) {
  SpinorField out(f.lattice(), f.d0());
  const int d0 = f.d0();
  kernels::for_each_index(f.lattice().size(), Exec::parallel, [&](std::size_t i) {
    const auto src = f.spinor(i);
    auto dst = out.spinor(i);
    for (int r = 0; r < d0; ++r) {
      Complex acc = 0.0;
      for (int c = 0; c < d0; ++c) acc += A(r, c) * src[c];
      dst[r] = acc;
    }
  });
  return out;
}

/// -i d_j psi in frequency is xi_j psi_hat, so d_j psi = i D_j psi.
SpinorField spatial_derivative(const SpinorField& f, int axis) {
  return kI * partial_derivative(f, axis);
}

double sup_norm(const Trajectory& tr) {
  double m = 0.0;
  for (const auto& f : tr.frames) m = std::max(m, f.l2_norm());
  return m;
}

std::vector<Complex> phases(const FrequencyLattice& lat, double t, Sign sign,
                            double mass) {
  std::vector<Complex> ph(lat.size());
  const double s = -sign_value(sign) * t;
  for (std::size_t i = 0; i < lat.size(); ++i) ph[i] = std::polar(1.0, s * lat.bracket(i, mass));
  return ph;
}

Trajectory free_branch(const SpinorField& f0, std::size_t frames, double dt, Sign sign,
                       double mass) {
  Trajectory tr;
  tr.dt = dt;
  tr.frames.reserve(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    tr.frames.push_back(half_wave(f0, dt * static_cast<double>(k), sign, mass));
  }
  return tr;
}

Trajectory add(const Trajectory& a, const Trajectory& b) {
  Trajectory out;
  out.t0 = a.t0;
  out.dt = a.dt;
  out.frames.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out.frames.push_back(a.frames[k] + b.frames[k]);
  return out;
}

double branch_leakage(const GammaSet& g, const Trajectory& plus, const Trajectory& minus,
                      double mass) {
  double leak = 0.0;
  for (std::size_t k = 0; k < plus.size(); ++k) {
    leak = std::max(leak, project_pm(g, plus.frames[k], Sign::minus, mass).l2_norm());
    leak = std::max(leak, project_pm(g, minus.frames[k], Sign::plus, mass).l2_norm());
  }
  return leak;
}

}  // namespace

SplitState split(const SpinorField& psi0, const GammaSet& g, double mass) {
  if (psi0.d0() != g.d0 || psi0.lattice().dim() != g.d) {
    throw LatticeMismatch("split: field does not match the gamma set");
  }
  SplitState s;
  s.plus = project_pm(g, psi0, Sign::plus, mass);
  s.minus = psi0 - s.plus;
  s.g = g;
  s.mass = mass;
  return s;
}

SpinorField half_wave(const SpinorField& f, double t, Sign sign, double mass, Exec exec) {
  SpinorField out = f;
  const auto ph = phases(f.lattice(), t, sign, mass);
  kernels::scale_rows(out.coeffs(), f.d0(), ph, exec);
  return out;
}

// ---------------------------------------------------------------------------

std::size_t SolveConfig::frames() const {
  const double n = horizon / dt;
  const double k = std::round(n);
  if (std::abs(n - k) > 1e-9 * std::max(1.0, n)) {
    throw std::invalid_argument("solve config: horizon is not a whole number of steps");
  }
  return static_cast<std::size_t>(k) + 1;
}

void SolveConfig::validate() const {
  if (d < 1) throw std::invalid_argument("solve config: d must be >= 1");
  if (radius < 0) throw std::invalid_argument("solve config: lattice radius must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("solve config: dt must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("solve config: horizon must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("solve config: tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("solve config: max_iterations must be >= 1");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("solve config: epsilon must be >= 0");
  if (!(mass > 0.0)) throw std::invalid_argument("solve config: mass must be positive");
  if (window == 1 || window < 0) throw std::invalid_argument("solve config: window needs >= 2 frames");
  (void)frames();
}

nlohmann::json SolveConfig::to_json() const {
  return {{"d", d},
          {"lattice_radius", radius},
          {"dt", dt},
          {"horizon", horizon},
          {"tolerance", tolerance},
          {"max_iterations", max_iterations},
          {"epsilon", epsilon},
          {"sobolev_s", sobolev_index()},
          {"mass", mass},
          {"window", window},
          {"monitor_norms", monitor_norms},
          {"nonlinearity", nonlinearity}};
}

SpinorField standard_initial_data(const FrequencyLattice& lattice, int d0, double epsilon,
                                  double s, std::uint64_t seed) {
  Rng rng(seed);
  SpinorField f = random_smooth_field(lattice, d0, rng, 2.0);
  const double n = norms::hs_norm(f, s);
  if (n == 0.0) return f;
  f *= Complex(epsilon / n);
  return f;
}

// ---------------------------------------------------------------------------

DuhamelIntegrals duhamel_integrals(const Trajectory& psi,
                                   const nl::PowerSeriesNonlinearity& F,
                                   const GammaSet& g, double mass) {
  psi.validate();
  const auto& lat = psi.frames.front().lattice();
  const int d0 = psi.frames.front().d0();
  DuhamelIntegrals out;
  out.plus.t0 = out.minus.t0 = psi.t0;
  out.plus.dt = out.minus.dt = psi.dt;
  const double h = psi.dt;
  const auto ep = phases(lat, h, Sign::plus, mass);
  const auto em = phases(lat, h, Sign::minus, mass);

  SpinorField ip(lat, d0), im(lat, d0), gp_prev, gm_prev;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    SpinorField bf(lat, d0);
    if (!F.empty()) bf = apply_constant(g.beta, nl::evaluate_F_field(F, psi.frames[k]));
    SpinorField gp = project_pm(g, bf, Sign::plus, mass);
    SpinorField gm = bf - gp;
    if (k > 0) {
      // I_{k} = E (I_{k-1} + h/2 G_{k-1}) + h/2 G_k
      kernels::axpy(ip.coeffs(), ip.coeffs(), 0.5 * h, gp_prev.coeffs(), Exec::parallel);
      kernels::axpy(im.coeffs(), im.coeffs(), 0.5 * h, gm_prev.coeffs(), Exec::parallel);
      kernels::scale_rows(ip.coeffs(), d0, ep, Exec::parallel);
      kernels::scale_rows(im.coeffs(), d0, em, Exec::parallel);
      kernels::axpy(ip.coeffs(), ip.coeffs(), 0.5 * h, gp.coeffs(), Exec::parallel);
      kernels::axpy(im.coeffs(), im.coeffs(), 0.5 * h, gm.coeffs(), Exec::parallel);
    }
    out.plus.frames.push_back(ip);
    out.minus.frames.push_back(im);
    gp_prev = std::move(gp);
    gm_prev = std::move(gm);
  }
  return out;
}

std::pair<SpinorField, SpinorField> duhamel_rhs(const Trajectory& psi,
                                                const nl::PowerSeriesNonlinearity& F,
                                                const GammaSet& g, double t,
                                                double mass) {
  psi.validate();
  const double pos = (t - psi.t0) / psi.dt;
  const double k = std::round(pos);
  if (k < 0 || k >= static_cast<double>(psi.size()) || std::abs(pos - k) > 1e-9) {
    throw std::out_of_range("duhamel_rhs: t is not a frame time of the window");
  }
  Trajectory head;
  head.t0 = psi.t0;
  head.dt = psi.dt;
  head.frames.assign(psi.frames.begin(), psi.frames.begin() + static_cast<long>(k) + 1);
  auto I = duhamel_integrals(head, F, g, mass);
  return {std::move(I.plus.frames.back()), std::move(I.minus.frames.back())};
}

BranchPair apply_T(const SplitState& data, const Trajectory& psi,
                   const nl::PowerSeriesNonlinearity& F) {
  const auto I = duhamel_integrals(psi, F, data.g, data.mass);
  BranchPair out;
  out.plus.t0 = out.minus.t0 = psi.t0;
  out.plus.dt = out.minus.dt = psi.dt;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double t = psi.dt * static_cast<double>(k);
    out.plus.frames.push_back(half_wave(data.plus, t, Sign::plus, data.mass) +
                              kI * I.plus.frames[k]);
    out.minus.frames.push_back(half_wave(data.minus, t, Sign::minus, data.mass) +
                               kI * I.minus.frames[k]);
  }
  return out;
}

const char* status_name(PicardStatus s) {
  switch (s) {
    case PicardStatus::converged: return "converged";
    case PicardStatus::non_contraction: return "non_contraction";
    case PicardStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

nlohmann::json PicardDiagnostics::to_json() const {
  nlohmann::json it = nlohmann::json::array();
  for (const auto& r : iterations) {
    it.push_back({{"window", r.window},
                  {"iteration", r.iteration},
                  {"distance", r.distance},
                  {"ratio", r.ratio}});
  }
  nlohmann::json out = {{"iterations", std::move(it)},
                        {"windows", windows},
                        {"total_iterations", total_iterations},
                        {"max_ratio_after_first", max_ratio_after_first},
                        {"duhamel_residual", duhamel_residual},
                        {"branch_leakage", branch_leakage}};
  out["surrogate_plus"] = surrogate_plus ? nlohmann::json(*surrogate_plus) : nlohmann::json();
  out["surrogate_minus"] = surrogate_minus ? nlohmann::json(*surrogate_minus) : nlohmann::json();
  return out;
}

double relative_sup_distance(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) throw std::invalid_argument("trajectories differ in length");
  double num = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num = std::max(num, l2_distance(a.frames[k], b.frames[k]));
  }
  const double den = sup_norm(b);
  return den > 0.0 ? num / den : num;
}

PicardResult picard_solve(const SolveConfig& cfg, const SpinorField& psi0,
                          const nl::PowerSeriesNonlinearity& F, const GammaSet& g) {
  cfg.validate();
  if (psi0.d0() != g.d0 || psi0.lattice().dim() != g.d) {
    throw LatticeMismatch("picard_solve: data does not match the gamma set");
  }
  if (!F.empty() && F.d0() != g.d0) throw LatticeMismatch("picard_solve: F has wrong d0");
  const std::size_t total = cfg.frames();
  const std::size_t width =
      cfg.window == 0 ? total : std::min<std::size_t>(static_cast<std::size_t>(cfg.window), total);

  PicardResult res;
  res.trajectory.dt = res.plus.dt = res.minus.dt = cfg.dt;
  auto& diag = res.diagnostics;
  SpinorField start = psi0;
  std::size_t done = 0;  // frames already emitted
  int window = 0;

  while (done < total) {
    const std::size_t first = done == 0 ? 0 : done - 1;
    const std::size_t n = std::min(width, total - first);
    const SplitState data = split(start, g, cfg.mass);
    BranchPair cur{free_branch(data.plus, n, cfg.dt, Sign::plus, cfg.mass),
                   free_branch(data.minus, n, cfg.dt, Sign::minus, cfg.mass)};
    Trajectory psi = add(cur.plus, cur.minus);
    psi.t0 = cur.plus.t0 = cur.minus.t0 = cfg.dt * static_cast<double>(first);

    double prev = 0.0;
    int bad = 0;
    bool converged = false;
    for (int it = 1; it <= cfg.max_iterations; ++it) {
      BranchPair next = apply_T(data, psi, F);
      Trajectory psi_next = add(next.plus, next.minus);
      psi_next.t0 = next.plus.t0 = next.minus.t0 = psi.t0;
      const double dist = relative_sup_distance(psi_next, psi);
      const double ratio = (it == 1 || prev == 0.0) ? 0.0 : dist / prev;
      diag.iterations.push_back({window, it, dist, ratio});
      ++diag.total_iterations;
      if (it >= 2) diag.max_ratio_after_first = std::max(diag.max_ratio_after_first, ratio);
      cur = std::move(next);
      psi = std::move(psi_next);
      if (dist < cfg.tolerance) {
        converged = true;
        break;
      }
      bad = (it >= 2 && ratio >= 1.0) ? bad + 1 : 0;
      prev = dist;
      if (bad >= 3) {
        res.status = PicardStatus::non_contraction;
        break;
      }
      if (it == cfg.max_iterations) res.status = PicardStatus::max_iterations;
    }

    const BranchPair check = apply_T(data, psi, F);
    diag.duhamel_residual =
        std::max(diag.duhamel_residual, relative_sup_distance(add(check.plus, check.minus), psi));
    diag.branch_leakage =
        std::max(diag.branch_leakage, branch_leakage(g, cur.plus, cur.minus, cfg.mass));

    const std::size_t skip = done == 0 ? 0 : 1;
    for (std::size_t k = skip; k < n; ++k) {
      res.trajectory.frames.push_back(psi.frames[k]);
      res.plus.frames.push_back(cur.plus.frames[k]);
      res.minus.frames.push_back(cur.minus.frames[k]);
    }
    done = first + n;
    start = psi.frames.back();
    ++window;
    if (!converged) break;
  }
  diag.windows = window;

  if (cfg.monitor_norms && res.status == PicardStatus::converged) {
    norms::NormOptions opt;
    opt.modulation.mass = cfg.mass;
    const double sigma = 0.5 * cfg.d;
    diag.surrogate_plus = norms::s_sigma_norm(res.plus, sigma, Sign::plus, opt).value;
    diag.surrogate_minus = norms::s_sigma_norm(res.minus, sigma, Sign::minus, opt).value;
  }
  return res;
}

// ---------------------------------------------------------------------------

KGState kg_reduce(const SpinorField& psi0, const nl::PowerSeriesNonlinearity& F,
                  const GammaSet& g, double mass) {
  if (psi0.d0() != g.d0) throw LatticeMismatch("kg_reduce: d0 mismatch");
  const auto& lat = psi0.lattice();
  SpinorField v(lat, g.d0);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    g.apply_dirac_symbol(lat.point(i), mass, psi0.spinor(i), v.spinor(i));
  }
  v *= -kI;
  if (!F.empty()) v += kI * apply_constant(g.beta, nl::evaluate_F_field(F, psi0));
  return {psi0, std::move(v)};
}

SpinorField kg_source(const SpinorField& psi, const nl::PowerSeriesNonlinearity& F,
                      const GammaSet& g, double mass) {
  const auto& lat = psi.lattice();
  SpinorField G(lat, g.d0);
  if (F.empty()) return G;
  const int m = nl::dealiased_grid(lat.radius(), F.max_degree());
  const SpatialGrid ugrid = inverse_fourier(psi, m);
  const auto J = [&](const SpinorField& w) {
    return forward_fourier(nl::jacobian_apply_grid(F, ugrid, inverse_fourier(w, m)), lat);
  };
  const SpinorField PF = forward_fourier(nl::evaluate_grid(F, ugrid), lat);
  const CMatrix& g0 = g.gamma[0];

  G += Complex(mass) * PF;
  SpinorField alpha_grad(lat, g.d0);
  for (int j = 1; j <= g.d; ++j) {
    const SpinorField dj = spatial_derivative(psi, j);
    G += kI * apply_constant(g.gamma[j], J(dj));
    alpha_grad += apply_constant(g0 * g.gamma[j], dj);
  }
  G -= kI * apply_constant(g0, J(alpha_grad));
  G += Complex(mass) * apply_constant(g0, J(apply_constant(g0, psi)));
  G -= apply_constant(g0, J(apply_constant(g0, PF)));
  return G;
}

Trajectory kg_evolve(const KGState& state, const nl::PowerSeriesNonlinearity& F,
                     const GammaSet& g, double mass, double dt, double horizon) {
  require_compatible(state.u, state.v);
  SolveConfig probe;
  probe.dt = dt;
  probe.horizon = horizon;
  const std::size_t frames = probe.frames();
  if (!(dt > 0.0)) throw std::invalid_argument("kg_evolve: dt must be positive");
  const auto& lat = state.u.lattice();
  const int d0 = state.u.d0();
  // Summed form: delta_n = u_{n+1} - u_n, with 2 - 2 cos(h w) written as
  // 4 sin^2(h w / 2), keeps roundoff growth linear in the step count.
  std::vector<double> k2(lat.size()), sn(lat.size()), filt(lat.size());
  double wmax = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double w = lat.bracket(i, mass);
    wmax = std::max(wmax, w);
    const double x = dt * w;
    const double half = 0.5 * x;
    k2[i] = 4.0 * std::sin(half) * std::sin(half);
    sn[i] = w > 0.0 ? std::sin(x) / w : dt;
    const double sinc = half > 0.0 ? std::sin(half) / half : 1.0;
    filt[i] = dt * dt * sinc * sinc;
  }
  if (dt * wmax > kPi) {
    throw std::invalid_argument("kg_evolve: dt * max <xi> exceeds pi");
  }
  Trajectory tr;
  tr.dt = dt;
  tr.frames.reserve(frames);
  tr.frames.push_back(state.u);
  if (frames == 1) return tr;

  SpinorField G = kg_source(state.u, F, g, mass);
  SpinorField delta(lat, d0);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    for (int k = 0; k < d0; ++k) {
      delta.at(i, k) = -0.5 * k2[i] * state.u.at(i, k) + sn[i] * state.v.at(i, k) +
                       0.5 * filt[i] * G.at(i, k);
    }
  }
  tr.frames.push_back(state.u + delta);
  for (std::size_t n = 2; n < frames; ++n) {
    const SpinorField& un = tr.frames[n - 1];
    G = kg_source(un, F, g, mass);
    kernels::for_each_index(lat.size(), Exec::parallel, [&](std::size_t i) {
      for (int k = 0; k < d0; ++k) {
        delta.at(i, k) += -k2[i] * un.at(i, k) + filt[i] * G.at(i, k);
      }
    });
    tr.frames.push_back(un + delta);
  }
  return tr;
}

// ---------------------------------------------------------------------------

std::vector<double> dirac_defect(const Trajectory& tr, const nl::PowerSeriesNonlinearity& F,
                                 const GammaSet& g, double mass) {
  tr.validate();
  const std::size_t n = tr.size();
  if (n < 3) throw std::invalid_argument("dirac_defect: needs at least 3 frames");
  const auto& lat = tr.frames.front().lattice();
  const double vol = std::pow(2.0 * kPi, lat.dim());
  const double h = tr.dt;
  std::vector<double> V(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex w = 1.0 / (2.0 * h);
    SpinorField dt_psi;
    if (k == 0) {
      dt_psi = w * (-3.0 * tr.frames[0] + 4.0 * tr.frames[1] - tr.frames[2]);
    } else if (k == n - 1) {
      dt_psi = w * (3.0 * tr.frames[k] - 4.0 * tr.frames[k - 1] + tr.frames[k - 2]);
    } else {
      dt_psi = w * (tr.frames[k + 1] - tr.frames[k - 1]);
    }
    const SpinorField& psi = tr.frames[k];
    SpinorField r = kI * apply_constant(g.gamma[0], dt_psi);
    for (int j = 1; j <= g.d; ++j) {
      r += kI * apply_constant(g.gamma[j], spatial_derivative(psi, j));
    }
    r -= Complex(mass) * psi;
    if (!F.empty()) r += nl::evaluate_F_field(F, psi);
    V[k] = vol * r.l2_norm_squared();
  }
  return V;
}

double relative_defect(const Trajectory& tr, const std::vector<double>& defect) {
  if (defect.size() != tr.size()) throw std::invalid_argument("relative_defect: length mismatch");
  const double vol = std::pow(2.0 * kPi, tr.frames.front().lattice().dim());
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double mass = vol * tr.frames[k].l2_norm_squared();
    worst = std::max(worst, mass > 0.0 ? defect[k] / mass : defect[k]);
  }
  return worst;
}

nlohmann::json HsMonitor::to_json() const {
  return {{"initial", initial}, {"sup", sup}, {"ratio", ratio},
          {"bound", bound},     {"verdict", pass ? "pass" : "fail"}};
}

HsMonitor hs_monitor(const Trajectory& tr, double s, double bound) {
  tr.validate();
  HsMonitor m;
  m.bound = bound;
  for (const auto& f : tr.frames) m.series.push_back(norms::hs_norm(f, s));
  m.initial = m.series.front();
  m.sup = *std::max_element(m.series.begin(), m.series.end());
  m.ratio = m.initial > 0.0 ? m.sup / m.initial : (m.sup == 0.0 ? 1.0 : norms::kInf);
  m.pass = m.ratio <= bound;
  return m;
}

}  // namespace tdirac::solver
