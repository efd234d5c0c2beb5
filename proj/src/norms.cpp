#include "tdirac/norms.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "tdirac/sampling.hpp"

namespace tdirac::norms {
namespace {

using lp::CutoffProfile;

double lp_combine(const std::vector<double>& values, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  for (double v : values) s += std::pow(v, p);
  return std::pow(s, 1.0 / p);
}

std::vector<double> trapezoid_weights(std::size_t frames, double dt) {
  std::vector<double> w(frames, dt);
  if (frames >= 2) {
    w.front() *= 0.5;
    w.back() *= 0.5;
  }
  return w;
}

double time_norm(const std::vector<double>& spatial, double p, double dt) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : spatial) m = std::max(m, v);
    return m;
  }
  const auto w = trapezoid_weights(spatial.size(), dt);
  double s = 0.0;
  for (std::size_t k = 0; k < spatial.size(); ++k) s += w[k] * std::pow(spatial[k], p);
  return std::pow(s, 1.0 / p);
}

void check_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [1, inf]");
}

int top_annulus(const FrequencyLattice& lat) {
  double rmax = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) rmax = std::max(rmax, lat.norm(i));
  if (rmax <= 1.0) return -1;
  // P_j is nonzero only if 2^j < max |xi|.
  return static_cast<int>(std::ceil(std::log2(rmax))) - 1;
}

}  // namespace

// ---------------------------------------------------------------------------

nlohmann::json NormReport::to_json() const {
  nlohmann::json out;
  out["norm"] = name;
  out["value"] = value;
  out["parameters"] = parameters;
  nlohmann::json b = nlohmann::json::array();
  for (const auto& [j, v] : breakdown) b.push_back({{"j", j}, {"value", v}});
  out["breakdown"] = std::move(b);
  nlohmann::json blk = nlohmann::json::object();
  for (const auto& [k, v] : blocks) blk[k] = v;
  out["blocks"] = std::move(blk);
  return out;
}

void NormReport::write_breakdown_csv(std::ostream& out) const {
  out << "j,value\n";
  out.precision(17);
  for (const auto& [j, v] : breakdown) out << j << ',' << v << '\n';
}

double hs_norm(const SpinorField& f, double s) {
  const auto& lat = f.lattice();
  double acc = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    double e = 0.0;
    for (const auto& c : f.spinor(i)) e += std::norm(c);
    if (e != 0.0) acc += std::pow(1.0 + lat.norm_squared(i), s) * e;
  }
  return std::sqrt(acc);
}

NormReport besov_report(const SpinorField& f, double s) {
  NormReport r;
  r.name = "besov_2_2";
  r.parameters = {{"s", s}, {"p", 2}, {"q", 2}};
  const double low = lp::apply_low(f, Exec::serial).l2_norm_squared();
  // The |xi| < 2 block is folded into j = 0.
  double acc = low;
  std::vector<std::pair<int, double>> parts;
  const int jmax = top_annulus(f.lattice());
  double zero_block = low;
  for (int j = 0; j <= jmax; ++j) {
    const double e = lp::apply_Pj(f, j, Exec::serial).l2_norm_squared();
    const double w = std::pow(2.0, 2.0 * s * j) * e;
    acc += w;
    if (j == 0) {
      zero_block += w;
    } else {
      parts.emplace_back(j, w);
    }
  }
  r.breakdown.emplace_back(0, zero_block);
  for (const auto& p : parts) r.breakdown.push_back(p);
  r.blocks["low"] = low;
  r.value = std::sqrt(acc);
  return r;
}

double besov_norm(const SpinorField& f, double s, double p, double q) {
  if (p != 2.0 || q != 2.0) {
    throw std::invalid_argument("besov_norm: only B^s_{2,2} is supported");
  }
  return besov_report(f, s).value;
}

double spatial_lq_norm(const SpinorField& f, double q) {
  check_exponent(q, "spatial exponent");
  if (q == 2.0) return f.l2_norm();
  const int m = std::max(4 * f.lattice().radius() + 1, f.lattice().side());
  const SpatialGrid grid = inverse_fourier(f, m);
  const std::size_t pts = grid.points();
  double acc = 0.0;
  for (std::size_t g = 0; g < pts; ++g) {
    double e = 0.0;
    for (int k = 0; k < grid.d0; ++k) e += std::norm(grid.at(g, k));
    const double mag = std::sqrt(e);
    if (std::isinf(q)) {
      acc = std::max(acc, mag);
    } else {
      acc += std::pow(mag, q);
    }
  }
  if (std::isinf(q)) return acc;
  return std::pow(acc / static_cast<double>(pts), 1.0 / q);
}

double mixed_norm(const Trajectory& tr, double p, double q) {
  tr.validate();
  check_exponent(p, "time exponent");
  std::vector<double> spatial(tr.size());
  for (std::size_t k = 0; k < tr.size(); ++k) spatial[k] = spatial_lq_norm(tr.frames[k], q);
  return time_norm(spatial, p, tr.dt);
}

double cap_cube_norm(const Trajectory& tr, int l, int k_prime, double p, double q) {
  tr.validate();
  check_exponent(p, "time exponent");
  check_exponent(q, "spatial exponent");
  const auto& lat = tr.frames.front().lattice();
  const int d0 = tr.frames.front().d0();
  const int d = lat.dim();
  if (d > 3) throw std::invalid_argument("cap_cube_norm: caps need d <= 3");
  const lp::CapCover caps = lp::build_cap_cover(d, l);
  const lp::CubeCover cubes = lp::build_cube_cover(lat, k_prime);
  const int step = 1 << k_prime;

  using Key = std::pair<std::size_t, std::vector<int>>;
  std::map<Key, std::vector<std::pair<std::size_t, double>>> pieces;
  std::vector<double> xi_real(d);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto xi = lat.point(i);
    for (int a = 0; a < d; ++a) xi_real[a] = xi[a];
    const auto cap_w = caps.weights(xi_real);
    // Cube centres within 2^k' of xi along every axis: at most two per axis.
    std::vector<std::vector<int>> axis_centres(d);
    for (int a = 0; a < d; ++a) {
      const int lo = static_cast<int>(std::floor(static_cast<double>(xi[a]) / step)) * step;
      for (int c : {lo, lo + step}) {
        if (std::abs(xi[a] - c) < step) axis_centres[a].push_back(c);
      }
    }
    std::vector<std::size_t> digit(d, 0);
    while (true) {
      std::vector<int> n(d);
      for (int a = 0; a < d; ++a) n[a] = axis_centres[a][digit[a]];
      const double wc = cubes.weight(n, xi);
      if (wc != 0.0) {
        for (std::size_t kappa = 0; kappa < cap_w.size(); ++kappa) {
          if (cap_w[kappa] != 0.0) {
            pieces[{kappa, n}].emplace_back(i, wc * cap_w[kappa]);
          }
        }
      }
      int a = d - 1;
      while (a >= 0 && ++digit[a] == axis_centres[a].size()) digit[a--] = 0;
      if (a < 0) break;
    }
  }

  double total = 0.0;
  std::vector<double> spatial(tr.size());
  for (const auto& [key, entries] : pieces) {
    bool any = false;
    for (const auto& fr : tr.frames) {
      for (const auto& [i, w] : entries) {
        for (const auto& c : fr.spinor(i)) any = any || c != Complex(0.0);
      }
    }
    if (!any) continue;
    if (entries.size() == 1) {
      // A single plane wave has |u(x)| constant, so every L^q_x norm agrees.
      const auto [i, w] = entries.front();
      for (std::size_t k = 0; k < tr.size(); ++k) {
        double e = 0.0;
        for (const auto& c : tr.frames[k].spinor(i)) e += std::norm(c);
        spatial[k] = w * std::sqrt(e);
      }
    } else {
      for (std::size_t k = 0; k < tr.size(); ++k) {
        SpinorField piece(lat, d0);
        for (const auto& [i, w] : entries) {
          const auto src = tr.frames[k].spinor(i);
          auto dst = piece.spinor(i);
          for (int c = 0; c < d0; ++c) dst[c] = w * src[c];
        }
        spatial[k] = spatial_lq_norm(piece, q);
      }
    }
    total += time_norm(spatial, p, tr.dt);
  }
  return total;
}

NormReport xnorm_report(const Trajectory& tr, Sign sign, double b_prime, double p,
                        const NormOptions& opt) {
  check_exponent(p, "sequence exponent");
  const lp::ModulationTransform mt(tr, opt.modulation);
  NormReport r;
  r.name = std::string("X_dot^{") + sign_name(sign) + "}";
  r.parameters = {{"b_prime", b_prime},
                  {"p", std::isinf(p) ? nlohmann::json("inf") : nlohmann::json(p)},
                  {"hann_taper", opt.modulation.hann_taper}};
  std::vector<double> weighted;
  for (int j = mt.min_scale(); j <= mt.max_scale(); ++j) {
    const double v = std::pow(2.0, b_prime * j) * mixed_norm(mt.filtered(j, sign), 2.0, 2.0);
    r.breakdown.emplace_back(j, v);
    weighted.push_back(v);
  }
  r.value = lp_combine(weighted, p);
  return r;
}

double xnorm(const Trajectory& tr, Sign sign, double b_prime, double p,
             const NormOptions& opt) {
  return xnorm_report(tr, sign, b_prime, p, opt).value;
}

NormReport sj_norm(const Trajectory& tr, int j, Sign sign, double a, double b,
                   const NormOptions& opt) {
  tr.validate();
  const int d = tr.frames.front().lattice().dim();
  NormReport r;
  r.name = std::string("S_j^{") + sign_name(sign) + "}";
  r.parameters = {{"j", j}, {"a", a}, {"b", b}};
  const double energy = mixed_norm(tr, kInf, 2.0);
  const double modulation = xnorm(tr, sign, 0.5, kInf, opt);
  double cap = 0.0;
  if (d >= 2) {
    const double l_min = static_cast<double>((d + 2) * j) / static_cast<double>(2 * d - 2);
    for (int l = std::max(0, static_cast<int>(std::ceil(l_min - 1e-12))); l <= j; ++l) {
      for (int kp = 0; kp <= j; ++kp) {
        const double v =
            std::pow(2.0, -(kp + j) / a) * cap_cube_norm(tr, l, kp, a, b) +
            std::pow(2.0, -(kp + j) / b) * cap_cube_norm(tr, l, kp, b, a);
        cap = std::max(cap, v);
      }
    }
  }
  r.blocks["energy"] = energy;
  r.blocks["modulation"] = modulation;
  r.blocks["cap_cube"] = cap;
  r.value = energy + modulation + cap;
  return r;
}

NormReport s_sigma_norm(const Trajectory& tr, double sigma, Sign sign,
                        const NormOptions& opt) {
  tr.validate();
  NormReport r;
  r.name = std::string("S^{") + sign_name(sign) + ",sigma}";
  r.parameters = {{"sigma", sigma}};
  const int jmax = top_annulus(tr.frames.front().lattice());
  double total = 0.0;
  for (int j = 0; j <= jmax; ++j) {
    const Trajectory piece =
        map_frames(tr, [j](const SpinorField& f) { return lp::apply_Pj(f, j); });
    const double s = sj_norm(piece, j + 1, sign, 4.0, 4.0, opt).value;
    const double term = std::pow(2.0, sigma * j) * s;
    r.breakdown.emplace_back(j, term);
    total += term;
  }
  r.value = total;
  return r;
}

int ceil_index(double q1, double q2, int d) {
  if (!(q1 > 0.0) || !(q2 > 0.0)) {
    throw std::invalid_argument("ceil_index: exponents must be positive");
  }
  const double gap = (std::isinf(q1) ? 0.0 : 1.0 / q1) - (std::isinf(q2) ? 0.0 : 1.0 / q2);
  const int z = static_cast<int>(std::ceil(gap - 1e-15));
  return z * d + 2 * d;
}

// ---------------------------------------------------------------------------
// Bernstein and Gagliardo-Nirenberg probes

SpinorField apply_derivative(const SpinorField& f, std::span<const int> alpha) {
  const auto& lat = f.lattice();
  if (static_cast<int>(alpha.size()) != lat.dim()) {
    throw std::invalid_argument("multi-index has wrong length");
  }
  return apply_real_symbol(f, [&](std::size_t i) {
    const auto xi = lat.point(i);
    double w = 1.0;
    for (std::size_t a = 0; a < alpha.size(); ++a) {
      for (int e = 0; e < alpha[a]; ++e) w *= xi[a];
    }
    return w;
  });
}

std::vector<std::vector<int>> multi_indices_of_order(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(d, 0);
  auto rec = [&](auto&& self, int axis, int left) -> void {
    if (axis == d - 1) {
      cur[axis] = left;
      out.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[axis] = e;
      self(self, axis + 1, left - e);
    }
  };
  rec(rec, 0, k);
  return out;
}

double bernstein_ratio(const SpinorField& f, int j, std::span<const int> alpha) {
  const auto& lat = f.lattice();
  const double lo = std::ldexp(1.0, j);
  const double hi = std::ldexp(1.0, j + 2);
  double inside = 0.0;
  double outside = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    double e = 0.0;
    for (const auto& c : f.spinor(i)) e += std::norm(c);
    const double r = lat.norm(i);
    if (r > lo && r < hi) {
      inside += e;
    } else {
      outside += e;
    }
  }
  if (inside == 0.0) throw std::invalid_argument("bernstein_ratio: zero field");
  if (outside > 1e-28 * inside) {
    throw std::invalid_argument("bernstein_ratio: field is not P_j-localized");
  }
  int order = 0;
  for (int e : alpha) order += e;
  return apply_derivative(f, alpha).l2_norm() /
         (std::ldexp(1.0, order * j) * std::sqrt(inside));
}

nlohmann::json BernsteinScan::to_json() const {
  return {{"samples", samples},
          {"violations", violations},
          {"max_ratio_per_order", max_ratio},
          {"constant", constant}};
}

BernsteinScan measure_bernstein_constant(int d, int j, int samples,
                                         std::uint64_t seed, int max_order) {
  const FrequencyLattice lat(d, 1 << (j + 2));
  const int d0 = spinor_dimension(d);
  Rng rng(seed);
  BernsteinScan scan;
  scan.samples = samples;
  scan.max_ratio.assign(max_order, 0.0);
  std::vector<std::vector<std::vector<int>>> alphas;
  for (int k = 1; k <= max_order; ++k) alphas.push_back(multi_indices_of_order(d, k));
  for (int s = 0; s < samples; ++s) {
    const SpinorField f = lp::apply_Pj(random_field(lat, d0, rng), j, Exec::serial);
    for (int k = 1; k <= max_order; ++k) {
      for (const auto& alpha : alphas[k - 1]) {
        const double r = bernstein_ratio(f, j, alpha);
        if (r > std::pow(4.0, k) * (1.0 + 1e-12)) ++scan.violations;
        scan.max_ratio[k - 1] = std::max(scan.max_ratio[k - 1], r);
        scan.constant = std::max(scan.constant, std::pow(r, 1.0 / k));
      }
    }
  }
  return scan;
}

GagliardoNirenbergReport gn_check(const SpinorField& f, double q, int k,
                                  double constant) {
  if (k < 1) throw std::invalid_argument("gn_check: derivative order must be >= 1");
  if (!(q >= 2.0)) throw std::invalid_argument("gn_check: q must lie in [2, inf]");
  const int d = f.lattice().dim();
  GagliardoNirenbergReport r;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  r.theta = static_cast<double>(d) / (2.0 * k) - static_cast<double>(d) * inv_q / k;
  if (r.theta < 0.0 || r.theta > 1.0) {
    throw std::invalid_argument("gn_check: interpolation exponent outside [0,1]");
  }
  r.lq = spatial_lq_norm(f, q);
  r.l2 = f.l2_norm();
  for (const auto& alpha : multi_indices_of_order(d, k)) {
    r.derivative_sum += apply_derivative(f, alpha).l2_norm();
  }
  const double den =
      std::pow(r.l2, 1.0 - r.theta) * std::pow(r.derivative_sum, r.theta) + r.l2;
  r.ratio = den > 0.0 ? r.lq / den : 0.0;
  r.violated = r.ratio > constant;
  return r;
}

double projector_norm_probe(const GammaSet& g, std::span<const Trajectory> set,
                            double sigma, Sign sign, const NormOptions& opt) {
  double worst = 0.0;
  for (const auto& tr : set) {
    const double base = s_sigma_norm(tr, sigma, sign, opt).value;
    if (base == 0.0) continue;
    const Trajectory projected = map_frames(tr, [&](const SpinorField& f) {
      return project_pm(g, f, sign, opt.modulation.mass);
    });
    worst = std::max(worst, s_sigma_norm(projected, sigma, sign, opt).value / base);
  }
  return worst;
}

std::vector<Trajectory> standard_probe_set(const GammaSet& g, int radius, int frames,
                                           double dt, int count, std::uint64_t seed) {
  const FrequencyLattice lat(g.d, radius);
  Rng rng(seed);
  std::vector<Trajectory> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    const SpinorField u = random_smooth_field(lat, g.d0, rng, 0.5 * radius + 1.0);
    const SpinorField v = random_smooth_field(lat, g.d0, rng, 0.5 * radius + 1.0);
    Trajectory tr;
    tr.dt = dt;
    for (int k = 0; k < frames; ++k) {
      const double t = dt * k;
      SpinorField f(lat, g.d0);
      for (std::size_t i = 0; i < lat.size(); ++i) {
        const double w = lat.bracket(i);
        const Complex ep = std::polar(1.0, -t * w);
        const Complex em = std::polar(1.0, t * w);
        for (int s = 0; s < g.d0; ++s) f.at(i, s) = ep * u.at(i, s) + em * v.at(i, s);
      }
      tr.frames.push_back(std::move(f));
    }
    out.push_back(std::move(tr));
  }
  return out;
}

}  // namespace tdirac::norms
