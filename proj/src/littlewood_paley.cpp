#include "tdirac/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "tdirac/fft.hpp"
#include "tdirac/kernels.hpp"

namespace tdirac::lp {
namespace {

double exp_ramp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double CutoffProfile::rho(double s) {
  const double a = std::abs(s);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double up = exp_ramp(2.0 - a);
  return up / (up + exp_ramp(a - 1.0));
}

double CutoffProfile::phi(double s) { return rho(0.5 * s) - rho(s); }

double CutoffProfile::phi_j(int j, double s) { return phi(std::ldexp(s, -j)); }

double CutoffProfile::phi_tilde(int j, double s) {
  return phi_j(j - 2, s) + phi_j(j - 1, s) + phi_j(j, s);
}

SpinorField apply_Pj(const SpinorField& f, int j, Exec exec) {
  const auto& lat = f.lattice();
  return apply_real_symbol(
      f, [&](std::size_t i) { return CutoffProfile::phi_j(j, lat.norm(i)); }, exec);
}

SpinorField apply_Pj_tilde(const SpinorField& f, int j, Exec exec) {
  const auto& lat = f.lattice();
  return apply_real_symbol(
      f, [&](std::size_t i) { return CutoffProfile::phi_tilde(j, lat.norm(i)); },
      exec);
}

SpinorField apply_low(const SpinorField& f, Exec exec) {
  const auto& lat = f.lattice();
  return apply_real_symbol(
      f, [&](std::size_t i) { return CutoffProfile::rho(lat.norm(i)); }, exec);
}

// ---------------------------------------------------------------------------
// Modulation cutoffs

ModulationTransform::ModulationTransform(const Trajectory& tr,
                                         const ModulationOptions& opt) {
  tr.validate();
  if (tr.size() < 2) {
    throw std::invalid_argument("modulation cutoff needs at least two frames");
  }
  lattice_ = tr.frames.front().lattice();
  d0_ = tr.frames.front().d0();
  frames_ = tr.size();
  t0_ = tr.t0;
  dt_ = tr.dt;
  mass_ = opt.mass;
  const std::size_t series = lattice_.size() * static_cast<std::size_t>(d0_);
  spectrum_.assign(series * frames_, Complex(0.0));
  std::vector<double> taper(frames_, 1.0);
  if (opt.hann_taper) {
    const double norm = std::sqrt(3.0 / 8.0);
    for (std::size_t k = 0; k < frames_; ++k) {
      const double c = std::cos(2.0 * kPi * static_cast<double>(k) / frames_);
      taper[k] = 0.5 * (1.0 - c) / norm;
    }
  }
  for (std::size_t k = 0; k < frames_; ++k) {
    const auto c = tr.frames[k].coeffs();
    for (std::size_t s = 0; s < series; ++s) {
      spectrum_[s * frames_ + k] = c[s] * taper[k];
    }
  }
  const int dims[1] = {static_cast<int>(frames_)};
  fft::transform(spectrum_, dims, static_cast<int>(series), -1);
}

double ModulationTransform::tau(std::size_t bin) const {
  const auto m = static_cast<long long>(frames_);
  long long n = static_cast<long long>(bin);
  if (n >= (m + 1) / 2) n -= m;
  return 2.0 * kPi * static_cast<double>(n) / (static_cast<double>(m) * dt_);
}

int ModulationTransform::min_scale() const {
  const double dtau = 2.0 * kPi / (static_cast<double>(frames_) * dt_);
  return static_cast<int>(std::floor(std::log2(0.5 * dtau)));
}

int ModulationTransform::max_scale() const {
  double wmax = 0.0;
  for (std::size_t i = 0; i < lattice_.size(); ++i) {
    wmax = std::max(wmax, lattice_.bracket(i, mass_));
  }
  return static_cast<int>(std::ceil(std::log2(kPi / dt_ + wmax)));
}

Trajectory ModulationTransform::filtered(
    const std::function<double(double, std::size_t)>& symbol) const {
  const std::size_t series = lattice_.size() * static_cast<std::size_t>(d0_);
  std::vector<double> tau_bins(frames_);
  for (std::size_t b = 0; b < frames_; ++b) tau_bins[b] = tau(b);
  std::vector<Complex> work = spectrum_;
  const double inv = 1.0 / static_cast<double>(frames_);
  kernels::for_each_index(lattice_.size(), Exec::parallel, [&](std::size_t i) {
    for (std::size_t b = 0; b < frames_; ++b) {
      const double w = symbol(tau_bins[b], i) * inv;
      for (int k = 0; k < d0_; ++k) work[(i * d0_ + k) * frames_ + b] *= w;
    }
  });
  const int dims[1] = {static_cast<int>(frames_)};
  fft::transform(work, dims, static_cast<int>(series), +1);
  Trajectory out;
  out.t0 = t0_;
  out.dt = dt_;
  out.frames.assign(frames_, SpinorField(lattice_, d0_));
  for (std::size_t k = 0; k < frames_; ++k) {
    auto c = out.frames[k].coeffs();
    for (std::size_t s = 0; s < series; ++s) c[s] = work[s * frames_ + k];
  }
  return out;
}

Trajectory ModulationTransform::filtered(int j, Sign sign) const {
  const double s = sign_value(sign);
  std::vector<double> omega(lattice_.size());
  for (std::size_t i = 0; i < omega.size(); ++i) omega[i] = lattice_.bracket(i, mass_);
  return filtered([&](double tau, std::size_t i) {
    return CutoffProfile::modulation(j, tau + s * omega[i]);
  });
}

Trajectory apply_Qj_pm(const Trajectory& tr, int j, Sign sign,
                       const ModulationOptions& opt) {
  return ModulationTransform(tr, opt).filtered(j, sign);
}

// ---------------------------------------------------------------------------
// Angular caps

namespace {

double bump_profile(double t) {
  const double a = std::abs(t);
  if (a >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - a * a));
}

double angle_between(std::span<const double> unit, std::span<const double> xi,
                     double xi_norm) {
  double dot = 0.0;
  for (std::size_t a = 0; a < xi.size(); ++a) dot += unit[a] * xi[a];
  return std::acos(std::clamp(dot / xi_norm, -1.0, 1.0));
}

}  // namespace

std::vector<double> CapCover::weights(std::span<const double> xi) const {
  std::vector<double> w(centers.size(), 0.0);
  double n2 = 0.0;
  for (double c : xi) n2 += c * c;
  if (n2 == 0.0) return w;
  const double n = std::sqrt(n2);
  if (d == 1) {
    w[xi[0] > 0.0 ? 0 : 1] = 1.0;
    return w;
  }
  double total = 0.0;
  for (std::size_t kappa = 0; kappa < centers.size(); ++kappa) {
    const double ang = angle_between(centers[kappa], xi, n);
    if (ang < support_radius) {
      w[kappa] = bump_profile(ang / support_radius);
      total += w[kappa];
    }
  }
  for (auto& x : w) x /= total;
  return w;
}

double CapCover::weight(std::size_t kappa, std::span<const double> xi) const {
  if (kappa >= centers.size()) throw std::out_of_range("cap id out of range");
  return weights(xi)[kappa];
}

CapCover build_cap_cover(int d, int l) {
  if (d < 1 || d > 3) {
    throw std::invalid_argument("cap covers are implemented for d <= 3 only");
  }
  if (l < 0) throw std::invalid_argument("cap scale must be >= 0");
  CapCover cover;
  cover.d = d;
  cover.l = l;
  const double h = std::ldexp(1.0, -l);
  cover.support_radius = 0.75 * h;
  if (d == 1) {
    cover.centers = {{1.0}, {-1.0}};
    cover.support_radius = kPi;
    cover.overlap_bound = 1;
    return cover;
  }
  if (d == 2) {
    const int count = 2 * static_cast<int>(std::ceil(kPi / h));
    for (int k = 0; k < count; ++k) {
      const double th = 2.0 * kPi * k / count;
      cover.centers.push_back({std::cos(th), std::sin(th)});
    }
    return cover;
  }
  // d == 3: latitude rings on the open upper hemisphere plus their antipodes.
  const double spacing = 0.9 * h;
  const int rings = static_cast<int>(std::ceil(0.5 * kPi / spacing));
  const double dtheta = 0.5 * kPi / rings;
  std::vector<std::vector<double>> upper;
  for (int r = 0; r < rings; ++r) {
    const double th = (r + 0.5) * dtheta;
    const int around = std::max(
        3, static_cast<int>(std::ceil(2.0 * kPi * std::sin(th) / spacing)));
    const double offset = (r % 2 == 0) ? 0.0 : 0.5;
    for (int k = 0; k < around; ++k) {
      const double ph = 2.0 * kPi * (k + offset) / around;
      upper.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                       std::cos(th)});
    }
  }
  cover.centers = upper;
  for (const auto& c : upper) cover.centers.push_back({-c[0], -c[1], -c[2]});
  return cover;
}

SpinorField apply_Pkappa(const SpinorField& f, const CapCover& cover,
                         std::size_t kappa) {
  const auto& lat = f.lattice();
  if (kappa >= cover.size()) throw std::out_of_range("cap id out of range");
  if (cover.d != lat.dim()) {
    throw LatticeMismatch("apply_Pkappa: cover dimension differs from lattice");
  }
  std::vector<double> symbol(lat.size());
  kernels::for_each_index(lat.size(), Exec::parallel, [&](std::size_t i) {
    const auto p = lat.point(i);
    std::vector<double> xi(p.begin(), p.end());
    symbol[i] = cover.weights(xi)[kappa];
  });
  return apply_real_symbol(f, [&](std::size_t i) { return symbol[i]; });
}

CapSymbols cap_symbols(const FrequencyLattice& lattice, const CapCover& cover) {
  if (cover.d != lattice.dim()) {
    throw LatticeMismatch("cap_symbols: cover dimension differs from lattice");
  }
  CapSymbols s{lattice, std::vector<std::vector<std::pair<std::size_t, double>>>(cover.size())};
  std::vector<double> xi(lattice.dim());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto p = lattice.point(i);
    std::copy(p.begin(), p.end(), xi.begin());
    const auto w = cover.weights(xi);
    for (std::size_t kappa = 0; kappa < w.size(); ++kappa) {
      if (w[kappa] != 0.0) s.by_cap[kappa].emplace_back(i, w[kappa]);
    }
  }
  return s;
}

SpinorField apply_Pkappa(const SpinorField& f, const CapSymbols& symbols, std::size_t kappa) {
  if (kappa >= symbols.by_cap.size()) throw std::out_of_range("cap id out of range");
  if (!(f.lattice() == symbols.lattice)) {
    throw LatticeMismatch("apply_Pkappa: symbols built for another lattice");
  }
  SpinorField out(f.lattice(), f.d0());
  for (const auto& [i, w] : symbols.by_cap[kappa]) {
    for (int k = 0; k < f.d0(); ++k) out.at(i, k) = w * f.at(i, k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cubes

double cube_bump(double t) { return bump_profile(t); }

double cube_bump_normalized(double t) {
  const double num = cube_bump(t);
  if (num == 0.0) return 0.0;
  const double base = std::floor(t);
  double den = 0.0;
  for (int z = -1; z <= 2; ++z) den += cube_bump(t - (base + z));
  return num / den;
}

double CubeCover::weight(std::span<const int> center, std::span<const int> xi) const {
  const double scale = std::ldexp(1.0, -k);
  double w = 1.0;
  for (std::size_t a = 0; a < xi.size() && w != 0.0; ++a) {
    w *= cube_bump_normalized(scale * static_cast<double>(xi[a] - center[a]));
  }
  return w;
}

bool CubeCover::is_center(std::span<const int> n) const {
  if (static_cast<int>(n.size()) != lattice.dim()) return false;
  const int step = 1 << k;
  for (int c : n) {
    if (c % step != 0 || std::abs(c) >= lattice.radius() + step) return false;
  }
  return true;
}

CubeCover build_cube_cover(const FrequencyLattice& lattice, int k) {
  if (k < 0 || k > 30) throw std::invalid_argument("cube scale out of range");
  CubeCover cover;
  cover.k = k;
  cover.lattice = lattice;
  const int step = 1 << k;
  const int top = ((lattice.radius() + step - 1) / step) * step;
  std::vector<int> per_axis;
  for (int c = -top; c <= top; c += step) {
    if (std::abs(c) < lattice.radius() + step) per_axis.push_back(c);
  }
  const int d = lattice.dim();
  std::vector<std::size_t> digit(d, 0);
  while (true) {
    std::vector<int> n(d);
    for (int a = 0; a < d; ++a) n[a] = per_axis[digit[a]];
    cover.centers.push_back(std::move(n));
    int a = d - 1;
    while (a >= 0 && ++digit[a] == per_axis.size()) digit[a--] = 0;
    if (a < 0) break;
  }
  return cover;
}

SpinorField apply_cube(const SpinorField& f, const CubeCover& cover,
                       std::span<const int> n) {
  const auto& lat = f.lattice();
  if (!(cover.lattice == lat)) {
    throw LatticeMismatch("apply_cube: cover built for another lattice");
  }
  if (!cover.is_center(n)) throw std::invalid_argument("apply_cube: not a centre");
  return apply_real_symbol(f, [&](std::size_t i) { return cover.weight(n, lat.point(i)); });
}

void write_symbol_csv(std::ostream& out, const FrequencyLattice& lattice,
                      int j_min, int j_max) {
  out << "index";
  for (int a = 1; a <= lattice.dim(); ++a) out << ",xi_" << a;
  out << ",abs_xi";
  for (int j = j_min; j <= j_max; ++j) out << ",phi_" << j;
  for (int j = j_min; j <= j_max; ++j) out << ",phi_tilde_" << j;
  out << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    out << i;
    for (int c : lattice.point(i)) out << ',' << c;
    const double r = lattice.norm(i);
    out << ',' << r;
    for (int j = j_min; j <= j_max; ++j) out << ',' << CutoffProfile::phi_j(j, r);
    for (int j = j_min; j <= j_max; ++j) out << ',' << CutoffProfile::phi_tilde(j, r);
    out << '\n';
  }
}

}  // namespace tdirac::lp
