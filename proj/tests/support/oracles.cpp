#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>

namespace oracle {

using namespace tdirac;

namespace {

std::vector<int> grid_digits(std::size_t g, int d, int m) {
  std::vector<int> idx(d);
  for (int a = d - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(g % static_cast<std::size_t>(m));
    g /= static_cast<std::size_t>(m);
  }
  return idx;
}

double vec_norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

std::vector<Complex> mat_vec(const CMatrix& A, const std::vector<Complex>& v) {
  std::vector<Complex> out(v.size(), Complex(0.0));
  for (std::size_t r = 0; r < v.size(); ++r) {
    for (std::size_t c = 0; c < v.size(); ++c) out[r] += A(r, c) * v[c];
  }
  return out;
}

/// All (m, n) with m + n = p in any order.
std::vector<std::pair<nl::MultiIndex, nl::MultiIndex>> all_splits(const nl::MultiIndex& p) {
  std::vector<std::pair<nl::MultiIndex, nl::MultiIndex>> out;
  nl::MultiIndex m(p.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == p.size()) {
      nl::MultiIndex n(p.size());
      for (std::size_t a = 0; a < p.size(); ++a) n[a] = p[a] - m[a];
      out.emplace_back(m, n);
      return;
    }
    for (int e = 0; e <= p[k]; ++e) {
      m[k] = e;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

int total(const nl::MultiIndex& p) {
  int s = 0;
  for (int e : p) s += e;
  return s;
}

/// Number of tuples in {c-1, c, c+1}^slots, visited one by one.
long long neighbour_count(int slots, int centre) {
  std::vector<int> idx(slots, centre - 1);
  long long count = 0;
  while (true) {
    ++count;
    int a = slots - 1;
    while (a >= 0 && idx[a] == centre + 1) idx[a--] = centre - 1;
    if (a < 0) break;
    ++idx[a];
  }
  return count;
}

}  // namespace

SpatialGrid naive_synthesis(const SpinorField& f, int m) {
  const auto& lat = f.lattice();
  const int d = lat.dim();
  SpatialGrid out(d, m, f.d0());
  const std::size_t pts = out.points();
  for (std::size_t g = 0; g < pts; ++g) {
    const auto idx = grid_digits(g, d, m);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const auto xi = lat.point(i);
      double phase = 0.0;
      for (int a = 0; a < d; ++a) phase += 2.0 * kPi * idx[a] * xi[a] / m;
      const Complex e = std::polar(1.0, phase);
      for (int k = 0; k < f.d0(); ++k) out.values[k * pts + g] += e * f.at(i, k);
    }
  }
  return out;
}

SpinorField naive_analysis(const SpatialGrid& grid, const FrequencyLattice& lat) {
  SpinorField out(lat, grid.d0);
  const std::size_t pts = grid.points();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto xi = lat.point(i);
    for (std::size_t g = 0; g < pts; ++g) {
      const auto idx = grid_digits(g, grid.d, grid.m);
      double phase = 0.0;
      for (int a = 0; a < grid.d; ++a) phase -= 2.0 * kPi * idx[a] * xi[a] / grid.m;
      const Complex e = std::polar(1.0, phase);
      for (int k = 0; k < grid.d0; ++k) out.at(i, k) += e * grid.values[k * pts + g];
    }
    for (int k = 0; k < grid.d0; ++k) out.at(i, k) /= static_cast<double>(pts);
  }
  return out;
}

std::vector<Complex> naive_F(const nl::PowerSeriesNonlinearity& F,
                             const std::vector<Complex>& psi) {
  std::vector<Complex> out(F.d0(), Complex(0.0));
  for (const auto& [p, c] : F.terms()) {
    Complex mono = 1.0;
    for (int k = 0; k < F.d0(); ++k) {
      if (p[k] > 0) mono *= std::pow(psi[k], p[k]);
    }
    for (int a = 0; a < F.d0(); ++a) out[a] += c[a] * mono;
  }
  return out;
}

SpinorField naive_F_field(const nl::PowerSeriesNonlinearity& F, const SpinorField& f) {
  const auto& lat = f.lattice();
  if (F.empty()) return SpinorField(lat, f.d0());
  const int m = (F.max_degree() + 1) * lat.radius() + 1;
  SpatialGrid grid = naive_synthesis(f, m);
  const std::size_t pts = grid.points();
  for (std::size_t g = 0; g < pts; ++g) {
    std::vector<Complex> psi(f.d0());
    for (int k = 0; k < f.d0(); ++k) psi[k] = grid.values[k * pts + g];
    const auto v = naive_F(F, psi);
    for (int k = 0; k < f.d0(); ++k) grid.values[k * pts + g] = v[k];
  }
  return naive_analysis(grid, lat);
}

std::vector<SpinorField> rk4_dirac(const SpinorField& psi0,
                                   const nl::PowerSeriesNonlinearity& F,
                                   const GammaSet& g, double mass, double dt,
                                   int frames, int substeps) {
  const auto& lat = psi0.lattice();
  const int d0 = psi0.d0();
  std::vector<CMatrix> H(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) {
    CMatrix h = mass * g.beta;
    const auto xi = lat.point(i);
    for (int j = 0; j < g.d; ++j) h += static_cast<double>(xi[j]) * g.alpha[j];
    H[i] = h;
  }
  const Complex I(0.0, 1.0);
  auto rhs = [&](const SpinorField& u) {
    SpinorField nlin = naive_F_field(F, u);
    SpinorField out(lat, d0);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      for (int r = 0; r < d0; ++r) {
        Complex acc = 0.0;
        for (int c = 0; c < d0; ++c) {
          acc += -I * H[i](r, c) * u.at(i, c) + I * g.beta(r, c) * nlin.at(i, c);
        }
        out.at(i, r) = acc;
      }
    }
    return out;
  };
  const double h = dt / substeps;
  std::vector<SpinorField> out{psi0};
  SpinorField u = psi0;
  for (int k = 1; k < frames; ++k) {
    for (int s = 0; s < substeps; ++s) {
      const SpinorField k1 = rhs(u);
      const SpinorField k2 = rhs(u + Complex(0.5 * h) * k1);
      const SpinorField k3 = rhs(u + Complex(0.5 * h) * k2);
      const SpinorField k4 = rhs(u + Complex(h) * k3);
      u += Complex(h / 6.0) * (k1 + Complex(2.0) * k2 + Complex(2.0) * k3 + k4);
    }
    out.push_back(u);
  }
  return out;
}

std::uint64_t counted_split(const nl::MultiIndex& m, const nl::MultiIndex& n) {
  std::uint64_t r = 1;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const int factors = m[k] + n[k];
    std::uint64_t count = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << factors); ++mask) {
      if (std::popcount(mask) == m[k]) ++count;
    }
    r *= count;
  }
  return r;
}

LiteralCondition literal_condition_a(const nl::PowerSeriesNonlinearity& F,
                                     const GammaSet& g) {
  const int top = F.max_degree();
  LiteralCondition out;
  out.B.assign(top + 1, 0.0);
  out.A.assign(top + 1, 0.0);
  for (const auto& [p, c] : F.terms()) {
    std::vector<Complex> cv(c.begin(), c.end());
    const double w1 = vec_norm(cv);
    const double w2 = vec_norm(mat_vec(g.gamma[0], cv));
    double w3 = 0.0;
    for (int k = 1; k <= g.d; ++k) w3 += vec_norm(mat_vec(g.gamma[k], cv));
    const int r = total(p);
    for (const auto& [m, n] : all_splits(p)) {
      const double E = static_cast<double>(counted_split(m, n));
      for (double w : {w1, w2, w3}) {
        for (int centre = -2; centre <= 2; ++centre) {
          double sum = 0.0;
          const long long terms = neighbour_count(total(m) + total(n), centre);
          for (long long t = 0; t < terms; ++t) sum += E * w;
          out.B[r] = std::max(out.B[r], sum);
        }
      }
    }
    for (int i = 0; i < F.d0(); ++i) {
      if (p[i] == 0) continue;
      nl::MultiIndex q = p;
      q[i] -= 1;
      const int rq = total(q);
      for (const auto& [m, n] : all_splits(q)) {
        const double cmn = static_cast<double>(counted_split(m, n));
        for (const auto& [k, l] : all_splits(m)) {
          const double a = static_cast<double>(counted_split(k, l));
          for (const auto& [rr, s] : all_splits(n)) {
            const double b = static_cast<double>(counted_split(rr, s));
            const double numerator = a * b * p[i] * cmn * (w1 + w2 + w3);
            for (int centre = -2; centre <= 2; ++centre) {
              double sum = 0.0;
              const long long terms = neighbour_count(rq + 1, centre);
              for (long long t = 0; t < terms; ++t) sum += numerator;
              out.A[rq] = std::max(out.A[rq], sum / (total(m) + 1));
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace oracle
