#include "tdirac/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tdirac/fft.hpp"
#include "tdirac/kernels.hpp"

namespace tdirac {

// ---------------------------------------------------------------------------
// FrequencyLattice

FrequencyLattice::FrequencyLattice(int d, int radius) : d_(d), radius_(radius) {
  if (d < 1) throw std::invalid_argument("lattice dimension must be >= 1");
  if (radius < 0) throw std::invalid_argument("lattice radius must be >= 0");
  const auto side = static_cast<std::size_t>(2 * radius + 1);
  std::size_t n = 1;
  for (int a = 0; a < d; ++a) {
    if (n > kMaxLatticeEntries / side) {
      throw std::invalid_argument("lattice too large");
    }
    n *= side;
  }
  if (n * static_cast<std::size_t>(d) > kMaxLatticeEntries) {
    throw std::invalid_argument("lattice too large");
  }
  size_ = n;
  auto tables = std::make_shared<Tables>();
  tables->coords.resize(n * static_cast<std::size_t>(d));
  tables->norm2.resize(n);
  std::vector<int> xi(d, -radius);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      tables->coords[i * d + a] = xi[a];
      s += static_cast<double>(xi[a]) * xi[a];
    }
    tables->norm2[i] = s;
    for (int a = d - 1; a >= 0; --a) {
      if (++xi[a] <= radius) break;
      xi[a] = -radius;
    }
  }
  tables_ = std::move(tables);
}

double FrequencyLattice::norm(std::size_t index) const {
  return std::sqrt(norm_squared(index));
}

double FrequencyLattice::bracket(std::size_t index, double mass) const {
  return std::sqrt(mass * mass + norm_squared(index));
}

bool FrequencyLattice::contains(std::span<const int> xi) const {
  if (static_cast<int>(xi.size()) != d_) return false;
  for (int c : xi) {
    if (c < -radius_ || c > radius_) return false;
  }
  return true;
}

std::size_t FrequencyLattice::index_of(std::span<const int> xi) const {
  if (!contains(xi)) throw std::out_of_range("frequency not on lattice");
  std::size_t idx = 0;
  const auto s = static_cast<std::size_t>(side());
  for (int c : xi) idx = idx * s + static_cast<std::size_t>(c + radius_);
  return idx;
}

// ---------------------------------------------------------------------------
// SpinorField

SpinorField::SpinorField(FrequencyLattice lattice, int d0)
    : lattice_(std::move(lattice)), d0_(d0) {
  if (d0 < 1) throw std::invalid_argument("spinor dimension must be >= 1");
  coeffs_.assign(lattice_.size() * static_cast<std::size_t>(d0), Complex(0.0));
}

SpinorField SpinorField::plane_wave(const FrequencyLattice& lattice, int d0,
                                    std::span<const int> xi,
                                    std::span<const Complex> spinor) {
  if (static_cast<int>(spinor.size()) != d0) {
    throw std::invalid_argument("plane_wave: spinor has wrong dimension");
  }
  SpinorField f(lattice, d0);
  auto dst = f.spinor(lattice.index_of(xi));
  for (int k = 0; k < d0; ++k) dst[k] = spinor[k];
  return f;
}

double SpinorField::l2_norm_squared() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return s;
}

double SpinorField::l2_norm() const { return std::sqrt(l2_norm_squared()); }

void require_compatible(const SpinorField& a, const SpinorField& b) {
  if (!(a.lattice() == b.lattice()) || a.d0() != b.d0()) {
    throw LatticeMismatch("spinor fields live on different lattices");
  }
}

SpinorField& SpinorField::operator+=(const SpinorField& other) {
  require_compatible(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpinorField& SpinorField::operator-=(const SpinorField& other) {
  require_compatible(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpinorField& SpinorField::operator*=(Complex s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

double l2_distance(const SpinorField& a, const SpinorField& b) {
  require_compatible(a, b);
  double s = 0.0;
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  for (std::size_t i = 0; i < ca.size(); ++i) s += std::norm(ca[i] - cb[i]);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Physical grid transforms

SpatialGrid::SpatialGrid(int d_, int m_, int d0_) : d(d_), m(m_), d0(d0_) {
  if (d < 1 || m < 1 || d0 < 1) throw std::invalid_argument("bad grid shape");
  std::size_t pts = 1;
  for (int a = 0; a < d; ++a) pts *= static_cast<std::size_t>(m);
  values.assign(pts * static_cast<std::size_t>(d0), Complex(0.0));
}

std::vector<double> SpatialGrid::coordinate(std::size_t g) const {
  std::vector<double> x(d);
  for (int a = d - 1; a >= 0; --a) {
    x[a] = 2.0 * kPi * static_cast<double>(g % m) / m;
    g /= m;
  }
  return x;
}

namespace {

std::size_t grid_index(std::span<const int> xi, int m) {
  std::size_t idx = 0;
  for (int c : xi) {
    const int wrapped = ((c % m) + m) % m;
    idx = idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(wrapped);
  }
  return idx;
}

}  // namespace

SpinorField forward_fourier(const SpatialGrid& samples,
                            const FrequencyLattice& lattice) {
  if (samples.d != lattice.dim()) {
    throw LatticeMismatch("forward_fourier: grid and lattice dimensions differ");
  }
  if (samples.m < lattice.side()) {
    throw AliasingError("forward_fourier: grid with " + std::to_string(samples.m) +
                        " points per axis aliases lattice radius " +
                        std::to_string(lattice.radius()));
  }
  std::vector<Complex> buf = samples.values;
  std::vector<int> dims(samples.d, samples.m);
  fft::transform(buf, dims, samples.d0, -1);
  const std::size_t pts = samples.points();
  const double scale = 1.0 / static_cast<double>(pts);
  SpinorField f(lattice, samples.d0);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const std::size_t g = grid_index(lattice.point(i), samples.m);
    for (int k = 0; k < samples.d0; ++k) f.at(i, k) = buf[k * pts + g] * scale;
  }
  return f;
}

SpatialGrid inverse_fourier(const SpinorField& f, int m) {
  const auto& lat = f.lattice();
  if (m < lat.side()) {
    throw AliasingError("inverse_fourier: resolution below 2N+1");
  }
  SpatialGrid grid(lat.dim(), m, f.d0());
  const std::size_t pts = grid.points();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const std::size_t g = grid_index(lat.point(i), m);
    for (int k = 0; k < f.d0(); ++k) grid.values[k * pts + g] = f.at(i, k);
  }
  std::vector<int> dims(lat.dim(), m);
  fft::transform(grid.values, dims, f.d0(), +1);
  return grid;
}

double japanese_bracket(std::span<const int> xi) {
  double s = 1.0;
  for (int c : xi) s += static_cast<double>(c) * c;
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Multipliers

Multiplier Multiplier::scalar(FrequencyLattice lattice, std::vector<Complex> values) {
  if (values.size() != lattice.size()) {
    throw std::invalid_argument("scalar multiplier: one value per lattice point");
  }
  Multiplier m;
  m.kind_ = Kind::scalar;
  m.lattice_ = std::move(lattice);
  m.values_ = std::move(values);
  return m;
}

Multiplier Multiplier::scalar(const FrequencyLattice& lattice,
                              const std::function<Complex(std::size_t)>& symbol) {
  std::vector<Complex> v(lattice.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = symbol(i);
  return scalar(lattice, std::move(v));
}

Multiplier Multiplier::matrix(FrequencyLattice lattice, int d0,
                              std::vector<Complex> values) {
  if (values.size() != lattice.size() * static_cast<std::size_t>(d0 * d0)) {
    throw std::invalid_argument("matrix multiplier: one d0 x d0 block per point");
  }
  Multiplier m;
  m.kind_ = Kind::matrix;
  m.lattice_ = std::move(lattice);
  m.d0_ = d0;
  m.values_ = std::move(values);
  return m;
}

Multiplier Multiplier::matrix(const FrequencyLattice& lattice, int d0,
                              const std::function<CMatrix(std::size_t)>& symbol) {
  const auto block = static_cast<std::size_t>(d0 * d0);
  std::vector<Complex> v(lattice.size() * block);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const CMatrix mi = symbol(i);
    for (int r = 0; r < d0; ++r) {
      for (int c = 0; c < d0; ++c) v[i * block + r * d0 + c] = mi(r, c);
    }
  }
  return matrix(lattice, d0, std::move(v));
}

Multiplier Multiplier::compose(const Multiplier& other) const {
  if (!(lattice_ == other.lattice_)) {
    throw LatticeMismatch("compose: multipliers on different lattices");
  }
  if (kind_ == Kind::scalar && other.kind_ == Kind::scalar) {
    std::vector<Complex> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * other.values_[i];
    return scalar(lattice_, std::move(v));
  }
  const int d0 = kind_ == Kind::matrix ? d0_ : other.d0_;
  if (kind_ == Kind::matrix && other.kind_ == Kind::matrix && d0_ != other.d0_) {
    throw LatticeMismatch("compose: matrix multipliers of different order");
  }
  const auto block = static_cast<std::size_t>(d0 * d0);
  auto as_matrix = [&](const Multiplier& m, std::size_t i) {
    if (m.kind_ == Kind::scalar) {
      return CMatrix(m.values_[i] * CMatrix::Identity(d0, d0));
    }
    CMatrix out(d0, d0);
    for (int r = 0; r < d0; ++r) {
      for (int c = 0; c < d0; ++c) out(r, c) = m.values_[i * block + r * d0 + c];
    }
    return out;
  };
  return matrix(lattice_, d0, [&](std::size_t i) {
    return CMatrix(as_matrix(*this, i) * as_matrix(other, i));
  });
}

SpinorField apply_multiplier(const Multiplier& m, const SpinorField& f, Exec exec) {
  if (!(m.lattice() == f.lattice())) {
    throw LatticeMismatch("apply_multiplier: lattice mismatch");
  }
  SpinorField out = f;
  if (m.kind() == Multiplier::Kind::scalar) {
    kernels::scale_rows(out.coeffs(), f.d0(), m.values(), exec);
  } else {
    if (m.d0() != f.d0()) {
      throw LatticeMismatch("apply_multiplier: matrix order differs from d0");
    }
    kernels::apply_block_matrices(out.coeffs(), f.d0(), m.values(), exec);
  }
  return out;
}

SpinorField apply_real_symbol(const SpinorField& f,
                              const std::function<double(std::size_t)>& symbol,
                              Exec exec) {
  const auto& lat = f.lattice();
  std::vector<double> factors(lat.size());
  for (std::size_t i = 0; i < factors.size(); ++i) factors[i] = symbol(i);
  SpinorField out = f;
  kernels::scale_rows(out.coeffs(), f.d0(), factors, exec);
  return out;
}

CMatrix projector_symbol(const GammaSet& g, std::span<const int> xi, Sign sign,
                         double mass) {
  double n2 = mass * mass;
  for (int c : xi) n2 += static_cast<double>(c) * c;
  const double br = std::sqrt(n2);
  const CMatrix id = CMatrix::Identity(g.d0, g.d0);
  return 0.5 * (id + (sign_value(sign) / br) * g.dirac_symbol(xi, mass));
}

Multiplier projector_multiplier(const GammaSet& g, const FrequencyLattice& lattice,
                                Sign sign, double mass) {
  return Multiplier::matrix(lattice, g.d0, [&](std::size_t i) {
    return projector_symbol(g, lattice.point(i), sign, mass);
  });
}

SpinorField project_pm(const GammaSet& g, const SpinorField& f, Sign sign,
                       double mass, Exec exec) {
  const auto& lat = f.lattice();
  if (g.d != lat.dim() || g.d0 != f.d0()) {
    throw LatticeMismatch("project_pm: gamma set does not match field");
  }
  SpinorField out(lat, f.d0());
  const double s = sign_value(sign);
  const int d0 = f.d0();
  kernels::for_each_index(lat.size(), exec, [&](std::size_t i) {
    const auto in = f.spinor(i);
    auto dst = out.spinor(i);
    g.apply_dirac_symbol(lat.point(i), mass, in, dst);
    const double c = s / lat.bracket(i, mass);
    for (int k = 0; k < d0; ++k) dst[k] = 0.5 * (in[k] + c * dst[k]);
  });
  return out;
}

SpinorField partial_derivative(const SpinorField& f, int axis) {
  const auto& lat = f.lattice();
  if (axis < 1 || axis > lat.dim()) {
    throw std::invalid_argument("partial_derivative: axis out of range");
  }
  return apply_real_symbol(f, [&](std::size_t i) {
    return static_cast<double>(lat.point(i)[axis - 1]);
  });
}

// ---------------------------------------------------------------------------
// Trajectory

void Trajectory::validate() const {
  if (frames.empty()) throw std::invalid_argument("trajectory has no frames");
  if (!(dt > 0.0)) throw std::invalid_argument("trajectory time step must be > 0");
  for (const auto& f : frames) require_compatible(frames.front(), f);
}

Trajectory map_frames(const Trajectory& tr,
                      const std::function<SpinorField(const SpinorField&)>& op) {
  Trajectory out;
  out.t0 = tr.t0;
  out.dt = tr.dt;
  out.frames.reserve(tr.frames.size());
  for (const auto& f : tr.frames) out.frames.push_back(op(f));
  return out;
}

}  // namespace tdirac
