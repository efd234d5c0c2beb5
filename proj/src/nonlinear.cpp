#include "tdirac/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "tdirac/kernels.hpp"

namespace tdirac::nl {
namespace {

Complex parse_complex(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw std::invalid_argument("nonlinearity: complex entries are numbers or [re, im]");
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

double central_binomial_product(const MultiIndex& m) {
  double r = 1.0;
  for (int e : m) r *= static_cast<double>(binomial(e, e / 2));
  return r;
}

Complex monomial(const MultiIndex& p, std::span<const Complex> u) {
  Complex r = 1.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    for (int e = 0; e < p[k]; ++e) r *= u[k];
  }
  return r;
}

const char* tail_name(Tail t) { return t == Tail::none ? "none" : "geometric"; }

}  // namespace

int degree(const MultiIndex& p) {
  int s = 0;
  for (int e : p) s += e;
  return s;
}

PowerSeriesNonlinearity::PowerSeriesNonlinearity(int d0) : d0_(d0) {
  if (d0 < 1) throw std::invalid_argument("nonlinearity: d0 must be positive");
}

void PowerSeriesNonlinearity::add_term(const MultiIndex& p, std::vector<Complex> c) {
  if (static_cast<int>(p.size()) != d0_ || static_cast<int>(c.size()) != d0_) {
    throw std::invalid_argument("nonlinearity: p and c must have length d0");
  }
  for (int e : p) {
    if (e < 0) throw std::invalid_argument("nonlinearity: negative exponent");
  }
  if (vanishes_at_zero_ && degree(p) == 0 &&
      std::any_of(c.begin(), c.end(), [](Complex z) { return z != Complex(0.0); })) {
    throw std::invalid_argument("nonlinearity: constant term with F(0) = 0 required");
  }
  auto& slot = terms_[p];
  if (slot.empty()) slot.assign(d0_, Complex(0.0));
  for (int k = 0; k < d0_; ++k) slot[k] += c[k];
  for (int e : p) max_exponent_ = std::max(max_exponent_, e);
}

void PowerSeriesNonlinearity::set_vanishes_at_zero(bool v) {
  if (v) {
    const auto it = terms_.find(MultiIndex(d0_, 0));
    if (it != terms_.end()) {
      for (const auto& z : it->second) {
        if (z != Complex(0.0)) {
          throw std::invalid_argument("nonlinearity: series has a constant term");
        }
      }
    }
  }
  vanishes_at_zero_ = v;
}

void PowerSeriesNonlinearity::set_tail(Tail t, double rate) {
  if (rate < 0.0) throw std::invalid_argument("nonlinearity: negative tail rate");
  tail_ = t;
  tail_rate_ = rate;
}

int PowerSeriesNonlinearity::max_degree() const {
  int r = 0;
  for (const auto& [p, c] : terms_) {
    if (std::any_of(c.begin(), c.end(), [](Complex z) { return z != Complex(0.0); })) {
      r = std::max(r, degree(p));
    }
  }
  return r;
}

PowerSeriesNonlinearity PowerSeriesNonlinearity::from_json(const nlohmann::json& j) {
  const nlohmann::json* list = &j;
  int d0 = 0;
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (key != "d0" && key != "terms" && key != "tail" && key != "tail_rate" &&
          key != "vanishes_at_zero") {
        throw std::invalid_argument("nonlinearity: unknown key '" + key + "'");
      }
    }
    if (!j.contains("terms")) throw std::invalid_argument("nonlinearity: missing terms");
    list = &j.at("terms");
    if (j.contains("d0")) d0 = j.at("d0").get<int>();
  }
  if (!list->is_array()) throw std::invalid_argument("nonlinearity: terms must be a list");
  if (d0 == 0) {
    if (list->empty()) throw std::invalid_argument("nonlinearity: cannot infer d0");
    d0 = static_cast<int>(list->front().at("p").size());
  }
  PowerSeriesNonlinearity F(d0);
  if (j.is_object()) {
    if (j.contains("vanishes_at_zero")) F.vanishes_at_zero_ = j.at("vanishes_at_zero").get<bool>();
    if (j.contains("tail")) {
      const auto t = j.at("tail").get<std::string>();
      if (t == "none") {
        F.tail_ = Tail::none;
      } else if (t == "geometric") {
        F.tail_ = Tail::geometric;
      } else {
        throw std::invalid_argument("nonlinearity: tail must be 'none' or 'geometric'");
      }
    }
    if (j.contains("tail_rate")) F.set_tail(F.tail_, j.at("tail_rate").get<double>());
  }
  for (const auto& term : *list) {
    if (!term.is_object() || !term.contains("p") || !term.contains("c")) {
      throw std::invalid_argument("nonlinearity: each term needs p and c");
    }
    MultiIndex p = term.at("p").get<MultiIndex>();
    std::vector<Complex> c;
    for (const auto& z : term.at("c")) c.push_back(parse_complex(z));
    F.add_term(p, std::move(c));
  }
  return F;
}

PowerSeriesNonlinearity PowerSeriesNonlinearity::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open nonlinearity file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("nonlinearity: malformed JSON in " + path + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json PowerSeriesNonlinearity::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [p, c] : terms_) {
    nlohmann::json cj = nlohmann::json::array();
    for (const auto& z : c) cj.push_back({z.real(), z.imag()});
    terms.push_back({{"p", p}, {"c", std::move(cj)}});
  }
  return {{"d0", d0_},
          {"vanishes_at_zero", vanishes_at_zero_},
          {"tail", tail_name(tail_)},
          {"tail_rate", tail_rate_},
          {"terms", std::move(terms)}};
}

PowerSeriesNonlinearity PowerSeriesNonlinearity::scaled(Complex s) const {
  PowerSeriesNonlinearity out = *this;
  for (auto& [p, c] : out.terms_) {
    for (auto& z : c) z *= s;
  }
  return out;
}

void PowerSeriesNonlinearity::fill_powers(std::span<const Complex> psi,
                                          std::vector<Complex>& table) const {
  const int w = max_exponent_ + 1;
  table.resize(static_cast<std::size_t>(d0_) * w);
  for (int k = 0; k < d0_; ++k) {
    Complex* row = table.data() + static_cast<std::size_t>(k) * w;
    row[0] = 1.0;
    for (int e = 1; e < w; ++e) row[e] = row[e - 1] * psi[k];
  }
}

void PowerSeriesNonlinearity::evaluate(std::span<const Complex> psi,
                                       std::span<Complex> out) const {
  if (static_cast<int>(psi.size()) != d0_ || static_cast<int>(out.size()) != d0_) {
    throw std::invalid_argument("evaluate: spinor length differs from d0");
  }
  std::fill(out.begin(), out.end(), Complex(0.0));
  if (terms_.empty()) return;
  std::vector<Complex> table;
  fill_powers(psi, table);
  const int w = max_exponent_ + 1;
  for (const auto& [p, c] : terms_) {
    Complex mono = 1.0;
    for (int k = 0; k < d0_; ++k) mono *= table[static_cast<std::size_t>(k) * w + p[k]];
    for (int a = 0; a < d0_; ++a) out[a] += c[a] * mono;
  }
}

std::vector<Complex> PowerSeriesNonlinearity::evaluate(std::span<const Complex> psi) const {
  std::vector<Complex> out(d0_);
  evaluate(psi, out);
  return out;
}

CMatrix PowerSeriesNonlinearity::jacobian(std::span<const Complex> psi) const {
  CMatrix J = CMatrix::Zero(d0_, d0_);
  std::vector<Complex> e(d0_), col(d0_);
  for (int b = 0; b < d0_; ++b) {
    std::fill(e.begin(), e.end(), Complex(0.0));
    e[b] = 1.0;
    jacobian_apply(psi, e, col);
    for (int a = 0; a < d0_; ++a) J(a, b) = col[a];
  }
  return J;
}

void PowerSeriesNonlinearity::jacobian_apply(std::span<const Complex> psi,
                                             std::span<const Complex> w,
                                             std::span<Complex> out) const {
  std::fill(out.begin(), out.end(), Complex(0.0));
  if (terms_.empty()) return;
  std::vector<Complex> table;
  fill_powers(psi, table);
  const int width = max_exponent_ + 1;
  for (const auto& [p, c] : terms_) {
    Complex acc = 0.0;
    for (int b = 0; b < d0_; ++b) {
      if (p[b] == 0) continue;
      Complex mono = static_cast<double>(p[b]);
      for (int k = 0; k < d0_; ++k) {
        mono *= table[static_cast<std::size_t>(k) * width + (k == b ? p[k] - 1 : p[k])];
      }
      acc += mono * w[b];
    }
    for (int a = 0; a < d0_; ++a) out[a] += c[a] * acc;
  }
}

// ---------------------------------------------------------------------------

int dealiased_grid(int lattice_radius, int degree) {
  return (std::max(degree, 1) + 1) * lattice_radius + 1;
}

SpatialGrid evaluate_grid(const PowerSeriesNonlinearity& F, const SpatialGrid& u,
                          Exec exec) {
  if (u.d0 != F.d0()) throw LatticeMismatch("evaluate_grid: d0 mismatch");
  SpatialGrid out(u.d, u.m, u.d0);
  const std::size_t pts = u.points();
  kernels::for_each_index(pts, exec, [&](std::size_t g) {
    std::vector<Complex> psi(u.d0), val(u.d0);
    for (int k = 0; k < u.d0; ++k) psi[k] = u.values[k * pts + g];
    F.evaluate(psi, val);
    for (int k = 0; k < u.d0; ++k) out.values[k * pts + g] = val[k];
  });
  return out;
}

SpatialGrid jacobian_apply_grid(const PowerSeriesNonlinearity& F, const SpatialGrid& u,
                                const SpatialGrid& w, Exec exec) {
  if (u.d0 != F.d0() || w.d0 != F.d0() || u.m != w.m || u.d != w.d) {
    throw LatticeMismatch("jacobian_apply_grid: grids disagree");
  }
  SpatialGrid out(u.d, u.m, u.d0);
  const std::size_t pts = u.points();
  kernels::for_each_index(pts, exec, [&](std::size_t g) {
    std::vector<Complex> psi(u.d0), dir(u.d0), val(u.d0);
    for (int k = 0; k < u.d0; ++k) {
      psi[k] = u.values[k * pts + g];
      dir[k] = w.values[k * pts + g];
    }
    F.jacobian_apply(psi, dir, val);
    for (int k = 0; k < u.d0; ++k) out.values[k * pts + g] = val[k];
  });
  return out;
}

SpinorField evaluate_F_field(const PowerSeriesNonlinearity& F, const SpinorField& f,
                             int grid_m, Exec exec) {
  if (f.d0() != F.d0()) throw LatticeMismatch("evaluate_F_field: d0 mismatch");
  const auto& lat = f.lattice();
  if (F.empty()) return SpinorField(lat, f.d0());
  const int need = dealiased_grid(lat.radius(), F.max_degree());
  if (grid_m == 0) {
    grid_m = need;
  } else if (grid_m < need) {
    throw AliasingError("evaluate_F_field: grid of " + std::to_string(grid_m) +
                        " points aliases a degree-" + std::to_string(F.max_degree()) +
                        " product; need " + std::to_string(need));
  }
  return forward_fourier(evaluate_grid(F, inverse_fourier(f, grid_m), exec), lat);
}

// ---------------------------------------------------------------------------

std::vector<Split> multinomial_split(const MultiIndex& p) {
  for (int e : p) {
    if (e < 0) throw std::invalid_argument("multinomial_split: negative exponent");
  }
  std::vector<Split> out;
  MultiIndex m(p.size(), 0);
  while (true) {
    Split s;
    s.m = m;
    s.n.resize(p.size());
    s.coefficient = 1;
    for (std::size_t k = 0; k < p.size(); ++k) {
      s.n[k] = p[k] - m[k];
      s.coefficient *= binomial(p[k], m[k]);
    }
    out.push_back(std::move(s));
    int k = static_cast<int>(p.size()) - 1;
    while (k >= 0 && m[k] == p[k]) m[k--] = 0;
    if (k < 0) break;
    ++m[k];
  }
  return out;
}

MultiIndex reduced_index(const MultiIndex& p, int i) {
  if (i < 1 || i > static_cast<int>(p.size())) {
    throw std::out_of_range("reduced_index: component out of range");
  }
  MultiIndex q = p;
  q[i - 1] = std::max(q[i - 1] - 1, 0);
  return q;
}

std::vector<Complex> difference_expansion(const PowerSeriesNonlinearity& F,
                                          std::span<const Complex> u1,
                                          std::span<const Complex> u2) {
  const int d0 = F.d0();
  if (static_cast<int>(u1.size()) != d0 || static_cast<int>(u2.size()) != d0) {
    throw std::invalid_argument("difference_expansion: spinor length differs from d0");
  }
  std::vector<Complex> diff(d0);
  for (int k = 0; k < d0; ++k) diff[k] = u1[k] - u2[k];
  std::vector<Complex> out(d0, Complex(0.0));
  for (const auto& [p, c] : F.terms()) {
    for (int i = 1; i <= d0; ++i) {
      if (p[i - 1] == 0) continue;
      Complex acc = 0.0;
      for (const auto& s : multinomial_split(reduced_index(p, i))) {
        acc += static_cast<double>(s.coefficient) / (degree(s.m) + 1) *
               monomial(s.m, diff) * monomial(s.n, u2);
      }
      acc *= static_cast<double>(p[i - 1]) * diff[i - 1];
      for (int a = 0; a < d0; ++a) out[a] += c[a] * acc;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

CoefficientWeights coefficient_weights(const GammaSet& g, std::span<const Complex> c) {
  if (static_cast<int>(c.size()) != g.d0) {
    throw std::invalid_argument("coefficient_weights: length differs from d0");
  }
  const CVector v = Eigen::Map<const CVector>(c.data(), g.d0);
  CoefficientWeights w;
  w.plain = v.norm();
  w.gamma0 = (g.gamma[0] * v).norm();
  for (int k = 1; k <= g.d; ++k) w.spatial += (g.gamma[k] * v).norm();
  return w;
}

double condition_a_threshold(int d, double bernstein_constant) {
  if (!(bernstein_constant > 0.0)) {
    throw std::invalid_argument("condition A: Bernstein constant must be positive");
  }
  return std::pow(bernstein_constant, -0.5 * d - 0.25) * std::pow(2.0, -0.5 * d) / 3.0;
}

nlohmann::json ConditionAReport::to_json() const {
  nlohmann::json deg = nlohmann::json::array();
  for (const auto& q : degrees) {
    deg.push_back({{"r", q.r}, {"B", q.B}, {"A", q.A}, {"root", q.root}});
  }
  return {{"d", d},
          {"d0", d0},
          {"degrees", std::move(deg)},
          {"tail", tail},
          {"max_root", max_root},
          {"proxy_limsup", proxy_limsup},
          {"bernstein_constant", bernstein_constant},
          {"threshold", threshold},
          {"verdict", pass ? "pass" : "fail"}};
}

ConditionAReport condition_a_quantities(const PowerSeriesNonlinearity& F,
                                        const GammaSet& g,
                                        const ConditionAOptions& opt) {
  if (F.empty() || F.max_degree() == 0) {
    throw std::invalid_argument("condition A: empty series");
  }
  if (F.d0() != g.d0) throw LatticeMismatch("condition A: d0 differs from gamma set");
  const int top = F.max_degree();
  std::vector<double> B(top + 1, 0.0), A(top + 1, 0.0);

  for (const auto& [p, c] : F.terms()) {
    const CoefficientWeights w = coefficient_weights(g, c);
    const int r = degree(p);
    const double pow3 = std::pow(3.0, r);
    const double wmax = std::max({w.plain, w.gamma0, w.spatial});
    for (const auto& s : multinomial_split(p)) {
      B[r] = std::max(B[r], pow3 * static_cast<double>(s.coefficient) * wmax);
    }
    const double wsum = w.plain + w.gamma0 + w.spatial;
    for (int i = 1; i <= F.d0(); ++i) {
      const int pi = p[i - 1];
      if (pi == 0) continue;
      const MultiIndex q = reduced_index(p, i);
      const int rq = degree(q);
      const double pow3q = std::pow(3.0, rq + 1);
      for (const auto& s : multinomial_split(q)) {
        // sup over the (k, l) and (r, s) splits sits at the central binomials
        const double ab = central_binomial_product(s.m) * central_binomial_product(s.n);
        const double v = pow3q * ab * pi * static_cast<double>(s.coefficient) * wsum /
                         (degree(s.m) + 1);
        A[rq] = std::max(A[rq], v);
      }
    }
  }

  ConditionAReport rep;
  rep.d = g.d;
  rep.d0 = g.d0;
  rep.tail = tail_name(F.tail());
  rep.bernstein_constant = opt.bernstein_constant;
  rep.threshold = condition_a_threshold(g.d, opt.bernstein_constant);
  double upper = 0.0;
  for (int r = 0; r <= top; ++r) {
    DegreeQuantities q{r, B[r], A[r], 0.0};
    if (r > 0) q.root = std::pow(std::max(B[r], A[r]), 1.0 / r);
    rep.max_root = std::max(rep.max_root, q.root);
    if (2 * r >= top) upper = std::max(upper, q.root);
    rep.degrees.push_back(q);
  }
  if (F.tail() == Tail::none) {
    // Finite support: B_r = A_r = 0 for r > max_degree, so the limsup is 0.
    rep.proxy_limsup = 0.0;
  } else {
    rep.proxy_limsup = std::max({upper, F.tail_rate(), opt.tail_rate});
  }
  rep.pass = rep.proxy_limsup < rep.threshold;
  return rep;
}

std::vector<double> r_partial_sums(double bernstein_constant, int p_degree, int k_max) {
  if (!(bernstein_constant > 0.0) || p_degree < 0 || k_max < 0) {
    throw std::invalid_argument("r_partial_sums: bad arguments");
  }
  const double e = static_cast<double>(p_degree) / (p_degree + 1.0);
  const auto term = [&](int i) {
    return std::pow(bernstein_constant, -std::ldexp(1.0, -std::abs(i)) * e);
  };
  std::vector<double> out;
  double s = term(0);
  out.push_back(s);
  for (int k = 1; k <= k_max; ++k) {
    s += 2.0 * term(k);
    out.push_back(s);
  }
  return out;
}

}  // namespace tdirac::nl
