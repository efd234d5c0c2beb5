#include "tdirac/clifford.hpp"

#include <stdexcept>
#include <string>

namespace tdirac {
namespace {

CMatrix pauli_x() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = Complex(0.0, -1.0);
  m(1, 0) = Complex(0.0, 1.0);
  return m;
}

CMatrix pauli_z() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

int spinor_dimension(int d) {
  if (d < 1) throw std::invalid_argument("spatial dimension must be >= 1");
  const int half = (d + 1) / 2;
  if (half >= 30) throw std::invalid_argument("spatial dimension too large");
  return 1 << half;
}

GammaSet GammaSet::from_alpha_beta(std::vector<CMatrix> alpha, CMatrix beta) {
  GammaSet g;
  g.d = static_cast<int>(alpha.size());
  g.d0 = static_cast<int>(beta.rows());
  if (beta.rows() != beta.cols()) {
    throw std::invalid_argument("beta must be square");
  }
  for (const auto& a : alpha) {
    if (a.rows() != g.d0 || a.cols() != g.d0) {
      throw std::invalid_argument("alpha matrices must match beta's order");
    }
  }
  g.alpha = std::move(alpha);
  g.beta = std::move(beta);
  g.gamma.reserve(g.d + 1);
  g.gamma.push_back(g.beta);
  for (const auto& a : g.alpha) g.gamma.push_back(g.beta * a);
  return g;
}

CMatrix GammaSet::dirac_symbol(std::span<const int> xi, double mass) const {
  CMatrix h = mass * beta;
  for (int j = 0; j < d; ++j) {
    if (xi[j] != 0) h += static_cast<double>(xi[j]) * alpha[j];
  }
  return h;
}

void GammaSet::apply_dirac_symbol(std::span<const int> xi, double mass,
                                  std::span<const Complex> in,
                                  std::span<Complex> out) const {
  Eigen::Map<const CVector> v(in.data(), d0);
  Eigen::Map<CVector> w(out.data(), d0);
  w.noalias() = mass * (beta * v);
  for (int j = 0; j < d; ++j) {
    if (xi[j] != 0) w.noalias() += static_cast<double>(xi[j]) * (alpha[j] * v);
  }
}

GammaSet build_gamma(int d, int max_d0) {
  if (d < 1) throw std::invalid_argument("build_gamma: d must be >= 1");
  const int d0 = spinor_dimension(d);
  if (d0 > max_d0) {
    throw std::invalid_argument("build_gamma: spinor dimension " +
                                std::to_string(d0) + " exceeds limit " +
                                std::to_string(max_d0));
  }

  // Hermitian anticommuting generators, beta first.
  std::vector<CMatrix> gens;
  int base = (d % 2 == 1) ? 1 : 2;
  if (base == 1) {
    gens = {pauli_z(), pauli_x()};
  } else {
    gens = {pauli_z(), pauli_x(), pauli_y()};
  }
  for (int cur = base; cur < d; cur += 2) {
    const CMatrix id = CMatrix::Identity(gens.front().rows(), gens.front().cols());
    std::vector<CMatrix> next;
    next.reserve(gens.size() + 2);
    for (const auto& m : gens) next.push_back(kron(m, pauli_z()));
    next.push_back(kron(id, pauli_x()));
    next.push_back(kron(id, pauli_y()));
    gens = std::move(next);
  }

  CMatrix beta = gens.front();
  std::vector<CMatrix> alpha(gens.begin() + 1, gens.end());
  return GammaSet::from_alpha_beta(std::move(alpha), std::move(beta));
}

double anticommutator_defect(const GammaSet& g) {
  const CMatrix id = CMatrix::Identity(g.d0, g.d0);
  double worst = (g.beta * g.beta - id).norm();
  for (int j = 0; j < g.d; ++j) {
    const CMatrix& aj = g.alpha[j];
    worst = std::max(worst, (aj * aj - id).norm());
    worst = std::max(worst, (aj * g.beta + g.beta * aj).norm());
    for (int k = j; k < g.d; ++k) {
      const CMatrix& ak = g.alpha[k];
      CMatrix anti = aj * ak + ak * aj;
      if (j == k) anti -= 2.0 * id;
      worst = std::max(worst, anti.norm());
    }
  }
  return worst;
}

double hermiticity_defect(const GammaSet& g) {
  double worst = (g.beta - g.beta.adjoint()).norm();
  for (const auto& a : g.alpha) worst = std::max(worst, (a - a.adjoint()).norm());
  return worst;
}

namespace {

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const nlohmann::json& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows.at(i);
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw std::invalid_argument("gamma json: matrix must be square");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& z = row.at(j);
      if (z.is_number()) {
        m(i, j) = z.get<double>();
      } else {
        m(i, j) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
      }
    }
  }
  return m;
}

}  // namespace

nlohmann::json gamma_to_json(const GammaSet& g) {
  nlohmann::json out;
  out["d"] = g.d;
  out["d0"] = g.d0;
  out["beta"] = matrix_to_json(g.beta);
  nlohmann::json alpha = nlohmann::json::array();
  for (const auto& a : g.alpha) alpha.push_back(matrix_to_json(a));
  out["alpha"] = std::move(alpha);
  nlohmann::json gamma = nlohmann::json::array();
  for (const auto& m : g.gamma) gamma.push_back(matrix_to_json(m));
  out["gamma"] = std::move(gamma);
  return out;
}

GammaSet gamma_from_json(const nlohmann::json& j) {
  CMatrix beta = matrix_from_json(j.at("beta"));
  std::vector<CMatrix> alpha;
  for (const auto& a : j.at("alpha")) alpha.push_back(matrix_from_json(a));
  GammaSet g = GammaSet::from_alpha_beta(std::move(alpha), std::move(beta));
  if (j.contains("d") && j.at("d").get<int>() != g.d) {
    throw std::invalid_argument("gamma json: d does not match alpha count");
  }
  return g;
}

}  // namespace tdirac
