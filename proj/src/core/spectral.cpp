#include "core/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace vplate {

namespace {

constexpr double kPi = std::numbers::pi;

void require_state(const ModalState& state, const ModalBasis& basis,
                   const char* who) {
  if (state.position.size() != basis.mode_count() ||
      state.velocity.size() != basis.mode_count())
    throw std::invalid_argument(std::string(who) +
                                ": coefficient arrays do not match mode count");
}

}  // namespace

ModalBasis beam_hinged_basis(std::size_t n_modes) {
  return beam_hinged_basis(n_modes, BoundaryGrid::point());
}

ModalBasis beam_hinged_basis(std::size_t n_modes, const BoundaryGrid& bg) {
  if (n_modes < 1) throw std::invalid_argument("beam_hinged_basis: need N >= 1");
  if (bg.size() != 1 || bg.weights[0] != 1.0)
    throw std::invalid_argument(
        "beam_hinged_basis: boundary is the single point x=0 with weight 1");
  ModalBasis basis;
  basis.boundary = bg;
  basis.geometry = "beam";
  basis.lambda.resize(n_modes);
  basis.trace.resize(n_modes);
  for (std::size_t n = 1; n <= n_modes; ++n) {
    const double npi = static_cast<double>(n) * kPi;
    basis.lambda[n - 1] = npi * npi;
    basis.trace[n - 1] = {-std::sqrt(2.0) * npi * npi};
  }
  return basis;
}

ModalBasis rectangle_hinged_basis(double a, double b, std::size_t n_modes,
                                  const BoundaryGrid& bg) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("rectangle_hinged_basis: sides must be positive");
  if (n_modes < 1)
    throw std::invalid_argument("rectangle_hinged_basis: need N >= 1");
  if (bg.size() < 2)
    throw std::invalid_argument("rectangle_hinged_basis: edge grid required");

  // The N smallest eigenvalues all live in the (m,k) <= N box.
  struct Mode {
    double lambda;
    std::size_t m, k;
  };
  std::vector<Mode> candidates;
  candidates.reserve(n_modes * n_modes);
  for (std::size_t m = 1; m <= n_modes; ++m)
    for (std::size_t k = 1; k <= n_modes; ++k) {
      const double lm = static_cast<double>(m) * kPi / a;
      const double lk = static_cast<double>(k) * kPi / b;
      candidates.push_back({lm * lm + lk * lk, m, k});
    }
  std::sort(candidates.begin(), candidates.end(), [](const Mode& x, const Mode& y) {
    return std::tie(x.lambda, x.m, x.k) < std::tie(y.lambda, y.m, y.k);
  });

  ModalBasis basis;
  basis.boundary = bg;
  basis.geometry = "rectangle";
  basis.lambda.resize(n_modes);
  basis.trace.resize(n_modes);
  const double amp = 2.0 / std::sqrt(a * b);
  for (std::size_t n = 0; n < n_modes; ++n) {
    const Mode& md = candidates[n];
    basis.lambda[n] = md.lambda;
    std::vector<double> profile(bg.size());
    const double edge_factor = md.lambda * amp * (static_cast<double>(md.k) * kPi / b);
    for (std::size_t j = 0; j < bg.size(); ++j)
      profile[j] =
          edge_factor * std::sin(static_cast<double>(md.m) * kPi * bg.points[j] / a);
    basis.trace[n] = std::move(profile);
  }
  return basis;
}

ModalBasis synthetic_basis(const std::vector<double>& lambda,
                           const std::vector<double>& psi_norms) {
  if (lambda.size() != psi_norms.size())
    throw std::invalid_argument("synthetic_basis: lambda/psi_norms length mismatch");
  if (lambda.empty()) throw std::invalid_argument("synthetic_basis: need N >= 1");
  for (std::size_t n = 0; n < lambda.size(); ++n) {
    if (!(lambda[n] > 0.0))
      throw std::invalid_argument("synthetic_basis: lambda must be positive");
    if (n > 0 && lambda[n] < lambda[n - 1])
      throw std::invalid_argument("synthetic_basis: lambda must be nondecreasing");
  }
  ModalBasis basis;
  basis.boundary = BoundaryGrid::point();
  basis.geometry = "synthetic";
  basis.lambda = lambda;
  basis.trace.resize(lambda.size());
  for (std::size_t n = 0; n < lambda.size(); ++n)
    basis.trace[n] = {psi_norms[n] * std::pow(lambda[n], 1.5)};
  return basis;
}

PsiSequence psi_sequence(const ModalBasis& basis, ControlCase cc) {
  PsiSequence psi;
  psi.profiles.resize(basis.mode_count());
  psi.norms.resize(basis.mode_count());
  for (std::size_t n = 0; n < basis.mode_count(); ++n) {
    const double scale = (cc == ControlCase::A) ? std::pow(basis.lambda[n], 1.5)
                                                : basis.lambda[n];
    std::vector<double> profile(basis.trace[n]);
    double norm2 = 0.0;
    for (std::size_t j = 0; j < profile.size(); ++j) {
      profile[j] /= scale;
      norm2 += basis.boundary.weights[j] * profile[j] * profile[j];
    }
    psi.profiles[n] = std::move(profile);
    psi.norms[n] = std::sqrt(norm2);
  }
  return psi;
}

double norm_Y(const ModalState& state, const ModalBasis& basis) {
  require_state(state, basis, "norm_Y");
  double acc = 0.0;
  for (std::size_t n = 0; n < basis.mode_count(); ++n) {
    const double l = basis.lambda[n];
    const double p = state.position[n], v = state.velocity[n];
    if (state.control_case == ControlCase::A)
      acc += l * l * l * p * p + l * v * v;
    else
      acc += l * l * p * p + v * v;
  }
  return std::sqrt(acc);
}

double norm_X(const ModalState& state, const ModalBasis& basis) {
  require_state(state, basis, "norm_X");
  double acc = 0.0;
  const std::vector<double> xc = x_coordinates(state, basis);
  for (double c : xc) acc += c * c;
  return std::sqrt(acc);
}

std::pair<std::vector<double>, std::vector<double>> coeffs_weighted(
    const ModalState& state, const ModalBasis& basis) {
  require_state(state, basis, "coeffs_weighted");
  std::vector<double> xi(basis.mode_count()), eta(basis.mode_count());
  for (std::size_t n = 0; n < basis.mode_count(); ++n) {
    const double l = basis.lambda[n];
    if (state.control_case == ControlCase::A) {
      xi[n] = std::pow(l, 1.5) * state.position[n];
      eta[n] = std::sqrt(l) * state.velocity[n];
    } else {
      xi[n] = l * state.position[n];
      eta[n] = state.velocity[n];
    }
  }
  return {std::move(xi), std::move(eta)};
}

std::vector<double> x_coordinates(const ModalState& state, const ModalBasis& basis) {
  require_state(state, basis, "x_coordinates");
  const std::size_t N = basis.mode_count();
  std::vector<double> out(2 * N);
  for (std::size_t n = 0; n < N; ++n) {
    const double l = basis.lambda[n];
    if (state.control_case == ControlCase::A) {
      out[n] = state.position[n] / std::sqrt(l);
      out[N + n] = state.velocity[n] / std::pow(l, 1.5);
    } else {
      out[n] = state.position[n];
      out[N + n] = state.velocity[n] / l;
    }
  }
  return out;
}

}  // namespace vplate
