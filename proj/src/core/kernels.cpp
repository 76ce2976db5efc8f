#include "core/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace vplate {

double MemoryKernel::value(double t) const {
  double acc = 0.0;
  for (const auto& p : terms) acc += p.gamma * std::exp(-p.delta * t);
  return acc;
}

double MemoryKernel::deriv1(double t) const {
  double acc = 0.0;
  for (const auto& p : terms) acc -= p.gamma * p.delta * std::exp(-p.delta * t);
  return acc;
}

double MemoryKernel::deriv2(double t) const {
  double acc = 0.0;
  for (const auto& p : terms)
    acc += p.gamma * p.delta * p.delta * std::exp(-p.delta * t);
  return acc;
}

MemoryKernel make_kernel(std::vector<PronyTerm> terms) {
  for (const auto& p : terms) {
    if (!std::isfinite(p.gamma) || !std::isfinite(p.delta))
      throw std::invalid_argument("kernel: non-finite Prony term");
    if (p.delta < 0.0)
      throw std::invalid_argument("kernel: decay rate delta must be >= 0");
  }
  return MemoryKernel{std::move(terms)};
}

KernelSamples eval_kernel(const MemoryKernel& M, const TimeGrid& grid) {
  KernelSamples out;
  out.m.resize(grid.size());
  out.m1.resize(grid.size());
  out.m2.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.node(i);
    out.m[i] = M.value(t);
    out.m1[i] = M.deriv1(t);
    out.m2[i] = M.deriv2(t);
  }
  return out;
}

ResolventKernel resolvent(const MemoryKernel& M, const TimeGrid& grid) {
  const KernelSamples ks = eval_kernel(M, grid);
  const std::size_t n = grid.steps;
  const double dt = grid.dt;

  ResolventKernel out;
  out.r.assign(n + 1, 0.0);
  out.r[0] = ks.m[0];
  // Forward substitution: the trapezoid discretization of R + M*R = M is
  // lower triangular with diagonal 1 + dt/2 M(0).
  const double diag = 1.0 + 0.5 * dt * ks.m[0];
  for (std::size_t i = 1; i <= n; ++i) {
    double hist = 0.5 * ks.m[i] * out.r[0];
    for (std::size_t j = 1; j < i; ++j) hist += ks.m[i - j] * out.r[j];
    out.r[i] = (ks.m[i] - dt * hist) / diag;
  }

  const Samples m1r = conv(grid, ks.m1, out.r);
  out.r1.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    out.r1[i] = ks.m1[i] - ks.m[0] * out.r[i] - m1r[i];

  const Samples m2r = conv(grid, ks.m2, out.r);
  out.r2.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    out.r2[i] = ks.m2[i] - ks.m[0] * out.r1[i] - ks.m1[0] * out.r[i] - m2r[i];

  return out;
}

MacCamyData maccamy_data(const ResolventKernel& R) {
  if (R.r.empty() || R.r1.size() != R.r.size() || R.r2.size() != R.r.size())
    throw std::invalid_argument("maccamy_data: inconsistent resolvent samples");
  MacCamyData d;
  d.a = R.r[0];
  d.b = R.r1[0];
  d.K = R.r2;
  d.damping_removed = (d.a == 0.0);
  return d;
}

std::pair<Samples, Samples> damping_shift(MacCamyData& data, const TimeGrid& grid) {
  Samples mult(grid.size()), inv(grid.size());
  const double alpha = 0.5 * data.a;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    mult[i] = std::exp(-alpha * grid.node(i));
    inv[i] = 1.0 / mult[i];
  }
  data.damping_removed = true;
  return {std::move(mult), std::move(inv)};
}

MacCamyData shifted_form(const MacCamyData& data, const TimeGrid& grid) {
  if (data.K.size() != grid.size())
    throw std::invalid_argument("shifted_form: K not on the grid");
  MacCamyData out;
  out.a = data.a;
  out.b = data.b + 0.25 * data.a * data.a;
  out.K.resize(grid.size());
  const double alpha = 0.5 * data.a;
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.K[i] = std::exp(-alpha * grid.node(i)) * data.K[i];
  out.damping_removed = true;
  return out;
}

Samples forcing_f1(const MacCamyData& data, const ResolventKernel& R,
                   double w0_coeff, double w1_coeff, const Samples& F,
                   const TimeGrid& grid) {
  if (R.r.size() != grid.size())
    throw std::invalid_argument("forcing_f1: resolvent not on the grid");
  (void)data;
  Samples out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = -R.r[i] * w1_coeff - R.r1[i] * w0_coeff;
  if (!F.empty()) {
    if (F.size() != grid.size())
      throw std::invalid_argument("forcing_f1: F not on the grid");
    const Samples rf = conv(grid, R.r, F);
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] += F[i] - rf[i];
  }
  return out;
}

}  // namespace vplate
