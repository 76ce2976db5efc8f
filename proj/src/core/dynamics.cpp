#include "core/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"

namespace vplate {

namespace {

// Weight of node j in the order-4 endpoint-corrected (Gregory) rule for
// \int_0^{t_m}.  Below 6 nodes the end corrections would overlap, so the
// plain trapezoid rule is used there; both rules integrate constants
// exactly.  The elevated interior order is needed because the history
// integral feeds back into the oscillator with an extra factor lambda^2,
// which resonantly amplifies quadrature error at the highest modes.
inline double history_weight(std::size_t j, std::size_t m, double dt) {
  if (m < 5) return (j == 0 || j == m) ? 0.5 * dt : dt;
  const std::size_t e = std::min(j, m - j);
  if (e == 0) return dt * (3.0 / 8.0);
  if (e == 1) return dt * (7.0 / 6.0);
  if (e == 2) return dt * (23.0 / 24.0);
  return dt;
}

struct LoadWeights {
  double cos_t, sin_t;          // rotation entries cos(theta), sin(theta)
  double phi1, phi2;            // displacement load weights
  double psi1, psi2;            // velocity load weights
};

// Variation-of-constants weights for y'' = -lambda^2 y + G with G linear
// on the step:
//   y+ = c y + (s/l) v + phi1 G_i + phi2 G_{i+1}
//   v+ = -l s y + c v + psi1 G_i + psi2 G_{i+1}
// phi1 = (s - tc)/(t l^2), phi2 = (t - s)/(t l^2),
// psi1 = (ts - 1 + c)/(t l), psi2 = (1 - c)/(t l), t = lambda dt.
// Series below t = 0.05 where the closed forms lose digits to
// cancellation.
LoadWeights load_weights(double lambda, double dt) {
  const double t = lambda * dt;
  LoadWeights w;
  w.cos_t = std::cos(t);
  w.sin_t = std::sin(t);
  if (t < 0.05) {
    const double t2 = t * t;
    const double t4 = t2 * t2;
    w.phi1 = dt * dt * (1.0 / 3.0 - t2 / 30.0 + t4 / 840.0);
    w.phi2 = dt * dt * (1.0 / 6.0 - t2 / 120.0 + t4 / 5040.0);
    w.psi1 = dt * (0.5 - t2 / 8.0 + t4 / 144.0);
    w.psi2 = dt * (0.5 - t2 / 24.0 + t4 / 720.0);
  } else {
    const double l2 = lambda * lambda;
    w.phi1 = (w.sin_t - t * w.cos_t) / (t * l2);
    w.phi2 = (t - w.sin_t) / (t * l2);
    w.psi1 = (t * w.sin_t - 1.0 + w.cos_t) / (t * lambda);
    w.psi2 = (1.0 - w.cos_t) / (t * lambda);
  }
  return w;
}

// Tiny row-major d x d matrices for the augmented memory stepper.
using Mat = std::vector<double>;

Mat mat_identity(std::size_t d) {
  Mat out(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) out[i * d + i] = 1.0;
  return out;
}

Mat mat_mul(const Mat& a, const Mat& b, std::size_t d) {
  Mat out(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const double aik = a[i * d + k];
      for (std::size_t j = 0; j < d; ++j) out[i * d + j] += aik * b[k * d + j];
    }
  return out;
}

double mat_norm_inf(const Mat& a, std::size_t d) {
  double out = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += std::abs(a[i * d + j]);
    out = std::max(out, row);
  }
  return out;
}

/**
 * E = exp(A dt), J0 = int_0^dt e^{A s} ds, J1 = int_0^dt e^{A s} s ds, by
 * Taylor series on a subinterval h = dt/2^s small enough for fast
 * convergence, then interval doubling:
 *   E(2h)  = E(h) E(h)
 *   J0(2h) = J0(h) + E(h) J0(h)
 *   J1(2h) = J1(h) + E(h) (J1(h) + h J0(h))
 * which follows from splitting the integrals at h.
 */
void exp_and_integrals(const Mat& a, std::size_t d, double dt, Mat& E, Mat& J0,
                       Mat& J1) {
  int s = 0;
  double scaled = mat_norm_inf(a, d) * dt;
  while (scaled > 0.25 && s < 60) {
    scaled *= 0.5;
    ++s;
  }
  double h = dt * std::ldexp(1.0, -s);

  Mat term = mat_identity(d);  // A^k h^k / k!
  E = term;
  J0 = term;
  J1 = term;
  for (double& v : J0) v *= h;
  for (double& v : J1) v *= 0.5 * h * h;
  for (std::size_t k = 1; k <= 60; ++k) {
    term = mat_mul(a, term, d);
    const double fk = h / static_cast<double>(k);
    for (double& v : term) v *= fk;
    const double c0 = h / static_cast<double>(k + 1);
    const double c1 = h * h / static_cast<double>(k + 2);
    for (std::size_t i = 0; i < d * d; ++i) {
      E[i] += term[i];
      J0[i] += term[i] * c0;
      J1[i] += term[i] * c1;
    }
    if (mat_norm_inf(term, d) < 1e-18) break;
  }

  for (int step = 0; step < s; ++step) {
    Mat tmp(d * d);
    for (std::size_t i = 0; i < d * d; ++i) tmp[i] = J1[i] + h * J0[i];
    const Mat ej1 = mat_mul(E, tmp, d);
    const Mat ej0 = mat_mul(E, J0, d);
    for (std::size_t i = 0; i < d * d; ++i) {
      J1[i] += ej1[i];
      J0[i] += ej0[i];
    }
    E = mat_mul(E, E, d);
    h *= 2.0;
  }
}

}  // namespace

double stability_ratio(double lambda, const TimeGrid& grid) {
  return lambda * grid.dt;
}

OscillatorSolution integrate_oscillator(const OscillatorProblem& p,
                                        const TimeGrid& grid) {
  if (!std::isfinite(p.lambda) || p.lambda <= 0.0)
    throw std::invalid_argument("integrate_oscillator: lambda must be positive");
  if (!p.memory.empty() && p.memory.size() != grid.size())
    throw std::invalid_argument("integrate_oscillator: memory grid mismatch");
  if (!p.forcing.empty() && p.forcing.size() != grid.size())
    throw std::invalid_argument("integrate_oscillator: forcing grid mismatch");
  const double ratio = stability_ratio(p.lambda, grid);
  if (ratio > 2.0)
    throw StabilityError(
        "integrate_oscillator: lambda*dt = " + std::to_string(ratio) +
            " > 2, time step cannot resolve this mode",
        ratio);

  const std::size_t n = grid.steps;
  const double dt = grid.dt;
  const double lambda = p.lambda;
  const LoadWeights lw = load_weights(lambda, dt);
  const double sol_over_l = lw.sin_t / lambda;
  const double minus_l_sin = -lambda * lw.sin_t;

  bool live_mem = false;
  for (double k : p.memory)
    if (k != 0.0) { live_mem = true; break; }

  auto f_at = [&](std::size_t i) {
    return p.forcing.empty() ? 0.0 : p.forcing[i];
  };

  OscillatorSolution out;
  out.y.assign(n + 1, 0.0);
  out.v.assign(n + 1, 0.0);
  out.y[0] = p.y0;
  out.v[0] = p.v0;

  // Load G_i = c0 y_i + (K*y)(t_i) + f_i; G[0] has an empty history.
  Samples G(n + 1, 0.0);
  G[0] = p.zero_order * p.y0 + f_at(0);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = i + 1;
    const double drift = lw.cos_t * out.y[i] + sol_over_l * out.v[i];

    // Predict y_m with a constant-load step, evaluate the load there,
    // then correct.  The history sum is recomputed in full because the
    // endpoint-corrected weights depend on the interval length.
    const double ypred = drift + (lw.phi1 + lw.phi2) * G[i];
    double mem = 0.0;
    if (live_mem) {
      const double* k = p.memory.data();
      const double* y = out.y.data();
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        acc += history_weight(j, m, dt) * k[m - j] * y[j];
      mem = acc + history_weight(m, m, dt) * k[0] * ypred;
    }
    const double gstar = p.zero_order * ypred + mem + f_at(m);

    out.y[m] = drift + lw.phi1 * G[i] + lw.phi2 * gstar;
    out.v[m] = minus_l_sin * out.y[i] + lw.cos_t * out.v[i] +
               lw.psi1 * G[i] + lw.psi2 * gstar;

    if (live_mem) mem += history_weight(m, m, dt) * p.memory[0] * (out.y[m] - ypred);
    G[m] = p.zero_order * out.y[m] + mem + f_at(m);
  }
  return out;
}

ZnSolution solve_zn(const MacCamyData& mc, double lambda_n, const TimeGrid& grid) {
  if (!mc.damping_removed)
    throw std::invalid_argument(
        "solve_zn: data still carries a first-order term (apply the damping "
        "shift first)");
  if (!mc.K.empty() && mc.K.size() != grid.size())
    throw std::invalid_argument("solve_zn: kernel grid mismatch");

  OscillatorProblem p;
  p.lambda = lambda_n;
  p.zero_order = mc.b;
  p.memory = mc.K;
  p.y0 = 1.0;
  p.v0 = 0.0;
  OscillatorSolution sol = integrate_oscillator(p, grid);

  ZnSolution z;
  z.lambda = lambda_n;
  z.big_z = cumulative(grid, sol.y);
  // Endpoint (Euler-Maclaurin) correction: trapezoid = integral +
  // (dt^2/12)(z'(t) - z'(0)) + O(dt^4).  Z feeds the lambda_n-scaled
  // moment rows, so the dt^2 term is not ignorable at the top modes.
  const double c = grid.dt * grid.dt / 12.0;
  for (std::size_t i = 0; i < z.big_z.size(); ++i)
    z.big_z[i] -= c * (sol.v[i] - sol.v[0]);
  z.z = std::move(sol.y);
  z.z_prime = std::move(sol.v);
  return z;
}

std::vector<ZnSolution> solve_zn_modes(const MacCamyData& mc,
                                       const ModalBasis& basis,
                                       const TimeGrid& grid) {
  std::vector<ZnSolution> out;
  out.reserve(basis.mode_count());
  for (std::size_t n = 0; n < basis.mode_count(); ++n) {
    out.push_back(solve_zn(mc, basis.lambda[n], grid));
    out.back().mode = n;
  }
  return out;
}

VolterraResiduals zn_volterra_residual(const ZnSolution& z, const MacCamyData& mc,
                                       const TimeGrid& grid) {
  const std::size_t nn = grid.size();
  if (z.z.size() != nn || z.big_z.size() != nn)
    throw std::invalid_argument("zn_volterra_residual: solution grid mismatch");
  if (!mc.K.empty() && mc.K.size() != nn)
    throw std::invalid_argument("zn_volterra_residual: kernel grid mismatch");
  const double l = z.lambda;

  Samples sinl(nn), omc(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    const double t = grid.node(i);
    sinl[i] = std::sin(l * t);
    omc[i] = 1.0 - std::cos(l * t);
  }

  Samples kz;
  if (!mc.K.empty()) kz = conv(grid, mc.K, z.z);

  const Samples sz = conv(grid, sinl, z.z);
  const Samples oz = conv(grid, omc, z.z);
  Samples skz, okz;
  if (!kz.empty()) {
    skz = conv(grid, sinl, kz);
    okz = conv(grid, omc, kz);
  }

  VolterraResiduals res{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < nn; ++i) {
    const double cosl = 1.0 - omc[i];
    double rhs_z = cosl + (mc.b / l) * sz[i];
    double rhs_int = sinl[i] / l + (mc.b / (l * l)) * oz[i];
    if (!kz.empty()) {
      rhs_z += skz[i] / l;
      rhs_int += okz[i] / (l * l);
    }
    res.z_line = std::max(res.z_line, std::abs(z.z[i] - rhs_z));
    res.zint_corrected = std::max(res.zint_corrected, std::abs(z.big_z[i] - rhs_int));
    res.zint_printed = std::max(res.zint_printed, std::abs(z.big_z[i] + rhs_int));
  }
  return res;
}

std::pair<double, double> elastic_modal_response(double lambda_n,
                                                 const std::vector<double>& trace_profile,
                                                 const SigmaField& g,
                                                 const TimeGrid& grid,
                                                 const BoundaryGrid& bg) {
  if (g.time_count() != grid.size())
    throw std::invalid_argument("elastic_modal_response: field/time grid mismatch");
  if (g.boundary_count() != bg.size() || trace_profile.size() != bg.size())
    throw std::invalid_argument("elastic_modal_response: boundary grid mismatch");
  if (!(lambda_n > 0.0))
    throw std::invalid_argument("elastic_modal_response: lambda must be positive");

  const std::size_t nn = grid.size();
  Samples u(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    double over_gamma = 0.0;
    for (std::size_t b = 0; b < bg.size(); ++b)
      over_gamma += bg.weights[b] * trace_profile[b] * g.at(i, b);
    u[i] = over_gamma;
  }
  const auto [ps, pc] = pair_linear_rotor(grid, u, lambda_n);
  return {-ps / lambda_n, -pc};
}

ModalTrajectory forward_simulate(const ModalBasis& basis, const MemoryKernel& M,
                                 ControlCase cc, const SigmaField& g,
                                 const ModalState& initial, const TimeGrid& grid,
                                 const BoundaryGrid& bg) {
  (void)cc;  // the basis trace already realizes the case's boundary channel
  const std::size_t nmodes = basis.mode_count();
  const std::size_t nn = grid.size();
  if (g.time_count() != nn)
    throw std::invalid_argument("forward_simulate: field/time grid mismatch");
  if (g.boundary_count() != bg.size())
    throw std::invalid_argument("forward_simulate: field/boundary grid mismatch");
  if (initial.position.size() != nmodes || initial.velocity.size() != nmodes)
    throw std::invalid_argument("forward_simulate: initial state size mismatch");
  for (const auto& row : basis.trace)
    if (row.size() != bg.size())
      throw std::invalid_argument("forward_simulate: trace/boundary grid mismatch");
  if (nmodes > 0) {
    const double worst = stability_ratio(basis.lambda.back(), grid);
    if (worst > 2.0)
      throw StabilityError(
          "forward_simulate: lambda_max*dt = " + std::to_string(worst) +
              " > 2, refine the time grid",
          worst);
  }

  const KernelSamples ks = eval_kernel(M, grid);
  const bool visco = !M.elastic();
  const std::size_t nk = M.terms.size();
  // Each Prony term carries a local memory state
  //   I_j(t) = int_0^t exp(-delta_j (t-s)) w(s) ds,   I_j' = -delta_j I_j + w,
  // so the modal equation closes into the constant-coefficient system
  //   y1' = lambda y2
  //   y2' = -lambda y1 - lambda sum_j gamma_j z_j + F(t)
  //   z_j' = -delta_j z_j + y1
  // in the balanced variables y1 = lambda w, y2 = w', z_j = lambda I_j.
  // The homogeneous part is advanced by the exact exponential and the load
  // by variation of constants against its linear-in-step interpolant, the
  // same load treatment the scalar trigonometric stepper uses.
  const std::size_t d = 2 + nk;

  ModalTrajectory traj;
  traj.w.resize(nmodes);
  traj.wp.resize(nmodes);
  for (std::size_t n = 0; n < nmodes; ++n) {
    const double lambda = basis.lambda[n];
    Samples bn(nn, 0.0);
    for (std::size_t i = 0; i < nn; ++i) {
      double acc = 0.0;
      for (std::size_t b = 0; b < bg.size(); ++b)
        acc += bg.weights[b] * basis.trace[n][b] * g.at(i, b);
      bn[i] = acc;
    }

    Samples forcing(nn, 0.0);
    if (visco) {
      const Samples mb = conv(grid, ks.m, bn);
      for (std::size_t i = 0; i < nn; ++i) forcing[i] = -bn[i] - mb[i];
    } else {
      for (std::size_t i = 0; i < nn; ++i) forcing[i] = -bn[i];
    }

    Mat A(d * d, 0.0);
    A[0 * d + 1] = lambda;
    A[1 * d + 0] = -lambda;
    for (std::size_t j = 0; j < nk; ++j) {
      A[1 * d + (2 + j)] = -lambda * M.terms[j].gamma;
      A[(2 + j) * d + 0] = 1.0;
      A[(2 + j) * d + (2 + j)] = -M.terms[j].delta;
    }
    Mat E, J0, J1;
    exp_and_integrals(A, d, grid.dt, E, J0, J1);
    // The load enters only through component 1, so the two step weights are
    // the corresponding columns of J1/dt and J0 - J1/dt.
    std::vector<double> phi_old(d), phi_new(d);
    for (std::size_t r = 0; r < d; ++r) {
      phi_old[r] = J1[r * d + 1] / grid.dt;
      phi_new[r] = J0[r * d + 1] - phi_old[r];
    }

    std::vector<double> x(d, 0.0), xn(d);
    x[0] = lambda * initial.position[n];
    x[1] = initial.velocity[n];
    Samples w(nn), wp(nn);
    w[0] = initial.position[n];
    wp[0] = initial.velocity[n];
    for (std::size_t i = 0; i + 1 < nn; ++i) {
      for (std::size_t r = 0; r < d; ++r) {
        double acc = phi_old[r] * forcing[i] + phi_new[r] * forcing[i + 1];
        for (std::size_t c = 0; c < d; ++c) acc += E[r * d + c] * x[c];
        xn[r] = acc;
      }
      x.swap(xn);
      w[i + 1] = x[0] / lambda;
      wp[i + 1] = x[1];
    }
    traj.w[n] = std::move(w);
    traj.wp[n] = std::move(wp);
  }
  return traj;
}

std::pair<Samples, Samples> maccamy_modal_solution(double lambda_n,
                                                   const MacCamyData& mc,
                                                   const ResolventKernel& R,
                                                   double w0_coeff, double w1_coeff,
                                                   const TimeGrid& grid) {
  const std::size_t nn = grid.size();
  const double alpha = 0.5 * mc.a;

  const MacCamyData shifted = shifted_form(mc, grid);
  Samples f1 = forcing_f1(mc, R, w0_coeff, w1_coeff, Samples{}, grid);
  for (std::size_t i = 0; i < nn; ++i)
    f1[i] *= std::exp(-alpha * grid.node(i));

  OscillatorProblem p;
  p.lambda = lambda_n;
  p.zero_order = shifted.b;
  p.memory = shifted.K;
  p.forcing = std::move(f1);
  p.y0 = w0_coeff;
  p.v0 = w1_coeff - alpha * w0_coeff;
  OscillatorSolution v = integrate_oscillator(p, grid);

  Samples w(nn), wp(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    const double grow = std::exp(alpha * grid.node(i));
    w[i] = grow * v.y[i];
    wp[i] = grow * (v.v[i] + alpha * v.y[i]);
  }
  return {std::move(w), std::move(wp)};
}

SigmaField adjoint_trace(const ModalBasis& basis, ControlCase cc,
                         const std::vector<double>& xi, const std::vector<double>& eta,
                         const std::vector<ZnSolution>& zset, const BoundaryGrid& bg,
                         const TimeGrid& grid) {
  (void)cc;
  const std::size_t nmodes = basis.mode_count();
  const std::size_t nn = grid.size();
  if (xi.size() != nmodes || eta.size() != nmodes || zset.size() != nmodes)
    throw std::invalid_argument("adjoint_trace: coefficient/mode count mismatch");
  for (const auto& z : zset)
    if (z.z.size() != nn || z.big_z.size() != nn)
      throw std::invalid_argument("adjoint_trace: z solution grid mismatch");
  for (const auto& row : basis.trace)
    if (row.size() != bg.size())
      throw std::invalid_argument("adjoint_trace: trace/boundary grid mismatch");

  SigmaField out(nn, bg.size());
  for (std::size_t n = 0; n < nmodes; ++n) {
    if (xi[n] == 0.0 && eta[n] == 0.0) continue;
    for (std::size_t i = 0; i < nn; ++i) {
      const double amp = xi[n] * zset[n].z[i] + eta[n] * zset[n].big_z[i];
      for (std::size_t b = 0; b < bg.size(); ++b)
        out.at(i, b) += basis.trace[n][b] * amp;
    }
  }
  return out;
}

}  // namespace vplate
