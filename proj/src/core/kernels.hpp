#pragma once

#include <utility>
#include <vector>

#include "core/grid.hpp"

namespace vplate {

struct PronyTerm {
  double gamma;  // amplitude, 1/s^2
  double delta;  // decay rate, 1/s
};

/**
 * Relaxation kernel M(t) = sum_j gamma_j exp(-delta_j t).
 *
 * The empty sum is the elastic limit M == 0.  Prony sums are C^infinity,
 * so value and derivatives are evaluated in closed form.
 */
struct MemoryKernel {
  std::vector<PronyTerm> terms;

  bool elastic() const { return terms.empty(); }
  double value(double t) const;
  double deriv1(double t) const;
  double deriv2(double t) const;
};

/// Validates decay rates (delta >= 0, everything finite).  Amplitudes of
/// either sign are accepted; physical kernels have gamma > 0.
MemoryKernel make_kernel(std::vector<PronyTerm> terms);

struct KernelSamples {
  Samples m, m1, m2;  // M, M', M'' on the grid
};

KernelSamples eval_kernel(const MemoryKernel& M, const TimeGrid& grid);

/**
 * Resolvent kernel of M: the solution of R + M*R = M, with derivative
 * samples obtained from the differentiated identities
 *   R'  = M'  - M(0) R  - M'*R
 *   R'' = M'' - M(0) R' - M'(0) R - M''*R
 * (never from finite differences).
 */
struct ResolventKernel {
  Samples r, r1, r2;
};

ResolventKernel resolvent(const MemoryKernel& M, const TimeGrid& grid);

/**
 * Data of the memory-in-zeroth-order form
 *   w'' + A w = a w' + b w + K*w + F1
 * obtained by solving the constitutive Volterra equation for A w.
 *
 * damping_removed records that the e^{-(a/2)t} substitution has been
 * applied, i.e. b and K already describe the shifted variable and modal
 * solvers may treat the first-order term as absent.  a is retained for
 * unshift bookkeeping.
 */
struct MacCamyData {
  double a = 0.0;  // R(0)
  double b = 0.0;  // R'(0)
  Samples K;       // R'' on the grid
  bool damping_removed = false;
};

MacCamyData maccamy_data(const ResolventKernel& R);

/**
 * Damping-shift multipliers e^{-(a/2) t_i} and their reciprocals.
 * Marks data as shifted; callers rescale controls/forcings by the
 * multiplier and adjust initial velocity by -(a/2) w0.
 */
std::pair<Samples, Samples> damping_shift(MacCamyData& data, const TimeGrid& grid);

/**
 * Coefficients seen by the shifted variable v = e^{-(a/2)t} w.  Removing
 * the first-order term renormalizes the zeroth-order coefficient and
 * attenuates the kernel:
 *   b -> b + a^2/4,   K(t) -> e^{-(a/2)t} K(t).
 */
MacCamyData shifted_form(const MacCamyData& data, const TimeGrid& grid);

/**
 * Modal forcing F1(t) = -R(t) w1 - R'(t) w0 + F(t) - (R*F)(t) for one
 * modal coefficient.  An empty F stands for zero forcing.
 */
Samples forcing_f1(const MacCamyData& data, const ResolventKernel& R,
                   double w0_coeff, double w1_coeff, const Samples& F,
                   const TimeGrid& grid);

}  // namespace vplate
