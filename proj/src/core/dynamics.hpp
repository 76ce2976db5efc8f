#pragma once

#include <utility>
#include <vector>

#include "core/grid.hpp"
#include "core/kernels.hpp"
#include "core/spectral.hpp"

namespace vplate {

/**
 * One modal integro-differential oscillator
 *   y'' = -lambda^2 y + c0 y + (K*y)(t) + f(t),  y(0)=y0, y'(0)=v0.
 *
 * Empty memory/forcing vectors stand for zero.
 */
struct OscillatorProblem {
  double lambda = 0.0;
  double zero_order = 0.0;  // c0
  Samples memory;           // K on the grid
  Samples forcing;          // f on the grid
  double y0 = 0.0;
  double v0 = 0.0;
};

struct OscillatorSolution {
  Samples y;
  Samples v;  // y'
};

/**
 * One-step trigonometric (variation-of-constants) integrator: the
 * oscillator part is propagated by exact rotation, the load G = c0 y +
 * K*y + f enters through the filtered weights of a linear-in-time
 * interpolant (predictor-corrector), and the history integral uses
 * endpoint-corrected (Gregory) weights.  Exact for G == 0, second order
 * otherwise, with no phase error at any lambda*dt.
 *
 * Refuses lambda*dt > 2: fewer than ~3 samples per period cannot resolve
 * the memory quadrature regardless of the scheme.
 */
OscillatorSolution integrate_oscillator(const OscillatorProblem& p,
                                        const TimeGrid& grid);

/// lambda*dt, the resolution ratio the stability guard inspects.
double stability_ratio(double lambda, const TimeGrid& grid);

/**
 * Memory-perturbed cosine z_n: z'' = -lambda^2 z + b z + K*z with
 * z(0)=1, z'(0)=0, plus the running integral Z_n(t) = int_0^t z_n.
 * Requires shifted data (a = 0 assumed).
 */
struct ZnSolution {
  std::size_t mode = 0;
  double lambda = 0.0;
  Samples z;
  Samples z_prime;
  Samples big_z;
};

ZnSolution solve_zn(const MacCamyData& mc, double lambda_n, const TimeGrid& grid);

/// solve_zn for every mode of a basis, indices filled in.
std::vector<ZnSolution> solve_zn_modes(const MacCamyData& mc,
                                       const ModalBasis& basis,
                                       const TimeGrid& grid);

/**
 * Residuals of the Volterra representation of z_n:
 *   z(t) = cos(lambda t) + (b/lambda) int_0^t sin(lambda(t-s)) z(s) ds
 *        + (1/lambda) int_0^t [int_0^{t-s} sin(lambda(t-s-r)) K(r) dr] z(s) ds
 * and of the companion identity for Z(t) = int_0^t z.  The companion is
 * evaluated in two sign conventions: zint_corrected uses
 *   Z(t) = +sin(lambda t)/lambda + (b/lambda^2) int [1-cos(lambda(t-s))] z
 *        + (1/lambda^2) int [1-cos(lambda(t-s))] (K*z)(s) ds
 * (all three terms positive, as the memoryless limit and the Duhamel
 * integral force); zint_printed flips all three signs and is kept as a
 * documented discrepancy report.
 */
struct VolterraResiduals {
  double z_line;
  double zint_corrected;
  double zint_printed;
};

VolterraResiduals zn_volterra_residual(const ZnSolution& z, const MacCamyData& mc,
                                       const TimeGrid& grid);

/**
 * Final value and velocity of one elastic mode driven by boundary data g:
 *   u_n(T)  = -int_0^T int_Gamma g(x,T-s) (sin(lambda s)/lambda) trace_n dGamma ds
 *   u_n'(T) = -int_0^T int_Gamma g(x,T-s) (cos(lambda s))        trace_n dGamma ds
 * The time integral pairs the linear reading of the g samples against the
 * exact trig kernels, matching what the steppers realize for sampled loads.
 */
std::pair<double, double> elastic_modal_response(double lambda_n,
                                                 const std::vector<double>& trace_profile,
                                                 const SigmaField& g,
                                                 const TimeGrid& grid,
                                                 const BoundaryGrid& bg);

struct ModalTrajectory {
  std::vector<Samples> w;   // [mode][time]
  std::vector<Samples> wp;  // [mode][time]
};

/**
 * Raw viscoelastic evolution, one uncoupled oscillator per mode:
 *   w_n'' = -lambda_n^2 w_n - B_n(t) - int_0^t M(t-s)[lambda_n^2 w_n(s) + B_n(s)] ds
 * with B_n(t) = int_Gamma trace_n g(.,t) dGamma.  The Prony memory is
 * realized as auxiliary first-order states, making each mode a small
 * constant-coefficient linear system that is advanced by its exact matrix
 * exponential; the history quadrature such a convolution would otherwise
 * need never appears.  No resolvent and no shared code with the kernel
 * transform: this is the independent oracle the transformed machinery is
 * checked against.
 */
ModalTrajectory forward_simulate(const ModalBasis& basis, const MemoryKernel& M,
                                 ControlCase cc, const SigmaField& g,
                                 const ModalState& initial, const TimeGrid& grid,
                                 const BoundaryGrid& bg);

/**
 * One mode of the same solution assembled through the transformed
 * equation: resolvent data (a,b,K), forcing F1, shift to v = e^{-(a/2)t}w,
 * integrate with a = 0, unshift.  Returns (w, w') samples.
 */
std::pair<Samples, Samples> maccamy_modal_solution(double lambda_n,
                                                   const MacCamyData& mc,
                                                   const ResolventKernel& R,
                                                   double w0_coeff, double w1_coeff,
                                                   const TimeGrid& grid);

/**
 * Boundary trace of the adjoint solution with data psi(0)=xi, psi'(0)=eta:
 *   Tpsi(x,t) = sum_n trace_n(x) [xi_n z_n(t) + eta_n Z_n(t)].
 */
SigmaField adjoint_trace(const ModalBasis& basis, ControlCase cc,
                         const std::vector<double>& xi, const std::vector<double>& eta,
                         const std::vector<ZnSolution>& zset, const BoundaryGrid& bg,
                         const TimeGrid& grid);

}  // namespace vplate
