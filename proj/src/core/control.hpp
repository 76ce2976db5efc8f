#pragma once

#include <cstdint>
#include <vector>

#include "core/dynamics.hpp"
#include "core/grid.hpp"
#include "core/kernels.hpp"
#include "core/spectral.hpp"

namespace vplate {

enum class Provenance { elastic, visco };

/**
 * The truncated moment problem: 2N boundary functions f_k on the
 * cylinder, stored already time-reversed (argument T - sigma baked in),
 * ordered [sin-type / Z-type, modes 0..N-1 | cos-type / z-type, modes
 * 0..N-1], plus their Gram matrix under the L^2(Sigma) pairing.
 *
 * Modes whose Psi norm vanishes produce identically zero rows; their
 * indices are listed in degenerate_modes.
 */
struct MomentSystem {
  ControlCase control_case = ControlCase::B;
  Provenance provenance = Provenance::elastic;
  std::vector<double> lambda;
  std::vector<std::vector<double>> profiles;  // Psi_n on the boundary grid
  std::vector<SigmaField> functions;
  // Time derivatives of the visco rows (z' data), for Hermite
  // reconstruction of the moment kernels; empty for elastic systems, whose
  // kernels are paired in trig closed form.
  std::vector<SigmaField> dfunctions;
  std::vector<double> gram;  // row-major dim() x dim(), symmetric trapezoid
  // realize[n*dim()+k] = moment n realized by function k when the control
  // samples are read piecewise-linearly, the semantics the simulators give
  // a sampled load.  Synthesis solves against this; gram keeps the
  // spectral diagnostics.  Near-symmetric, exactly symmetric it is not.
  std::vector<double> realize;
  std::vector<std::size_t> degenerate_modes;

  std::size_t pair_count() const { return lambda.size(); }
  std::size_t dim() const { return 2 * lambda.size(); }
  double gram_at(std::size_t k, std::size_t l) const { return gram[k * dim() + l]; }
};

struct ControlFunction {
  SigmaField g;
  double norm = 0.0;  // L^2(Sigma)
};

struct GramSpectrum {
  double min_eig = 0.0;
  double max_eig = 0.0;
  double condition() const;
};

struct AnnihilatorReport {
  double min_eig = 0.0;
  double threshold = 0.0;
  bool found = false;
  ModalState witness;  // meaningful only when found
};

struct ReachReport {
  ModalState target;
  ModalState achieved;
  double residual_abs = 0.0;
  double residual_rel = 0.0;
  double control_norm = 0.0;
  double gram_condition = 0.0;
};

/**
 * Elastic moment functions f_n^{sin}(x,sigma) = Psi_n(x) sin(lambda_n
 * (T-sigma)), f_n^{cos}(x,sigma) = Psi_n(x) cos(lambda_n (T-sigma)),
 * and their Gram matrix.
 */
MomentSystem elastic_moment_functions(const ModalBasis& basis, ControlCase cc,
                                      const PsiSequence& psi, const TimeGrid& grid,
                                      const BoundaryGrid& bg);

/**
 * Viscoelastic analogue built from the memory cosines: f_n^{Z} = Psi_n
 * lambda_n Z_n(T-sigma), f_n^{z} = Psi_n z_n(T-sigma).  In the elastic
 * limit these reduce to the functions above.
 */
MomentSystem visco_moment_functions(const ModalBasis& basis, ControlCase cc,
                                    const PsiSequence& psi,
                                    const std::vector<ZnSolution>& zset,
                                    const TimeGrid& grid, const BoundaryGrid& bg);

/**
 * Right-hand side of the moment equations <g, f_k> = m_k equivalent to
 * hitting `target` at time T: m = -x_coordinates(target).  The overall
 * minus sign comes from the final-state displays u_n(T) = -int ...; the
 * same vector serves both provenances.
 */
std::vector<double> target_moments(const ModalBasis& basis, ControlCase cc,
                                   const ModalState& target);

GramSpectrum gram_spectrum(const MomentSystem& ms);

/// All Gram eigenvalues, ascending.
std::vector<double> gram_eigenvalues(const MomentSystem& ms);

/// Scale-free degeneracy threshold 1e-10 * trace(G) / dim.
double gram_threshold(const MomentSystem& ms);

/**
 * Minimum-norm control g = sum c_k f_k with G c = m, solved by a
 * symmetric factorization after an explicit eigenvalue gate.  No
 * regularization: a Gram matrix below the degeneracy threshold throws
 * GramDegenerateError carrying the minimum eigenvalue.
 */
ControlFunction synthesize_control(const MomentSystem& ms, const std::vector<double>& m);

/// Final state of the elastic system under control g (zero initial data),
/// one quadrature per mode.
ModalState reach_elastic(const ModalBasis& basis, ControlCase cc, const SigmaField& g,
                         const TimeGrid& grid, const BoundaryGrid& bg);

/// Final state of the viscoelastic system under control g (zero initial
/// data), via the raw-equation simulator.
ModalState reach_visco(const ModalBasis& basis, const MemoryKernel& M, ControlCase cc,
                       const SigmaField& g, const TimeGrid& grid, const BoundaryGrid& bg);

/// Final state predicted by pairing g against the moment functions and
/// inverting the coordinate weighting; the simulator cross-checks this.
ModalState reach_by_moments(const MomentSystem& ms, const SigmaField& g,
                            const ModalBasis& basis, const TimeGrid& grid,
                            const BoundaryGrid& bg);

/**
 * Singular values of the discretized compact perturbation Lambda^V -
 * Lambda.  Probes are the 2N elastic moment functions plus seeded random
 * fields up to probe_count, all unit-normalized; both reachability maps
 * are evaluated with the same time stepper so the elastic kernel gives
 * the exact zero matrix.
 */
std::vector<double> compactness_diagnostic(const ModalBasis& basis, const MemoryKernel& M,
                                           ControlCase cc, const TimeGrid& grid,
                                           const BoundaryGrid& bg, std::size_t probe_count,
                                           std::uint64_t seed);

/**
 * Minimum Gram eigenvalue of a visco moment system; below threshold the
 * corresponding null vector is mapped back through the weighted
 * coordinates to a would-be annihilator state (xi, eta).
 */
AnnihilatorReport annihilator_diagnostic(const MomentSystem& ms);

/// X-norm residual bookkeeping for a synthesis run.
ReachReport assemble_report(const ModalBasis& basis, const ModalState& target,
                            const ModalState& achieved, double control_norm,
                            double gram_condition);

}  // namespace vplate
