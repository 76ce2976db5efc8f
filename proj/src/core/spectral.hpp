#pragma once

#include <string>
#include <vector>

#include "core/grid.hpp"

namespace vplate {

/// Which boundary channel carries the control: (A) position trace,
/// (B) normal-derivative trace.
enum class ControlCase { A, B };

/// Space a coefficient pair is measured in: Y (regular data) or its
/// control-theoretic dual X (reachable targets).
enum class StateSpace { Y, X };

/**
 * Eigenstructure consumed by every downstream algorithm: frequencies
 * lambda_n (the operator eigenvalue is lambda_n^2) in nondecreasing
 * order, and the boundary trace profile of each eigenfunction sampled
 * on a BoundaryGrid.
 */
struct ModalBasis {
  std::vector<double> lambda;
  std::vector<std::vector<double>> trace;  // [mode][boundary node]
  BoundaryGrid boundary;
  std::string geometry;

  std::size_t mode_count() const { return lambda.size(); }
};

/// Hinged beam on (0,1), control boundary {x=0}: lambda_n = n^2 pi^2,
/// trace value -sqrt(2) (n pi)^2 at the single boundary node.
ModalBasis beam_hinged_basis(std::size_t n_modes);
ModalBasis beam_hinged_basis(std::size_t n_modes, const BoundaryGrid& bg);

/// Hinged rectangle (0,a)x(0,b), control on the edge y=0; first n_modes
/// modes in nondecreasing lambda order, ties broken by (m,k) lexicographic.
ModalBasis rectangle_hinged_basis(double a, double b, std::size_t n_modes,
                                  const BoundaryGrid& bg);

/// Prescribed (lambda_n, |Psi_n|) on an abstract single-point boundary;
/// traces are stored in the case-A convention trace_n = psi_norm_n *
/// lambda_n^{3/2}.  Zero psi entries are legal (modes invisible to the
/// control) and show up as degenerate moment rows downstream.
ModalBasis synthetic_basis(const std::vector<double>& lambda,
                           const std::vector<double>& psi_norms);

/// Normalized trace sequence Psi_n = trace_n / lambda_n^{3/2} (case A)
/// or trace_n / lambda_n (case B).
struct PsiSequence {
  std::vector<std::vector<double>> profiles;  // [mode][boundary node]
  std::vector<double> norms;                  // L^2(Gamma) norms
};

PsiSequence psi_sequence(const ModalBasis& basis, ControlCase cc);

/// Coefficient pair ({w_n}, {w_n'}) against the eigenbasis.
struct ModalState {
  ControlCase control_case = ControlCase::B;
  StateSpace space = StateSpace::Y;
  std::vector<double> position;
  std::vector<double> velocity;
};

double norm_Y(const ModalState& state, const ModalBasis& basis);
double norm_X(const ModalState& state, const ModalBasis& basis);

/// Weighted annihilator coordinates: case A (lambda^{3/2} xi, lambda^{1/2} eta),
/// case B (lambda xi, eta).
std::pair<std::vector<double>, std::vector<double>> coeffs_weighted(
    const ModalState& state, const ModalBasis& basis);

/**
 * Coordinates of a state in the weighted l^2 realization of X, ordered
 * [position block, velocity block]; the Euclidean norm of this vector is
 * norm_X.  Case A weights (lambda^{-1/2}, lambda^{-3/2}), case B (1,
 * lambda^{-1}).  These are also the coordinates the moment map hits.
 */
std::vector<double> x_coordinates(const ModalState& state, const ModalBasis& basis);

}  // namespace vplate
