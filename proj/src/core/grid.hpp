#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace vplate {

/// Scalar samples on the nodes of a TimeGrid (index i <-> t_i = i*dt).
using Samples = std::vector<double>;

/**
 * Uniform time grid on [0, horizon] with steps subintervals.
 *
 * Nodes are t_i = i*dt for i = 0..steps, dt = horizon/steps.  A Samples
 * vector that lives on this grid has steps+1 entries.
 */
struct TimeGrid {
  double horizon;
  std::size_t steps;
  double dt;

  TimeGrid(double horizon_, std::size_t steps_);

  double node(std::size_t i) const { return static_cast<double>(i) * dt; }
  std::size_t size() const { return steps + 1; }
};

/**
 * Quadrature nodes on the control boundary.
 *
 * Weights are strictly positive and sum to the measure of the boundary.
 * A single node with weight 1 stands in for a point (or abstract) boundary.
 */
struct BoundaryGrid {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }

  /// One abstract node of measure 1.
  static BoundaryGrid point();
  /// Uniform nodes on [0, length] with trapezoid weights (node_count >= 2).
  static BoundaryGrid edge(double length, std::size_t node_count);

  double measure() const;
};

/**
 * Real field on the space-time cylinder: one value per (time node,
 * boundary node).  Row-major in time, so at(i, b) is the value at
 * t_i on boundary node b.
 */
class SigmaField {
 public:
  SigmaField(std::size_t time_count, std::size_t boundary_count)
      : nb_(boundary_count), data_(time_count * boundary_count, 0.0) {}

  double& at(std::size_t ti, std::size_t bi) { return data_[ti * nb_ + bi]; }
  double at(std::size_t ti, std::size_t bi) const { return data_[ti * nb_ + bi]; }

  std::size_t time_count() const { return nb_ == 0 ? 0 : data_.size() / nb_; }
  std::size_t boundary_count() const { return nb_; }

  const std::vector<double>& raw() const { return data_; }

 private:
  std::size_t nb_;
  std::vector<double> data_;
};

/**
 * Causal convolution (f*g)(t_i) = \int_0^{t_i} f(t_i - s) g(s) ds by the
 * trapezoid rule.  Node 0 carries the empty integral, i.e. exactly 0.
 */
Samples conv(const TimeGrid& grid, const Samples& f, const Samples& g);

/// Trapezoid approximation of \int_0^T f(t) g(t) dt.
double inner_time(const TimeGrid& grid, const Samples& f, const Samples& g);

/// Tensor-product (trapezoid in time, boundary weights in space) inner
/// product of two fields over the cylinder.
/**
 * \int_0^T u v dt with u read as its piecewise-linear interpolant and v as
 * the cubic Hermite interpolant of (v, vp).  This is the pairing a sampled
 * control realizes against a smooth kernel: the simulators integrate the
 * linear reading of their load exactly, and plain trapezoid against kernel
 * samples misses that by (lambda dt)^2/12 per oscillatory mode.  Exact for
 * v cubic and u linear.
 */
double pair_linear_hermite(const TimeGrid& grid, const Samples& u, const Samples& v,
                           const Samples& vp);

/**
 * (int_0^T u(s) sin(lambda(T-s)) ds, int_0^T u(s) cos(lambda(T-s)) ds) with
 * u read as its piecewise-linear interpolant and the trig kernels exact.
 * Same realized-pairing semantics as pair_linear_hermite, closed form for
 * the one kernel family that has one.
 */
std::pair<double, double> pair_linear_rotor(const TimeGrid& grid, const Samples& u,
                                            double lambda);

double inner_sigma(const TimeGrid& grid, const BoundaryGrid& bg,
                   const SigmaField& f, const SigmaField& g);

/// Running trapezoid integral: out[i] = \int_0^{t_i} f, out[0] = 0.
Samples cumulative(const TimeGrid& grid, const Samples& f);

}  // namespace vplate
