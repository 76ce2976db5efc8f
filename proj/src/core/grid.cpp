#include "core/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vplate {

namespace {

void require_on_grid(const TimeGrid& grid, const Samples& s, const char* name) {
  if (s.size() != grid.size())
    throw std::invalid_argument(std::string(name) + ": expected " +
                                std::to_string(grid.size()) + " samples, got " +
                                std::to_string(s.size()));
}

}  // namespace

TimeGrid::TimeGrid(double horizon_, std::size_t steps_)
    : horizon(horizon_), steps(steps_), dt(horizon_ / static_cast<double>(steps_)) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
    throw std::invalid_argument("TimeGrid: horizon must be positive and finite");
  if (steps_ < 2) throw std::invalid_argument("TimeGrid: need at least 2 steps");
}

BoundaryGrid BoundaryGrid::point() { return BoundaryGrid{{0.0}, {1.0}}; }

BoundaryGrid BoundaryGrid::edge(double length, std::size_t node_count) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("BoundaryGrid: length must be positive and finite");
  if (node_count < 2)
    throw std::invalid_argument("BoundaryGrid: edge needs at least 2 nodes");
  BoundaryGrid bg;
  const double h = length / static_cast<double>(node_count - 1);
  bg.points.resize(node_count);
  bg.weights.assign(node_count, h);
  for (std::size_t i = 0; i < node_count; ++i)
    bg.points[i] = static_cast<double>(i) * h;
  bg.weights.front() = 0.5 * h;
  bg.weights.back() = 0.5 * h;
  return bg;
}

double BoundaryGrid::measure() const {
  double m = 0.0;
  for (double w : weights) m += w;
  return m;
}

Samples conv(const TimeGrid& grid, const Samples& f, const Samples& g) {
  require_on_grid(grid, f, "conv: f");
  require_on_grid(grid, g, "conv: g");
  const std::size_t n = grid.steps;
  Samples out(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    double acc = 0.5 * (f[i] * g[0] + f[0] * g[i]);
    for (std::size_t j = 1; j < i; ++j) acc += f[i - j] * g[j];
    out[i] = grid.dt * acc;
  }
  return out;
}

double inner_time(const TimeGrid& grid, const Samples& f, const Samples& g) {
  require_on_grid(grid, f, "inner_time: f");
  require_on_grid(grid, g, "inner_time: g");
  double acc = 0.5 * (f[0] * g[0] + f[grid.steps] * g[grid.steps]);
  for (std::size_t i = 1; i < grid.steps; ++i) acc += f[i] * g[i];
  return grid.dt * acc;
}

double pair_linear_hermite(const TimeGrid& grid, const Samples& u, const Samples& v,
                           const Samples& vp) {
  require_on_grid(grid, u, "pair_linear_hermite: u");
  require_on_grid(grid, v, "pair_linear_hermite: v");
  require_on_grid(grid, vp, "pair_linear_hermite: vp");
  const double h = grid.dt;
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.steps; ++i) {
    const double lo = v[i] * (7.0 / 20.0) + v[i + 1] * (3.0 / 20.0) +
                      h * (vp[i] / 20.0 - vp[i + 1] / 30.0);
    const double hi = v[i] * (3.0 / 20.0) + v[i + 1] * (7.0 / 20.0) +
                      h * (vp[i] / 30.0 - vp[i + 1] / 20.0);
    acc += u[i] * lo + u[i + 1] * hi;
  }
  return h * acc;
}

std::pair<double, double> pair_linear_rotor(const TimeGrid& grid, const Samples& u,
                                            double lambda) {
  require_on_grid(grid, u, "pair_linear_rotor: u");
  if (!(lambda > 0.0))
    throw std::invalid_argument("pair_linear_rotor: lambda must be positive");
  const double h = grid.dt;
  const double x = lambda * h;
  // I_c0 = int_0^h cos(lambda t), I_s0 = int sin, I_c1 = (1/h) int t cos,
  // I_s1 = (1/h) int t sin; series guard against cancellation at small x.
  double ic0, is0, ic1, is1;
  if (x < 0.05) {
    const double x2 = x * x;
    const double x4 = x2 * x2;
    ic0 = h * (1.0 - x2 / 6.0 + x4 / 120.0);
    is0 = h * (x / 2.0 - x * x2 / 24.0 + x * x4 / 720.0);
    ic1 = h * (0.5 - x2 / 8.0 + x4 / 144.0);
    is1 = h * (x / 3.0 - x * x2 / 30.0 + x * x4 / 840.0);
  } else {
    const double sx = std::sin(x);
    const double cx = std::cos(x);
    ic0 = sx / lambda;
    is0 = (1.0 - cx) / lambda;
    ic1 = sx / lambda + (cx - 1.0) / (lambda * lambda * h);
    is1 = -cx / lambda + sx / (lambda * lambda * h);
  }
  const double c0 = ic0 - ic1;
  const double s0 = is0 - is1;

  double acc_s = 0.0, acc_c = 0.0;
  for (std::size_t i = 0; i < grid.steps; ++i) {
    const double th = lambda * (grid.horizon - grid.node(i));
    const double st = std::sin(th);
    const double ct = std::cos(th);
    // sin(th - lambda tau) and cos(th - lambda tau) expanded against the
    // linear interpolant of u on the step.
    acc_s += u[i] * (st * c0 - ct * s0) + u[i + 1] * (st * ic1 - ct * is1);
    acc_c += u[i] * (ct * c0 + st * s0) + u[i + 1] * (ct * ic1 + st * is1);
  }
  return {acc_s, acc_c};
}

double inner_sigma(const TimeGrid& grid, const BoundaryGrid& bg,
                   const SigmaField& f, const SigmaField& g) {
  if (f.time_count() != grid.size() || g.time_count() != grid.size())
    throw std::invalid_argument("inner_sigma: fields not on the time grid");
  if (f.boundary_count() != bg.size() || g.boundary_count() != bg.size())
    throw std::invalid_argument("inner_sigma: fields not on the boundary grid");
  double acc = 0.0;
  for (std::size_t i = 0; i <= grid.steps; ++i) {
    double slice = 0.0;
    for (std::size_t b = 0; b < bg.size(); ++b)
      slice += bg.weights[b] * f.at(i, b) * g.at(i, b);
    const double tw = (i == 0 || i == grid.steps) ? 0.5 : 1.0;
    acc += tw * slice;
  }
  return grid.dt * acc;
}

Samples cumulative(const TimeGrid& grid, const Samples& f) {
  require_on_grid(grid, f, "cumulative: f");
  Samples out(grid.size(), 0.0);
  for (std::size_t i = 1; i <= grid.steps; ++i)
    out[i] = out[i - 1] + 0.5 * grid.dt * (f[i - 1] + f[i]);
  return out;
}

}  // namespace vplate
