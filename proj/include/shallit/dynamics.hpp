#pragma once

// The planar map (p, u) -> (p^2 (u + 1) - 1, 1/p), its inverse, and orbits.

#include <string>
#include <vector>

#include "json.hpp"
#include "shallit/numerics.hpp"

namespace shallit {

/// Raised when an orbit reaches the u-axis (p = 0), where the map is undefined,
/// or leaves the region a caller requires.
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, int step, std::string value);
  int step() const { return step_; }
  const std::string& value() const { return value_; }

 private:
  int step_;
  std::string value_;
};

struct Point {
  Real p;
  Real u;
};

/// Forward map. Throws DomainError when p == 0.
Point phi_map(const Point& pt);

/// Inverse map, computed as involution(phi_map(involution(pt))). Throws when u == 0.
Point phi_inverse(const Point& pt);

/// The reversing involution (p, u) -> (u, p).
Point involution(const Point& pt);

/// start, phi(start), ..., phi^steps(start). The DomainError step is the index
/// of the point whose p vanished.
std::vector<Point> iterate(const Point& start, int steps);

/// A point together with first (and optionally second) derivatives along a
/// one-parameter family of initial conditions.
struct TangentState {
  Point base;
  Real dp;
  Real du;
  Real ddp;
  Real ddu;
};

TangentState tangent_step(const TangentState& ts, bool second_order);

/// A solved boundary-value orbit: u_0 = 0, p_n = 0, with u_j = p_{n-j}.
class Trajectory {
 public:
  int n() const { return n_; }
  /// Midpoint index floor(n/2).
  int midpoint() const { return n_ / 2; }
  const std::vector<Point>& points() const { return points_; }
  const Point& operator[](int j) const { return points_[static_cast<std::size_t>(j)]; }
  /// lambda_j = 1 - u_j.
  const std::vector<Real>& lambdas() const { return lambdas_; }
  const Real& lambda(int j) const { return lambdas_[static_cast<std::size_t>(j)]; }
  const Real& p0() const { return points_.front().p; }
  /// Decimal digits carried by the stored values.
  int digits() const { return points_.front().p.digits(); }

 private:
  friend Trajectory build_trajectory(int n, const Real& p0, const PrecCtx& ctx);
  int n_ = 0;
  std::vector<Point> points_;
  std::vector<Real> lambdas_;
};

/// Forward iteration from (p0, 0) up to the midpoint; the second half is
/// filled by the symmetry u_j = p_{n-j}, p_j = u_{n-j}.
Trajectory build_trajectory(int n, const Real& p0, const PrecCtx& ctx);

/// CSV with header `j,p,u,lambda`.
std::string trajectory_to_csv(const Trajectory& traj, int places);
/// {n, digits, points: [{j, p, u, lambda}]}; numbers are decimal strings.
nlohmann::json trajectory_to_json(const Trajectory& traj, int places);

}  // namespace shallit
