#include "shallit/dynamics.hpp"

#include <sstream>

namespace shallit {

DomainError::DomainError(const std::string& what, int step, std::string value)
    : std::runtime_error(what + " (step " + std::to_string(step) + ", value " + value + ")"),
      step_(step),
      value_(std::move(value)) {}

Point phi_map(const Point& pt) {
  if (pt.p.is_zero()) throw DomainError("map undefined on the u-axis", 0, real_to_sci(pt.p));
  return Point{pt.p * pt.p * (pt.u + 1) - 1, 1 / pt.p};
}

Point involution(const Point& pt) { return Point{pt.u, pt.p}; }

Point phi_inverse(const Point& pt) {
  if (pt.u.is_zero()) throw DomainError("inverse map undefined on the p-axis", 0, real_to_sci(pt.u));
  return involution(phi_map(involution(pt)));
}

std::vector<Point> iterate(const Point& start, int steps) {
  if (steps < 0) throw std::invalid_argument("negative step count");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(start);
  for (int j = 0; j < steps; ++j) {
    const Point& cur = out.back();
    if (cur.p.is_zero()) throw DomainError("orbit reached p = 0", j, real_to_sci(cur.p));
    out.push_back(phi_map(cur));
  }
  return out;
}

TangentState tangent_step(const TangentState& ts, bool second_order) {
  const Real& p = ts.base.p;
  const Real& u = ts.base.u;
  if (p.is_zero()) throw DomainError("tangent map undefined on the u-axis", 0, real_to_sci(p));

  const Real p2 = p * p;
  const Real u1 = u + 1;
  TangentState next;
  next.base = Point{p2 * u1 - 1, 1 / p};
  next.dp = p2 * ts.du + 2 * p * u1 * ts.dp;
  next.du = -ts.dp / p2;
  if (second_order) {
    const Real dp2 = ts.dp * ts.dp;
    next.ddu = (2 * dp2 - p * ts.ddp) / (p2 * p);
    next.ddp = 4 * p * ts.dp * ts.du + p2 * ts.ddu + 2 * u1 * dp2 + 2 * p * u1 * ts.ddp;
  } else {
    next.ddp = ts.ddp;
    next.ddu = ts.ddu;
  }
  return next;
}

Trajectory build_trajectory(int n, const Real& p0, const PrecCtx& ctx) {
  if (n < 1) throw std::invalid_argument("trajectory length must be positive");
  const int k = n / 2;
  const mpfr_prec_t bits = std::max(ctx.bits(), p0.bits());

  Trajectory traj;
  traj.n_ = n;
  traj.points_.resize(static_cast<std::size_t>(n) + 1);
  traj.points_[0] = Point{p0.with_bits(bits), Real(0, bits)};
  for (int j = 1; j <= k; ++j) {
    const Point& prev = traj.points_[static_cast<std::size_t>(j - 1)];
    if (prev.p.sign() <= 0) {
      throw DomainError("forward orbit left p > 0 before the midpoint; p0 is not a solution", j - 1,
                        real_to_sci(prev.p));
    }
    traj.points_[static_cast<std::size_t>(j)] = phi_map(prev);
  }
  for (int j = k + 1; j <= n; ++j) {
    traj.points_[static_cast<std::size_t>(j)] = involution(traj.points_[static_cast<std::size_t>(n - j)]);
  }

  traj.lambdas_.reserve(traj.points_.size());
  for (const auto& pt : traj.points_) traj.lambdas_.push_back(1 - pt.u);
  return traj;
}

std::string trajectory_to_csv(const Trajectory& traj, int places) {
  std::ostringstream os;
  os << "j,p,u,lambda\n";
  for (int j = 0; j <= traj.n(); ++j) {
    os << j << ',' << real_to_decimal(traj[j].p, places) << ',' << real_to_decimal(traj[j].u, places)
       << ',' << real_to_decimal(traj.lambda(j), places) << '\n';
  }
  return os.str();
}

nlohmann::json trajectory_to_json(const Trajectory& traj, int places) {
  nlohmann::json points = nlohmann::json::array();
  for (int j = 0; j <= traj.n(); ++j) {
    points.push_back({{"j", j},
                      {"p", real_to_decimal(traj[j].p, places)},
                      {"u", real_to_decimal(traj[j].u, places)},
                      {"lambda", real_to_decimal(traj.lambda(j), places)}});
  }
  return {{"n", traj.n()}, {"digits", places}, {"points", points}};
}

}  // namespace shallit
