#pragma once

#include <cmath>
#include <vector>

namespace rankmat::testing {

// (u . v - t)^2 by a plain loop, independent of the kernel tables.
inline double pair_loss(const std::vector<double>& u, const std::vector<double>& v,
                        double t) {
  double dot = 0.0;
  for (std::size_t d = 0; d < u.size(); ++d) dot += u[d] * v[d];
  return (dot - t) * (dot - t);
}

struct FiniteDifference {
  std::vector<double> du;
  std::vector<double> dv;
};

// Central differences with step h on every coordinate of u and v.
inline FiniteDifference central_difference(std::vector<double> u,
                                           std::vector<double> v, double t,
                                           double h) {
  FiniteDifference g{std::vector<double>(u.size()), std::vector<double>(v.size())};
  for (std::size_t d = 0; d < u.size(); ++d) {
    const double keep = u[d];
    u[d] = keep + h;
    const double plus = pair_loss(u, v, t);
    u[d] = keep - h;
    const double minus = pair_loss(u, v, t);
    u[d] = keep;
    g.du[d] = (plus - minus) / (2.0 * h);
  }
  for (std::size_t d = 0; d < v.size(); ++d) {
    const double keep = v[d];
    v[d] = keep + h;
    const double plus = pair_loss(u, v, t);
    v[d] = keep - h;
    const double minus = pair_loss(u, v, t);
    v[d] = keep;
    g.dv[d] = (plus - minus) / (2.0 * h);
  }
  return g;
}

// ||a - b|| / max(||b||, floor) over the concatenation of both halves.
inline double relative_error(const std::vector<double>& a_u,
                             const std::vector<double>& a_v,
                             const std::vector<double>& b_u,
                             const std::vector<double>& b_v) {
  double diff = 0.0, norm = 0.0;
  for (std::size_t d = 0; d < a_u.size(); ++d) {
    diff += (a_u[d] - b_u[d]) * (a_u[d] - b_u[d]);
    norm += b_u[d] * b_u[d];
  }
  for (std::size_t d = 0; d < a_v.size(); ++d) {
    diff += (a_v[d] - b_v[d]) * (a_v[d] - b_v[d]);
    norm += b_v[d] * b_v[d];
  }
  return std::sqrt(diff) / std::max(std::sqrt(norm), 1e-8);
}

}  // namespace rankmat::testing
