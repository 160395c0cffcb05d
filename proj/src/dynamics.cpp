// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#include "qroot/dynamics.hpp"

#include <cmath>

namespace qroot {

Potential harmonic_potential() {
  return Potential{"oscillator", [](double x) { return 0.5 * x * x; },
                   [](double x) { return x; }};
}

MatrixElements build_matrix_elements(const BasisSet& basis,
                                     const Potential& potential) {
  const int s = basis.size();
  const int ng = static_cast<int>(basis.grid().size());
  const Mat& phi = basis.coord_values();
  const RealVec& x = basis.grid();
  const RealVec& w = basis.quad_weights();

  RealVec uvals(ng), duvals(ng);
  for (int g = 0; g < ng; ++g) {
    uvals[g] = potential.u(x[g]);
    duvals[g] = potential.du(x[g]);
  }

  MatrixElements out;
  out.frequencies = basis.energies();
  out.x_elems = Mat::Zero(s, s);
  out.du_elems = Mat::Zero(s, s);
  out.h_elems = Mat::Zero(s, s);

  // Kinetic term by the 4th-order centered second-difference stencil on the
  // uniform grid (histogram grids are uniform too; boundary rows are decayed
  // or irrelevant for the negative control).
  const double dx = x[1] - x[0];
  Mat tphi = Mat::Zero(ng, s);
  if (ng >= 5) {
    for (int j = 0; j < s; ++j) {
      for (int g = 2; g < ng - 2; ++g) {
        tphi(g, j) = -(-phi(g + 2, j) + 16.0 * phi(g + 1, j) - 30.0 * phi(g, j) +
                       16.0 * phi(g - 1, j) - phi(g - 2, j)) /
                     (24.0 * dx * dx);
      }
    }
  }

  for (int k = 0; k < s; ++k) {
    for (int j = 0; j < s; ++j) {
      cxd xe(0.0, 0.0), de(0.0, 0.0), he(0.0, 0.0);
      for (int g = 0; g < ng; ++g) {
        const cxd pk = std::conj(phi(g, k));
        xe += w[g] * pk * x[g] * phi(g, j);
        de += w[g] * pk * duvals[g] * phi(g, j);
        he += w[g] * pk * (tphi(g, j) + uvals[g] * phi(g, j));
      }
      out.x_elems(k, j) = xe;
      out.du_elems(k, j) = de;
      out.h_elems(k, j) = he;
    }
  }
  out.x_elems = (out.x_elems + out.x_elems.adjoint()) / 2.0;
  out.du_elems = (out.du_elems + out.du_elems.adjoint()) / 2.0;
  out.h_elems = (out.h_elems + out.h_elems.adjoint()) / 2.0;
  return out;
}

double ehrenfest_residual(const MatrixElements& elems) {
  const int s = static_cast<int>(elems.x_elems.rows());
  const int interior = s - 1;  // truncation edge excluded
  double res = 0.0;
  for (int k = 0; k < interior; ++k) {
    for (int j = 0; j < interior; ++j) {
      const double dw = elems.frequencies[j] - elems.frequencies[k];
      if (j != k && std::abs(dw) < 1e-12) continue;  // degenerate pair
      const double v =
          std::abs(dw * dw * elems.x_elems(k, j) - elems.du_elems(k, j));
      res = std::max(res, v);
    }
  }
  return res;
}

double averaged_newton_check(const Vec& c, const MatrixElements& elems,
                             const RealVec& t_grid) {
  const int s = static_cast<int>(c.size());
  if (elems.x_elems.rows() != s)
    throw std::invalid_argument("averaged_newton_check: dimension mismatch");
  double worst = 0.0;
  for (int ti = 0; ti < t_grid.size(); ++ti) {
    const double t = t_grid[ti];
    cxd acc(0.0, 0.0);
    for (int j = 0; j < s; ++j) {
      for (int k = 0; k < s; ++k) {
        const double dw = elems.frequencies[j] - elems.frequencies[k];
        const cxd amp = std::conj(c[k]) * c[j] *
                        cxd(std::cos(dw * t), -std::sin(dw * t));
        // d^2<x>/dt^2 term + <dU/dx> term
        acc += amp * (-dw * dw * elems.x_elems(k, j) + elems.du_elems(k, j));
      }
    }
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

}  // namespace qroot
