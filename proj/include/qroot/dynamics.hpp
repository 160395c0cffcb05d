// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>

#include "qroot/basis.hpp"
#include "qroot/common.hpp"

namespace qroot {

struct Potential {
  std::string name;
  std::function<double(double)> u;
  std::function<double(double)> du;
};

/// U(x) = x^2/2 with unit mass and frequency.
Potential harmonic_potential();

/// Quadrature matrix elements <k|x|j>, <k|dU/dx|j> and the Hamiltonian matrix
/// (4th-order centered-difference kinetic term + potential), all symmetrized;
/// frequencies are the basis energies (hbar = 1).
struct MatrixElements {
  Mat x_elems;
  Mat du_elems;
  Mat h_elems;
  RealVec frequencies;
};

MatrixElements build_matrix_elements(const BasisSet& basis,
                                     const Potential& potential);

/// Max over the interior band (last row/column excluded, degenerate frequency
/// pairs skipped) of |m (w_j - w_k)^2 <k|x|j> - <k|dU/dx|j>|. Zero for exact
/// Hamiltonian eigenbases.
double ehrenfest_residual(const MatrixElements& elems);

/// Evolves c_j(t) = c_j e^{-i w_j t} and returns
/// max_t |d^2<x>/dt^2 + <dU/dx>(t)| with the second derivative taken
/// spectrally from the frequency decomposition (exact in t).
double averaged_newton_check(const Vec& c, const MatrixElements& elems,
                             const RealVec& t_grid);

}  // namespace qroot
