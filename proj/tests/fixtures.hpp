// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <memory>

#include "qroot/basis.hpp"

namespace fixtures {

using qroot::cxd;
using qroot::Vec;

inline std::shared_ptr<const qroot::BasisSet> osc(int s) {
  return std::make_shared<const qroot::BasisSet>(qroot::BasisSet::oscillator(s));
}

/// Representative three-component oscillator state used for the replicated
/// estimation experiments. Chosen so the transverse Fisher information at
/// n = m is isotropic to ~6%, which is where the asymptotic chi-square law
/// for the fidelity statistic applies cleanly.
inline Vec fig3_state() {
  Vec c(3);
  const double phase0 = -5.0 * M_PI / 12.0;
  c[0] = 0.15 * cxd(std::cos(phase0), std::sin(phase0));
  c[1] = std::sqrt(1.0 - 0.15 * 0.15 - 0.2 * 0.2);
  c[2] = cxd(0.0, -0.2);
  return c;
}

/// Generic spin-1/2 state with all Bloch components nonzero.
inline Vec spin_state() {
  Vec c(2);
  c[0] = cxd(0.8, 0.1);
  c[1] = cxd(0.3, -0.45);
  return c / c.norm();
}

/// Asymmetric three-component state for the phase-retrieval demonstrations
/// (both densities visibly asymmetric, so the conjugate twin is far away).
inline Vec phase_retrieval_state() {
  Vec c(3);
  c[0] = 0.8;
  c[1] = cxd(0.45, 0.2);
  c[2] = 0.35;
  return c / c.norm();
}

}  // namespace fixtures
