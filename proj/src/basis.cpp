// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#include "qroot/basis.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace qroot {

namespace {

constexpr double kBoundaryDecay = 1e-8;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Radix-2 iterative FFT, in place, sign = -1 forward / +1 inverse (unscaled).
void fft_pow2(Vec& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * kPi / static_cast<double>(len);
    const cxd wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cxd w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cxd u = a[i + k];
        const cxd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

Vec dft_generic(const Vec& v, int sign) {
  const std::size_t n = v.size();
  Vec out = Vec::Zero(n);
  for (std::size_t k = 0; k < n; ++k) {
    cxd acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * 2.0 * kPi * static_cast<double>(j) *
                         static_cast<double>(k) / static_cast<double>(n);
      acc += v[j] * cxd(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

Vec dft_impl(const Vec& v, int sign) {
  if (v.size() == 0) throw std::invalid_argument("discrete_fourier: empty vector");
  Vec out = v;
  if (is_power_of_two(static_cast<std::size_t>(v.size()))) {
    fft_pow2(out, sign);
  } else {
    out = dft_generic(v, sign);
  }
  out /= std::sqrt(static_cast<double>(v.size()));
  return out;
}

void check_uniform(const RealVec& g, const char* what) {
  if (g.size() < 2) throw std::invalid_argument(std::string(what) + ": grid too small");
  const double dx = g[1] - g[0];
  for (int i = 1; i < g.size(); ++i) {
    if (std::abs((g[i] - g[i - 1]) - dx) > 1e-9 * std::max(1.0, std::abs(dx)))
      throw std::invalid_argument(std::string(what) + ": grid not uniform");
  }
}

}  // namespace

RealVec hermite_functions(int s, double x) {
  RealVec phi(s);
  const double phi0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  phi[0] = phi0;
  if (s > 1) phi[1] = std::sqrt(2.0) * x * phi0;
  for (int n = 2; n < s; ++n) {
    phi[n] = std::sqrt(2.0 / n) * x * phi[n - 1] -
             std::sqrt((n - 1.0) / n) * phi[n - 2];
  }
  return phi;
}

double BasisSet::default_halfwidth(int s) {
  return std::max(8.0, std::sqrt(2.0 * s - 1.0) + 5.0);
}

BasisSet BasisSet::oscillator(int s) {
  return oscillator(s, default_halfwidth(s), kDefaultGridPoints);
}

BasisSet BasisSet::oscillator(int s, double grid_halfwidth, int grid_points) {
  if (s < 1) throw std::invalid_argument("oscillator basis: s must be >= 1");
  if (grid_halfwidth <= 0.0 || grid_points < 16)
    throw std::invalid_argument("oscillator basis: bad grid parameters");

  const RealVec edge = hermite_functions(s, grid_halfwidth);
  if (std::abs(edge[s - 1]) >= kBoundaryDecay)
    throw grid_error("oscillator basis: grid too narrow for s=" +
                     std::to_string(s) + " (|phi_{s-1}(L)| = " +
                     std::to_string(std::abs(edge[s - 1])) + ")");

  BasisSet b;
  b.s_ = s;
  b.kind_ = BasisKind::oscillator;
  b.halfwidth_ = grid_halfwidth;
  const int n = grid_points;
  const double dx = 2.0 * grid_halfwidth / n;  // half-open grid [-L, L)
  b.grid_.resize(n);
  for (int i = 0; i < n; ++i) b.grid_[i] = -grid_halfwidth + i * dx;
  b.mom_grid_ = b.grid_;  // oscillator eigenfunctions are Fourier self-dual
  b.weights_ = RealVec::Constant(n, dx);
  b.weights_[0] = b.weights_[n - 1] = dx / 2.0;
  b.mom_weights_ = b.weights_;
  b.energies_.resize(s);
  for (int i = 0; i < s; ++i) b.energies_[i] = i + 0.5;

  b.coord_values_.resize(n, s);
  b.mom_values_.resize(n, s);
  Vec phase(s);
  cxd ph(1.0, 0.0);
  for (int i = 0; i < s; ++i) {
    phase[i] = ph;
    ph *= cxd(0.0, -1.0);  // (-i)^n
  }
  for (int g = 0; g < n; ++g) {
    const RealVec row = hermite_functions(s, b.grid_[g]);
    for (int i = 0; i < s; ++i) {
      b.coord_values_(g, i) = row[i];
      b.mom_values_(g, i) = phase[i] * row[i];
    }
  }
  return b;
}

BasisSet BasisSet::histogram(int s, double lo, double hi) {
  if (s < 1) throw std::invalid_argument("histogram basis: s must be >= 1");
  if (!(hi > lo)) throw std::invalid_argument("histogram basis: hi <= lo");

  BasisSet b;
  b.s_ = s;
  b.kind_ = BasisKind::histogram;
  b.lo_ = lo;
  b.hi_ = hi;
  b.halfwidth_ = (hi - lo) / 2.0;
  const double dx = (hi - lo) / s;
  b.grid_.resize(s);
  for (int i = 0; i < s; ++i) b.grid_[i] = lo + (i + 0.5) * dx;
  b.weights_ = RealVec::Constant(s, dx);
  // Synthetic oscillator-like labels; used only as the deliberately wrong
  // frequency pairing in the dynamics negative control.
  b.energies_.resize(s);
  for (int i = 0; i < s; ++i) b.energies_[i] = i + 0.5;

  const double amp = 1.0 / std::sqrt(dx);
  b.coord_values_ = Mat::Zero(s, s);
  for (int i = 0; i < s; ++i) b.coord_values_(i, i) = amp;

  b.mom_grid_ = conjugate_grid(b.grid_);
  const double dp = b.mom_grid_.size() > 1 ? b.mom_grid_[1] - b.mom_grid_[0] : 1.0;
  b.mom_weights_ = RealVec::Constant(s, dp);
  b.mom_values_.resize(s, s);
  for (int i = 0; i < s; ++i) {
    Vec col = b.coord_values_.col(i);
    ConjugatePair t = fourier_continuous(b.grid_, col);
    b.mom_values_.col(i) = t.values;
  }
  return b;
}

Vec BasisSet::eval_coord(double x) const {
  if (kind_ == BasisKind::oscillator) {
    if (std::abs(x) > halfwidth_)
      throw std::domain_error("eval_coord: point outside grid coverage");
    return hermite_functions(s_, x).cast<cxd>();
  }
  if (x < lo_ || x > hi_)
    throw std::domain_error("eval_coord: point outside histogram support");
  const double dx = (hi_ - lo_) / s_;
  int bin = std::min(static_cast<int>((x - lo_) / dx), s_ - 1);
  Vec v = Vec::Zero(s_);
  v[bin] = 1.0 / std::sqrt(dx);
  return v;
}

Vec BasisSet::eval_mom(double p) const {
  if (kind_ == BasisKind::oscillator) {
    if (std::abs(p) > halfwidth_)
      throw std::domain_error("eval_mom: point outside grid coverage");
    const RealVec row = hermite_functions(s_, p);
    Vec out(s_);
    cxd ph(1.0, 0.0);
    for (int i = 0; i < s_; ++i) {
      out[i] = ph * row[i];
      ph *= cxd(0.0, -1.0);
    }
    return out;
  }
  // Histogram momentum samples exist on the conjugate grid; interpolate
  // linearly between nodes.
  const double p0 = mom_grid_[0], p1 = mom_grid_[mom_grid_.size() - 1];
  if (p < p0 || p > p1)
    throw std::domain_error("eval_mom: point outside conjugate grid");
  const double dp = mom_grid_[1] - mom_grid_[0];
  const int k = std::min(static_cast<int>((p - p0) / dp),
                         static_cast<int>(mom_grid_.size()) - 2);
  const double t = (p - mom_grid_[k]) / dp;
  return (1.0 - t) * mom_values_.row(k).transpose() +
         t * mom_values_.row(k + 1).transpose();
}

Mat BasisSet::eval_coord(const RealVec& points) const {
  Mat out(points.size(), s_);
  for (int k = 0; k < points.size(); ++k)
    out.row(k) = eval_coord(points[k]).transpose();
  return out;
}

Mat BasisSet::eval_mom(const RealVec& points) const {
  Mat out(points.size(), s_);
  for (int k = 0; k < points.size(); ++k)
    out.row(k) = eval_mom(points[k]).transpose();
  return out;
}

nlohmann::json BasisSet::descriptor() const {
  nlohmann::json j;
  j["kind"] = kind_ == BasisKind::oscillator ? "oscillator" : "histogram";
  j["s"] = s_;
  if (kind_ == BasisKind::oscillator) {
    j["grid_halfwidth"] = halfwidth_;
    j["grid_points"] = grid_points();
  } else {
    j["lo"] = lo_;
    j["hi"] = hi_;
  }
  return j;
}

BasisSet BasisSet::from_descriptor(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int s = j.at("s").get<int>();
  if (kind == "oscillator") {
    const double hw = j.value("grid_halfwidth", default_halfwidth(s));
    const int pts = j.value("grid_points", kDefaultGridPoints);
    return oscillator(s, hw, pts);
  }
  if (kind == "histogram")
    return histogram(s, j.at("lo").get<double>(), j.at("hi").get<double>());
  throw data_error("basis descriptor: unknown kind '" + kind + "'");
}

StateVector StateVector::make(std::shared_ptr<const BasisSet> basis, Vec c) {
  if (!basis) throw std::invalid_argument("StateVector: null basis");
  if (c.size() != basis->size())
    throw std::invalid_argument("StateVector: dimension mismatch");
  const double nrm = c.norm();
  if (std::abs(nrm - 1.0) > 1e-6)
    throw std::invalid_argument("StateVector: not normalized (|c| = " +
                                std::to_string(nrm) + ")");
  c /= nrm;
  return StateVector{std::move(basis), std::move(c)};
}

Vec evaluate_psi(const StateVector& state, Space space, const RealVec& points) {
  const BasisSet& b = *state.basis;
  Vec out(points.size());
  for (int k = 0; k < points.size(); ++k) {
    const Vec row =
        space == Space::coordinate ? b.eval_coord(points[k]) : b.eval_mom(points[k]);
    out[k] = (row.array() * state.c.array()).sum();
  }
  return out;
}

RealVec density_on_grid(const StateVector& state, Space space) {
  const BasisSet& b = *state.basis;
  const Mat& vals = space == Space::coordinate ? b.coord_values() : b.mom_values();
  Vec psi = vals * state.c;
  return psi.cwiseAbs2();
}

std::pair<double, double> verify_parseval(const StateVector& state) {
  const BasisSet& b = *state.basis;
  const Vec psi = b.coord_values() * state.c;
  const int n = static_cast<int>(psi.size());
  const double dx = b.grid()[1] - b.grid()[0];

  // 6th-order centered first derivative; boundary values are decayed, points
  // without a full stencil contribute nothing.
  Vec d = Vec::Zero(n);
  for (int i = 3; i < n - 3; ++i) {
    d[i] = (psi[i + 3] - 9.0 * psi[i + 2] + 45.0 * psi[i + 1] -
            45.0 * psi[i - 1] + 9.0 * psi[i - 2] - psi[i - 3]) /
           (60.0 * dx);
  }
  double lhs = 0.0;
  for (int i = 0; i < n; ++i) lhs += b.quad_weights()[i] * std::norm(d[i]);

  const Vec psit = b.mom_values() * state.c;
  double rhs = 0.0;
  for (int i = 0; i < b.momentum_grid().size(); ++i)
    rhs += b.momentum_quad_weights()[i] * sqr(b.momentum_grid()[i]) *
           std::norm(psit[i]);
  return {lhs, rhs};
}

Vec discrete_fourier(const Vec& v) { return dft_impl(v, -1); }
Vec inverse_discrete_fourier(const Vec& v) { return dft_impl(v, +1); }

Mat discrete_fourier_matrix(int n) {
  if (n < 1) throw std::invalid_argument("discrete_fourier_matrix: n < 1");
  Mat u(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const double ang = -2.0 * kPi * j * k / n;
      u(k, j) = scale * cxd(std::cos(ang), std::sin(ang));
    }
  }
  return u;
}

RealVec conjugate_grid(const RealVec& xgrid) {
  check_uniform(xgrid, "conjugate_grid");
  const int n = static_cast<int>(xgrid.size());
  const double dx = xgrid[1] - xgrid[0];
  const double dp = 2.0 * kPi / (n * dx);
  RealVec p(n);
  for (int k = 0; k < n; ++k) p[k] = (k - n / 2) * dp;
  return p;
}

ConjugatePair fourier_continuous(const RealVec& xgrid, const Vec& psi) {
  check_uniform(xgrid, "fourier_continuous");
  if (psi.size() != xgrid.size())
    throw std::invalid_argument("fourier_continuous: size mismatch");
  const int n = static_cast<int>(xgrid.size());
  const double dx = xgrid[1] - xgrid[0];
  ConjugatePair out;
  out.pgrid = conjugate_grid(xgrid);

  // psi~(p_k) = dx/sqrt(2 pi) e^{-i p_k x_0} sum_j (-1)^j psi_j e^{-2 pi i jk/N}
  Vec tmp(n);
  for (int j = 0; j < n; ++j) tmp[j] = (j % 2 == 0 ? 1.0 : -1.0) * psi[j];
  Vec ft = discrete_fourier(tmp);  // unitary
  const double scale = dx * std::sqrt(n / (2.0 * kPi));
  out.values.resize(n);
  for (int k = 0; k < n; ++k) {
    const double ang = -out.pgrid[k] * xgrid[0];
    out.values[k] = scale * cxd(std::cos(ang), std::sin(ang)) * ft[k];
  }
  return out;
}

Vec inverse_fourier_continuous(const RealVec& xgrid, const RealVec& pgrid,
                               const Vec& psit) {
  check_uniform(xgrid, "inverse_fourier_continuous");
  const int n = static_cast<int>(xgrid.size());
  if (psit.size() != n || pgrid.size() != n)
    throw std::invalid_argument("inverse_fourier_continuous: size mismatch");
  const double dx = xgrid[1] - xgrid[0];
  const RealVec expect = conjugate_grid(xgrid);
  if ((expect - pgrid).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, expect.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(
        "inverse_fourier_continuous: pgrid is not the conjugate grid of xgrid");

  Vec tmp(n);
  for (int k = 0; k < n; ++k) {
    const double ang = pgrid[k] * xgrid[0];
    tmp[k] = cxd(std::cos(ang), std::sin(ang)) * psit[k];
  }
  Vec inv = inverse_discrete_fourier(tmp);
  const double scale = std::sqrt(2.0 * kPi / n) / dx;
  Vec out(n);
  for (int j = 0; j < n; ++j)
    out[j] = scale * (j % 2 == 0 ? 1.0 : -1.0) * inv[j];
  return out;
}

GridFunction histogram_density(const RealVec& samples, double lo, double hi,
                               int bins) {
  if (bins < 1) throw std::invalid_argument("histogram_density: bins < 1");
  if (!(hi > lo)) throw std::invalid_argument("histogram_density: hi <= lo");
  const double dx = (hi - lo) / bins;
  GridFunction g;
  g.points.resize(bins);
  for (int i = 0; i < bins; ++i) g.points[i] = lo + (i + 0.5) * dx;
  g.values = RealVec::Zero(bins);
  long kept = 0;
  for (int k = 0; k < samples.size(); ++k) {
    const double v = samples[k];
    if (v < lo || v >= hi) continue;
    g.values[std::min(static_cast<int>((v - lo) / dx), bins - 1)] += 1.0;
    ++kept;
  }
  if (kept > 0) g.values /= static_cast<double>(kept) * dx;
  return g;
}

}  // namespace qroot
