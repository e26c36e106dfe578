/*
 * Copyright 2026 The mrlwe Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "mrlwe/lattice.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mrlwe {

LatticeInstance::LatticeInstance(Eigen::MatrixXd basis, std::string provenance,
                                 Eigen::MatrixXcd frame)
    : basis_(std::move(basis)), provenance_(std::move(provenance)), frame_(std::move(frame)) {}

LatticeInstance LatticeInstance::Create(Eigen::MatrixXd basis, std::string provenance,
                                        Eigen::MatrixXcd frame) {
  if (basis.rows() != basis.cols() || basis.rows() == 0) {
    throw std::invalid_argument("LatticeInstance: basis must be square");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
  if (lu.rank() < basis.rows()) {
    throw std::invalid_argument("LatticeInstance: basis is not full rank");
  }
  if (frame.size() != 0 && (frame.rows() != basis.rows() || frame.cols() != basis.cols())) {
    throw std::invalid_argument("LatticeInstance: frame has the wrong shape");
  }
  return LatticeInstance(std::move(basis), std::move(provenance), std::move(frame));
}

double LatticeInstance::Norm(const Eigen::VectorXd& x, double p) const {
  if (frame_.size() == 0) {
    ComplexVector v(x.data(), x.data() + x.size());
    return LpNorm(v, p);
  }
  Eigen::VectorXcd y = frame_ * x.cast<Complex>();
  ComplexVector v(y.data(), y.data() + y.size());
  return LpNorm(v, p);
}

double LatticeInstance::Determinant() const {
  return std::sqrt(std::abs((basis_ * basis_.transpose()).determinant()));
}

LatticeInstance LatticeInstance::Dual() const {
  return LatticeInstance(basis_.inverse().transpose(), "dual of " + provenance_, frame_);
}

LatticeInstance LatticeInstance::Transform(const Eigen::MatrixXi& unimodular) const {
  return Create(unimodular.cast<double>() * basis_, provenance_, frame_);
}

namespace {

struct Enumerator {
  const Eigen::MatrixXd& basis;
  const EnumerationCallback& callback;
  size_t limit;
  size_t n;
  Eigen::MatrixXd mu;     // mu(i, j) for j < i
  Eigen::VectorXd bstar;  // squared GS norms
  Eigen::VectorXd u;      // shift in GS coordinates
  Eigen::VectorXd shift;
  double radius2;
  std::vector<Int64> z;
  size_t visited = 0;

  void Recurse(size_t level, double partial) {
    // level counts down from n; current index j = level - 1.
    if (level == 0) {
      if (++visited > limit) throw EnumerationOverflow("lattice enumeration limit exceeded");
      Eigen::VectorXd x = shift;
      for (size_t i = 0; i < n; ++i) {
        if (z[i] != 0) x += static_cast<double>(z[i]) * basis.row(i).transpose();
      }
      callback(z, x);
      return;
    }
    size_t j = level - 1;
    double center = u(j);
    for (size_t i = j + 1; i < n; ++i) center += static_cast<double>(z[i]) * mu(i, j);
    center = -center;
    double room = radius2 - partial;
    if (room < 0) return;
    double half = std::sqrt(room / bstar(j));
    Int64 lo = static_cast<Int64>(std::ceil(center - half));
    Int64 hi = static_cast<Int64>(std::floor(center + half));
    for (Int64 v = lo; v <= hi; ++v) {
      double c = static_cast<double>(v) - center;
      double next = partial + c * c * bstar(j);
      if (next > radius2) continue;
      z[j] = v;
      Recurse(level - 1, next);
    }
    z[j] = 0;
  }
};

double L2RadiusFor(double radius, double p, size_t n) {
  double expo = std::isinf(p) ? 0.5 : std::max(0.0, 0.5 - 1.0 / p);
  return radius * std::pow(static_cast<double>(n), expo);
}

}  // namespace

void EnumerateLattice(const Eigen::MatrixXd& basis, const Eigen::VectorXd& shift,
                      double radius, const EnumerationCallback& callback, size_t limit) {
  const size_t n = static_cast<size_t>(basis.rows());
  Enumerator e{basis, callback, limit, n, Eigen::MatrixXd::Zero(n, n),
               Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), shift,
               radius * radius * (1.0 + 1e-9) + 1e-12, std::vector<Int64>(n, 0)};
  Eigen::MatrixXd gs = basis;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < i; ++j) {
      e.mu(i, j) = basis.row(i).dot(gs.row(j)) / e.bstar(j);
      gs.row(i) -= e.mu(i, j) * gs.row(j);
    }
    e.bstar(i) = gs.row(i).squaredNorm();
    e.u(i) = shift.dot(gs.row(i)) / e.bstar(i);
  }
  e.Recurse(n, 0.0);
}

LatticeVector BruteForceLambda1(const LatticeInstance& lattice, double p,
                                double radius_bound) {
  LatticeVector best;
  best.length = std::numeric_limits<double>::infinity();
  const double tol = radius_bound * 1e-9;
  EnumerateLattice(
      lattice.basis(), Eigen::VectorXd::Zero(lattice.dim()),
      L2RadiusFor(radius_bound, p, lattice.dim()),
      [&](const std::vector<Int64>& z, const Eigen::VectorXd& x) {
        if (std::all_of(z.begin(), z.end(), [](Int64 v) { return v == 0; })) return;
        double len = lattice.Norm(x, p);
        if (len <= radius_bound + tol && len < best.length - 1e-12) {
          best.length = len;
          best.vector = x;
          best.coefficients = z;
        }
      });
  if (std::isinf(best.length)) {
    throw std::runtime_error("BruteForceLambda1: no nonzero vector within the bound");
  }
  return best;
}

std::vector<LatticeVector> SuccessiveMinima(const LatticeInstance& lattice,
                                            double radius_bound) {
  const size_t n = lattice.dim();
  std::vector<LatticeVector> candidates;
  EnumerateLattice(lattice.basis(), Eigen::VectorXd::Zero(n), radius_bound,
                   [&](const std::vector<Int64>& z, const Eigen::VectorXd& x) {
                     // Keep one of each +- pair: first nonzero coefficient positive.
                     auto first = std::find_if(z.begin(), z.end(), [](Int64 v) { return v != 0; });
                     if (first == z.end() || *first < 0) return;
                     candidates.push_back({x, z, x.norm()});
                   });
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const LatticeVector& a, const LatticeVector& b) {
                     return a.length < b.length;
                   });
  std::vector<LatticeVector> chosen;
  Eigen::MatrixXd span(0, n);
  for (const LatticeVector& c : candidates) {
    Eigen::MatrixXd trial(span.rows() + 1, n);
    trial << span, c.vector.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(trial);
    lu.setThreshold(1e-9);
    if (lu.rank() == trial.rows()) {
      span = trial;
      chosen.push_back(c);
      if (chosen.size() == n) return chosen;
    }
  }
  throw std::runtime_error("SuccessiveMinima: radius bound too small");
}

MinkowskiResult MinkowskiWitness(const LatticeInstance& lattice,
                                 const std::vector<double>& half_widths) {
  const size_t n = lattice.dim();
  if (half_widths.size() != n) throw std::invalid_argument("MinkowskiWitness: box arity");
  double log_volume = 0.0, r2 = 0.0;
  for (double c : half_widths) {
    if (!(c > 0)) throw std::invalid_argument("MinkowskiWitness: nonpositive width");
    log_volume += std::log(2.0 * c);
    r2 += c * c;
  }
  double log_bound = n * std::log(2.0) + std::log(lattice.Determinant());
  if (!(log_volume > log_bound)) {
    throw std::invalid_argument("MinkowskiWitness: box volume must exceed 2^n det");
  }
  MinkowskiResult result;
  double best = std::numeric_limits<double>::infinity();
  EnumerateLattice(lattice.basis(), Eigen::VectorXd::Zero(n), std::sqrt(r2),
                   [&](const std::vector<Int64>& z, const Eigen::VectorXd& x) {
                     if (std::all_of(z.begin(), z.end(), [](Int64 v) { return v == 0; })) return;
                     for (size_t i = 0; i < n; ++i) {
                       if (std::abs(x(i)) > half_widths[i] * (1 + 1e-12)) return;
                     }
                     double len = x.norm();
                     if (len < best - 1e-12) {
                       best = len;
                       result.found = true;
                       result.witness = {x, z, len};
                     }
                   });
  if (!result.found) {
    result.report = "no nonzero point of " + lattice.provenance() +
                    " in a box of volume exp(" + std::to_string(log_volume) +
                    ") > 2^n det = exp(" + std::to_string(log_bound) + ")";
  }
  return result;
}

std::vector<std::vector<Int64>> HermiteNormalForm(std::vector<std::vector<Int64>> rows) {
  if (rows.empty()) return rows;
  const size_t cols = rows[0].size();
  auto checked = [](__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("HNF overflow");
    return static_cast<Int64>(v);
  };
  auto axpy = [&](std::vector<Int64>& target, const std::vector<Int64>& src, Int64 f) {
    for (size_t c = 0; c < cols; ++c) {
      target[c] = checked(static_cast<__int128>(target[c]) - static_cast<__int128>(f) * src[c]);
    }
  };
  size_t r = 0;
  for (size_t col = 0; col < cols && r < rows.size(); ++col) {
    while (true) {
      size_t pivot = rows.size();
      for (size_t i = r; i < rows.size(); ++i) {
        if (rows[i][col] != 0 &&
            (pivot == rows.size() || std::llabs(rows[i][col]) < std::llabs(rows[pivot][col]))) {
          pivot = i;
        }
      }
      if (pivot == rows.size()) break;
      std::swap(rows[r], rows[pivot]);
      bool others = false;
      for (size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] != 0) {
          axpy(rows[i], rows[r], rows[i][col] / rows[r][col]);
          others = others || rows[i][col] != 0;
        }
      }
      if (!others) break;
    }
    if (rows[r][col] == 0) continue;
    if (rows[r][col] < 0) {
      for (Int64& v : rows[r]) v = -v;
    }
    for (size_t i = 0; i < r; ++i) {
      Int64 f = rows[i][col] / rows[r][col];
      if (rows[i][col] - f * rows[r][col] < 0) --f;
      if (f != 0) axpy(rows[i], rows[r], f);
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

IdealLattice BuildIdealLattice(const EmbeddingContext& ctx,
                               const std::vector<std::vector<Int64>>& generators,
                               std::string label) {
  const size_t n = ctx.n();
  std::vector<std::vector<Int64>> rows;
  for (const auto& g : generators) {
    if (g.size() != n) throw std::invalid_argument("BuildIdealLattice: generator length");
    RealVector gr(g.begin(), g.end());
    for (size_t e = 0; e < n; ++e) {
      RealVector mono(n, 0.0);
      mono[e] = 1.0;
      RealVector prod = ctx.Multiply(gr, mono);
      std::vector<Int64> row(n);
      for (size_t i = 0; i < n; ++i) row[i] = std::llround(prod[i]);
      rows.push_back(std::move(row));
    }
  }
  std::vector<std::vector<Int64>> hnf = HermiteNormalForm(std::move(rows));
  if (hnf.size() != n) {
    throw std::invalid_argument("BuildIdealLattice: " + label + " does not have full rank");
  }
  Int64 norm = 1;
  for (size_t i = 0; i < n; ++i) {
    size_t lead = 0;
    while (hnf[i][lead] == 0) ++lead;
    norm *= hnf[i][lead];
  }
  Eigen::MatrixXd basis(n, n);
  for (size_t i = 0; i < n; ++i) {
    RealVector row(hnf[i].begin(), hnf[i].end());
    RealVector h = ctx.CoefficientsToH(row);
    for (size_t j = 0; j < n; ++j) basis(i, j) = h[j];
  }
  Eigen::MatrixXcd frame(n, n);
  std::vector<ComplexVector> hb = ctx.HBasis();
  for (size_t j = 0; j < n; ++j) {
    for (size_t r = 0; r < n; ++r) frame(r, j) = hb[j][r];
  }
  return IdealLattice{hnf, norm, LatticeInstance::Create(basis, std::move(label), frame)};
}

double Discriminant(const EmbeddingContext& ctx) {
  return std::norm(ctx.DenseMatrix().determinant());
}

}  // namespace mrlwe
