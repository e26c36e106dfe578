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


#ifndef MRLWE_LATTICE_H_
#define MRLWE_LATTICE_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mrlwe/embedding.h"
#include "mrlwe/modarith.h"

namespace mrlwe {

// Raised when an enumeration would visit more points than allowed.
class EnumerationOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Full-rank lattice with basis vectors as rows, in real coordinates. An
// optional complex frame F maps real coordinates x to F x; norms other than
// l2 are measured in the framed coordinates (for ideal lattices F maps
// h-coordinates back to the canonical embedding). F must be unitary.
class LatticeInstance {
 public:
  // Throws std::invalid_argument if the basis is not square and full rank.
  static LatticeInstance Create(Eigen::MatrixXd basis, std::string provenance,
                                Eigen::MatrixXcd frame = Eigen::MatrixXcd());

  const Eigen::MatrixXd& basis() const { return basis_; }
  const std::string& provenance() const { return provenance_; }
  size_t dim() const { return static_cast<size_t>(basis_.rows()); }
  double Norm(const Eigen::VectorXd& x, double p) const;
  // sqrt(det(B B^T)).
  double Determinant() const;
  // Basis of the dual lattice (rows), same frame.
  LatticeInstance Dual() const;
  // Same lattice under a unimodular change of basis.
  LatticeInstance Transform(const Eigen::MatrixXi& unimodular) const;

 private:
  LatticeInstance(Eigen::MatrixXd basis, std::string provenance, Eigen::MatrixXcd frame);

  Eigen::MatrixXd basis_;
  std::string provenance_;
  Eigen::MatrixXcd frame_;
};

using EnumerationCallback =
    std::function<void(const std::vector<Int64>& z, const Eigen::VectorXd& x)>;

// Calls back for every x = z B + shift with |x|_2 <= radius (Fincke-Pohst
// over the Gram-Schmidt basis). Throws EnumerationOverflow past `limit`.
void EnumerateLattice(const Eigen::MatrixXd& basis, const Eigen::VectorXd& shift,
                      double radius, const EnumerationCallback& callback,
                      size_t limit = 20'000'000);

struct LatticeVector {
  Eigen::VectorXd vector;
  std::vector<Int64> coefficients;
  double length = 0.0;
};

// Exact shortest nonzero vector in l_p (p in [1, inf]) among vectors of
// l_p-length <= radius_bound. Throws std::runtime_error if none exists there.
LatticeVector BruteForceLambda1(const LatticeInstance& lattice, double p,
                                double radius_bound);

// lambda_1, ..., lambda_n in l2, chosen greedily from all vectors of length
// <= radius_bound. Throws std::runtime_error if the radius is too small.
std::vector<LatticeVector> SuccessiveMinima(const LatticeInstance& lattice,
                                            double radius_bound);

struct MinkowskiResult {
  bool found = false;
  LatticeVector witness;
  std::string report;  // filled when no point is found
};

// Nonzero lattice point in the box |x_i| <= half_widths[i]. Throws
// std::invalid_argument unless prod(2 c_i) > 2^n det.
MinkowskiResult MinkowskiWitness(const LatticeInstance& lattice,
                                 const std::vector<double>& half_widths);

// Hermite normal form (upper triangular, positive pivots) of the row
// lattice of an integer matrix; zero rows are dropped.
std::vector<std::vector<Int64>> HermiteNormalForm(std::vector<std::vector<Int64>> rows);

struct IdealLattice {
  std::vector<std::vector<Int64>> z_basis;  // HNF rows, power-basis coords
  Int64 norm = 0;                           // N(I) = [R : I]
  LatticeInstance lattice;                  // sigma(I) in h-coordinates
};

// The ideal of R = Z[x_1..x_l]/(Phi) generated by `generators` (integer
// power-basis coefficient vectors), spanned over Z by generator * monomial.
IdealLattice BuildIdealLattice(const EmbeddingContext& ctx,
                               const std::vector<std::vector<Int64>>& generators,
                               std::string label);

// |discriminant| of the tensor field, as |det sigma(power basis)|^2.
double Discriminant(const EmbeddingContext& ctx);

}  // namespace mrlwe

#endif  // MRLWE_LATTICE_H_
