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


#include "mrlwe/embedding.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mrlwe/tensor_poly.h"

namespace mrlwe {

namespace {

template <typename Scalar, typename Matrix>
void ApplyAlongAxis(std::vector<Scalar>& data, const std::vector<size_t>& dims,
                    size_t axis, const Matrix& matrix) {
  const size_t len = dims[axis];
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> fiber(len);
  ForEachFiber(dims, axis, [&](size_t start, size_t stride) {
    for (size_t k = 0; k < len; ++k) fiber(k) = data[start + k * stride];
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out = matrix * fiber;
    for (size_t k = 0; k < len; ++k) data[start + k * stride] = out(k);
  });
}

}  // namespace

DualScale DualScaleFor(const RingParams& params) {
  if (!params.AllPowerOfTwo()) {
    throw std::invalid_argument("dual scaling needs power-of-two conductors");
  }
  return DualScale{1, static_cast<Int64>(params.total_degree())};
}

std::shared_ptr<const EmbeddingContext> EmbeddingContext::Create(
    const RingParams& params) {
  return std::shared_ptr<const EmbeddingContext>(new EmbeddingContext(params));
}

EmbeddingContext::EmbeddingContext(const RingParams& params) : params_(params) {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (size_t i = 0; i < params.dims(); ++i) {
    const Uint64 m = params.moduli()[i];
    const size_t n = params.degrees()[i];
    std::vector<Uint64> units = Units(m);
    Axis axis;
    axis.v.resize(n, n);
    for (size_t r = 0; r < n; ++r) {
      for (size_t c = 0; c < n; ++c) {
        // Reduce the exponent first to keep the angle small and exact.
        Uint64 e = (units[r] * c) % m;
        axis.v(r, c) = std::polar(1.0, 2.0 * std::numbers::pi * e / m);
      }
    }
    axis.v_inv = axis.v.inverse();
    axis.h = Eigen::MatrixXcd::Zero(n, n);
    if (n == 1) {
      axis.h(0, 0) = 1.0;
    } else {
      const size_t half = n / 2;
      for (size_t p = 0; p < half; ++p) {
        size_t partner = n - 1 - p;
        axis.h(p, p) = inv_sqrt2;
        axis.h(partner, p) = inv_sqrt2;
        axis.h(p, p + half) = Complex(0.0, inv_sqrt2);
        axis.h(partner, p + half) = Complex(0.0, -inv_sqrt2);
      }
    }
    axis.to_h = (axis.h.adjoint() * axis.v).real();
    axis.from_h = (axis.v_inv * axis.h).real();
    axes_.push_back(std::move(axis));
    phis_.push_back(CyclotomicPolynomial(m));
  }
}

size_t EmbeddingContext::ConjugateIndex(size_t j) const {
  std::vector<size_t> multi = params_.index().Unmap(j);
  for (size_t i = 0; i < multi.size(); ++i) multi[i] = degrees()[i] - 1 - multi[i];
  return params_.index().Map(multi);
}

ComplexVector EmbeddingContext::Sigma(std::span<const double> coeffs) const {
  if (coeffs.size() != n()) throw std::invalid_argument("Sigma: wrong length");
  ComplexVector v(coeffs.begin(), coeffs.end());
  for (size_t i = 0; i < axes_.size(); ++i) ApplyAlongAxis(v, degrees(), i, axes_[i].v);
  return v;
}

ComplexVector EmbeddingContext::SigmaIntegers(std::span<const Int64> coeffs) const {
  RealVector real(coeffs.begin(), coeffs.end());
  return Sigma(real);
}

RealVector EmbeddingContext::SigmaInverse(std::span<const Complex> v, double tol) const {
  if (v.size() != n()) throw std::invalid_argument("SigmaInverse: wrong length");
  double scale = 1.0;
  for (const Complex& z : v) scale = std::max(scale, std::abs(z));
  for (size_t j = 0; j < v.size(); ++j) {
    if (std::abs(v[j] - std::conj(v[ConjugateIndex(j)])) > tol * scale) {
      throw std::invalid_argument("SigmaInverse: vector is not conjugate symmetric");
    }
  }
  ComplexVector w(v.begin(), v.end());
  for (size_t i = 0; i < axes_.size(); ++i) ApplyAlongAxis(w, degrees(), i, axes_[i].v_inv);
  RealVector out(n());
  for (size_t j = 0; j < n(); ++j) out[j] = w[j].real();
  return out;
}

std::vector<ComplexVector> EmbeddingContext::HBasis() const {
  std::vector<ComplexVector> basis;
  for (size_t j = 0; j < n(); ++j) {
    ComplexVector e(n(), 0.0);
    e[j] = 1.0;
    for (size_t i = 0; i < axes_.size(); ++i) ApplyAlongAxis(e, degrees(), i, axes_[i].h);
    basis.push_back(std::move(e));
  }
  return basis;
}

RealVector EmbeddingContext::CoefficientsToH(std::span<const double> coeffs) const {
  if (coeffs.size() != n()) throw std::invalid_argument("CoefficientsToH: wrong length");
  RealVector v(coeffs.begin(), coeffs.end());
  for (size_t i = 0; i < axes_.size(); ++i) ApplyAlongAxis(v, degrees(), i, axes_[i].to_h);
  return v;
}

RealVector EmbeddingContext::HToCoefficients(std::span<const double> h_coords) const {
  if (h_coords.size() != n()) throw std::invalid_argument("HToCoefficients: wrong length");
  RealVector v(h_coords.begin(), h_coords.end());
  for (size_t i = 0; i < axes_.size(); ++i) ApplyAlongAxis(v, degrees(), i, axes_[i].from_h);
  return v;
}

ComplexVector EmbeddingContext::HToSigma(std::span<const double> h_coords) const {
  if (h_coords.size() != n()) throw std::invalid_argument("HToSigma: wrong length");
  ComplexVector v(h_coords.begin(), h_coords.end());
  for (size_t i = 0; i < axes_.size(); ++i) ApplyAlongAxis(v, degrees(), i, axes_[i].h);
  return v;
}

RealVector EmbeddingContext::Automorphism(std::span<const double> coeffs,
                                          const std::vector<Uint64>& k) const {
  if (k.size() != params_.dims()) throw std::invalid_argument("Automorphism: arity");
  for (size_t i = 0; i < k.size(); ++i) {
    if (Gcd(k[i] % params_.moduli()[i], params_.moduli()[i]) != 1) {
      throw std::invalid_argument("Automorphism: non-unit index");
    }
  }
  return SubstituteMonomials(RealField{}, coeffs, degrees(), params_.moduli(), k, phis_);
}

RealVector EmbeddingContext::Multiply(std::span<const double> a,
                                      std::span<const double> b) const {
  const size_t l = params_.dims();
  std::vector<size_t> dims(l), strides(l);
  size_t size = 1;
  for (size_t i = 0; i < l; ++i) {
    dims[i] = 2 * degrees()[i] - 1;
    strides[i] = size;
    size *= dims[i];
  }
  std::vector<size_t> offset(n());
  for (size_t flat = 0; flat < n(); ++flat) {
    std::vector<size_t> multi = params_.index().Unmap(flat);
    for (size_t i = 0; i < l; ++i) offset[flat] += multi[i] * strides[i];
  }
  RealVector grid(size, 0.0);
  for (size_t i = 0; i < n(); ++i) {
    for (size_t j = 0; j < n(); ++j) grid[offset[i] + offset[j]] += a[i] * b[j];
  }
  for (size_t i = 0; i < l; ++i) grid = ReduceAxis(RealField{}, grid, dims, i, phis_[i]);
  return grid;
}

Eigen::MatrixXcd EmbeddingContext::DenseMatrix() const {
  Eigen::MatrixXcd dense(n(), n());
  for (size_t c = 0; c < n(); ++c) {
    RealVector e(n(), 0.0);
    e[c] = 1.0;
    ComplexVector col = Sigma(e);
    for (size_t r = 0; r < n(); ++r) dense(r, c) = col[r];
  }
  return dense;
}

double LpNorm(std::span<const Complex> v, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("LpNorm: p must be >= 1");
  if (std::isinf(p)) {
    double best = 0.0;
    for (const Complex& z : v) best = std::max(best, std::abs(z));
    return best;
  }
  double sum = 0.0;
  for (const Complex& z : v) sum += std::pow(std::abs(z), p);
  return std::pow(sum, 1.0 / p);
}

double LpNorm(const EmbeddingContext& ctx, std::span<const double> coeffs, double p) {
  ComplexVector v = ctx.Sigma(coeffs);
  return LpNorm(v, p);
}

double Trace(const EmbeddingContext& ctx, std::span<const double> coeffs) {
  Complex sum = 0.0;
  for (const Complex& z : ctx.Sigma(coeffs)) sum += z;
  return sum.real();
}

double NormField(const EmbeddingContext& ctx, std::span<const double> coeffs) {
  Complex product = 1.0;
  for (const Complex& z : ctx.Sigma(coeffs)) product *= z;
  return product.real();
}

DualCheckReport DualLatticeCheck(const RingParams& params, double tol) {
  DualScale scale = DualScaleFor(params);
  if (params.total_degree() > 16) {
    throw std::invalid_argument("DualLatticeCheck: n must be <= 16");
  }
  auto ctx = EmbeddingContext::Create(params);
  Eigen::MatrixXcd b = ctx->DenseMatrix();
  // Columns of d satisfy <b_i, d_j> = delta_ij.
  Eigen::MatrixXcd d = b * (b.adjoint() * b).inverse();
  Eigen::MatrixXcd candidate = b * scale.value();
  Eigen::MatrixXcd change = candidate.inverse() * d.conjugate();
  DualCheckReport report;
  for (Eigen::Index r = 0; r < change.rows(); ++r) {
    for (Eigen::Index c = 0; c < change.cols(); ++c) {
      Complex z = change(r, c);
      double err = std::abs(z - std::round(z.real()));
      report.max_integrality_error = std::max(report.max_integrality_error, err);
    }
  }
  report.determinant_error = std::abs(std::abs(change.determinant()) - 1.0);
  report.passed = report.max_integrality_error <= tol && report.determinant_error <= tol;
  return report;
}

void WriteEmbeddedCsv(std::ostream& out, std::span<const Complex> v) {
  out << "j,re,im\n";
  out.precision(17);
  for (size_t j = 0; j < v.size(); ++j) {
    out << j << ',' << v[j].real() << ',' << v[j].imag() << '\n';
  }
}

}  // namespace mrlwe
