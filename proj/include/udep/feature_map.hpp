#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "udep/errors.hpp"
#include "udep/pairs.hpp"

namespace udep::feature_map {

// Finite-dimensional map based on windowed steering vectors. The window is
// the Gaussian family tied to a target kernel length scale sigma_b:
//
//   G^2(f) = sqrt(pi) * sigma_b * exp(-(pi * sigma_b * f)^2),
//
// which has unit integral and Fourier transform exp(-(s/sigma_b)^2) -- the
// same Gaussian kernel the production path evaluates in closed form. The
// 2*pi phase convention is used throughout so the large-M limit of the
// Darboux sum is exactly that transform.
struct SteeringConfig {
  int M = 256;             // feature dimension, even, >= 2
  double bandwidth = 1.0;  // target kernel length scale, > 0
};

// M x n complex matrix whose columns are mapped samples.
struct FeatureMatrix {
  Eigen::MatrixXcd values;
};

// M x M complex cross-covariance of mapped samples.
struct CovMatrix {
  Eigen::MatrixXcd values;
};

double window(double f, const SteeringConfig& cfg);

// sum_m (1/sqrt(M)) G^2(m/sqrt(M)); close to 1 when the grid resolves and
// covers the window.
double discrete_window_norm(const SteeringConfig& cfg);

// Mapped sample: element for m in {-M/2, ..., M/2-1} is
// M^(-1/4) G(m/sqrt(M)) exp(i 2 pi (m/sqrt(M)) x), stored at index m + M/2.
Eigen::VectorXcd steer(double x, const SteeringConfig& cfg);

FeatureMatrix map_samples(std::span<const double> xs, const SteeringConfig& cfg);

// Real part of the conjugate-paired inner product of two mapped samples:
// the Darboux sum sum_m (1/sqrt(M)) G^2(m/sqrt(M)) cos(2 pi (m/sqrt(M)) (x - x2)).
// Converges to exp(-((x-x2)/bandwidth)^2) as M grows.
double finite_m_kernel(double x, double x2, const SteeringConfig& cfg);

// (1/(n-1)) sum_l (u_l - mean(u)) (v_l - mean(v))^H over columns.
CovMatrix sample_cov(const FeatureMatrix& u, const FeatureMatrix& v);

double cov_frobenius_sq(const CovMatrix& c);

// (1/K) sum_k ring(u)_k ring(v)_k^H with ring(u)_k = (u_{f1(k)} - u_{f2(k)})/sqrt(2);
// no centering term.
CovMatrix incomplete_cov(const FeatureMatrix& u, const FeatureMatrix& v,
                         const pairs::PairSelection& sel);

}  // namespace udep::feature_map
