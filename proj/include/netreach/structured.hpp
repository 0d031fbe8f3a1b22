#pragma once

#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "netreach/aggregate.hpp"
#include "netreach/reach.hpp"

namespace netreach {

struct EigenData {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // unit-norm columns
  bool orthonormal = false;
};

/// Orthonormal eigendecomposition of a symmetric matrix.
EigenData symmetric_eigen(const Eigen::MatrixXd& M);

/// Circ(a_0, ..., a_{n-1}): row r is the first row shifted right r times,
/// i.e. entry (r, c) = a_{(c - r) mod n}.
Eigen::MatrixXd circulant_matrix(const Eigen::VectorXd& first_row);

/// Phi[k][l] = w^{kl} / sqrt(n), w = exp(2 pi i / n), 0-based.
Eigen::MatrixXcd fourier_matrix(int n);

/// Symbol values sum_j a_j w^{kj}, k = 0..n-1. These are the eigenvalues
/// of Circ(first_row) with eigenvector column k of Phi.
Eigen::VectorXcd circulant_eigenvalues(const Eigen::VectorXd& first_row);

struct CirculantData {
  Eigen::VectorXd first_row;
  std::complex<double> omega;
  Eigen::MatrixXcd Phi;
  Eigen::VectorXcd Gamma;  // diagonal of symbol values
};

CirculantData circulant_data(const Eigen::VectorXd& first_row);

/// ||M - M^T||_max <= tol * max(1, ||M||_max)
bool is_symmetric(const Eigen::MatrixXd& M, double tol = kDefaultTolerance);

/// First row when every row is the right cyclic shift of the previous one
/// (within tol * max(1, ||M||_max)).
std::optional<Eigen::VectorXd> detect_circulant(const Eigen::MatrixXd& M,
                                                double tol = kDefaultTolerance);

/// Smallest pairwise |lambda_i - lambda_j|; +inf for fewer than two values.
double min_eigen_gap(const Eigen::VectorXcd& eigenvalues);

/// Outcome of a sufficiency test. The test can only ever assert
/// reachability; when it is silent the rank test decides.
struct StructuredVerdict {
  bool applies = false;
  bool hypotheses_hold = false;
  // Circulant only: the projection condition holds but the symbol values
  // repeat, so the implementation declines to assert reachability.
  bool declined_repeated_eigenvalues = false;

  double min_projection = 0.0;       // min |v_i^T b_j| (transpose)
  double min_projection_conj = 0.0;  // min |v_i^H b_j|
  double min_eigen_gap = 0.0;
  double gap_threshold = 0.0;
  double projection_threshold = 0.0;

  std::optional<Verdict> asserted;
  ReachabilityReport cross_check;  // Kalman verdict on (A_f, B_f)
  bool agrees = true;              // asserted (if any) matches cross_check
  std::string detail;
};

/// Symmetric A_f: reachable if the eigenvalues are distinct and every
/// eigenvector has a nonzero projection on every column of B_f.
StructuredVerdict symmetric_sufficiency_test(const AggregateSystem& agg,
                                             double tol = kDefaultTolerance);
StructuredVerdict symmetric_sufficiency_test(const Eigen::MatrixXd& A_f,
                                             const Eigen::MatrixXd& B_f,
                                             double tol = kDefaultTolerance);

/// Circulant A_f: reachable if every Fourier row has a nonzero projection
/// on every column of B_f and the symbol values are distinct.
StructuredVerdict circulant_sufficiency_test(const AggregateSystem& agg,
                                             double tol = kDefaultTolerance);
StructuredVerdict circulant_sufficiency_test(const Eigen::MatrixXd& A_f,
                                             const Eigen::MatrixXd& B_f,
                                             double tol = kDefaultTolerance);

}  // namespace netreach
