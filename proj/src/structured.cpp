#include "netreach/structured.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "netreach/errors.hpp"

namespace netreach {

namespace {

double max_abs(const Eigen::MatrixXd& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

double max_column_norm(const Eigen::MatrixXd& B) {
  return B.cols() == 0 ? 0.0 : B.colwise().norm().maxCoeff();
}

void require_square(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw DimensionMismatch("matrix must be square");
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

EigenData symmetric_eigen(const Eigen::MatrixXd& M) {
  require_square(M);
  const Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver failed");
  EigenData data;
  data.eigenvalues = es.eigenvalues().cast<std::complex<double>>();
  data.eigenvectors = es.eigenvectors().cast<std::complex<double>>();
  data.orthonormal = true;
  return data;
}

bool is_symmetric(const Eigen::MatrixXd& M, double tol) {
  require_square(M);
  if (M.size() == 0) return true;
  return max_abs(M - M.transpose()) <= tol * std::max(1.0, max_abs(M));
}

Eigen::MatrixXd circulant_matrix(const Eigen::VectorXd& first_row) {
  const Eigen::Index n = first_row.size();
  Eigen::MatrixXd C(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) C(r, c) = first_row(((c - r) % n + n) % n);
  return C;
}

std::optional<Eigen::VectorXd> detect_circulant(const Eigen::MatrixXd& M, double tol) {
  require_square(M);
  const Eigen::Index n = M.rows();
  if (n == 0) return std::nullopt;
  const double threshold = tol * std::max(1.0, max_abs(M));
  const Eigen::VectorXd row = M.row(0).transpose();
  for (Eigen::Index r = 1; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      if (std::abs(M(r, c) - row(((c - r) % n + n) % n)) > threshold) return std::nullopt;
  return row;
}

Eigen::MatrixXcd fourier_matrix(int n) {
  if (n < 1) throw DimensionMismatch("Fourier matrix order must be >= 1");
  Eigen::MatrixXcd Phi(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      // Reduce the exponent first so large k*l keeps full accuracy.
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * l) % n) / n;
      Phi(k, l) = std::polar(scale, angle);
    }
  }
  return Phi;
}

Eigen::VectorXcd circulant_eigenvalues(const Eigen::VectorXd& first_row) {
  const Eigen::Index n = first_row.size();
  if (n == 0) throw DimensionMismatch("circulant first row must be nonempty");
  Eigen::VectorXcd values(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    std::complex<double> sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * j) % n) / n;
      sum += first_row(j) * std::polar(1.0, angle);
    }
    values(k) = sum;
  }
  return values;
}

CirculantData circulant_data(const Eigen::VectorXd& first_row) {
  const int n = static_cast<int>(first_row.size());
  CirculantData data;
  data.first_row = first_row;
  data.omega = std::polar(1.0, 2.0 * std::numbers::pi / n);
  data.Phi = fourier_matrix(n);
  data.Gamma = circulant_eigenvalues(first_row);
  return data;
}

double min_eigen_gap(const Eigen::VectorXcd& eigenvalues) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    for (Eigen::Index j = i + 1; j < eigenvalues.size(); ++j)
      gap = std::min(gap, std::abs(eigenvalues(i) - eigenvalues(j)));
  return gap;
}

namespace {

// Fills the projection and gap margins for left vectors `rows` (one per
// eigenvalue) against the columns of B.
void fill_margins(StructuredVerdict& v, const Eigen::MatrixXcd& rows,
                  const Eigen::VectorXcd& eigenvalues, const Eigen::MatrixXd& B,
                  double tol) {
  const Eigen::MatrixXcd Bc = B.cast<std::complex<double>>();
  const Eigen::MatrixXcd proj = rows * Bc;
  const Eigen::MatrixXcd proj_conj = rows.conjugate() * Bc;
  v.min_projection = proj.size() == 0 ? 0.0 : proj.cwiseAbs().minCoeff();
  v.min_projection_conj = proj_conj.size() == 0 ? 0.0 : proj_conj.cwiseAbs().minCoeff();
  v.min_eigen_gap = min_eigen_gap(eigenvalues);
  const double radius = eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
  v.gap_threshold = tol * std::max(1.0, radius);
  v.projection_threshold = tol * std::max(1.0, max_column_norm(B));
}

void finish(StructuredVerdict& v) {
  if (v.applies && v.hypotheses_hold) {
    v.asserted = Verdict::Reachable;
    v.agrees = v.cross_check.reachable();
  }
}

}  // namespace

StructuredVerdict symmetric_sufficiency_test(const Eigen::MatrixXd& A_f,
                                             const Eigen::MatrixXd& B_f, double tol) {
  require_square(A_f);
  StructuredVerdict v;
  v.cross_check = kalman_test(A_f, B_f, tol);
  v.applies = is_symmetric(A_f, tol);
  if (!v.applies) {
    v.detail = "A_f is not symmetric";
    return v;
  }
  const EigenData eig = symmetric_eigen(A_f);
  // Rows are the transposed eigenvectors nu_i^T.
  fill_margins(v, eig.eigenvectors.transpose(), eig.eigenvalues, B_f, tol);
  const bool distinct = v.min_eigen_gap > v.gap_threshold;
  const bool projections = B_f.cols() > 0 && v.min_projection > v.projection_threshold;
  v.hypotheses_hold = distinct && projections;
  if (v.hypotheses_hold) {
    v.detail = "symmetric A_f with distinct eigenvalues and nonzero eigenvector projections";
  } else if (!distinct) {
    v.detail = "symmetric A_f with repeated eigenvalues (gap " +
               format_double(v.min_eigen_gap) + "); test is silent";
  } else {
    v.detail = "an eigenvector is orthogonal to a column of B_f (min |nu^T b| = " +
               format_double(v.min_projection) + "); test is silent";
  }
  finish(v);
  return v;
}

StructuredVerdict symmetric_sufficiency_test(const AggregateSystem& agg, double tol) {
  return symmetric_sufficiency_test(agg.A_f, agg.B_f, tol);
}

StructuredVerdict circulant_sufficiency_test(const Eigen::MatrixXd& A_f,
                                             const Eigen::MatrixXd& B_f, double tol) {
  require_square(A_f);
  StructuredVerdict v;
  v.cross_check = kalman_test(A_f, B_f, tol);
  const auto row = detect_circulant(A_f, tol);
  v.applies = row.has_value();
  if (!v.applies) {
    v.detail = "A_f is not circulant";
    return v;
  }
  const CirculantData data = circulant_data(*row);
  fill_margins(v, data.Phi, data.Gamma, B_f, tol);
  const bool projections = B_f.cols() > 0 && v.min_projection > v.projection_threshold;
  const bool distinct = v.min_eigen_gap > v.gap_threshold;
  v.hypotheses_hold = projections && distinct;
  v.declined_repeated_eigenvalues = projections && !distinct;
  if (v.hypotheses_hold) {
    v.detail = "circulant A_f with nonzero Fourier projections and distinct symbol values";
  } else if (v.declined_repeated_eigenvalues) {
    v.detail = "Fourier projection condition met but symbol values repeat (gap " +
               format_double(v.min_eigen_gap) + "); declining to assert reachability";
  } else {
    v.detail = "a Fourier row is orthogonal to a column of B_f (min |phi^T b| = " +
               format_double(v.min_projection) + "); test is silent";
  }
  finish(v);
  return v;
}

StructuredVerdict circulant_sufficiency_test(const AggregateSystem& agg, double tol) {
  return circulant_sufficiency_test(agg.A_f, agg.B_f, tol);
}

}  // namespace netreach
