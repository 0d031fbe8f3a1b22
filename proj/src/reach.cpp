#include "netreach/reach.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "netreach/errors.hpp"

namespace netreach {

const char* to_string(Verdict verdict) {
  return verdict == Verdict::Reachable ? "reachable" : "unreachable";
}

const char* to_string(Method method) {
  switch (method) {
    case Method::KalmanRank: return "kalman";
    case Method::PBH: return "pbh";
    case Method::Gramian: return "gramian";
  }
  return "unknown";
}

namespace {

void require_square(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.rows() != A.cols()) {
    throw DimensionMismatch("state matrix must be square, got " +
                            std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
  }
  if (B.rows() != A.rows()) {
    throw DimensionMismatch("input matrix has " + std::to_string(B.rows()) +
                            " rows, expected " + std::to_string(A.rows()));
  }
}

int count_above(const Eigen::VectorXd& sv, double tol) {
  if (sv.size() == 0) return 0;
  const double threshold = tol * std::max(1.0, sv(0));
  return static_cast<int>((sv.array() > threshold).count());
}

ReachabilityReport make_report(Method method, const RankResult& r, int n, double tol) {
  ReachabilityReport rep;
  rep.method = method;
  rep.rank = r.rank;
  rep.state_dim = n;
  rep.singular_values = r.singular_values;
  rep.tolerance = tol;
  rep.verdict = r.rank == n ? Verdict::Reachable : Verdict::Unreachable;
  return rep;
}

}  // namespace

RankResult numerical_rank(const Eigen::MatrixXd& M, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("rank tolerance must be positive");
  if (!M.allFinite()) throw NumericalFailure("matrix has non-finite entries");
  RankResult out;
  if (M.size() == 0) return out;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const Eigen::VectorXd sv = svd.singularValues();
  if (!sv.allFinite()) throw NumericalFailure("SVD produced non-finite singular values");
  out.rank = count_above(sv, tol);
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  return out;
}

Eigen::MatrixXd krylov_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                              int blocks) {
  require_square(A, B);
  const Eigen::Index m = B.cols();
  Eigen::MatrixXd K(A.rows(), m * std::max(blocks, 0));
  if (blocks <= 0) return K;
  K.leftCols(m) = B;
  for (int k = 1; k < blocks; ++k) {
    K.middleCols(k * m, m) = A * K.middleCols((k - 1) * m, m);
  }
  return K;
}

Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  return krylov_matrix(A, B, static_cast<int>(A.rows()));
}

Eigen::MatrixXd reachability_gramian(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                     int steps) {
  require_square(A, B);
  if (steps < 1) throw DimensionMismatch("Gramian horizon must be >= 1");
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(A.rows(), A.rows());
  Eigen::MatrixXd AkB = B;
  for (int t = 0; t < steps; ++t) {
    W.noalias() += AkB * AkB.transpose();
    if (t + 1 < steps) AkB = A * AkB;
  }
  // Exact symmetry for downstream eigen/SVD use.
  return 0.5 * (W + W.transpose());
}

Eigen::MatrixXd gramian_factor(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               int steps) {
  require_square(A, B);
  if (steps < 1) throw DimensionMismatch("Gramian horizon must be >= 1");
  const Eigen::Index n = A.rows(), m = B.cols();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd M(n, n + m);
  for (int t = 0; t < steps; ++t) {
    // W_{t+1} = A W_t A^T + B B^T = M M^T with M = [A L_t, B].
    M << A * L, B;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(M.transpose());
    const Eigen::MatrixXd R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    L = R.transpose();
  }
  return L;
}

ReachabilityReport kalman_test(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               double tol) {
  const int n = static_cast<int>(A.rows());
  return make_report(Method::KalmanRank, numerical_rank(controllability_matrix(A, B), tol),
                     n, tol);
}

ReachabilityReport gramian_test(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                double tol) {
  const int n = static_cast<int>(A.rows());
  if (n == 0) return make_report(Method::Gramian, {}, 0, tol);
  return make_report(Method::Gramian, numerical_rank(gramian_factor(A, B, n), tol), n, tol);
}

ReachabilityReport pbh_test(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double tol) {
  require_square(A, B);
  if (!(tol > 0)) throw std::invalid_argument("rank tolerance must be positive");
  if (!A.allFinite() || !B.allFinite()) throw NumericalFailure("non-finite system matrices");
  const int n = static_cast<int>(A.rows());
  const Eigen::Index m = B.cols();

  ReachabilityReport rep;
  rep.method = Method::PBH;
  rep.state_dim = n;
  rep.tolerance = tol;
  rep.rank = n;
  if (n == 0) {
    rep.verdict = Verdict::Reachable;
    return rep;
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  const Eigen::VectorXcd lambda = es.eigenvalues();

  // singular_values holds the smallest singular value of each pencil.
  double worst = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd pencil(n, n + m);
  pencil.rightCols(m) = B.cast<std::complex<double>>();
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    pencil.leftCols(n) = -A.cast<std::complex<double>>();
    pencil.leftCols(n).diagonal().array() += lambda(k);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pencil, Eigen::ComputeFullU);
    const Eigen::VectorXd sv = svd.singularValues();
    if (!sv.allFinite()) throw NumericalFailure("SVD produced non-finite singular values");
    const int r = count_above(sv, tol);
    rep.singular_values.push_back(sv(n - 1));
    if (r < rep.rank || (r == rep.rank && r < n && sv(n - 1) < worst)) {
      rep.rank = std::min(rep.rank, r);
      worst = sv(n - 1);
      rep.witness = svd.matrixU().col(n - 1);
      rep.witness_eigenvalue = lambda(k);
    }
  }
  std::sort(rep.singular_values.begin(), rep.singular_values.end(), std::greater<>());
  rep.verdict = rep.rank == n ? Verdict::Reachable : Verdict::Unreachable;
  return rep;
}

ReachabilityReport test_reachability(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                     Method method, double tol) {
  switch (method) {
    case Method::KalmanRank: return kalman_test(A, B, tol);
    case Method::PBH: return pbh_test(A, B, tol);
    case Method::Gramian: return gramian_test(A, B, tol);
  }
  throw std::invalid_argument("unknown reachability method");
}

ReachabilityReport is_leader_reachable(const AggregateSystem& agg, double tol, Method method) {
  return test_reachability(agg.A_f, agg.B_f, method, tol);
}

ReachabilityReport is_base_reachable(const AggregateSystem& agg, double tol, Method method) {
  return test_reachability(agg.A_l, agg.B_l, method, tol);
}

}  // namespace netreach
