#include "npdg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "npdg/error.hpp"

namespace npdg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNotStabilizable: return "NotStabilizable";
    case ErrorKind::kMaxIterations: return "MaxIterations";
    case ErrorKind::kDiverged: return "Diverged";
    case ErrorKind::kBlockMismatch: return "BlockMismatch";
    case ErrorKind::kNotNormalized: return "NotNormalized";
    case ErrorKind::kNonFinite: return "NonFinite";
    case ErrorKind::kGridInvalid: return "GridInvalid";
    case ErrorKind::kGridMismatch: return "GridMismatch";
    case ErrorKind::kPartitionInvalid: return "PartitionInvalid";
    case ErrorKind::kParse: return "Parse";
  }
  return "Unknown";
}

namespace linalg {

namespace {

// Power iteration on a symmetric positive semi-definite matrix, returning the
// Rayleigh quotient of the final iterate. Returns a negative value if the
// start vector was annihilated.
double dominant_eigenvalue_psd(const Matrix& gram, Vector v, const PowerIterationOptions& options) {
  double lambda = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    Vector w = gram * v;
    const double norm = w.norm();
    if (norm == 0.0) {
      return it == 0 ? -1.0 : lambda;
    }
    const double next = v.dot(w);
    v = w / norm;
    if (it > 0 && std::abs(next - lambda) <= options.tolerance * std::max(next, 1e-300)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  // Rayleigh quotient of the final unit iterate.
  return std::max(lambda, v.dot(gram * v));
}

}  // namespace

double spectral_norm(const Matrix& m, const PowerIterationOptions& options) {
  if (m.size() == 0) {
    return 0.0;
  }
  if (m.rows() == 1 || m.cols() == 1) {
    return m.norm();
  }
  // Work with the smaller Gram matrix.
  const Matrix gram = m.rows() < m.cols() ? Matrix(m * m.transpose()) : Matrix(m.transpose() * m);
  const Index k = gram.rows();
  if (gram.cwiseAbs().maxCoeff() == 0.0) {
    return 0.0;
  }

  Vector start = Vector::Ones(k) / std::sqrt(static_cast<double>(k));
  double lambda = dominant_eigenvalue_psd(gram, start, options);
  for (Index j = 0; lambda < 0.0 && j < k; ++j) {
    lambda = dominant_eigenvalue_psd(gram, Vector::Unit(k, j), options);
  }
  return std::sqrt(std::max(lambda, 0.0));
}

double frobenius_norm(const Matrix& m) { return m.norm(); }

double spectral_abscissa(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "spectral abscissa needs a square matrix");
  }
  if (m.size() == 0) {
    return -std::numeric_limits<double>::infinity();
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(m), false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kNonFinite, "eigenvalue computation failed");
  }
  return solver.eigenvalues().real().maxCoeff();
}

bool is_hurwitz(const Matrix& m, double margin) { return spectral_abscissa(m) < -margin; }

Matrix solve_lyapunov(const Matrix& a, const Matrix& c) {
  const Index n = a.rows();
  if (a.cols() != n || c.rows() != n || c.cols() != n) {
    throw Error(ErrorKind::kDimensionMismatch, "Lyapunov operands must be n x n");
  }
  // Unknown X(i, j) lives at row-major position i * n + j.
  //   (A^T X)(i, j) = sum_k A(k, i) X(k, j)
  //   (X A)(i, j)   = sum_k X(i, k) A(k, j)
  const Index nn = n * n;
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(nn, nn);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Index row = i * n + j;
      for (Index k = 0; k < n; ++k) {
        op(row, k * n + j) += a(k, i);
        op(row, i * n + k) += a(k, j);
      }
    }
  }
  Eigen::VectorXd rhs(nn);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      rhs(i * n + j) = -c(i, j);
    }
  }
  const Eigen::VectorXd sol = op.partialPivLu().solve(rhs);
  Matrix x(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      x(i, j) = sol(i * n + j);
    }
  }
  if (!all_finite(x)) {
    throw Error(ErrorKind::kNonFinite, "singular Lyapunov operator");
  }
  return is_symmetric(c) ? symmetrize(x) : x;
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) {
    return false;
  }
  const Matrix skew = m - m.transpose();
  return spectral_norm(skew) <= rel_tol * (1.0 + spectral_norm(m));
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace linalg
}  // namespace npdg
