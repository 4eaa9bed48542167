#include "sjd/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace sjd {

namespace {

Eigen::Index half_dim(Eigen::Index two_n) {
  require(two_n > 0 && two_n % 2 == 0, "matrix dimension must be even and positive");
  return two_n / 2;
}

double max_abs(const ComplexMatrix& A) { return A.cwiseAbs().maxCoeff(); }
double max_abs(const RealMatrix& A) { return A.cwiseAbs().maxCoeff(); }

}  // namespace

RealMatrix symplectic_form(Eigen::Index two_n) {
  const Eigen::Index n = half_dim(two_n);
  RealMatrix J = RealMatrix::Zero(two_n, two_n);
  J.topRightCorner(n, n) = RealMatrix::Identity(n, n);
  J.bottomLeftCorner(n, n) = -RealMatrix::Identity(n, n);
  return J;
}

ComplexMatrix cayley_pairing(Eigen::Index two_n) {
  const Eigen::Index n = half_dim(two_n);
  ComplexMatrix C = ComplexMatrix::Zero(two_n, two_n);
  C.topLeftCorner(n, n) = kI * ComplexMatrix::Identity(n, n);
  C.topRightCorner(n, n) = kI * ComplexMatrix::Identity(n, n);
  C.bottomLeftCorner(n, n) = -ComplexMatrix::Identity(n, n);
  C.bottomRightCorner(n, n) = ComplexMatrix::Identity(n, n);
  return C;
}

ComplexMatrix cayley_pairing_inv(Eigen::Index two_n) {
  const Eigen::Index n = half_dim(two_n);
  ComplexMatrix Ci = ComplexMatrix::Zero(two_n, two_n);
  Ci.topLeftCorner(n, n) = -0.5 * kI * ComplexMatrix::Identity(n, n);
  Ci.topRightCorner(n, n) = -0.5 * ComplexMatrix::Identity(n, n);
  Ci.bottomLeftCorner(n, n) = -0.5 * kI * ComplexMatrix::Identity(n, n);
  Ci.bottomRightCorner(n, n) = 0.5 * ComplexMatrix::Identity(n, n);
  return Ci;
}

double hamiltonian_residual(const RealMatrix& X) {
  require(X.rows() == X.cols(), "square matrix expected");
  const RealMatrix J = symplectic_form(X.rows());
  return max_abs(RealMatrix(X.transpose() * J + J * X));
}

double symplectic_residual(const RealMatrix& M) {
  require(M.rows() == M.cols(), "square matrix expected");
  const RealMatrix J = symplectic_form(M.rows());
  return max_abs(RealMatrix(M.transpose() * J * M - J));
}

double sp_complex_residual(const ComplexMatrix& g) {
  require(g.rows() == g.cols(), "square matrix expected");
  const Eigen::Index two_n = g.rows();
  const Eigen::Index n = half_dim(two_n);
  const ComplexMatrix J = symplectic_form(two_n).cast<Complex>();
  ComplexMatrix K = ComplexMatrix::Zero(two_n, two_n);
  K.topLeftCorner(n, n) = ComplexMatrix::Identity(n, n);
  K.bottomRightCorner(n, n) = -ComplexMatrix::Identity(n, n);
  const double r_sp = max_abs(ComplexMatrix(g.transpose() * J * g - J));
  const double r_unn = max_abs(ComplexMatrix(g * K * g.adjoint() - K));
  return std::max(r_sp, r_unn);
}

double pq_block_residual(const ComplexMatrix& M) {
  require(M.rows() == M.cols(), "square matrix expected");
  const Eigen::Index n = half_dim(M.rows());
  const ComplexMatrix p = M.topLeftCorner(n, n);
  const ComplexMatrix q = M.topRightCorner(n, n);
  const double r1 = max_abs(ComplexMatrix(M.bottomLeftCorner(n, n) - q.conjugate()));
  const double r2 = max_abs(ComplexMatrix(M.bottomRightCorner(n, n) - p.conjugate()));
  return std::max(r1, r2);
}

bool is_hamiltonian_real(const RealMatrix& X, double tol) {
  return hamiltonian_residual(X) <= tol;
}

bool is_symplectic_real(const RealMatrix& M, double tol) {
  return symplectic_residual(M) <= tol;
}

bool is_sp_complex(const ComplexMatrix& g, double tol) {
  return sp_complex_residual(g) <= tol;
}

bool has_pq_block_form(const ComplexMatrix& M, double tol) {
  return pq_block_residual(M) <= tol;
}

ComplexMatrix complexify(const RealMatrix& M) {
  require(M.rows() == M.cols(), "square matrix expected");
  const Eigen::Index two_n = M.rows();
  return cayley_pairing_inv(two_n) * M.cast<Complex>() * cayley_pairing(two_n);
}

RealMatrix realify(const ComplexMatrix& Mc, double tol) {
  require(Mc.rows() == Mc.cols(), "square matrix expected");
  const double block_res = pq_block_residual(Mc);
  if (block_res > tol) {
    throw StructureError("realify: input lacks the [[p,q],[conj q,conj p]] block form, residual " +
                         std::to_string(block_res));
  }
  const Eigen::Index two_n = Mc.rows();
  const ComplexMatrix M = cayley_pairing(two_n) * Mc * cayley_pairing_inv(two_n);
  return M.real();
}

ComplexMatrix mat_exp(const ComplexMatrix& A, double t) {
  require(A.rows() == A.cols(), "square matrix expected");
  if (!A.allFinite()) throw DomainError("mat_exp: non-finite entries");
  return ComplexMatrix(t * A).exp();
}

RealMatrix mat_exp(const RealMatrix& A, double t) {
  require(A.rows() == A.cols(), "square matrix expected");
  if (!A.allFinite()) throw DomainError("mat_exp: non-finite entries");
  return RealMatrix(t * A).exp();
}

ComplexMatrix mat_log(const ComplexMatrix& A) {
  require(A.rows() == A.cols(), "square matrix expected");
  return A.log();
}

StructuredMatrixReport structure_report(const ComplexMatrix& M, double tol) {
  StructuredMatrixReport rep;
  require(M.rows() == M.cols(), "square matrix expected");
  double worst = 0.0;
  const double r_sym = max_abs(ComplexMatrix(M - M.transpose()));
  const double r_herm = max_abs(ComplexMatrix(M - M.adjoint()));
  rep.is_symmetric = r_sym <= tol;
  rep.is_hermitian = r_herm <= tol;
  if (rep.is_symmetric) worst = std::max(worst, r_sym);
  if (rep.is_hermitian) worst = std::max(worst, r_herm);
  const bool real_input = max_abs(RealMatrix(M.imag())) <= tol;
  if (M.rows() % 2 == 0) {
    if (real_input) {
      const RealMatrix R = M.real();
      const double r_sp = symplectic_residual(R);
      const double r_ham = hamiltonian_residual(R);
      rep.is_symplectic = r_sp <= tol;
      rep.is_hamiltonian = r_ham <= tol;
      if (rep.is_symplectic) worst = std::max(worst, r_sp);
      if (rep.is_hamiltonian) worst = std::max(worst, r_ham);
    }
    const double r_spc = sp_complex_residual(M);
    rep.is_sp_complex = r_spc <= tol;
    if (rep.is_sp_complex) worst = std::max(worst, r_spc);
  }
  rep.max_violation = worst;
  return rep;
}

double cond2(const ComplexMatrix& A) {
  Eigen::JacobiSVD<ComplexMatrix> svd(A);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

double rcond2(const ComplexMatrix& A) {
  Eigen::JacobiSVD<ComplexMatrix> svd(A);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smax <= 0.0) return 0.0;
  return smin / smax;
}

namespace {

// Greedy orbit grouping: pull the largest unused eigenvalue, then absorb the
// nearest unused matches of its images under the involutions.
std::vector<std::vector<int>> group_orbits(const std::vector<Complex>& lam,
                                           MatrixKind kind) {
  const int m = static_cast<int>(lam.size());
  std::vector<bool> used(m, false);
  std::vector<std::vector<int>> groups;
  auto images = [&](Complex v) {
    std::vector<Complex> out;
    if (kind == MatrixKind::Hamiltonian) {
      out = {-v, std::conj(v), -std::conj(v)};
    } else {
      const Complex inv = (std::abs(v) > 0.0) ? Complex(1.0) / v : v;
      out = {inv, std::conj(v), std::conj(inv)};
    }
    return out;
  };
  while (true) {
    int seed = -1;
    double best = -1.0;
    for (int i = 0; i < m; ++i) {
      if (!used[i] && std::abs(lam[i]) > best) {
        best = std::abs(lam[i]);
        seed = i;
      }
    }
    if (seed < 0) break;
    used[seed] = true;
    std::vector<int> group = {seed};
    for (const Complex& target : images(lam[seed])) {
      int pick = -1;
      double dist = kPairingTol;
      for (int i = 0; i < m; ++i) {
        if (used[i]) continue;
        const double d = std::abs(lam[i] - target);
        if (d <= dist) {
          dist = d;
          pick = i;
        }
      }
      if (pick >= 0) {
        used[pick] = true;
        group.push_back(pick);
      }
    }
    std::sort(group.begin(), group.end());
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace

EigenStructure eigen_structure(const ComplexMatrix& X, MatrixKind kind, double tol) {
  require(X.rows() == X.cols(), "square matrix expected");
  const bool real_input = max_abs(RealMatrix(X.imag())) <= tol;
  if (kind == MatrixKind::Hamiltonian) {
    const bool ok = real_input ? is_hamiltonian_real(X.real(), tol)
                               : has_pq_block_form(X, tol);
    if (!ok) throw DomainError("eigen_structure: hamiltonian membership predicate fails");
  } else {
    const bool ok = real_input ? is_symplectic_real(X.real(), tol) : is_sp_complex(X, tol);
    if (!ok) throw DomainError("eigen_structure: symplectic membership predicate fails");
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> es(X, /*computeEigenvectors=*/true);
  EigenStructure s;
  s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + X.rows());
  s.defect_flag = cond2(es.eigenvectors()) > kDiagSolveCondLimit;
  s.quadruple_pairing = group_orbits(s.eigenvalues, kind);
  return s;
}

EigenStructure eigen_structure(const RealMatrix& X, MatrixKind kind, double tol) {
  return eigen_structure(ComplexMatrix(X.cast<Complex>()), kind, tol);
}

std::vector<Complex> char_poly_from_eigenvalues(const std::vector<Complex>& lambdas) {
  std::vector<Complex> coeff = {Complex(1.0)};
  for (const Complex& lam : lambdas) {
    std::vector<Complex> next(coeff.size() + 1, Complex(0.0));
    for (size_t i = 0; i < coeff.size(); ++i) {
      next[i] += coeff[i];
      next[i + 1] -= lam * coeff[i];
    }
    coeff = std::move(next);
  }
  return coeff;
}

}  // namespace sjd
