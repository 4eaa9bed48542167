#pragma once

#include "sjd/types.hpp"

namespace sjd {

// Standard symplectic form J = [[0, I], [-I, 0]] of size 2n x 2n.
RealMatrix symplectic_form(Eigen::Index two_n);

// Complexification matrices C, C^-1 identifying R^{2n} with C^n.
ComplexMatrix cayley_pairing(Eigen::Index two_n);      // C
ComplexMatrix cayley_pairing_inv(Eigen::Index two_n);  // C^-1

// Membership predicates on the max-norm residual of the defining relation.
bool is_hamiltonian_real(const RealMatrix& X, double tol = kStructureTol);
bool is_symplectic_real(const RealMatrix& M, double tol = kStructureTol);
// g in Sp(n,C) and U(n,n): g^t J g = J and g K g^* = K, K = diag(I, -I).
bool is_sp_complex(const ComplexMatrix& g, double tol = kStructureTol);
// Block form [[p, q], [conj q, conj p]] within tol.
bool has_pq_block_form(const ComplexMatrix& M, double tol = kStructureTol);

double hamiltonian_residual(const RealMatrix& X);
double symplectic_residual(const RealMatrix& M);
double sp_complex_residual(const ComplexMatrix& g);
double pq_block_residual(const ComplexMatrix& M);

// M_C = C^-1 M C; for symplectic input the image satisfies is_sp_complex and
// the blocks obey 2p = a+d+i(b-c), 2q = a-d-i(b+c).
ComplexMatrix complexify(const RealMatrix& M);

// Inverse of complexify. Requires the [[p, q], [conj q, conj p]] block form.
RealMatrix realify(const ComplexMatrix& Mc, double tol = kStructureTol);

// exp(t A) by scaling-and-squaring with Pade approximation.
ComplexMatrix mat_exp(const ComplexMatrix& A, double t = 1.0);
RealMatrix mat_exp(const RealMatrix& A, double t = 1.0);

// Principal matrix logarithm (inverse scaling and squaring).
ComplexMatrix mat_log(const ComplexMatrix& A);

struct StructuredMatrixReport {
  bool is_symmetric = false;
  bool is_hermitian = false;
  bool is_symplectic = false;
  bool is_hamiltonian = false;
  bool is_sp_complex = false;
  double max_violation = 0.0;
};

StructuredMatrixReport structure_report(const ComplexMatrix& M, double tol = kStructureTol);

enum class MatrixKind { Hamiltonian, Symplectic };

struct EigenStructure {
  std::vector<Complex> eigenvalues;
  // Index groups closed under the kind's involutions within kPairingTol.
  std::vector<std::vector<int>> quadruple_pairing;
  bool defect_flag = false;  // eigenvectors fail to span (ill-conditioned basis)
};

// Eigenvalues of a Hamiltonian (resp. symplectic) matrix grouped into
// (lambda, -lambda, conj, -conj) (resp. (lambda, 1/lambda, conj, 1/conj))
// orbits. The membership predicate for `kind` must pass.
EigenStructure eigen_structure(const ComplexMatrix& X, MatrixKind kind,
                               double tol = kStructureTol);
EigenStructure eigen_structure(const RealMatrix& X, MatrixKind kind,
                               double tol = kStructureTol);

// Condition number estimate sigma_max/sigma_min via SVD (small dense only).
double cond2(const ComplexMatrix& A);
// Reciprocal condition number sigma_min/sigma_max.
double rcond2(const ComplexMatrix& A);

// Coefficients of prod (x - lambda_i), highest degree first.
std::vector<Complex> char_poly_from_eigenvalues(const std::vector<Complex>& lambdas);

}  // namespace sjd
