#pragma once

#include "sjd/types.hpp"

namespace sjd {

// Coefficients of a Hamiltonian linear in the Jacobi-group generators:
// H = eps.a + conj(eps).a^dag + eps0.K0 + epsm.K- + epsp.K+.
// Hermiticity requires eps0 = eps0^*, epsm = epsm^t, epsp = epsp^t and
// epsp = conj(epsm).
struct LinearHamiltonian {
  ComplexVector eps;
  ComplexMatrix eps0;
  ComplexMatrix epsm;
  ComplexMatrix epsp;
  double k = 2.0;

  Eigen::Index dim() const { return eps.size(); }

  // Max-norm residual of the hermiticity constraints.
  double hermiticity_residual() const;
  void validate(double tol = kStructureTol) const;

  // Real splits eps_- = m + i n, eps0^t / 2 = p + i q (m, n, p symmetric,
  // q antisymmetric) used by the upper-half-plane and eta systems.
  RealMatrix split_m() const { return epsm.real(); }
  RealMatrix split_n() const { return epsm.imag(); }
  RealMatrix split_p() const { return 0.5 * eps0.transpose().real(); }
  RealMatrix split_q() const { return 0.5 * eps0.transpose().imag(); }

  static LinearHamiltonian zero(Eigen::Index n, double k = 2.0);
  // Deterministic random hermitian coefficient set.
  static LinearHamiltonian random(Eigen::Index n, std::uint64_t seed, double k = 2.0);
};

}  // namespace sjd
