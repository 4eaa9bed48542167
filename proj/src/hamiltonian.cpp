#include "sjd/hamiltonian.hpp"

#include "sjd/domains.hpp"

#include <algorithm>

namespace sjd {

double LinearHamiltonian::hermiticity_residual() const {
  const Eigen::Index n = dim();
  require(eps0.rows() == n && eps0.cols() == n && epsm.rows() == n &&
              epsm.cols() == n && epsp.rows() == n && epsp.cols() == n,
          "coefficient dimensions inconsistent");
  double r = (eps0 - eps0.adjoint()).cwiseAbs().maxCoeff();
  r = std::max(r, (epsm - epsm.transpose()).cwiseAbs().maxCoeff());
  r = std::max(r, (epsp - epsp.transpose()).cwiseAbs().maxCoeff());
  r = std::max(r, (epsp - epsm.conjugate()).cwiseAbs().maxCoeff());
  return r;
}

void LinearHamiltonian::validate(double tol) const {
  if (!(k > 0.0)) throw DomainError("LinearHamiltonian: k must be positive");
  const double r = hermiticity_residual();
  if (r > tol) {
    throw DomainError("LinearHamiltonian: hermiticity residual " + std::to_string(r));
  }
}

LinearHamiltonian LinearHamiltonian::zero(Eigen::Index n, double k) {
  LinearHamiltonian H;
  H.eps = ComplexVector::Zero(n);
  H.eps0 = ComplexMatrix::Zero(n, n);
  H.epsm = ComplexMatrix::Zero(n, n);
  H.epsp = ComplexMatrix::Zero(n, n);
  H.k = k;
  return H;
}

LinearHamiltonian LinearHamiltonian::random(Eigen::Index n, std::uint64_t seed,
                                            double k) {
  LinearHamiltonian H;
  H.eps = random_complex_vector(n, seed);
  const ComplexMatrix G0 = random_complex_matrix(n, n, seed + 1);
  H.eps0 = 0.5 * (G0 + G0.adjoint());
  const ComplexMatrix Gm = random_complex_matrix(n, n, seed + 2);
  H.epsm = 0.5 * (Gm + Gm.transpose());
  H.epsp = H.epsm.conjugate();
  H.k = k;
  return H;
}

}  // namespace sjd
