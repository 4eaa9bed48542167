#pragma once

#include "sjd/domains.hpp"
#include "sjd/types.hpp"

namespace sjd {

// Element of the complexified Jacobi group: g = [[p, q], [conj q, conj p]] in
// Sp(n,R)_C, Heisenberg translation alpha, central parameter t.
struct JacobiElementC {
  ComplexMatrix p;
  ComplexMatrix q;
  ComplexVector alpha;
  double t = 0.0;

  Eigen::Index dim() const { return p.rows(); }
  ComplexMatrix g() const;

  static JacobiElementC identity(Eigen::Index n);
  static JacobiElementC from_matrix(const ComplexMatrix& g, const ComplexVector& alpha,
                                    double t, double tol = kStructureTol);
};

// Element of the real Jacobi group: symplectic g with blocks (a,b,c,d),
// translation row vector (n, m), central parameter kappa.
struct JacobiElementR {
  RealMatrix g;
  RealVector lam_mu;  // (n_1..n_n, m_1..m_n)
  double kappa = 0.0;

  Eigen::Index dim() const { return g.rows() / 2; }
  RealVector trans_n() const { return lam_mu.head(dim()); }
  RealVector trans_m() const { return lam_mu.tail(dim()); }

  static JacobiElementR identity(Eigen::Index n);
  static JacobiElementR make(const RealMatrix& g, const RealVector& lam_mu,
                             double kappa, double tol = kStructureTol);
};

// Group isomorphism Theta: symplectic part complexified, alpha = m + i n.
JacobiElementC theta(const JacobiElementR& h, double tol = kStructureTol);

// Holomorphic actions on the coordinate charts.
JacobiBallPoint act_ball(const JacobiElementC& h, const JacobiBallPoint& x);
JacobiUpperPoint act_upper(const JacobiElementR& h, const JacobiUpperPoint& x);
EtaBallPoint act_eta(const JacobiElementC& h, const EtaBallPoint& p);

// Composition laws; the central parameter acts trivially on the charts but
// composes through the Heisenberg cocycle.
JacobiElementC compose_c(const JacobiElementC& h1, const JacobiElementC& h2);
JacobiElementR compose_r(const JacobiElementR& h1, const JacobiElementR& h2);

JacobiElementC inverse_c(const JacobiElementC& h);

// Projective multiplier lambda(h; x) with principal branch of the fractional
// determinant power. diag->branch_flag is set when the determinant lands near
// the negative real axis.
Complex multiplier(const JacobiElementC& h, const JacobiBallPoint& x, double k,
                   Diagnostics* diag = nullptr);

// Random elements with membership by construction: symplectic part is the
// exponential of a Hamiltonian matrix with spectral norm <= 1.
JacobiElementR random_element_r(Eigen::Index n, std::uint64_t seed);
JacobiElementC random_element_c(Eigen::Index n, std::uint64_t seed);

}  // namespace sjd
