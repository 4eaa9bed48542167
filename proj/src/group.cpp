#include "sjd/group.hpp"

#include "sjd/linalg.hpp"

#include <cmath>

namespace sjd {

namespace {

ComplexMatrix solve_left(const ComplexMatrix& A, const ComplexMatrix& B,
                         const char* where) {
  // A^-1 B with a singularity guard; admissible inputs keep A invertible.
  Eigen::FullPivLU<ComplexMatrix> lu(A);
  if (!lu.isInvertible()) throw SingularityError(std::string(where) + ": singular resolvent");
  return lu.solve(B);
}

double heisenberg_phase(const ComplexVector& a, const ComplexVector& b) {
  // theta_h(a, b) = Im(sum a_i conj(b_i))
  return (a.dot(b)).imag() * -1.0;  // Eigen dot conjugates the first argument
}

}  // namespace

ComplexMatrix JacobiElementC::g() const {
  const Eigen::Index n = dim();
  ComplexMatrix G(2 * n, 2 * n);
  G.topLeftCorner(n, n) = p;
  G.topRightCorner(n, n) = q;
  G.bottomLeftCorner(n, n) = q.conjugate();
  G.bottomRightCorner(n, n) = p.conjugate();
  return G;
}

JacobiElementC JacobiElementC::identity(Eigen::Index n) {
  JacobiElementC e;
  e.p = ComplexMatrix::Identity(n, n);
  e.q = ComplexMatrix::Zero(n, n);
  e.alpha = ComplexVector::Zero(n);
  e.t = 0.0;
  return e;
}

JacobiElementC JacobiElementC::from_matrix(const ComplexMatrix& g,
                                           const ComplexVector& alpha, double t,
                                           double tol) {
  if (!is_sp_complex(g, tol) || !has_pq_block_form(g, tol)) {
    throw DomainError("JacobiElementC: symplectic part fails Sp(n,R)_C membership");
  }
  const Eigen::Index n = g.rows() / 2;
  JacobiElementC h;
  h.p = g.topLeftCorner(n, n);
  h.q = g.topRightCorner(n, n);
  h.alpha = alpha;
  h.t = t;
  return h;
}

JacobiElementR JacobiElementR::identity(Eigen::Index n) {
  JacobiElementR e;
  e.g = RealMatrix::Identity(2 * n, 2 * n);
  e.lam_mu = RealVector::Zero(2 * n);
  e.kappa = 0.0;
  return e;
}

JacobiElementR JacobiElementR::make(const RealMatrix& g, const RealVector& lam_mu,
                                    double kappa, double tol) {
  if (!is_symplectic_real(g, tol)) {
    throw DomainError("JacobiElementR: symplectic part fails Sp(n,R) membership");
  }
  require(lam_mu.size() == g.rows(), "translation vector must have length 2n");
  return JacobiElementR{g, lam_mu, kappa};
}

JacobiElementC theta(const JacobiElementR& h, double tol) {
  if (!is_symplectic_real(h.g, tol)) {
    throw DomainError("theta: symplectic part fails Sp(n,R) membership");
  }
  const ComplexMatrix gc = complexify(h.g);
  const ComplexVector alpha =
      h.trans_m().cast<Complex>() + kI * h.trans_n().cast<Complex>();
  return JacobiElementC::from_matrix(gc, alpha, h.kappa, tol);
}

JacobiBallPoint act_ball(const JacobiElementC& h, const JacobiBallPoint& x) {
  const Eigen::Index n = x.dim();
  require(h.dim() == n, "element/point dimension mismatch");
  const ComplexMatrix W = x.W.W;
  // W1 = (pW + q)(conj(q) W + conj(p))^-1 as a right solve.
  const ComplexMatrix num = h.p * W + h.q;
  const ComplexMatrix den = h.q.conjugate() * W + h.p.conjugate();
  const ComplexMatrix W1 =
      solve_left(den.transpose(), ComplexMatrix(num.transpose()), "act_ball").transpose();
  const ComplexMatrix res = W * h.q.adjoint() + h.p.adjoint();
  const ComplexVector z1 = solve_left(
      res, ComplexMatrix(x.z + h.alpha - W * h.alpha.conjugate()), "act_ball");
  return JacobiBallPoint{z1, SiegelBallPoint{0.5 * (W1 + W1.transpose())}};
}

JacobiUpperPoint act_upper(const JacobiElementR& h, const JacobiUpperPoint& x) {
  const Eigen::Index n = x.dim();
  require(h.dim() == n, "element/point dimension mismatch");
  const ComplexMatrix a = h.g.topLeftCorner(n, n).cast<Complex>();
  const ComplexMatrix b = h.g.topRightCorner(n, n).cast<Complex>();
  const ComplexMatrix c = h.g.bottomLeftCorner(n, n).cast<Complex>();
  const ComplexMatrix d = h.g.bottomRightCorner(n, n).cast<Complex>();
  const ComplexMatrix v = x.v.v;
  const ComplexMatrix v1t =
      solve_left(ComplexMatrix((c * v + d).transpose()),
                 ComplexMatrix((a * v + b).transpose()), "act_upper");
  const ComplexMatrix res = v * c.transpose() + d.transpose();
  const ComplexVector rhs = x.u + v * h.trans_n().cast<Complex>() +
                            h.trans_m().cast<Complex>();
  const ComplexVector u1 = solve_left(res, ComplexMatrix(rhs), "act_upper");
  JacobiUpperPoint out;
  out.v = SiegelUpperPoint{0.5 * (v1t.transpose() + v1t)};
  out.u = u1;
  return out;
}

EtaBallPoint act_eta(const JacobiElementC& h, const EtaBallPoint& p) {
  const JacobiBallPoint moved =
      act_ball(h, JacobiBallPoint{ComplexVector::Zero(p.dim()), p.W});
  EtaBallPoint out;
  out.W = moved.W;
  out.eta = h.p * (p.eta + h.alpha) + h.q * (p.eta.conjugate() + h.alpha.conjugate());
  return out;
}

JacobiElementC compose_c(const JacobiElementC& h1, const JacobiElementC& h2) {
  const Eigen::Index n = h1.dim();
  require(h2.dim() == n, "element dimension mismatch");
  // g2^-1 . alpha1 = p2^* alpha1 - q2^t conj(alpha1)
  const ComplexVector moved =
      h2.p.adjoint() * h1.alpha - h2.q.transpose() * h1.alpha.conjugate();
  JacobiElementC out;
  out.p = h1.p * h2.p + h1.q * h2.q.conjugate();
  out.q = h1.p * h2.q + h1.q * h2.p.conjugate();
  out.alpha = moved + h2.alpha;
  out.t = h1.t + h2.t + heisenberg_phase(moved, h2.alpha);
  return out;
}

JacobiElementR compose_r(const JacobiElementR& h1, const JacobiElementR& h2) {
  require(h1.g.rows() == h2.g.rows(), "element dimension mismatch");
  const RealMatrix J = symplectic_form(h1.g.rows());
  JacobiElementR out;
  out.g = h1.g * h2.g;
  const RealVector moved = h2.g.transpose() * h1.lam_mu;  // row vector X * M'
  out.lam_mu = moved + h2.lam_mu;
  out.kappa = h1.kappa + h2.kappa + moved.dot(J * h2.lam_mu);
  return out;
}

JacobiElementC inverse_c(const JacobiElementC& h) {
  // g^-1 in Sp(n,R)_C has blocks (p^*, -q^t); the translation part is -g.alpha.
  JacobiElementC out;
  out.p = h.p.adjoint();
  out.q = -h.q.transpose();
  out.alpha = -(h.p * h.alpha + h.q * h.alpha.conjugate());
  out.t = -h.t;
  return out;
}

Complex multiplier(const JacobiElementC& h, const JacobiBallPoint& x, double k,
                   Diagnostics* diag) {
  if (!(k > 0.0)) throw DomainError("multiplier: k must be positive");
  const ComplexMatrix W = x.W.W;
  const ComplexMatrix res = W * h.q.adjoint() + h.p.adjoint();
  const Complex det = res.determinant();
  if (det.real() < 0.0 && std::abs(det.imag()) <= 1e-9 * std::abs(det)) {
    if (diag != nullptr) diag->flag_branch("multiplier");
  }
  const Complex power = std::exp(-(k / 2.0) * std::log(det));
  const ComplexVector eta = fc_inv(x).eta;
  const ComplexVector eta1 =
      h.p * (h.alpha + eta) + h.q * (h.alpha.conjugate() + eta.conjugate());
  const JacobiBallPoint x1 = act_ball(h, x);
  const Complex f = 0.5 * (eta.conjugate().transpose() * x.z).value() -
                    0.5 * (eta1.conjugate().transpose() * x1.z).value();
  const double phase = heisenberg_phase(h.alpha, eta);
  return power * std::exp(f) * std::exp(kI * phase);
}

JacobiElementR random_element_r(Eigen::Index n, std::uint64_t seed) {
  const RealMatrix A = random_real_matrix(n, n, seed);
  const RealMatrix B0 = random_real_matrix(n, n, seed + 1);
  const RealMatrix C0 = random_real_matrix(n, n, seed + 2);
  RealMatrix X(2 * n, 2 * n);
  X.topLeftCorner(n, n) = A;
  X.topRightCorner(n, n) = 0.5 * (B0 + B0.transpose());
  X.bottomLeftCorner(n, n) = 0.5 * (C0 + C0.transpose());
  X.bottomRightCorner(n, n) = -A.transpose();
  Eigen::JacobiSVD<RealMatrix> svd(X);
  const double norm = svd.singularValues().maxCoeff();
  if (norm > 1.0) X /= norm;
  JacobiElementR h;
  h.g = mat_exp(X);
  h.lam_mu = random_real_matrix(2 * n, 1, seed + 3).col(0);
  h.kappa = random_real_matrix(1, 1, seed + 4)(0, 0);
  return h;
}

JacobiElementC random_element_c(Eigen::Index n, std::uint64_t seed) {
  const JacobiElementR hr = random_element_r(n, seed);
  JacobiElementC h = theta(hr);
  h.alpha = random_complex_vector(n, seed + 5);
  h.t = hr.kappa;
  return h;
}

}  // namespace sjd
