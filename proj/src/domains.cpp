#include "sjd/domains.hpp"

#include "sjd/linalg.hpp"

#include <cmath>
#include <random>

namespace sjd {

namespace {

// Solve A x = b through a rank-revealing decomposition, reporting poor
// conditioning through diag instead of failing (boundary-adjacent calls).
ComplexMatrix guarded_solve(const ComplexMatrix& A, const ComplexMatrix& b,
                            Diagnostics* diag, const char* where) {
  const double rc = rcond2(A);
  if (rc <= 0.0) throw SingularityError(std::string(where) + ": singular matrix");
  if (diag != nullptr && rc < kRcondWarn) diag->warn_conditioning(rc, where);
  return A.fullPivLu().solve(b);
}

ComplexMatrix herm_part(const ComplexMatrix& A) { return 0.5 * (A + A.adjoint()); }

double min_herm_eigenvalue(const ComplexMatrix& A) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm_part(A),
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

double ball_margin(const ComplexMatrix& W) {
  const ComplexMatrix gram =
      ComplexMatrix::Identity(W.rows(), W.cols()) - W * W.conjugate();
  return min_herm_eigenvalue(gram);
}

bool ball_contains(const ComplexMatrix& W, double margin, double tol) {
  if (W.rows() != W.cols()) return false;
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  return ball_margin(W) >= margin;
}

double upper_margin(const ComplexMatrix& v) {
  return min_herm_eigenvalue(v.imag().cast<Complex>());
}

bool upper_contains(const ComplexMatrix& v, double margin, double tol) {
  if (v.rows() != v.cols()) return false;
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  return upper_margin(v) >= margin;
}

SiegelBallPoint cayley(const SiegelUpperPoint& p, Diagnostics* diag) {
  const Eigen::Index n = p.dim();
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  // W = (v - iI)(v + iI)^-1 computed as a right solve: W (v + iI) = v - iI.
  const ComplexMatrix Wt = guarded_solve(ComplexMatrix((p.v + kI * I).transpose()),
                                         ComplexMatrix((p.v - kI * I).transpose()),
                                         diag, "cayley");
  return SiegelBallPoint{Wt.transpose()};
}

SiegelUpperPoint cayley_inv(const SiegelBallPoint& p, Diagnostics* diag) {
  const Eigen::Index n = p.dim();
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  const ComplexMatrix v =
      kI * guarded_solve(I - p.W, ComplexMatrix(I + p.W), diag, "cayley_inv");
  return SiegelUpperPoint{v};
}

JacobiBallPoint partial_cayley(const JacobiUpperPoint& x, Diagnostics* diag) {
  const Eigen::Index n = x.dim();
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  JacobiBallPoint out;
  out.W = cayley(x.v, diag);
  out.z = 2.0 * kI *
          guarded_solve(x.v.v + kI * I, ComplexMatrix(x.u), diag, "partial_cayley")
              .col(0);
  return out;
}

JacobiUpperPoint partial_cayley_inv(const JacobiBallPoint& x, Diagnostics* diag) {
  const Eigen::Index n = x.dim();
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  JacobiUpperPoint out;
  out.v = cayley_inv(x.W, diag);
  out.u = guarded_solve(I - x.W.W, ComplexMatrix(x.z), diag, "partial_cayley_inv").col(0);
  return out;
}

JacobiBallPoint fc(const EtaBallPoint& p) {
  JacobiBallPoint out;
  out.W = p.W;
  out.z = p.eta - p.W.W * p.eta.conjugate();
  return out;
}

EtaBallPoint fc_inv(const JacobiBallPoint& p, Diagnostics* diag) {
  const Eigen::Index n = p.dim();
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  const ComplexMatrix gram = I - p.W.W * p.W.W.conjugate();
  EtaBallPoint out;
  out.W = p.W;
  out.eta = guarded_solve(gram, ComplexMatrix(p.z + p.W.W * p.z.conjugate()), diag,
                          "fc_inv")
                .col(0);
  return out;
}

JacobiUpperPoint fc1(const ComplexVector& eta, const SiegelUpperPoint& v) {
  const Eigen::Index n = v.dim();
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  JacobiUpperPoint out;
  out.v = v;
  out.u = (1.0 / (2.0 * kI)) *
          ((v.v + kI * I) * eta - (v.v - kI * I) * eta.conjugate());
  return out;
}

ComplexVector fc1_inv(const JacobiUpperPoint& x, Diagnostics* diag) {
  const Eigen::Index n = x.dim();
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  const ComplexMatrix vb = x.v.v.conjugate();
  // (v - iI)[(v - iI)^-1 u - (conj v - iI)^-1 conj u] regrouped as
  // u - (v - iI)(conj v - iI)^-1 conj u, which stays regular at v = iI;
  // conj v - iI has negative definite imaginary part on the domain.
  const ComplexVector tail =
      guarded_solve(vb - kI * I, ComplexMatrix(x.u.conjugate()), diag, "fc1_inv").col(0);
  const ComplexVector bracket = x.u - (x.v.v - kI * I) * tail;
  // (conj v - v) is -2i r with r > 0; it degenerates only as r -> 0.
  const ComplexVector mid =
      guarded_solve(vb - x.v.v, ComplexMatrix(bracket), diag, "fc1_inv").col(0);
  return (vb - kI * I) * mid;
}

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace

ComplexMatrix random_complex_matrix(Eigen::Index rows, Eigen::Index cols,
                                    std::uint64_t seed) {
  auto eng = seeded_engine(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  ComplexMatrix A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = Complex(nd(eng), nd(eng));
  return A;
}

ComplexVector random_complex_vector(Eigen::Index n, std::uint64_t seed) {
  return random_complex_matrix(n, 1, seed).col(0);
}

RealMatrix random_real_matrix(Eigen::Index rows, Eigen::Index cols,
                              std::uint64_t seed) {
  auto eng = seeded_engine(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  RealMatrix A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = nd(eng);
  return A;
}

SiegelBallPoint random_ball_point(Eigen::Index n, std::uint64_t seed, double margin) {
  require(n >= 1, "n must be positive");
  const ComplexMatrix G = random_complex_matrix(n, n, seed);
  ComplexMatrix S = 0.5 * (G + G.transpose());
  Eigen::JacobiSVD<ComplexMatrix> svd(S);
  const double norm = svd.singularValues().maxCoeff();
  if (norm > 0.0) S *= (1.0 - margin) / norm;
  return SiegelBallPoint{S};
}

SiegelUpperPoint random_upper_point(Eigen::Index n, std::uint64_t seed, double margin) {
  require(n >= 1, "n must be positive");
  const RealMatrix Gs = random_real_matrix(n, n, seed);
  const RealMatrix Gr = random_real_matrix(n, n, seed + 0x9e3779b97f4a7c15ull);
  const RealMatrix s = 0.5 * (Gs + Gs.transpose());
  RealMatrix P = 0.5 * (Gr + Gr.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(P, Eigen::EigenvaluesOnly);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  if (norm > 0.0) P *= (1.0 - margin) / norm;
  const RealMatrix r = RealMatrix::Identity(n, n) + P;
  return SiegelUpperPoint{s.cast<Complex>() + kI * r.cast<Complex>()};
}

JacobiBallPoint random_jacobi_ball_point(Eigen::Index n, std::uint64_t seed,
                                         double margin) {
  JacobiBallPoint p;
  p.W = random_ball_point(n, seed, margin);
  p.z = random_complex_vector(n, seed + 1);
  return p;
}

JacobiUpperPoint random_jacobi_upper_point(Eigen::Index n, std::uint64_t seed,
                                           double margin) {
  JacobiUpperPoint p;
  p.v = random_upper_point(n, seed, margin);
  p.u = random_complex_vector(n, seed + 1);
  return p;
}

EtaBallPoint random_eta_ball_point(Eigen::Index n, std::uint64_t seed, double margin) {
  EtaBallPoint p;
  p.W = random_ball_point(n, seed, margin);
  p.eta = random_complex_vector(n, seed + 1);
  return p;
}

}  // namespace sjd
