#pragma once

#include "sjd/types.hpp"

#include <cstdint>

namespace sjd {

// Symmetric W with I - W conj(W) positive definite (Siegel ball).
struct SiegelBallPoint {
  ComplexMatrix W;
  Eigen::Index dim() const { return W.rows(); }
};

// v = s + i r with s, r real symmetric and r positive definite.
struct SiegelUpperPoint {
  ComplexMatrix v;
  Eigen::Index dim() const { return v.rows(); }
};

struct JacobiBallPoint {
  ComplexVector z;
  SiegelBallPoint W;
  Eigen::Index dim() const { return z.size(); }
};

struct JacobiUpperPoint {
  ComplexVector u;
  SiegelUpperPoint v;
  Eigen::Index dim() const { return u.size(); }
};

struct EtaBallPoint {
  ComplexVector eta;
  SiegelBallPoint W;
  Eigen::Index dim() const { return eta.size(); }
};

// Symmetry residual <= tol and lambda_min(Herm(I - W conj W)) >= margin.
bool ball_contains(const ComplexMatrix& W, double margin = kMembershipMargin,
                   double tol = kStructureTol);
double ball_margin(const ComplexMatrix& W);

bool upper_contains(const ComplexMatrix& v, double margin = kMembershipMargin,
                    double tol = kStructureTol);
double upper_margin(const ComplexMatrix& v);

// W = (v - iI)(v + iI)^-1 and its inverse v = i(I - W)^-1(I + W).
SiegelBallPoint cayley(const SiegelUpperPoint& v, Diagnostics* diag = nullptr);
SiegelUpperPoint cayley_inv(const SiegelBallPoint& W, Diagnostics* diag = nullptr);

// Partial Cayley transform: (u, v) -> (z, W), z = 2i(v + iI)^-1 u.
JacobiBallPoint partial_cayley(const JacobiUpperPoint& x, Diagnostics* diag = nullptr);
// Inverse: v = cayley_inv(W), u = (I - W)^-1 z.
JacobiUpperPoint partial_cayley_inv(const JacobiBallPoint& x, Diagnostics* diag = nullptr);

// z = eta - W conj(eta), W unchanged.
JacobiBallPoint fc(const EtaBallPoint& p);
// eta = (I - W conj W)^-1 (z + W conj z).
EtaBallPoint fc_inv(const JacobiBallPoint& p, Diagnostics* diag = nullptr);

// u = (1/2i)[(v + iI) eta - (v - iI) conj(eta)].
JacobiUpperPoint fc1(const ComplexVector& eta, const SiegelUpperPoint& v);
// eta = (conj v - iI)(conj v - v)^-1 (v - iI)[(v - iI)^-1 u - (conj v - iI)^-1 conj u].
ComplexVector fc1_inv(const JacobiUpperPoint& x, Diagnostics* diag = nullptr);

// Deterministic samplers. The ball sampler rescales a random complex
// symmetric matrix to spectral norm <= 1 - margin; the upper sampler takes
// r = I + symmetric perturbation with lambda_min >= margin.
SiegelBallPoint random_ball_point(Eigen::Index n, std::uint64_t seed,
                                  double margin = 0.1);
SiegelUpperPoint random_upper_point(Eigen::Index n, std::uint64_t seed,
                                    double margin = 0.1);
JacobiBallPoint random_jacobi_ball_point(Eigen::Index n, std::uint64_t seed,
                                         double margin = 0.1);
JacobiUpperPoint random_jacobi_upper_point(Eigen::Index n, std::uint64_t seed,
                                           double margin = 0.1);
EtaBallPoint random_eta_ball_point(Eigen::Index n, std::uint64_t seed,
                                   double margin = 0.1);

// Random dense helpers shared by the samplers and the test fixtures.
ComplexMatrix random_complex_matrix(Eigen::Index rows, Eigen::Index cols,
                                    std::uint64_t seed);
ComplexVector random_complex_vector(Eigen::Index n, std::uint64_t seed);
RealMatrix random_real_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

}  // namespace sjd
