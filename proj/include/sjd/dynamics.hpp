#pragma once

#include "sjd/domains.hpp"
#include "sjd/hamiltonian.hpp"
#include "sjd/linalg.hpp"
#include "sjd/types.hpp"

#include <functional>

namespace sjd {

enum class CoefficientTag { Constant, Periodic, General };

// Matrix Riccati equation Wdot = A W + W D + B + W C W.
struct RiccatiSystem {
  ComplexMatrix A, B, C, D;
  CoefficientTag tag = CoefficientTag::Constant;
  // Set by the ball/upper builders; the rhs then asserts symmetry preservation.
  bool symmetric_flow = false;

  Eigen::Index dim() const { return A.rows(); }
  // Lifted linear system h = [[A, B], [-C, -D]].
  ComplexMatrix lift() const;
};

struct LiftedLinearSystem {
  ComplexMatrix h;
  Eigen::Index dim() const { return h.rows() / 2; }
};

// Coupled linear drift zdot = E + W F + (A + W C) z.
struct ChartDrift {
  ComplexVector E, F;
};

struct BallSystem {
  RiccatiSystem sys;
  ChartDrift drift;
};

struct UpperSystem {
  RiccatiSystem sys;  // entries are real
  ChartDrift drift;
  RealMatrix lift_real() const;
};

struct EtaSystem {
  RealMatrix h;   // in sp(n, R)
  RealVector F;   // (a; b) with eps = b + i a
};

// Ball-chart coefficients: A = -(i/2) eps0^t, B = -i eps_-, C = -i eps_+,
// D = A^t, E = -i eps, F = -i conj(eps).
BallSystem build_ball_system(const LinearHamiltonian& H, double tol = kStructureTol);
// Real coefficients A = n+q, B = m-p, C = -(m+p), D = n-q, E = Im eps,
// F = -Re eps; the lift lies in sp(n, R) and complexifies onto the ball lift.
UpperSystem build_upper_system(const LinearHamiltonian& H, double tol = kStructureTol);
// Decoupled eta flow i etadot = eps + eps_- conj(eta) + (1/2) eps0^t eta as a
// real inhomogeneous Hamiltonian system.
EtaSystem build_eta_system(const LinearHamiltonian& H, double tol = kStructureTol);

ComplexMatrix riccati_rhs(const ComplexMatrix& W, const RiccatiSystem& sys);

// U(t, 0) = exp(t h) for constant coefficients.
ComplexMatrix fundamental_matrix(const ComplexMatrix& h, double t);
RealMatrix fundamental_matrix(const RealMatrix& h, double t);

// Moebius projection of the fundamental matrix; throws ChartEscapeError when
// det(U3 W0 + U4) collapses.
ComplexMatrix riccati_solve_const(const ComplexMatrix& W0, const RiccatiSystem& sys,
                                  double t);

// Closed form through the eigenbasis of the lift (simple-structure case);
// throws DefectiveLiftError when the eigenvector basis is ill-conditioned.
ComplexMatrix riccati_solve_diag(const ComplexMatrix& W0, const RiccatiSystem& sys,
                                 double t);

struct FloquetReport {
  ComplexMatrix monodromy;
  std::vector<Complex> multipliers;
  // (1/T) log of the monodromy, principal branch. Invalid when a multiplier
  // sits on the negative real axis; rerunning over 2T restores a real log.
  ComplexMatrix K_log;
  bool k_log_valid = false;
  bool stable = false;
  bool parametrically_stable = false;
  double symplectic_residual = 0.0;
  double hamiltonian_residual = 0.0;  // of K_log, after realification when possible
};

// K_log accessor; throws BranchError with the doubled-period suggestion when
// the principal logarithm is ambiguous.
ComplexMatrix hamiltonian_log(const FloquetReport& rep);

// Monodromy of Udot = h(t) U over one period by fixed-step RK4 integration.
FloquetReport monodromy(const std::function<ComplexMatrix(double)>& coeffs, double T,
                        int steps);
FloquetReport monodromy(const std::function<RealMatrix(double)>& coeffs, double T,
                        int steps);

// Variation of constants for the decoupled eta flow with constant
// coefficients; the convolution integral is evaluated by panel-doubling
// Simpson quadrature to 1e-10 without inverting h_r.
ComplexVector solve_eta(const ComplexVector& eta0, const LinearHamiltonian& H,
                        double t);

// Fixed-step classical RK4 with a half-step Richardson error estimate.
struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexVector> states;
  double max_step_error_estimate = 0.0;
};

using OdeRhs = std::function<ComplexVector(double, const ComplexVector&)>;
using MembershipCheck = std::function<bool(const ComplexVector&)>;

Trajectory integrate_oracle(const OdeRhs& rhs, const ComplexVector& y0, double t0,
                            double t1, double dt,
                            const MembershipCheck& admissible = nullptr,
                            double step_error_budget = 1e-6);

// State packing for the coupled (z, W) flow on the Siegel-Jacobi ball.
ComplexVector pack_ball_state(const JacobiBallPoint& x);
JacobiBallPoint unpack_ball_state(const ComplexVector& y, Eigen::Index n);

struct BallTrajectory {
  std::vector<double> times;
  std::vector<JacobiBallPoint> points;
};

// Joint RK4 integration of (Mhip)-type coupled motion; fc_inv of the result
// matches the decoupled eta flow.
BallTrajectory propagate_coupled_ball(const JacobiBallPoint& x0,
                                      const LinearHamiltonian& H, double t, double dt);

// Closed-form trajectory: W by Riccati linearization, z through the eta flow.
JacobiBallPoint ball_state_closed_form(const JacobiBallPoint& x0,
                                       const LinearHamiltonian& H, double t);

// Coupled (u, v) flow on the Siegel-Jacobi upper half plane.
ComplexVector pack_upper_state(const JacobiUpperPoint& x);
JacobiUpperPoint unpack_upper_state(const ComplexVector& y, Eigen::Index n);
ComplexVector upper_rhs(const ComplexVector& y, const UpperSystem& S, Eigen::Index n);
ComplexVector ball_rhs(const ComplexVector& y, const BallSystem& S, Eigen::Index n);

// Stationary points of the ball flow (algebraic Riccati solutions) from the
// n-dimensional eigenvector subspaces of the lift with invertible lower block;
// symmetric in-ball candidates only.
std::vector<SiegelBallPoint> critical_points(const LinearHamiltonian& H,
                                             double residual_tol = 1e-9);

}  // namespace sjd
