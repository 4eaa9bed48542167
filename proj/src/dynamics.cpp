#include "sjd/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace sjd {

namespace {

constexpr double kSymmetryAssertTol = 1e-10;

ComplexMatrix blocks_to_lift(const ComplexMatrix& A, const ComplexMatrix& B,
                             const ComplexMatrix& C, const ComplexMatrix& D) {
  const Eigen::Index n = A.rows();
  ComplexMatrix h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = A;
  h.topRightCorner(n, n) = B;
  h.bottomLeftCorner(n, n) = -C;
  h.bottomRightCorner(n, n) = -D;
  return h;
}

}  // namespace

ComplexMatrix RiccatiSystem::lift() const { return blocks_to_lift(A, B, C, D); }

RealMatrix UpperSystem::lift_real() const { return sys.lift().real(); }

BallSystem build_ball_system(const LinearHamiltonian& H, double tol) {
  H.validate(tol);
  const Eigen::Index n = H.dim();
  BallSystem S;
  S.sys.A = -0.5 * kI * H.eps0.transpose();
  S.sys.B = -kI * H.epsm;
  S.sys.C = -kI * H.epsp;
  S.sys.D = S.sys.A.transpose();
  S.sys.symmetric_flow = true;
  S.drift.E = -kI * H.eps;
  S.drift.F = -kI * H.eps.conjugate();
  (void)n;
  return S;
}

UpperSystem build_upper_system(const LinearHamiltonian& H, double tol) {
  H.validate(tol);
  const RealMatrix m = H.split_m();
  const RealMatrix nn = H.split_n();
  const RealMatrix p = H.split_p();
  const RealMatrix q = H.split_q();
  UpperSystem S;
  S.sys.A = (nn + q).cast<Complex>();
  S.sys.B = (m - p).cast<Complex>();
  S.sys.C = (-(m + p)).cast<Complex>();
  S.sys.D = (nn - q).cast<Complex>();
  S.sys.symmetric_flow = true;
  S.drift.E = H.eps.imag().cast<Complex>();
  S.drift.F = (-H.eps.real()).cast<Complex>();
  return S;
}

EtaSystem build_eta_system(const LinearHamiltonian& H, double tol) {
  H.validate(tol);
  const Eigen::Index n = H.dim();
  const UpperSystem up = build_upper_system(H, tol);
  EtaSystem S;
  S.h = up.lift_real();
  S.F.resize(2 * n);
  S.F.head(n) = H.eps.imag();  // a, with eps = b + i a
  S.F.tail(n) = H.eps.real();  // b
  return S;
}

ComplexMatrix riccati_rhs(const ComplexMatrix& W, const RiccatiSystem& sys) {
  require(W.rows() == sys.dim() && W.cols() == sys.dim(),
          "riccati_rhs: dimension mismatch");
  const ComplexMatrix R = sys.A * W + W * sys.D + sys.B + W * sys.C * W;
  if (sys.symmetric_flow) {
    const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
    const double res = (R - R.transpose()).cwiseAbs().maxCoeff();
    if (res > kSymmetryAssertTol * scale) {
      throw DomainError("riccati_rhs: symmetry not preserved, residual " +
                        std::to_string(res));
    }
  }
  return R;
}

ComplexMatrix fundamental_matrix(const ComplexMatrix& h, double t) {
  return mat_exp(h, t);
}

RealMatrix fundamental_matrix(const RealMatrix& h, double t) { return mat_exp(h, t); }

namespace {

ComplexMatrix moebius_project(const ComplexMatrix& U, const ComplexMatrix& W0) {
  const Eigen::Index n = W0.rows();
  const ComplexMatrix X = U.topLeftCorner(n, n) * W0 + U.topRightCorner(n, n);
  const ComplexMatrix Y = U.bottomLeftCorner(n, n) * W0 + U.bottomRightCorner(n, n);
  const double scale = std::max(1.0, std::pow(Y.cwiseAbs().maxCoeff(), double(n)));
  if (std::abs(Y.determinant()) < kChartEscapeTol * scale) {
    throw ChartEscapeError("riccati solution leaves the chart: det(Y) ~ 0", 0.0);
  }
  return Y.transpose().fullPivLu().solve(X.transpose()).transpose();
}

}  // namespace

ComplexMatrix riccati_solve_const(const ComplexMatrix& W0, const RiccatiSystem& sys,
                                  double t) {
  if (sys.tag != CoefficientTag::Constant) {
    throw DomainError("riccati_solve_const: constant coefficients required");
  }
  return moebius_project(fundamental_matrix(sys.lift(), t), W0);
}

ComplexMatrix riccati_solve_diag(const ComplexMatrix& W0, const RiccatiSystem& sys,
                                 double t) {
  if (sys.tag != CoefficientTag::Constant) {
    throw DomainError("riccati_solve_diag: constant coefficients required");
  }
  const Eigen::Index n = W0.rows();
  const ComplexMatrix h = sys.lift();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(h, /*computeEigenvectors=*/true);
  const double cond = cond2(es.eigenvectors());
  if (!(cond < kDiagSolveCondLimit)) {
    throw DefectiveLiftError(
        "riccati_solve_diag: lift lacks a well-conditioned eigenbasis "
        "(cond ~ " + std::to_string(cond) + "); use riccati_solve_const");
  }
  // V h = Lambda V with V the inverse of the right-eigenvector matrix.
  const ComplexMatrix V = es.eigenvectors().fullPivLu().inverse();
  const ComplexVector lam = es.eigenvalues();
  const ComplexMatrix V1 = V.topLeftCorner(n, n);
  const ComplexMatrix V2 = V.topRightCorner(n, n);
  const ComplexMatrix V3 = V.bottomLeftCorner(n, n);
  const ComplexMatrix V4 = V.bottomRightCorner(n, n);
  const ComplexMatrix Y0 = V3 * W0 + V4;
  Eigen::FullPivLU<ComplexMatrix> lu0(Y0);
  if (!lu0.isInvertible()) {
    throw ChartEscapeError("riccati_solve_diag: initial projection singular", 0.0);
  }
  ComplexMatrix Wp = (V1 * W0 + V2) * lu0.inverse();
  ComplexVector e1(n), e2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    e1(i) = std::exp(t * lam(i));
    e2(i) = std::exp(-t * lam(n + i));
  }
  Wp = e1.asDiagonal() * Wp * e2.asDiagonal();
  const ComplexMatrix lhs = V1 - Wp * V3;
  Eigen::FullPivLU<ComplexMatrix> lu(lhs);
  if (!lu.isInvertible()) {
    throw ChartEscapeError("riccati_solve_diag: projection singular at t", t);
  }
  return lu.solve(ComplexMatrix(Wp * V4 - V2));
}

namespace {

ComplexMatrix rk4_matrix_step(const std::function<ComplexMatrix(double)>& h, double t,
                              double dt, const ComplexMatrix& U) {
  const ComplexMatrix k1 = h(t) * U;
  const ComplexMatrix k2 = h(t + 0.5 * dt) * (U + 0.5 * dt * k1);
  const ComplexMatrix k3 = h(t + 0.5 * dt) * (U + 0.5 * dt * k2);
  const ComplexMatrix k4 = h(t + dt) * (U + dt * k3);
  return U + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

bool near_negative_axis(const Complex& z, double tol) {
  return z.real() < 0.0 && std::abs(z.imag()) <= tol * std::abs(z);
}

// Krein-type definiteness of the quadratic Hamiltonian restricted to the real
// invariant plane of a pure-imaginary eigenvalue pair of K.
bool restriction_definite(const RealMatrix& S, const ComplexVector& v) {
  const RealVector re = v.real();
  const RealVector im = v.imag();
  Eigen::Matrix2d M2;
  M2(0, 0) = re.dot(S * re);
  M2(0, 1) = re.dot(S * im);
  M2(1, 0) = M2(0, 1);
  M2(1, 1) = im.dot(S * im);
  return M2.determinant() > 0.0;
}

FloquetReport analyze_monodromy(const ComplexMatrix& Delta, double T) {
  FloquetReport rep;
  rep.monodromy = Delta;
  Eigen::ComplexEigenSolver<ComplexMatrix> es(Delta, /*computeEigenvectors=*/true);
  rep.multipliers.assign(es.eigenvalues().data(),
                         es.eigenvalues().data() + Delta.rows());
  const bool real_input = Delta.imag().cwiseAbs().maxCoeff() <= 1e-12;
  rep.symplectic_residual =
      real_input ? symplectic_residual(Delta.real()) : sp_complex_residual(Delta);

  bool neg_axis = false;
  for (const Complex& mu : rep.multipliers) {
    if (near_negative_axis(mu, 1e-8)) neg_axis = true;
  }
  rep.k_log_valid = !neg_axis;
  rep.K_log = ComplexMatrix::Zero(Delta.rows(), Delta.cols());
  if (rep.k_log_valid) rep.K_log = mat_log(Delta) / T;

  const double mult_tol = 1e-7;
  bool on_circle = true;
  for (const Complex& mu : rep.multipliers) {
    if (std::abs(std::abs(mu) - 1.0) > mult_tol) on_circle = false;
  }
  const bool diagonalizable = cond2(es.eigenvectors()) < kDiagSolveCondLimit;
  rep.stable = on_circle && diagonalizable;

  rep.parametrically_stable = false;
  if (!rep.k_log_valid) {
    return rep;
  }
  if (has_pq_block_form(rep.K_log, 1e-8) || real_input) {
    const RealMatrix K = real_input ? RealMatrix(rep.K_log.real())
                                    : realify(rep.K_log, 1e-8);
    rep.hamiltonian_residual = hamiltonian_residual(K);
    Eigen::ComplexEigenSolver<ComplexMatrix> ek(K.cast<Complex>(),
                                                /*computeEigenvectors=*/true);
    bool pure_imag = true;
    bool nonsingular = true;
    const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < ek.eigenvalues().size(); ++i) {
      const Complex lam = ek.eigenvalues()(i);
      if (std::abs(lam.real()) > 1e-7 * scale) pure_imag = false;
      if (std::abs(lam) < 1e-10 * scale) nonsingular = false;
    }
    const bool k_diag = cond2(ek.eigenvectors()) < kDiagSolveCondLimit;
    bool definite = true;
    const RealMatrix J = symplectic_form(K.rows());
    const RealMatrix S = -J * K;  // K = J S for a linear Hamiltonian system
    for (Eigen::Index i = 0; i < ek.eigenvalues().size(); ++i) {
      if (ek.eigenvalues()(i).imag() > 0.0) {
        if (!restriction_definite(S, ek.eigenvectors().col(i))) definite = false;
      }
    }
    rep.parametrically_stable =
        pure_imag && nonsingular && k_diag && definite && rep.stable;
  } else {
    rep.hamiltonian_residual = pq_block_residual(rep.K_log);
  }
  return rep;
}

}  // namespace

ComplexMatrix hamiltonian_log(const FloquetReport& rep) {
  if (!rep.k_log_valid) {
    throw BranchError(
        "monodromy logarithm: a multiplier lies on the negative real axis; "
        "rerun over the doubled period 2T for a real logarithm");
  }
  return rep.K_log;
}

FloquetReport monodromy(const std::function<ComplexMatrix(double)>& coeffs, double T,
                        int steps) {
  require(T > 0.0, "monodromy: period must be positive");
  require(steps > 0, "monodromy: steps must be positive");
  const Eigen::Index dim = coeffs(0.0).rows();
  ComplexMatrix U = ComplexMatrix::Identity(dim, dim);
  const double dt = T / steps;
  for (int i = 0; i < steps; ++i) U = rk4_matrix_step(coeffs, i * dt, dt, U);
  return analyze_monodromy(U, T);
}

FloquetReport monodromy(const std::function<RealMatrix(double)>& coeffs, double T,
                        int steps) {
  const std::function<ComplexMatrix(double)> lifted = [&coeffs](double t) {
    return ComplexMatrix(coeffs(t).cast<Complex>());
  };
  return monodromy(lifted, T, steps);
}

namespace {

// Composite-Simpson integral of exp((t - tau) h) F over [0, t] with panel
// doubling until the 1e-10 target; h_r may be singular so no inversion.
RealVector convolution_integral(const RealMatrix& h, const RealVector& F, double t) {
  if (t == 0.0 || F.cwiseAbs().maxCoeff() == 0.0)
    return RealVector::Zero(F.size());
  auto integrand = [&](double tau) { return RealVector(mat_exp(h, t - tau) * F); };
  auto simpson = [&](int panels) {
    const double dx = t / panels;
    RealVector acc = integrand(0.0) + integrand(t);
    for (int i = 1; i < panels; ++i)
      acc += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * dx);
    return RealVector(acc * dx / 3.0);
  };
  RealVector prev = simpson(8);
  for (int panels = 16; panels <= 4096; panels *= 2) {
    const RealVector cur = simpson(panels);
    const double err = (cur - prev).cwiseAbs().maxCoeff() / 15.0;
    if (err <= 1e-10 * (1.0 + cur.cwiseAbs().maxCoeff())) {
      return cur + (cur - prev) / 15.0;
    }
    prev = cur;
  }
  return prev;
}

}  // namespace

ComplexVector solve_eta(const ComplexVector& eta0, const LinearHamiltonian& H,
                        double t) {
  const Eigen::Index n = eta0.size();
  const EtaSystem S = build_eta_system(H);
  RealVector Z0(2 * n);
  Z0.head(n) = eta0.real();
  Z0.tail(n) = -eta0.imag();  // eta = xi - i zeta
  const RealVector Z = mat_exp(S.h, t) * Z0 + convolution_integral(S.h, S.F, t);
  return Z.head(n).cast<Complex>() - kI * Z.tail(n).cast<Complex>();
}

namespace {

ComplexVector rk4_vec_step(const OdeRhs& rhs, double t, double dt,
                           const ComplexVector& y) {
  const ComplexVector k1 = rhs(t, y);
  const ComplexVector k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1);
  const ComplexVector k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2);
  const ComplexVector k4 = rhs(t + dt, y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Trajectory integrate_oracle(const OdeRhs& rhs, const ComplexVector& y0, double t0,
                            double t1, double dt, const MembershipCheck& admissible,
                            double step_error_budget) {
  require(dt > 0.0, "integrate_oracle: dt must be positive");
  require(t1 >= t0, "integrate_oracle: reversed time span");
  const double span = t1 - t0;
  const long long steps = std::max(1LL, std::llround(span / dt));
  const double h = span / static_cast<double>(steps);
  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  if (admissible && !admissible(y0)) {
    throw ChartEscapeError("integrate_oracle: initial state inadmissible", t0);
  }
  traj.times.push_back(t0);
  traj.states.push_back(y0);
  ComplexVector y = y0;
  for (long long i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const ComplexVector full = rk4_vec_step(rhs, t, h, y);
    const ComplexVector half =
        rk4_vec_step(rhs, t + 0.5 * h, 0.5 * h, rk4_vec_step(rhs, t, 0.5 * h, y));
    const double est = (half - full).cwiseAbs().maxCoeff() / 15.0;
    traj.max_step_error_estimate = std::max(traj.max_step_error_estimate, est);
    if (est > step_error_budget) {
      throw StepError("integrate_oracle: Richardson estimate " +
                      std::to_string(est) + " exceeds the step budget");
    }
    y = half;
    const double t_next = t0 + (i + 1) * h;
    if (admissible && !admissible(y)) {
      throw ChartEscapeError("integrate_oracle: trajectory left the chart", t_next);
    }
    traj.times.push_back(t_next);
    traj.states.push_back(y);
  }
  return traj;
}

ComplexVector pack_ball_state(const JacobiBallPoint& x) {
  const Eigen::Index n = x.dim();
  ComplexVector y(n + n * n);
  y.head(n) = x.z;
  for (Eigen::Index i = 0; i < n; ++i) y.segment(n + i * n, n) = x.W.W.col(i);
  return y;
}

JacobiBallPoint unpack_ball_state(const ComplexVector& y, Eigen::Index n) {
  JacobiBallPoint x;
  x.z = y.head(n);
  x.W.W.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) x.W.W.col(i) = y.segment(n + i * n, n);
  return x;
}

ComplexVector pack_upper_state(const JacobiUpperPoint& x) {
  const Eigen::Index n = x.dim();
  ComplexVector y(n + n * n);
  y.head(n) = x.u;
  for (Eigen::Index i = 0; i < n; ++i) y.segment(n + i * n, n) = x.v.v.col(i);
  return y;
}

JacobiUpperPoint unpack_upper_state(const ComplexVector& y, Eigen::Index n) {
  JacobiUpperPoint x;
  x.u = y.head(n);
  x.v.v.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) x.v.v.col(i) = y.segment(n + i * n, n);
  return x;
}

ComplexVector ball_rhs(const ComplexVector& y, const BallSystem& S, Eigen::Index n) {
  const JacobiBallPoint x = unpack_ball_state(y, n);
  const ComplexMatrix& W = x.W.W;
  const ComplexMatrix Wdot = S.sys.A * W + W * S.sys.D + S.sys.B + W * S.sys.C * W;
  const ComplexVector zdot =
      S.drift.E + W * S.drift.F + (S.sys.A + W * S.sys.C) * x.z;
  ComplexVector out(y.size());
  out.head(n) = zdot;
  for (Eigen::Index i = 0; i < n; ++i) out.segment(n + i * n, n) = Wdot.col(i);
  return out;
}

ComplexVector upper_rhs(const ComplexVector& y, const UpperSystem& S, Eigen::Index n) {
  const JacobiUpperPoint x = unpack_upper_state(y, n);
  const ComplexMatrix& v = x.v.v;
  const ComplexMatrix vdot = S.sys.A * v + v * S.sys.D + S.sys.B + v * S.sys.C * v;
  const ComplexVector udot =
      S.drift.E + v * S.drift.F + (S.sys.A + v * S.sys.C) * x.u;
  ComplexVector out(y.size());
  out.head(n) = udot;
  for (Eigen::Index i = 0; i < n; ++i) out.segment(n + i * n, n) = vdot.col(i);
  return out;
}

BallTrajectory propagate_coupled_ball(const JacobiBallPoint& x0,
                                      const LinearHamiltonian& H, double t,
                                      double dt) {
  const Eigen::Index n = x0.dim();
  const BallSystem S = build_ball_system(H);
  const OdeRhs rhs = [&S, n](double, const ComplexVector& y) {
    return ball_rhs(y, S, n);
  };
  const MembershipCheck member = [n](const ComplexVector& y) {
    return ball_contains(unpack_ball_state(y, n).W.W);
  };
  const Trajectory traj =
      integrate_oracle(rhs, pack_ball_state(x0), 0.0, t, dt, member);
  BallTrajectory out;
  out.times = traj.times;
  out.points.reserve(traj.states.size());
  for (const ComplexVector& y : traj.states) {
    JacobiBallPoint p = unpack_ball_state(y, n);
    // project back onto symmetric W; the flow preserves it only to roundoff
    p.W.W = 0.5 * (p.W.W + p.W.W.transpose()).eval();
    out.points.push_back(std::move(p));
  }
  return out;
}

JacobiBallPoint ball_state_closed_form(const JacobiBallPoint& x0,
                                       const LinearHamiltonian& H, double t) {
  const BallSystem S = build_ball_system(H);
  const ComplexVector eta = solve_eta(fc_inv(x0).eta, H, t);
  JacobiBallPoint out;
  out.W.W = riccati_solve_const(x0.W.W, S.sys, t);
  out.z = eta - out.W.W * eta.conjugate();
  return out;
}

std::vector<SiegelBallPoint> critical_points(const LinearHamiltonian& H,
                                             double residual_tol) {
  const BallSystem S = build_ball_system(H);
  const Eigen::Index n = H.dim();
  const ComplexMatrix h = S.sys.lift();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(h, /*computeEigenvectors=*/true);
  if (!(cond2(es.eigenvectors()) < kDiagSolveCondLimit)) {
    throw DefectiveLiftError("critical_points: lift lacks a well-conditioned eigenbasis");
  }
  const ComplexMatrix V = es.eigenvectors();
  std::vector<SiegelBallPoint> found;
  const int two_n = static_cast<int>(2 * n);
  for (unsigned mask = 0; mask < (1u << two_n); ++mask) {
    if (__builtin_popcount(mask) != static_cast<int>(n)) continue;
    ComplexMatrix X(n, n), Y(n, n);
    int col = 0;
    for (int j = 0; j < two_n; ++j) {
      if (mask & (1u << j)) {
        X.col(col) = V.col(j).head(n);
        Y.col(col) = V.col(j).tail(n);
        ++col;
      }
    }
    Eigen::FullPivLU<ComplexMatrix> lu(Y);
    if (!lu.isInvertible()) continue;
    if (rcond2(Y) < 1e-10) continue;
    const ComplexMatrix Wc =
        ComplexMatrix(Y.transpose().fullPivLu().solve(X.transpose())).transpose();
    const double scale = std::max(1.0, Wc.cwiseAbs().maxCoeff());
    if ((Wc - Wc.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) continue;
    const ComplexMatrix Wsym = 0.5 * (Wc + Wc.transpose());
    if (!ball_contains(Wsym)) continue;
    if (riccati_rhs(Wsym, S.sys).cwiseAbs().maxCoeff() > residual_tol) continue;
    bool duplicate = false;
    for (const SiegelBallPoint& p : found) {
      if ((p.W - Wsym).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + scale)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) found.push_back(SiegelBallPoint{Wsym});
  }
  return found;
}

}  // namespace sjd
