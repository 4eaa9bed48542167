#include "sjd/dynamics.hpp"

#include "sjd/linalg.hpp"

#include <doctest.h>

#include <cmath>

using namespace sjd;

namespace {

// n = 1, eps_- = eps_+ = 1: Wdot = -i(1 + W^2), W(0) = 0 solves to -i tanh t.
LinearHamiltonian tanh_fixture() {
  LinearHamiltonian H = LinearHamiltonian::zero(1);
  H.epsm(0, 0) = 1.0;
  H.epsp(0, 0) = 1.0;
  return H;
}

LinearHamiltonian circular_fixture(double omega) {
  LinearHamiltonian H = LinearHamiltonian::zero(1);
  H.eps0(0, 0) = 2.0 * omega;
  return H;
}

}  // namespace

TEST_CASE("ball system coefficients") {
  const LinearHamiltonian H0 = LinearHamiltonian::zero(2);
  const BallSystem Z = build_ball_system(H0);
  CHECK(Z.sys.lift().cwiseAbs().maxCoeff() == 0.0);
  CHECK(Z.drift.E.cwiseAbs().maxCoeff() == 0.0);

  const BallSystem S = build_ball_system(tanh_fixture());
  CHECK(std::abs(S.sys.A(0, 0)) < 1e-15);
  CHECK(std::abs(S.sys.D(0, 0)) < 1e-15);
  CHECK(std::abs(S.sys.B(0, 0) - Complex(0, -1)) < 1e-15);
  CHECK(std::abs(S.sys.C(0, 0) - Complex(0, -1)) < 1e-15);

  for (Eigen::Index n : {1, 2, 3}) {
    const LinearHamiltonian H = LinearHamiltonian::random(n, 10 + n);
    const ComplexMatrix hc = build_ball_system(H).sys.lift();
    // lower-left = conj(upper-right), lower-right = conj(upper-left)
    CHECK(pq_block_residual(hc) <= 1e-12);
    const ComplexMatrix p = hc.topLeftCorner(n, n);
    const ComplexMatrix q = hc.topRightCorner(n, n);
    CHECK((p + p.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((q - q.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }

  LinearHamiltonian bad = LinearHamiltonian::zero(1);
  bad.eps0(0, 0) = Complex(0, 1);  // not hermitian
  CHECK_THROWS_AS(build_ball_system(bad), DomainError);
}

TEST_CASE("upper system coefficients and the complexified lift") {
  const LinearHamiltonian H1 = tanh_fixture();
  const UpperSystem S = build_upper_system(H1);
  // m = 1, n = 0, p = q = 0 gives A_r = 0, B_r = 1, C_r = -1, D_r = 0
  CHECK(std::abs(S.sys.A(0, 0)) < 1e-15);
  CHECK(std::abs(S.sys.B(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(S.sys.C(0, 0) + 1.0) < 1e-15);
  CHECK(std::abs(S.sys.D(0, 0)) < 1e-15);

  for (Eigen::Index n : {1, 2, 3}) {
    const LinearHamiltonian H = LinearHamiltonian::random(n, 40 + n);
    const RealMatrix hr = build_upper_system(H).lift_real();
    CHECK(is_hamiltonian_real(hr, 1e-12));
    const ComplexMatrix hc = build_ball_system(H).sys.lift();
    CHECK((complexify(hr) - hc).cwiseAbs().maxCoeff() <= 1e-11);
  }
}

TEST_CASE("eta system is a real Hamiltonian system") {
  for (Eigen::Index n : {1, 2, 3}) {
    const LinearHamiltonian H = LinearHamiltonian::random(n, 60 + n);
    const EtaSystem S = build_eta_system(H);
    CHECK(hamiltonian_residual(S.h) <= 1e-12);
  }
  const LinearHamiltonian H0 = LinearHamiltonian::zero(2);
  const ComplexVector eta0 = random_complex_vector(2, 3);
  CHECK((solve_eta(eta0, H0, 1.7) - eta0).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("riccati rhs") {
  const LinearHamiltonian H = LinearHamiltonian::random(2, 77);
  const BallSystem S = build_ball_system(H);
  CHECK((riccati_rhs(ComplexMatrix::Zero(2, 2), S.sys) - S.sys.B)
            .cwiseAbs()
            .maxCoeff() < 1e-15);

  const BallSystem T = build_ball_system(tanh_fixture());
  CHECK(std::abs(riccati_rhs(ComplexMatrix::Zero(1, 1), T.sys)(0, 0) - Complex(0, -1)) <
        1e-15);

  const ComplexMatrix W = random_ball_point(2, 5).W;
  const ComplexMatrix R = riccati_rhs(W, S.sys);
  CHECK((R - R.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("fundamental matrix") {
  const LinearHamiltonian H = tanh_fixture();
  const ComplexMatrix h = build_ball_system(H).sys.lift();
  CHECK((fundamental_matrix(h, 0.0) - ComplexMatrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  const double t = 0.9;
  const ComplexMatrix U = fundamental_matrix(h, t);
  CHECK(std::abs(U(0, 0) - std::cosh(t)) < 1e-13);
  CHECK(std::abs(U(0, 1) - Complex(0, -std::sinh(t))) < 1e-13);
  CHECK(std::abs(U(1, 0) - Complex(0, std::sinh(t))) < 1e-13);

  for (Eigen::Index n : {1, 2, 3}) {
    const LinearHamiltonian Hr = LinearHamiltonian::random(n, 90 + n);
    RealMatrix hr = build_upper_system(Hr).lift_real();
    Eigen::JacobiSVD<RealMatrix> svd(hr);
    hr /= svd.singularValues().maxCoeff();
    for (double s : {0.5, 2.0, 5.0}) {
      CHECK(symplectic_residual(fundamental_matrix(hr, s)) <= 1e-10);
    }
  }
}

TEST_CASE("closed-form Riccati solution: tanh fixture") {
  const BallSystem S = build_ball_system(tanh_fixture());
  const ComplexMatrix W0 = ComplexMatrix::Zero(1, 1);
  CHECK((riccati_solve_const(W0, S.sys, 0.0) - W0).cwiseAbs().maxCoeff() == 0.0);
  for (double t = 0.0; t <= 2.0; t += 0.1) {
    const ComplexMatrix W = riccati_solve_const(W0, S.sys, t);
    CHECK(std::abs(W(0, 0) - Complex(0, -std::tanh(t))) < 1e-12);
  }
}

TEST_CASE("closed-form Riccati solution: circular fixture") {
  const double omega = 0.8;
  const BallSystem S = build_ball_system(circular_fixture(omega));
  const ComplexMatrix W0 = 0.4 * ComplexMatrix::Identity(1, 1);
  for (double t : {0.3, 1.1, 2.7}) {
    const ComplexMatrix W = riccati_solve_const(W0, S.sys, t);
    const Complex expect = std::exp(-2.0 * kI * omega * t) * W0(0, 0);
    CHECK(std::abs(W(0, 0) - expect) < 1e-12);
  }
  const double T = M_PI / omega;
  CHECK((riccati_solve_const(W0, S.sys, T) - W0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("diagonalized solution agrees with the Moebius projection") {
  const BallSystem St = build_ball_system(tanh_fixture());
  const ComplexMatrix W0 = ComplexMatrix::Zero(1, 1);
  for (double t : {0.4, 1.3}) {
    const ComplexMatrix Wd = riccati_solve_diag(W0, St.sys, t);
    CHECK(std::abs(Wd(0, 0) - Complex(0, -std::tanh(t))) < 1e-10);
  }

  for (Eigen::Index n : {1, 2, 3}) {
    const LinearHamiltonian H = LinearHamiltonian::random(n, 150 + n);
    const BallSystem S = build_ball_system(H);
    const ComplexMatrix W0r = random_ball_point(n, 160 + n, 0.4).W;
    for (double t : {0.2, 0.6}) {
      const ComplexMatrix a = riccati_solve_const(W0r, S.sys, t);
      const ComplexMatrix b = riccati_solve_diag(W0r, S.sys, t);
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("stable diagonal family closes after the common period") {
  // eps0 = 2 diag(1, 2): W_ij(t) = exp(-i (a_i + a_j) t) W_ij(0); all pair
  // frequencies divide 2 pi at T = 2 pi.
  LinearHamiltonian H = LinearHamiltonian::zero(2);
  H.eps0(0, 0) = 2.0;
  H.eps0(1, 1) = 4.0;
  const BallSystem S = build_ball_system(H);
  const ComplexMatrix W0 = random_ball_point(2, 33, 0.3).W;
  const double T = 2.0 * M_PI;
  CHECK((riccati_solve_diag(W0, S.sys, T) - W0).cwiseAbs().maxCoeff() < 1e-8);
  // the trajectory is genuinely moving in between
  CHECK((riccati_solve_diag(W0, S.sys, 0.5 * T) - W0).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("monodromy of a constant system reduces to the exponential") {
  const LinearHamiltonian H = LinearHamiltonian::random(2, 200);
  const ComplexMatrix h = build_ball_system(H).sys.lift();
  const std::function<ComplexMatrix(double)> coeffs = [&h](double) { return h; };
  const double T = 1.3;
  const FloquetReport rep = monodromy(coeffs, T, 4000);
  CHECK((rep.monodromy - fundamental_matrix(h, T)).cwiseAbs().maxCoeff() < 1e-9);

  // multipliers match exp(T eig(h)) as multisets
  Eigen::ComplexEigenSolver<ComplexMatrix> es(h);
  for (Eigen::Index i = 0; i < 4; ++i) {
    const Complex target = std::exp(T * es.eigenvalues()(i));
    double best = 1e9;
    for (const Complex mu : rep.multipliers) best = std::min(best, std::abs(mu - target));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("monodromy of the zero system is the identity and stable") {
  const std::function<RealMatrix(double)> coeffs = [](double) {
    return RealMatrix(RealMatrix::Zero(4, 4));
  };
  const FloquetReport rep = monodromy(coeffs, 2.0, 10);
  CHECK((rep.monodromy - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(rep.stable);
  CHECK(rep.k_log_valid);
  CHECK(hamiltonian_log(rep).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("negative-axis multipliers invalidate the principal logarithm") {
  // rotation by pi: monodromy = -I, multipliers on the negative real axis
  RealMatrix J(2, 2);
  J << 0, 1, -1, 0;
  const std::function<RealMatrix(double)> coeffs = [&J](double) { return J; };
  const FloquetReport rep = monodromy(coeffs, M_PI, 8000);
  CHECK_FALSE(rep.k_log_valid);
  CHECK(rep.stable);  // multipliers still on the unit circle
  CHECK_THROWS_AS(hamiltonian_log(rep), BranchError);
}

TEST_CASE("periodic coefficients: symplectic monodromy, paired multipliers") {
  const double T = 2.0;
  const LinearHamiltonian H0 = LinearHamiltonian::random(2, 210);
  const LinearHamiltonian H1 = LinearHamiltonian::random(2, 211);
  const RealMatrix h0 = build_upper_system(H0).lift_real();
  const RealMatrix h1 = 0.1 * build_upper_system(H1).lift_real();
  const std::function<RealMatrix(double)> coeffs = [&](double t) {
    return RealMatrix(h0 + std::cos(2.0 * M_PI * t / T) * h1);
  };
  const FloquetReport rep = monodromy(coeffs, T, 6000);
  CHECK(rep.symplectic_residual <= 1e-8);
  for (const Complex mu : rep.multipliers) {
    double best_inv = 1e9, best_conj = 1e9;
    for (const Complex nu : rep.multipliers) {
      best_inv = std::min(best_inv, std::abs(nu - 1.0 / mu));
      best_conj = std::min(best_conj, std::abs(nu - std::conj(mu)));
    }
    CHECK(best_inv < 1e-6);
    CHECK(best_conj < 1e-6);
  }
}

TEST_CASE("solve_eta closed forms") {
  LinearHamiltonian H = LinearHamiltonian::zero(1);
  H.eps(0) = 1.0;
  const ComplexVector eta0 = ComplexVector::Zero(1);
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(std::abs(solve_eta(eta0, H, t)(0) - Complex(0, -t)) < 1e-12);
  }
  CHECK(std::abs(solve_eta(eta0, H, 0.0)(0)) == 0.0);

  // pure exponential flow preserves the norm for a pure-imaginary spectrum
  LinearHamiltonian Hr = LinearHamiltonian::zero(1);
  Hr.eps0(0, 0) = 2.0;
  const ComplexVector e1 = random_complex_vector(1, 8);
  const ComplexVector moved = solve_eta(e1, Hr, 1.9);
  CHECK(std::abs(moved.norm() - e1.norm()) < 1e-12);
}

TEST_CASE("integrate_oracle basics and order") {
  const OdeRhs zero = [](double, const ComplexVector& y) {
    return ComplexVector(ComplexVector::Zero(y.size()));
  };
  const ComplexVector y0 = random_complex_vector(3, 1);
  const Trajectory still = integrate_oracle(zero, y0, 0.0, 1.0, 0.1);
  CHECK((still.states.back() - y0).cwiseAbs().maxCoeff() == 0.0);

  // tanh flow, scalar Riccati
  const OdeRhs tanh_rhs = [](double, const ComplexVector& y) {
    ComplexVector out(1);
    out(0) = -kI * (1.0 + y(0) * y(0));
    return out;
  };
  ComplexVector w0 = ComplexVector::Zero(1);
  const Trajectory traj = integrate_oracle(tanh_rhs, w0, 0.0, 2.0, 1e-3);
  double max_err = 0.0;
  for (size_t i = 0; i < traj.times.size(); ++i) {
    max_err = std::max(max_err, std::abs(traj.states[i](0) -
                                         Complex(0, -std::tanh(traj.times[i]))));
  }
  CHECK(max_err <= 1e-8);

  auto end_error = [&](double dt) {
    const Trajectory t = integrate_oracle(tanh_rhs, w0, 0.0, 1.0, dt);
    return std::abs(t.states.back()(0) - Complex(0, -std::tanh(1.0)));
  };
  const double e1 = end_error(0.02);
  const double e2 = end_error(0.01);
  CHECK(e1 / e2 > 10.0);
  CHECK(e1 / e2 < 24.0);

  // the per-step error budget rejects a too-coarse grid
  CHECK_THROWS_AS(integrate_oracle(tanh_rhs, w0, 0.0, 2.0, 0.5, nullptr, 1e-12),
                  StepError);
}

TEST_CASE("coupled ball propagation decouples through fc_inv") {
  const LinearHamiltonian H0 = LinearHamiltonian::zero(2);
  const JacobiBallPoint x0 = random_jacobi_ball_point(2, 300, 0.3);
  const BallTrajectory constant = propagate_coupled_ball(x0, H0, 1.0, 0.05);
  CHECK((constant.points.back().z - x0.z).cwiseAbs().maxCoeff() < 1e-13);

  for (Eigen::Index n : {1, 2, 3}) {
    const LinearHamiltonian H = LinearHamiltonian::random(n, 310 + n);
    const JacobiBallPoint x = random_jacobi_ball_point(n, 320 + n, 0.45);
    const BallTrajectory traj = propagate_coupled_ball(x, H, 2.0, 1e-3);
    const ComplexVector eta0 = fc_inv(x).eta;
    double dev = 0.0;
    for (size_t i = 0; i < traj.times.size(); i += 100) {
      const ComplexVector eta_ref = solve_eta(eta0, H, traj.times[i]);
      dev = std::max(dev,
                     (fc_inv(traj.points[i]).eta - eta_ref).cwiseAbs().maxCoeff());
    }
    CHECK(dev <= 1e-7);
  }
}

TEST_CASE("closed-form ball trajectory matches the oracle") {
  for (Eigen::Index n : {1, 2, 3}) {
    const LinearHamiltonian H = LinearHamiltonian::random(n, 400 + n);
    const JacobiBallPoint x = random_jacobi_ball_point(n, 410 + n, 0.45);
    const BallTrajectory traj = propagate_coupled_ball(x, H, 1.5, 1e-3);
    const JacobiBallPoint closed = ball_state_closed_form(x, H, 1.5);
    CHECK((closed.z - traj.points.back().z).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK((closed.W.W - traj.points.back().W.W).cwiseAbs().maxCoeff() <= 1e-7);
  }
}

TEST_CASE("Cayley transform conjugates the two flows") {
  for (Eigen::Index n : {1, 2}) {
    const LinearHamiltonian H = LinearHamiltonian::random(n, 500 + n);
    const UpperSystem Su = build_upper_system(H);
    const BallSystem Sb = build_ball_system(H);
    const SiegelUpperPoint v0 = random_upper_point(n, 510 + n);
    const double t = 0.8;
    const ComplexMatrix v_t = riccati_solve_const(v0.v, Su.sys, t);
    const ComplexMatrix W_t = riccati_solve_const(cayley(v0).W, Sb.sys, t);
    CHECK((cayley(SiegelUpperPoint{v_t}).W - W_t).cwiseAbs().maxCoeff() <= 1e-7);
  }
}

TEST_CASE("chart escape is detected") {
  // eps0 = diag(2i, -2i) is not hermitian; instead drive hard with eps_- only
  // and start near the boundary so the flow crosses it.
  LinearHamiltonian H = LinearHamiltonian::zero(1);
  H.epsm(0, 0) = Complex(0, 1);  // symmetric, epsp = conj
  H.epsp(0, 0) = Complex(0, -1);
  const ComplexMatrix W0 = 0.97 * ComplexMatrix::Identity(1, 1);
  // Wdot = -i(eps_-) + ... pushes |W| through 1; the oracle must flag it.
  bool escaped = false;
  try {
    const BallSystem S = build_ball_system(H);
    const OdeRhs rhs = [&S](double, const ComplexVector& y) {
      ComplexVector out(1);
      out(0) = (S.sys.A * y.head(1) + S.sys.B.col(0)).eval()(0) +
               (y(0) * (S.sys.D(0, 0) + (S.sys.C * y.head(1))(0)));
      return out;
    };
    const MembershipCheck member = [](const ComplexVector& y) {
      ComplexMatrix W(1, 1);
      W(0, 0) = y(0);
      return ball_contains(W);
    };
    ComplexVector y0(1);
    y0(0) = W0(0, 0);
    // Wdot = 1 - W^2 runs into the boundary like tanh; the membership margin
    // is crossed once 1 - |W|^2 drops below 1e-8, around t ~ 8.
    integrate_oracle(rhs, y0, 0.0, 14.0, 1e-3, member);
  } catch (const ChartEscapeError& e) {
    escaped = true;
    CHECK(e.time > 0.0);
  }
  CHECK(escaped);
}

TEST_CASE("critical points") {
  // diagonal eps0 with eps_+- = 0: the origin is stationary
  LinearHamiltonian H = LinearHamiltonian::zero(2);
  H.eps0(0, 0) = 1.0;
  H.eps0(1, 1) = 3.0;
  const std::vector<SiegelBallPoint> pts = critical_points(H);
  REQUIRE(pts.size() >= 1);
  bool has_origin = false;
  for (const SiegelBallPoint& W : pts) {
    if (W.W.cwiseAbs().maxCoeff() < 1e-10) has_origin = true;
  }
  CHECK(has_origin);

  // tanh system: stationary points of 1 + W^2 sit on the boundary (+-i)
  CHECK(critical_points(tanh_fixture()).empty());

  // returned points annihilate the Riccati right-hand side
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    const LinearHamiltonian Hr = LinearHamiltonian::random(2, 600 + seed);
    const BallSystem S = build_ball_system(Hr);
    for (const SiegelBallPoint& W : critical_points(Hr)) {
      CHECK(riccati_rhs(W.W, S.sys).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK(ball_contains(W.W));
    }
  }
}

TEST_CASE("defective lift routes to the Moebius solver") {
  RiccatiSystem sys;
  sys.A = ComplexMatrix::Zero(1, 1);
  sys.B = ComplexMatrix::Identity(1, 1);
  sys.C = ComplexMatrix::Zero(1, 1);
  sys.D = ComplexMatrix::Zero(1, 1);
  // lift [[0, 1], [0, 0]] is a Jordan block
  CHECK_THROWS_AS(riccati_solve_diag(ComplexMatrix::Zero(1, 1), sys, 1.0),
                  DefectiveLiftError);
  // the Moebius route still integrates the flow: W(t) = W0 + t B
  const ComplexMatrix W = riccati_solve_const(ComplexMatrix::Zero(1, 1), sys, 0.7);
  CHECK(std::abs(W(0, 0) - 0.7) < 1e-14);
}

TEST_CASE("parametric stability of definite and hyperbolic lifts") {
  // block rotation generator: K = [[0, d], [-d, 0]] has quadratic form
  // S = -JK = diag(d, d), definite on every mode plane
  RealMatrix hr = RealMatrix::Zero(4, 4);
  hr(0, 2) = 1.0;
  hr(1, 3) = 2.0;
  hr(2, 0) = -1.0;
  hr(3, 1) = -2.0;
  const std::function<RealMatrix(double)> stable_coeffs = [&hr](double) { return hr; };
  const FloquetReport stable_rep = monodromy(stable_coeffs, 1.0, 4000);
  CHECK(stable_rep.stable);
  CHECK(stable_rep.k_log_valid);
  CHECK(stable_rep.parametrically_stable);
  CHECK(stable_rep.hamiltonian_residual < 1e-9);

  // tanh lift has real eigenvalues +-1: multipliers leave the unit circle
  LinearHamiltonian H = LinearHamiltonian::zero(1);
  H.epsm(0, 0) = 1.0;
  H.epsp(0, 0) = 1.0;
  const RealMatrix hyp = build_upper_system(H).lift_real();
  const std::function<RealMatrix(double)> hyp_coeffs = [&hyp](double) { return hyp; };
  const FloquetReport hyp_rep = monodromy(hyp_coeffs, 1.0, 4000);
  CHECK_FALSE(hyp_rep.stable);
  CHECK_FALSE(hyp_rep.parametrically_stable);
}
