#include "sjd/domains.hpp"

#include "sjd/linalg.hpp"

#include <doctest.h>

using namespace sjd;

TEST_CASE("ball membership") {
  CHECK(ball_contains(ComplexMatrix::Zero(2, 2)));
  CHECK_FALSE(ball_contains(ComplexMatrix::Identity(2, 2)));
  const ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
  CHECK(ball_contains(half));
  CHECK(ball_margin(half) == doctest::Approx(0.75));

  // non-symmetric input is rejected regardless of the spectrum
  ComplexMatrix skew = ComplexMatrix::Zero(2, 2);
  skew(0, 1) = 0.1;
  CHECK_FALSE(ball_contains(skew));
}

TEST_CASE("cayley transform on fixed points") {
  const SiegelUpperPoint iI{kI * ComplexMatrix::Identity(2, 2)};
  CHECK(cayley(iI).W.cwiseAbs().maxCoeff() < 1e-15);

  const SiegelUpperPoint two_i{2.0 * kI * ComplexMatrix::Identity(1, 1)};
  CHECK(std::abs(cayley(two_i).W(0, 0) - Complex(1.0 / 3.0, 0)) < 1e-15);

  const SiegelBallPoint zero{ComplexMatrix::Zero(2, 2)};
  CHECK((cayley_inv(zero).v - kI * ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-15);
  const SiegelBallPoint third{(1.0 / 3.0) * ComplexMatrix::Identity(1, 1)};
  CHECK(std::abs(cayley_inv(third).v(0, 0) - Complex(0, 2.0)) < 1e-14);
}

TEST_CASE("cayley roundtrip and membership on random points") {
  for (Eigen::Index n : {1, 2, 3, 4}) {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      const SiegelUpperPoint v = random_upper_point(n, 1000 * n + seed);
      const SiegelBallPoint W = cayley(v);
      CHECK(ball_contains(W.W));
      const SiegelUpperPoint back = cayley_inv(W);
      CHECK((back.v - v.v).cwiseAbs().maxCoeff() < 1e-11);

      const SiegelBallPoint Wr = random_ball_point(n, 2000 * n + seed);
      const SiegelUpperPoint vu = cayley_inv(Wr);
      CHECK(upper_contains(vu.v));
      CHECK((cayley(vu).W - Wr.W).cwiseAbs().maxCoeff() < 1e-11);
    }
  }
}

TEST_CASE("partial cayley on fixed points") {
  JacobiUpperPoint x;
  x.v.v = kI * ComplexMatrix::Identity(2, 2);
  x.u = random_complex_vector(2, 5);
  const JacobiBallPoint y = partial_cayley(x);
  CHECK(y.W.W.cwiseAbs().maxCoeff() < 1e-15);
  CHECK((y.z - x.u).cwiseAbs().maxCoeff() < 1e-15);

  JacobiUpperPoint s;
  s.v.v = 2.0 * kI * ComplexMatrix::Identity(1, 1);
  s.u = ComplexVector::Ones(1);
  const JacobiBallPoint t = partial_cayley(s);
  CHECK(std::abs(t.W.W(0, 0) - Complex(1.0 / 3.0, 0)) < 1e-15);
  CHECK(std::abs(t.z(0) - Complex(2.0 / 3.0, 0)) < 1e-15);

  const JacobiUpperPoint back = partial_cayley_inv(t);
  CHECK(std::abs(back.v.v(0, 0) - Complex(0, 2)) < 1e-14);
  CHECK(std::abs(back.u(0) - Complex(1, 0)) < 1e-14);
}

TEST_CASE("partial cayley roundtrip on random points") {
  for (Eigen::Index n : {1, 2, 3}) {
    const JacobiUpperPoint x = random_jacobi_upper_point(n, 31 + n);
    const JacobiUpperPoint rt = partial_cayley_inv(partial_cayley(x));
    CHECK((rt.v.v - x.v.v).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((rt.u - x.u).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("fc transform") {
  EtaBallPoint p;
  p.W.W = ComplexMatrix::Zero(2, 2);
  p.eta = random_complex_vector(2, 9);
  CHECK((fc(p).z - p.eta).cwiseAbs().maxCoeff() < 1e-15);

  EtaBallPoint q;
  q.W.W = 0.5 * ComplexMatrix::Identity(1, 1);
  q.eta = ComplexVector::Ones(1);
  CHECK(std::abs(fc(q).z(0) - Complex(0.5, 0)) < 1e-15);

  JacobiBallPoint r;
  r.W.W = 0.5 * ComplexMatrix::Identity(1, 1);
  r.z = ComplexVector::Ones(1) * 0.5;
  CHECK(std::abs(fc_inv(r).eta(0) - Complex(1, 0)) < 1e-15);

  for (Eigen::Index n : {1, 2, 3}) {
    const JacobiBallPoint x = random_jacobi_ball_point(n, 77 + n);
    const EtaBallPoint e = fc_inv(x);
    // defining identity z = eta - W conj(eta)
    CHECK((x.z - (e.eta - x.W.W * e.eta.conjugate())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((fc(e).z - x.z).cwiseAbs().maxCoeff() < 1e-12);

    const EtaBallPoint p2 = random_eta_ball_point(n, 99 + n);
    const EtaBallPoint rt = fc_inv(fc(p2));
    CHECK((rt.eta - p2.eta).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("fc1 on fixed points") {
  const SiegelUpperPoint iI{kI * ComplexMatrix::Identity(2, 2)};
  const ComplexVector eta = random_complex_vector(2, 4);
  const JacobiUpperPoint x = fc1(eta, iI);
  CHECK((x.u - eta).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((fc1_inv(x) - eta).cwiseAbs().maxCoeff() < 1e-13);

  const SiegelUpperPoint two_i{2.0 * kI * ComplexMatrix::Identity(1, 1)};
  const JacobiUpperPoint y = fc1(ComplexVector::Ones(1), two_i);
  CHECK(std::abs(y.u(0) - Complex(1, 0)) < 1e-15);
  JacobiUpperPoint z;
  z.v = two_i;
  z.u = ComplexVector::Ones(1);
  CHECK(std::abs(fc1_inv(z)(0) - Complex(1, 0)) < 1e-14);
}

TEST_CASE("fc1_inv agrees with the composition through the partial Cayley map") {
  for (Eigen::Index n : {1, 2, 3}) {
    for (std::uint64_t seed : {5ull, 6ull}) {
      const JacobiUpperPoint x = random_jacobi_upper_point(n, 1234 * n + seed);
      const ComplexVector literal = fc1_inv(x);
      const ComplexVector composed = fc_inv(partial_cayley(x)).eta;
      CHECK((literal - composed).cwiseAbs().maxCoeff() < 1e-9);
      // fc1 o fc1_inv = id
      const JacobiUpperPoint rt = fc1(literal, x.v);
      CHECK((rt.u - x.u).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("transforms are smooth: FD Jacobians settle at second order") {
  // second-order central stencils halve the error by ~4 when the step halves
  const SiegelUpperPoint v = random_upper_point(2, 404);
  auto probe = [&v](double h) {
    SiegelUpperPoint plus = v, minus = v;
    plus.v(0, 1) += h;
    plus.v(1, 0) += h;
    minus.v(0, 1) -= h;
    minus.v(1, 0) -= h;
    return ((cayley(plus).W - cayley(minus).W) / (2.0 * h))(0, 0);
  };
  const Complex d1 = probe(1e-3);
  const Complex d2 = probe(5e-4);
  const Complex d3 = probe(2.5e-4);
  const double e1 = std::abs(d1 - d3);
  const double e2 = std::abs(d2 - d3);
  CHECK(std::isfinite(std::abs(d1)));
  // eliminating the shared reference point, the ratio (e1 - e2)/e2 ~ 3
  CHECK(e1 / e2 > 2.0);
  CHECK(e1 / e2 < 8.0);
}

TEST_CASE("samplers honor determinism and membership") {
  const SiegelBallPoint a = random_ball_point(3, 42);
  const SiegelBallPoint b = random_ball_point(3, 42);
  CHECK((a.W - b.W).cwiseAbs().maxCoeff() == 0.0);

  const SiegelBallPoint degenerate = random_ball_point(2, 7, 1.0);
  CHECK(degenerate.W.cwiseAbs().maxCoeff() == 0.0);

  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const SiegelBallPoint p = random_ball_point(3, seed, 0.05);
    CHECK(ball_contains(p.W, 0.04));
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CHECK(upper_contains(random_upper_point(2, seed).v));
  }
}

TEST_CASE("boundary-adjacent solves emit a conditioning warning") {
  JacobiBallPoint x;
  x.z = ComplexVector::Ones(2);
  // one direction hugs the boundary, the other stays interior
  x.W.W = ComplexMatrix::Zero(2, 2);
  x.W.W(0, 0) = 1.0 - 1e-12;
  Diagnostics diag;
  (void)fc_inv(x, &diag);
  CHECK(diag.conditioning_warning);
  CHECK(diag.min_rcond < 1e-10);

  Diagnostics clean;
  (void)fc_inv(random_jacobi_ball_point(2, 3, 0.4), &clean);
  CHECK_FALSE(clean.conditioning_warning);
}
