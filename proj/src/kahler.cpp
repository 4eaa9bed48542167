#include "sjd/kahler.hpp"

#include "sjd/dynamics.hpp"
#include "sjd/linalg.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <random>

namespace sjd {

namespace {

constexpr double kRealnessTol = 1e-9;

ComplexMatrix ball_M(const ComplexMatrix& W) {
  const ComplexMatrix gram =
      ComplexMatrix::Identity(W.rows(), W.cols()) - W * W.conjugate();
  return gram.fullPivLu().inverse();
}

double checked_real(const Complex& v, const char* what) {
  if (std::abs(v.imag()) > kRealnessTol * (1.0 + std::abs(v))) {
    throw DomainError(std::string(what) + ": value not real, imag = " +
                      std::to_string(v.imag()));
  }
  return v.real();
}

Complex det_power(const Complex& det, double exponent, Diagnostics* diag,
                  const char* where) {
  if (det.real() < 0.0 && std::abs(det.imag()) <= 1e-9 * std::abs(det)) {
    if (diag != nullptr) diag->flag_branch(where);
  }
  return std::exp(exponent * std::log(det));
}

}  // namespace

Eigen::Index coord_count(Eigen::Index n) { return n * (n + 3) / 2; }

ComplexVector point_to_coords(const JacobiBallPoint& x) {
  const Eigen::Index n = x.dim();
  ComplexVector c(coord_count(n));
  c.head(n) = x.z;
  Eigen::Index idx = n;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) c(idx++) = x.W.W(i, j);
  return c;
}

JacobiBallPoint coords_to_point(const ComplexVector& coords, Eigen::Index n) {
  require(coords.size() == coord_count(n), "coordinate vector has wrong length");
  JacobiBallPoint x;
  x.z = coords.head(n);
  x.W.W = ComplexMatrix::Zero(n, n);
  Eigen::Index idx = n;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      x.W.W(i, j) = coords(idx);
      x.W.W(j, i) = coords(idx);
      ++idx;
    }
  return x;
}

ComplexMatrix tangent_w_matrix(const ComplexVector& tangent, Eigen::Index n) {
  require(tangent.size() == coord_count(n), "tangent vector has wrong length");
  ComplexMatrix dW = ComplexMatrix::Zero(n, n);
  Eigen::Index idx = n;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      dW(i, j) = tangent(idx);
      dW(j, i) = tangent(idx);
      ++idx;
    }
  return dW;
}

double kernel_diag(const JacobiBallPoint& x, double k, Diagnostics* diag) {
  const ComplexMatrix& W = x.W.W;
  if (diag != nullptr) {
    const ComplexMatrix gram =
        ComplexMatrix::Identity(W.rows(), W.cols()) - W * W.conjugate();
    const double rc = rcond2(gram);
    if (rc < kRcondWarn) diag->warn_conditioning(rc, "kernel_diag");
  }
  const ComplexMatrix M = ball_M(W);
  const ComplexVector Mz = M * x.z;
  const Complex twoF = 2.0 * (x.z.conjugate().transpose() * Mz).value() +
                       (x.z.transpose() * W.conjugate() * Mz).value() +
                       (x.z.conjugate().transpose() * M * W * x.z.conjugate()).value();
  const double F = checked_real(0.5 * twoF, "kernel_diag F");
  const double detM = checked_real(M.determinant(), "kernel_diag det");
  const double value = std::pow(detM, 0.5 * k) * std::exp(F);
  if (!(value > 0.0)) throw DomainError("kernel_diag: non-positive kernel value");
  return value;
}

Complex kernel_two_point(const JacobiBallPoint& x1, const JacobiBallPoint& x2,
                         double k, Diagnostics* diag) {
  require(x1.dim() == x2.dim(), "kernel_two_point: dimension mismatch");
  const Eigen::Index n = x1.dim();
  const ComplexMatrix& V = x1.W.W;
  const ComplexMatrix& W = x2.W.W;
  const ComplexMatrix gram =
      ComplexMatrix::Identity(n, n) - W * V.conjugate();
  Eigen::FullPivLU<ComplexMatrix> lu(gram);
  if (!lu.isInvertible()) {
    throw SingularityError("kernel_two_point: I - W conj(V) singular");
  }
  const ComplexMatrix U = lu.inverse();
  const ComplexVector& xv = x1.z;
  const ComplexVector& yv = x2.z;
  const Complex twoF = 2.0 * (xv.conjugate().transpose() * U * yv).value() +
                       (yv.transpose() * V.conjugate() * U * yv).value() +
                       (xv.conjugate().transpose() * U * W * xv.conjugate()).value();
  return det_power(U.determinant(), 0.5 * k, diag, "kernel_two_point") *
         std::exp(0.5 * twoF);
}

double kernel_eta(const EtaBallPoint& p, double k) {
  const ComplexMatrix& W = p.W.W;
  const ComplexMatrix M = ball_M(W);
  const Complex calF =
      (p.eta.conjugate().transpose() * p.eta).value() -
      0.5 * (p.eta.transpose() * W.conjugate() * p.eta).value() -
      0.5 * (p.eta.conjugate().transpose() * W * p.eta.conjugate()).value();
  const double F = checked_real(calF, "kernel_eta F");
  const double detM = checked_real(M.determinant(), "kernel_eta det");
  const double value = std::pow(detM, 0.5 * k) * std::exp(F);
  if (!(value > 0.0)) throw DomainError("kernel_eta: non-positive kernel value");
  return value;
}

double kahler_potential(const JacobiBallPoint& x, double k) {
  const ComplexMatrix M = ball_M(x.W.W);
  const ComplexVector Mz = M * x.z;
  const Complex twoF =
      2.0 * (x.z.conjugate().transpose() * Mz).value() +
      (x.z.transpose() * x.W.W.conjugate() * Mz).value() +
      (x.z.conjugate().transpose() * M * x.W.W * x.z.conjugate()).value();
  const double F = checked_real(0.5 * twoF, "kahler_potential F");
  const double detM = checked_real(M.determinant(), "kahler_potential det");
  return 0.5 * k * std::log(detM) + F;
}

ComplexVector potential_dz(const JacobiBallPoint& x) {
  return fc_inv(x).eta.conjugate();
}

ComplexMatrix potential_nabla_w(const JacobiBallPoint& x, double k) {
  const ComplexMatrix M = ball_M(x.W.W);
  const ComplexMatrix X = x.W.W.conjugate() * M;
  const ComplexVector etab = fc_inv(x).eta.conjugate();
  return 0.5 * (k * X + etab * etab.transpose());
}

namespace {

// d^2 f / (d zeta_a d conj zeta_b) from real-direction central differences:
// 1/4 [dxa dxb + dya dyb + i (dxa dyb - dya dxb)] f.
struct MetricWorkspace {
  Eigen::Index n;
  Eigen::Index N;
  double k;
  ComplexVector base;

  double eval(const ComplexVector& coords) const {
    return kahler_potential(coords_to_point(coords, n), k);
  }

  // Second derivative along real directions (a, da) x (b, db);
  // da/db = 0 displaces the real part, 1 the imaginary part.
  double second(Eigen::Index a, int da, Eigen::Index b, int db, double h) const {
    const Complex sa = (da == 0) ? Complex(1, 0) : Complex(0, 1);
    const Complex sb = (db == 0) ? Complex(1, 0) : Complex(0, 1);
    if (a == b && da == db) {
      ComplexVector plus = base, minus = base;
      plus(a) += h * sa;
      minus(a) -= h * sa;
      return (eval(plus) - 2.0 * eval(base) + eval(minus)) / (h * h);
    }
    ComplexVector pp = base, pm = base, mp = base, mm = base;
    pp(a) += h * sa;
    pp(b) += h * sb;
    pm(a) += h * sa;
    pm(b) -= h * sb;
    mp(a) -= h * sa;
    mp(b) += h * sb;
    mm(a) -= h * sa;
    mm(b) -= h * sb;
    return (eval(pp) - eval(pm) - eval(mp) + eval(mm)) / (4.0 * h * h);
  }

  Complex entry(Eigen::Index a, Eigen::Index b, double h) const {
    const double xx = second(a, 0, b, 0, h);
    const double yy = second(a, 1, b, 1, h);
    const double xy = second(a, 0, b, 1, h);
    const double yx = second(a, 1, b, 0, h);
    return 0.25 * Complex(xx + yy, xy - yx);
  }
};

MetricMatrix metric_impl(const JacobiBallPoint& x, double k, double step,
                         bool parallel) {
  require(step > 0.0, "metric: step must be positive");
  MetricWorkspace ws{x.dim(), coord_count(x.dim()), k, point_to_coords(x)};
  MetricMatrix out;
  out.G.resize(ws.N, ws.N);
  ComplexMatrix coarse(ws.N, ws.N);
  const Eigen::Index total = ws.N * ws.N;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    const Eigen::Index a = idx / ws.N;
    const Eigen::Index b = idx % ws.N;
    out.G(a, b) = ws.entry(a, b, step);
    coarse(a, b) = ws.entry(a, b, 2.0 * step);
  }
  // Richardson disagreement signals cancellation when the step is too small.
  const double disagreement = (out.G - coarse).cwiseAbs().maxCoeff();
  const double scale = 1.0 + out.G.cwiseAbs().maxCoeff();
  if (disagreement > 0.5 * scale) {
    throw StepError("metric: finite-difference step unreliable (disagreement " +
                    std::to_string(disagreement) + ")");
  }
  return out;
}

}  // namespace

MetricMatrix metric(const JacobiBallPoint& x, double k, double step) {
  return metric_impl(x, k, step, true);
}

MetricMatrix metric_reference(const JacobiBallPoint& x, double k, double step) {
  return metric_impl(x, k, step, false);
}

namespace {

// Evaluate the matrix-valued one-forms of the closed-form two-form on a
// tangent vector (holomorphic components).
struct FormValues {
  ComplexVector A;   // dz + dW conj(eta)
  ComplexMatrix B;   // M dW
  ComplexMatrix dW;
};

FormValues eval_forms(const JacobiBallPoint& x, const ComplexMatrix& M,
                      const ComplexVector& eta, const ComplexVector& T) {
  const Eigen::Index n = x.dim();
  FormValues v;
  v.dW = tangent_w_matrix(T, n);
  v.A = T.head(n) + v.dW * eta.conjugate();
  v.B = M * v.dW;
  return v;
}

}  // namespace

double two_form(const JacobiBallPoint& x, double k, const ComplexVector& T1,
                const ComplexVector& T2) {
  const ComplexMatrix M = ball_M(x.W.W);
  const ComplexVector eta = fc_inv(x).eta;
  const FormValues f1 = eval_forms(x, M, eta, T1);
  const FormValues f2 = eval_forms(x, M, eta, T2);
  const Complex wedge_B = (f1.B * f2.B.conjugate()).trace() -
                          (f2.B * f1.B.conjugate()).trace();
  const Complex wedge_A =
      (f1.A.transpose() * M.conjugate() * f2.A.conjugate()).value() -
      (f2.A.transpose() * M.conjugate() * f1.A.conjugate()).value();
  const Complex minus_i_omega = 0.5 * k * wedge_B + wedge_A;
  return checked_real(kI * minus_i_omega, "two_form");
}

double two_form_product_eta(const EtaBallPoint& p, double k, const ComplexVector& T1,
                            const ComplexVector& T2) {
  const Eigen::Index n = p.dim();
  const ComplexMatrix M = ball_M(p.W.W);
  const ComplexMatrix B1 = M * tangent_w_matrix(T1, n);
  const ComplexMatrix B2 = M * tangent_w_matrix(T2, n);
  const Complex wedge_B =
      (B1 * B2.conjugate()).trace() - (B2 * B1.conjugate()).trace();
  const Complex wedge_eta =
      (T1.head(n).transpose() * T2.head(n).conjugate()).value() -
      (T2.head(n).transpose() * T1.head(n).conjugate()).value();
  const Complex minus_i_omega = 0.5 * k * wedge_B + wedge_eta;
  return checked_real(kI * minus_i_omega, "two_form_product_eta");
}

double norm_const_J(Eigen::Index n, double p) {
  require(n >= 1, "norm_const_J: n must be positive");
  if (!(p > -1.0)) throw DomainError("norm_const_J: requires p > -1");
  double log_j = n * std::log(2.0) + 0.5 * n * (n + 1) * std::log(M_PI);
  for (Eigen::Index i = 1; i <= n; ++i) {
    log_j += std::lgamma(2.0 * p + 2.0 * i) - std::lgamma(2.0 * p + n + i + 1.0);
  }
  return std::exp(log_j);
}

double norm_const_Lambda(Eigen::Index n, double k) {
  require(n >= 1, "norm_const_Lambda: n must be positive");
  if (!(k > 2.0 * n + 2.0)) {
    throw DomainError("norm_const_Lambda: requires k > 2n + 2");
  }
  double value = (k - 3.0) / (2.0 * std::pow(M_PI, 0.5 * n * (n + 3)));
  for (Eigen::Index i = 1; i <= n - 1; ++i) {
    const double factor = 0.5 * (k - 3.0) - n + i;
    value *= factor * std::exp(std::lgamma(k + i - 2.0) -
                               std::lgamma(k + 2.0 * (i - n - 1.0)));
  }
  return value;
}

namespace {

constexpr std::int64_t kMcChunk = 1 << 16;

// One stratified sample of the n=1 normalization integrand. The radial
// stratum fixes |w|^2; z is drawn from a widened Gaussian matched to the
// kernel so the weight stays bounded up to the disk boundary.
double mc_sample(double k, double u01, double theta, double g1, double g2) {
  const double r2 = u01;
  const double r = std::sqrt(r2);
  const double a = r * std::cos(theta);
  const double b = r * std::sin(theta);
  // Proposal covariance Sigma = [[1-a, -b], [-b, 1+a]] (inverse of the
  // kernel quadratic form), density q = sqrt(M)/(2 pi) exp(-F/2).
  // Cholesky of Sigma:
  const double l11 = std::sqrt(1.0 - a);
  const double l21 = -b / l11;
  const double l22 = std::sqrt((1.0 + a) - l21 * l21);
  const double zx = l11 * g1;
  const double zy = l21 * g1 + l22 * g2;
  const double M = 1.0 / (1.0 - r2);
  const double F =
      M * ((1.0 + a) * zx * zx + (1.0 - a) * zy * zy + 2.0 * b * zx * zy);
  const double p = 0.5 * k - 3.0;
  return 2.0 * M_PI * M_PI * std::pow(1.0 - r2, p + 0.5) * std::exp(-0.5 * F);
}

double mc_chunk_sum(double k, std::int64_t begin, std::int64_t end,
                    std::int64_t total, std::uint64_t seed, std::int64_t chunk_id) {
  std::mt19937_64 eng(seed ^ (0x9e3779b97f4a7c15ull * (chunk_id + 1)));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double acc = 0.0;
  for (std::int64_t j = begin; j < end; ++j) {
    const double u = (static_cast<double>(j) + unif(eng)) / static_cast<double>(total);
    const double theta = 2.0 * M_PI * unif(eng);
    const double g1 = gauss(eng);
    const double g2 = gauss(eng);
    acc += mc_sample(k, u, theta, g1, g2);
  }
  return acc;
}

double mc_impl(double k, std::int64_t samples, std::uint64_t seed, bool parallel) {
  require(samples > 0, "mc_inverse_lambda1: samples must be positive");
  if (!(k > 4.0)) throw DomainError("mc_inverse_lambda1: requires k > 4 at n = 1");
  const std::int64_t chunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<double> partial(chunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::int64_t begin = c * kMcChunk;
    const std::int64_t end = std::min(samples, begin + kMcChunk);
    partial[c] = mc_chunk_sum(k, begin, end, samples, seed, c);
  }
  double acc = 0.0;
  for (double v : partial) acc += v;  // fixed order
  return acc / static_cast<double>(samples);
}

}  // namespace

double mc_inverse_lambda1(double k, std::int64_t samples, std::uint64_t seed) {
  return mc_impl(k, samples, seed, true);
}

double mc_inverse_lambda1_reference(double k, std::int64_t samples,
                                    std::uint64_t seed) {
  return mc_impl(k, samples, seed, false);
}

double energy_eta_part(const ComplexVector& eta, const LinearHamiltonian& H) {
  const Complex lin = (H.eps.transpose() * eta.conjugate()).value() +
                      (H.eps.conjugate().transpose() * eta).value();
  const Complex quad =
      0.5 * ((eta.transpose() * H.epsp * eta).value() +
             (eta.conjugate().transpose() * H.epsm * eta.conjugate()).value() +
             (eta.transpose() * H.eps0 * eta.conjugate()).value());
  return checked_real(lin + quad, "energy_eta_part");
}

double energy_w_part(const ComplexMatrix& W, const LinearHamiltonian& H) {
  const Eigen::Index n = W.rows();
  const ComplexMatrix M = ball_M(W);
  const ComplexMatrix X = W.conjugate() * M;
  const ComplexMatrix WE0 = W * H.eps0;
  const ComplexMatrix Lam =
      H.epsm + 0.5 * (WE0 + WE0.transpose()) + W * H.epsp * W;
  const Complex value = 0.25 * H.k * H.eps0.trace() +
                        0.5 * H.k * ((H.epsp * W).trace() + (Lam * X).trace());
  (void)n;
  return checked_real(value, "energy_w_part");
}

double energy(const EtaBallPoint& p, const LinearHamiltonian& H) {
  H.validate();
  return energy_eta_part(p.eta, H) + energy_w_part(p.W.W, H);
}

double energy_ball(const JacobiBallPoint& x, const LinearHamiltonian& H) {
  H.validate();
  // Direct evaluation through the operator realizations with the closed-form
  // first derivatives of the potential.
  const ComplexVector etab = potential_dz(x);  // conj(eta)
  const ComplexMatrix nabla = potential_nabla_w(x, H.k);
  const ComplexMatrix& W = x.W.W;
  Complex value = (H.eps.transpose() * etab).value();
  value += (H.eps.conjugate().transpose() * (x.z + W * etab)).value();
  value += 0.25 * H.k * H.eps0.trace() + 0.5 * (x.z.transpose() * H.eps0 * etab).value() +
           (W * H.eps0 * nabla).trace();
  value += (H.epsm * nabla).trace();
  value += 0.5 * H.k * (H.epsp * W).trace() + 0.5 * (x.z.transpose() * H.epsp * x.z).value() +
           (x.z.transpose() * H.epsp * W * etab).value() +
           (H.epsp * W * nabla * W).trace();
  return checked_real(value, "energy_ball");
}

EnergyGradient energy_gradient(const EtaBallPoint& p, const LinearHamiltonian& H) {
  H.validate();
  const Eigen::Index n = p.dim();
  EnergyGradient g;
  g.d_eta = H.eps.conjugate() + H.epsp * p.eta + 0.5 * H.eps0 * p.eta.conjugate();
  const ComplexMatrix& W = p.W.W;
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  const ComplexMatrix WE0 = W * H.eps0;
  const ComplexMatrix Lam =
      H.epsm + 0.5 * (WE0 + WE0.transpose()) + W * H.epsp * W;
  const ComplexMatrix left = (I - W.conjugate() * W).fullPivLu().inverse();
  const ComplexMatrix right = (I - W * W.conjugate()).fullPivLu().inverse();
  g.nabla_w = 0.5 * H.k * left * Lam.conjugate() * right;
  return g;
}

namespace {

void check_path(const std::vector<PathSample>& path) {
  if (path.size() < 3) throw PathError("phase path needs at least 3 samples");
  for (size_t i = 1; i < path.size(); ++i) {
    if (!(path[i].t > path[i - 1].t)) {
      throw PathError("phase path timestamps must be strictly increasing");
    }
  }
}

// Holomorphic part of df in the chart coordinates (z block, then the upper
// triangle of W with the independent-coordinate weights).
ComplexVector potential_coord_derivative(const JacobiBallPoint& x, double k) {
  const Eigen::Index n = x.dim();
  ComplexVector d(coord_count(n));
  d.head(n) = potential_dz(x);
  const ComplexMatrix nabla = potential_nabla_w(x, k);
  Eigen::Index idx = n;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      d(idx++) = (i == j) ? nabla(i, j) : 2.0 * nabla(i, j);
    }
  return d;
}

}  // namespace

double berry_phase(const std::vector<PathSample>& path, double k) {
  check_path(path);
  double phase = 0.0;
  ComplexVector prev_d = potential_coord_derivative(path.front().x, k);
  ComplexVector prev_c = point_to_coords(path.front().x);
  for (size_t i = 1; i < path.size(); ++i) {
    const ComplexVector cur_d = potential_coord_derivative(path[i].x, k);
    const ComplexVector cur_c = point_to_coords(path[i].x);
    const ComplexVector dz = cur_c - prev_c;
    const Complex seg = 0.5 * ((prev_d + cur_d).transpose() * dz).value();
    phase += -seg.imag();
    prev_d = cur_d;
    prev_c = cur_c;
  }
  return phase;
}

double dynamical_phase(const std::vector<PathSample>& path,
                       const LinearHamiltonian& H) {
  check_path(path);
  double phase = 0.0;
  double prev_e = energy_ball(path.front().x, H);
  for (size_t i = 1; i < path.size(); ++i) {
    const double cur_e = energy_ball(path[i].x, H);
    phase += -0.5 * (prev_e + cur_e) * (path[i].t - path[i - 1].t);
    prev_e = cur_e;
  }
  return phase;
}

PhaseReport phases(const std::vector<PathSample>& path, const LinearHamiltonian& H) {
  PhaseReport rep;
  rep.berry = berry_phase(path, H.k);
  rep.dynamical = dynamical_phase(path, H);
  rep.total = rep.berry + rep.dynamical;
  return rep;
}

std::vector<PathSample> eta_path_to_ball(
    const std::vector<std::pair<double, EtaBallPoint>>& path) {
  std::vector<PathSample> out;
  out.reserve(path.size());
  for (const auto& [t, p] : path) out.push_back(PathSample{t, fc(p)});
  return out;
}

}  // namespace sjd
