#pragma once

#include "sjd/domains.hpp"
#include "sjd/hamiltonian.hpp"
#include "sjd/types.hpp"

namespace sjd {

// Coordinate chart on the Siegel-Jacobi ball used for metric/tangent work:
// (z_1..z_n, w_11, w_12, .., w_1n, w_22, .., w_nn) — z block then the upper
// triangle of W in row-major order. N = n(n+3)/2.
Eigen::Index coord_count(Eigen::Index n);
ComplexVector point_to_coords(const JacobiBallPoint& x);
JacobiBallPoint coords_to_point(const ComplexVector& coords, Eigen::Index n);
// Symmetric matrix from the w-part of a coordinate/tangent vector.
ComplexMatrix tangent_w_matrix(const ComplexVector& tangent, Eigen::Index n);

// Reproducing kernel on the diagonal: det(M)^{k/2} exp(F),
// M = (I - W conj W)^-1, 2F = 2 z*^t M z + z^t conj(W) M z + z*^t M W z*.
double kernel_diag(const JacobiBallPoint& x, double k, Diagnostics* diag = nullptr);

// Two-point kernel (e_{x,V}, e_{y,W})_k; hermitian in its arguments and
// reduces to kernel_diag on the diagonal.
Complex kernel_two_point(const JacobiBallPoint& x1, const JacobiBallPoint& x2,
                         double k, Diagnostics* diag = nullptr);

// Kernel in the (eta, W) chart: det(M)^{k/2} exp(calF),
// calF = eta*^t eta - (1/2) eta^t conj(W) eta - (1/2) eta*^t W eta*.
double kernel_eta(const EtaBallPoint& p, double k);

// Kaehler potential f = log kernel_diag.
double kahler_potential(const JacobiBallPoint& x, double k);

// Closed-form first derivatives of the potential: df/dz_i = conj(eta)_i and
// the symmetric-matrix gradient nabla f = (1/2)(k X + conj(eta) conj(eta)^t),
// X = conj(W) M. The independent-coordinate derivative of w_pq is
// (2 - delta_pq) times the nabla entry.
ComplexVector potential_dz(const JacobiBallPoint& x);
ComplexMatrix potential_nabla_w(const JacobiBallPoint& x, double k);

struct MetricMatrix {
  ComplexMatrix G;  // G_ab = d^2 f / (d zeta_a d conj zeta_b)
  double hermiticity_residual() const {
    return (G - G.adjoint()).cwiseAbs().maxCoeff();
  }
};

// Mixed second derivatives of the potential by central finite differences in
// the chart coordinates. Entries are independent; the parallel variant runs
// them under OpenMP with identical results.
MetricMatrix metric(const JacobiBallPoint& x, double k, double step = 1e-4);
MetricMatrix metric_reference(const JacobiBallPoint& x, double k, double step = 1e-4);

// Kaehler two-form omega_n(T1, T2) from the closed form
// -i omega = (k/2) tr(B ^ conj B) + tr(A^t conj(M) ^ conj A),
// A = dz + dW conj(eta), B = M dW.
double two_form(const JacobiBallPoint& x, double k, const ComplexVector& T1,
                const ComplexVector& T2);

// Product form on C^n x D_n: -i omega = (k/2) tr(B ^ conj B) + tr(d eta^t ^ d conj eta).
double two_form_product_eta(const EtaBallPoint& p, double k, const ComplexVector& T1,
                            const ComplexVector& T2);

// J_n(p) = 2^n pi^{n(n+1)/2} prod_i Gamma(2p+2i)/Gamma(2p+n+i+1), p > -1.
double norm_const_J(Eigen::Index n, double p);

// Lambda_n of the (z, W) scalar product; requires k > 2n + 2.
double norm_const_Lambda(Eigen::Index n, double k);

// Monte-Carlo estimate of the n=1 normalization integral int rho_1 dz dW
// (= 1/Lambda_1). Stratified over the disk factor, Gaussian importance
// sampling in z; deterministic for fixed seed independent of thread count.
double mc_inverse_lambda1(double k, std::int64_t samples, std::uint64_t seed);
double mc_inverse_lambda1_reference(double k, std::int64_t samples,
                                    std::uint64_t seed);

// Energy function (covariant symbol) of a linear Hamiltonian. In the
// decoupled chart it splits as H_eta(eta) + H_w(W).
double energy(const EtaBallPoint& p, const LinearHamiltonian& H);
double energy_eta_part(const ComplexVector& eta, const LinearHamiltonian& H);
double energy_w_part(const ComplexMatrix& W, const LinearHamiltonian& H);
// Same function through the (z, W) chart variables.
double energy_ball(const JacobiBallPoint& x, const LinearHamiltonian& H);

// Closed-form gradient: d H_eta / d eta and the symmetric-matrix gradient of
// H_w (nabla convention), (k/2)(I - conj(W) W)^-1 conj(Lam) (I - W conj W)^-1
// with Lam the stationarity matrix of the ball flow.
struct EnergyGradient {
  ComplexVector d_eta;
  ComplexMatrix nabla_w;
};
EnergyGradient energy_gradient(const EtaBallPoint& p, const LinearHamiltonian& H);

// Timed path samples for the phase integrals.
struct PathSample {
  double t;
  JacobiBallPoint x;
};

struct PhaseReport {
  double berry = 0.0;
  double dynamical = 0.0;
  double total = 0.0;
};

// Berry phase -Im int sum df/dzeta dzeta by trapezoid over the path samples.
double berry_phase(const std::vector<PathSample>& path, double k);
// Dynamical phase -int H dt by trapezoid over the path samples.
double dynamical_phase(const std::vector<PathSample>& path,
                       const LinearHamiltonian& H);
PhaseReport phases(const std::vector<PathSample>& path, const LinearHamiltonian& H);

std::vector<PathSample> eta_path_to_ball(const std::vector<std::pair<double, EtaBallPoint>>& path);

}  // namespace sjd
