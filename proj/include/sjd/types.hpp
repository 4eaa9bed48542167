#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sjd {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// Default absolute tolerance on max-norm residuals of the structure predicates.
inline constexpr double kStructureTol = 1e-9;
// Open-domain membership margin; flows are rejected once it is crossed.
inline constexpr double kMembershipMargin = 1e-8;
// Reciprocal-condition threshold below which boundary-adjacent solves warn.
inline constexpr double kRcondWarn = 1e-10;
// Tolerance used when grouping computed eigenvalues into quadruples.
inline constexpr double kPairingTol = 1e-6;
// Eigenvector conditioning limits: exp shortcut / closed-form diagonal solver.
inline constexpr double kExpEigCondLimit = 1e6;
inline constexpr double kDiagSolveCondLimit = 1e8;
// Chart-escape detector on |det(U3*W0 + U4)|.
inline constexpr double kChartEscapeTol = 1e-12;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct StructureError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChartEscapeError : std::runtime_error {
  ChartEscapeError(const std::string& what, double when)
      : std::runtime_error(what), time(when) {}
  double time = 0.0;
};

struct BranchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DefectiveLiftError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PathError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-fatal findings (conditioning, branch crossings). Callers that do not
// care pass nullptr.
struct Diagnostics {
  bool conditioning_warning = false;
  bool branch_flag = false;
  double min_rcond = 1.0;
  std::vector<std::string> notes;

  void warn_conditioning(double rcond, const std::string& where) {
    conditioning_warning = true;
    if (rcond < min_rcond) min_rcond = rcond;
    notes.push_back("conditioning: rcond=" + std::to_string(rcond) + " in " + where);
  }
  void flag_branch(const std::string& where) {
    branch_flag = true;
    notes.push_back("branch: determinant near negative real axis in " + where);
  }
};

inline void require(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}

}  // namespace sjd
