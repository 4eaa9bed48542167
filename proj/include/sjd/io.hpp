#pragma once

#include "sjd/domains.hpp"
#include "sjd/dynamics.hpp"
#include "sjd/group.hpp"
#include "sjd/hamiltonian.hpp"
#include "sjd/kahler.hpp"
#include "sjd/types.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>

namespace sjd::io {

using json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrices are square documents {"n": n, "rows": [[{"re":..,"im":..}, ..], ..]};
// vectors are arrays of {re, im} pairs.
json matrix_to_json(const ComplexMatrix& M);
ComplexMatrix matrix_from_json(const json& j);
json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const json& j);
json real_matrix_to_json(const RealMatrix& M);
RealMatrix real_matrix_from_json(const json& j);
json real_vector_to_json(const RealVector& v);
RealVector real_vector_from_json(const json& j);

// Chart-tagged points: {"chart": tag, "n": n, <components>} with tags
// ball (W), upper (v), jacobi_ball (z, W), jacobi_upper (u, v),
// eta_ball (eta, W).
enum class Chart { Ball, Upper, JacobiBall, JacobiUpper, EtaBall };
const char* chart_name(Chart c);
std::optional<Chart> chart_from_name(const std::string& name);

using AnyPoint = std::variant<SiegelBallPoint, SiegelUpperPoint, JacobiBallPoint,
                              JacobiUpperPoint, EtaBallPoint>;

Chart chart_of(const AnyPoint& p);
json point_to_json(const AnyPoint& p);
AnyPoint point_from_json(const json& j);

// Group elements: {"kind": "complex"|"real", ...}.
json element_to_json(const JacobiElementC& h);
json element_to_json(const JacobiElementR& h);
std::variant<JacobiElementC, JacobiElementR> element_from_json(const json& j);

// Hamiltonian files: {"n":, "k":, "eps":, "eps0":, "epsm":, "epsp":}.
// Hermiticity is validated at load, never silently repaired.
json hamiltonian_to_json(const LinearHamiltonian& H);
LinearHamiltonian hamiltonian_from_json(const json& j, double tol = kStructureTol);

json floquet_to_json(const FloquetReport& rep);

// Path files: {"chart": "jacobi_ball", "n": n, "samples": [{"t":, "z":, "W":}, ..]}.
json path_to_json(const std::vector<PathSample>& path);
std::vector<PathSample> path_from_json(const json& j);

// Path files: {"chart":, "n":, "samples": [{"t":, <components>}, ...]}.
json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

// 17-significant-digit round-trippable formatting used by the CSV writer.
std::string format_double(double v);

// Trajectory CSV: header "t" then flattened components (z block then the
// upper triangle of W, re/im interleaved) in the metric coordinate order.
std::string trajectory_to_csv(const BallTrajectory& traj);
std::string trajectory_to_csv(const std::vector<double>& times,
                              const std::vector<ComplexVector>& coords,
                              const std::vector<std::string>& labels);

std::vector<std::string> ball_coord_labels(Eigen::Index n);

}  // namespace sjd::io
