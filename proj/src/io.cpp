#include "sjd/io.hpp"

#include "sjd/kahler.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sjd::io {

namespace {

json complex_to_json(const Complex& c) {
  return json{{"re", c.real()}, {"im", c.imag()}};
}

Complex complex_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im")) {
    throw ParseError("expected {re, im} pair");
  }
  return Complex(j.at("re").get<double>(), j.at("im").get<double>());
}

}  // namespace

json matrix_to_json(const ComplexMatrix& M) {
  if (M.rows() != M.cols()) throw ParseError("matrix document requires square input");
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(complex_to_json(M(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"n", M.rows()}, {"rows", std::move(rows)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("rows")) {
    throw ParseError("matrix document requires fields n and rows");
  }
  const Eigen::Index n = j.at("n").get<Eigen::Index>();
  const json& rows = j.at("rows");
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
    throw ParseError("matrix rows count differs from n");
  }
  ComplexMatrix M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows.at(i);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError("matrix row length differs from n");
    }
    for (Eigen::Index k = 0; k < n; ++k) M(i, k) = complex_from_json(row.at(k));
  }
  if (!M.allFinite()) throw ParseError("matrix entries must be finite");
  return M;
}

json vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

ComplexVector vector_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("vector document must be an array");
  ComplexVector v(j.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_from_json(j.at(i));
  if (!v.allFinite()) throw ParseError("vector entries must be finite");
  return v;
}

json real_matrix_to_json(const RealMatrix& M) {
  return matrix_to_json(ComplexMatrix(M.cast<Complex>()));
}

RealMatrix real_matrix_from_json(const json& j) {
  const ComplexMatrix M = matrix_from_json(j);
  if (M.imag().cwiseAbs().maxCoeff() > 0.0) {
    throw ParseError("expected a real matrix document");
  }
  return M.real();
}

json real_vector_to_json(const RealVector& v) {
  return vector_to_json(ComplexVector(v.cast<Complex>()));
}

RealVector real_vector_from_json(const json& j) {
  const ComplexVector v = vector_from_json(j);
  if (v.imag().cwiseAbs().maxCoeff() > 0.0) {
    throw ParseError("expected a real vector document");
  }
  return v.real();
}

const char* chart_name(Chart c) {
  switch (c) {
    case Chart::Ball: return "ball";
    case Chart::Upper: return "upper";
    case Chart::JacobiBall: return "jacobi_ball";
    case Chart::JacobiUpper: return "jacobi_upper";
    case Chart::EtaBall: return "eta_ball";
  }
  return "?";
}

std::optional<Chart> chart_from_name(const std::string& name) {
  if (name == "ball") return Chart::Ball;
  if (name == "upper") return Chart::Upper;
  if (name == "jacobi_ball") return Chart::JacobiBall;
  if (name == "jacobi_upper") return Chart::JacobiUpper;
  if (name == "eta_ball") return Chart::EtaBall;
  return std::nullopt;
}

Chart chart_of(const AnyPoint& p) {
  return std::visit(
      [](const auto& x) -> Chart {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SiegelBallPoint>) return Chart::Ball;
        else if constexpr (std::is_same_v<T, SiegelUpperPoint>) return Chart::Upper;
        else if constexpr (std::is_same_v<T, JacobiBallPoint>) return Chart::JacobiBall;
        else if constexpr (std::is_same_v<T, JacobiUpperPoint>) return Chart::JacobiUpper;
        else return Chart::EtaBall;
      },
      p);
}

json point_to_json(const AnyPoint& p) {
  json j;
  j["chart"] = chart_name(chart_of(p));
  std::visit(
      [&j](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        j["n"] = x.dim();
        if constexpr (std::is_same_v<T, SiegelBallPoint>) {
          j["W"] = matrix_to_json(x.W);
        } else if constexpr (std::is_same_v<T, SiegelUpperPoint>) {
          j["v"] = matrix_to_json(x.v);
        } else if constexpr (std::is_same_v<T, JacobiBallPoint>) {
          j["z"] = vector_to_json(x.z);
          j["W"] = matrix_to_json(x.W.W);
        } else if constexpr (std::is_same_v<T, JacobiUpperPoint>) {
          j["u"] = vector_to_json(x.u);
          j["v"] = matrix_to_json(x.v.v);
        } else {
          j["eta"] = vector_to_json(x.eta);
          j["W"] = matrix_to_json(x.W.W);
        }
      },
      p);
  return j;
}

AnyPoint point_from_json(const json& j) {
  if (!j.is_object() || !j.contains("chart")) {
    throw ParseError("point document requires a chart tag");
  }
  const auto chart = chart_from_name(j.at("chart").get<std::string>());
  if (!chart) throw ParseError("unknown chart tag");
  switch (*chart) {
    case Chart::Ball:
      return SiegelBallPoint{matrix_from_json(j.at("W"))};
    case Chart::Upper:
      return SiegelUpperPoint{matrix_from_json(j.at("v"))};
    case Chart::JacobiBall:
      return JacobiBallPoint{vector_from_json(j.at("z")),
                             SiegelBallPoint{matrix_from_json(j.at("W"))}};
    case Chart::JacobiUpper:
      return JacobiUpperPoint{vector_from_json(j.at("u")),
                              SiegelUpperPoint{matrix_from_json(j.at("v"))}};
    case Chart::EtaBall:
      return EtaBallPoint{vector_from_json(j.at("eta")),
                          SiegelBallPoint{matrix_from_json(j.at("W"))}};
  }
  throw ParseError("unreachable chart");
}

json element_to_json(const JacobiElementC& h) {
  json j;
  j["kind"] = "complex";
  j["n"] = h.dim();
  j["p"] = matrix_to_json(h.p);
  j["q"] = matrix_to_json(h.q);
  j["alpha"] = vector_to_json(h.alpha);
  j["t"] = h.t;
  return j;
}

json element_to_json(const JacobiElementR& h) {
  json j;
  j["kind"] = "real";
  j["n"] = h.dim();
  j["g"] = real_matrix_to_json(h.g);
  j["lam_mu"] = real_vector_to_json(h.lam_mu);
  j["kappa"] = h.kappa;
  return j;
}

std::variant<JacobiElementC, JacobiElementR> element_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "complex") {
    const ComplexMatrix p = matrix_from_json(j.at("p"));
    const ComplexMatrix q = matrix_from_json(j.at("q"));
    const Eigen::Index n = p.rows();
    ComplexMatrix g(2 * n, 2 * n);
    g.topLeftCorner(n, n) = p;
    g.topRightCorner(n, n) = q;
    g.bottomLeftCorner(n, n) = q.conjugate();
    g.bottomRightCorner(n, n) = p.conjugate();
    return JacobiElementC::from_matrix(g, vector_from_json(j.at("alpha")),
                                       j.at("t").get<double>());
  }
  if (kind == "real") {
    return JacobiElementR::make(real_matrix_from_json(j.at("g")),
                                real_vector_from_json(j.at("lam_mu")),
                                j.at("kappa").get<double>());
  }
  throw ParseError("unknown element kind");
}

json hamiltonian_to_json(const LinearHamiltonian& H) {
  json j;
  j["n"] = H.dim();
  j["k"] = H.k;
  j["eps"] = vector_to_json(H.eps);
  j["eps0"] = matrix_to_json(H.eps0);
  j["epsm"] = matrix_to_json(H.epsm);
  j["epsp"] = matrix_to_json(H.epsp);
  return j;
}

LinearHamiltonian hamiltonian_from_json(const json& j, double tol) {
  LinearHamiltonian H;
  H.eps = vector_from_json(j.at("eps"));
  H.eps0 = matrix_from_json(j.at("eps0"));
  H.epsm = matrix_from_json(j.at("epsm"));
  H.epsp = matrix_from_json(j.at("epsp"));
  H.k = j.at("k").get<double>();
  if (static_cast<Eigen::Index>(j.at("n").get<int>()) != H.dim()) {
    throw ParseError("hamiltonian n field differs from coefficient dimensions");
  }
  H.validate(tol);
  return H;
}

json floquet_to_json(const FloquetReport& rep) {
  json j;
  j["monodromy"] = matrix_to_json(rep.monodromy);
  json mult = json::array();
  for (const Complex& m : rep.multipliers) mult.push_back(complex_to_json(m));
  j["multipliers"] = std::move(mult);
  j["K_log"] = matrix_to_json(rep.K_log);
  j["k_log_valid"] = rep.k_log_valid;
  j["stable"] = rep.stable;
  j["parametrically_stable"] = rep.parametrically_stable;
  j["symplectic_residual"] = rep.symplectic_residual;
  j["hamiltonian_residual"] = rep.hamiltonian_residual;
  return j;
}

json path_to_json(const std::vector<PathSample>& path) {
  json j;
  j["chart"] = "jacobi_ball";
  j["n"] = path.empty() ? 0 : path.front().x.dim();
  json samples = json::array();
  for (const PathSample& s : path) {
    json entry;
    entry["t"] = s.t;
    entry["z"] = vector_to_json(s.x.z);
    entry["W"] = matrix_to_json(s.x.W.W);
    samples.push_back(std::move(entry));
  }
  j["samples"] = std::move(samples);
  return j;
}

std::vector<PathSample> path_from_json(const json& j) {
  if (!j.contains("samples")) throw ParseError("path document requires samples");
  std::vector<PathSample> out;
  for (const json& entry : j.at("samples")) {
    PathSample s;
    s.t = entry.at("t").get<double>();
    s.x.z = vector_from_json(entry.at("z"));
    s.x.W.W = matrix_from_json(entry.at("W"));
    out.push_back(std::move(s));
  }
  return out;
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("cannot parse " + path + ": " + e.what());
  }
  return j;
}

void save_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> ball_coord_labels(Eigen::Index n) {
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < n; ++i) {
    labels.push_back("z" + std::to_string(i + 1));
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      labels.push_back("w" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  return labels;
}

std::string trajectory_to_csv(const std::vector<double>& times,
                              const std::vector<ComplexVector>& coords,
                              const std::vector<std::string>& labels) {
  std::ostringstream out;
  out << "t";
  for (const std::string& l : labels) out << "," << l << "_re," << l << "_im";
  out << "\n";
  for (size_t r = 0; r < times.size(); ++r) {
    out << format_double(times[r]);
    for (Eigen::Index c = 0; c < coords[r].size(); ++c) {
      out << "," << format_double(coords[r](c).real()) << ","
          << format_double(coords[r](c).imag());
    }
    out << "\n";
  }
  return out.str();
}

std::string trajectory_to_csv(const BallTrajectory& traj) {
  std::vector<ComplexVector> coords;
  coords.reserve(traj.points.size());
  Eigen::Index n = 0;
  for (const JacobiBallPoint& p : traj.points) {
    n = p.dim();
    coords.push_back(point_to_coords(p));
  }
  return trajectory_to_csv(traj.times, coords, ball_coord_labels(n));
}

}  // namespace sjd::io
