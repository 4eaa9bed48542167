#include "sjd/cli.hpp"

#include "sjd/dynamics.hpp"
#include "sjd/io.hpp"
#include "sjd/kahler.hpp"
#include "sjd/linalg.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>

namespace sjd::cli {

namespace {

using io::json;

struct CliSettings {
  double tol = kStructureTol;
  std::uint64_t seed = 0;
  std::string method;  // empty: take the config file's choice
  std::string out;
  std::string config;
};

json point_checks(const io::AnyPoint& p, double tol) {
  json checks;
  bool pass = true;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SiegelBallPoint>) {
          checks["ball_margin"] = ball_margin(x.W);
          pass = ball_contains(x.W, kMembershipMargin, tol);
        } else if constexpr (std::is_same_v<T, SiegelUpperPoint>) {
          checks["upper_margin"] = upper_margin(x.v);
          pass = upper_contains(x.v, kMembershipMargin, tol);
        } else if constexpr (std::is_same_v<T, JacobiBallPoint>) {
          checks["ball_margin"] = ball_margin(x.W.W);
          pass = ball_contains(x.W.W, kMembershipMargin, tol);
        } else if constexpr (std::is_same_v<T, JacobiUpperPoint>) {
          checks["upper_margin"] = upper_margin(x.v.v);
          pass = upper_contains(x.v.v, kMembershipMargin, tol);
        } else {
          checks["ball_margin"] = ball_margin(x.W.W);
          pass = ball_contains(x.W.W, kMembershipMargin, tol);
        }
      },
      p);
  checks["pass"] = pass;
  return checks;
}

int cmd_check(const std::vector<std::string>& files, const CliSettings& s,
              std::ostream& out) {
  json report = json::array();
  bool all_pass = true;
  for (const std::string& file : files) {
    const json doc = io::load_file(file);
    json entry;
    entry["file"] = file;
    if (doc.contains("chart")) {
      entry["type"] = "point";
      entry["chart"] = doc.at("chart");
      const io::AnyPoint p = io::point_from_json(doc);
      entry["checks"] = point_checks(p, s.tol);
      all_pass = all_pass && entry["checks"]["pass"].get<bool>();
    } else if (doc.contains("eps0")) {
      entry["type"] = "hamiltonian";
      bool pass = true;
      try {
        const LinearHamiltonian H = io::hamiltonian_from_json(doc, s.tol);
        entry["hermiticity_residual"] = H.hermiticity_residual();
      } catch (const DomainError& e) {
        pass = false;
        entry["error"] = e.what();
      }
      entry["pass"] = pass;
      all_pass = all_pass && pass;
    } else if (doc.contains("kind")) {
      entry["type"] = "element";
      bool pass = true;
      try {
        (void)io::element_from_json(doc);
      } catch (const DomainError& e) {
        pass = false;
        entry["error"] = e.what();
      }
      entry["pass"] = pass;
      all_pass = all_pass && pass;
    } else if (doc.contains("rows")) {
      entry["type"] = "matrix";
      const ComplexMatrix M = io::matrix_from_json(doc);
      const StructuredMatrixReport rep = structure_report(M, s.tol);
      entry["is_symmetric"] = rep.is_symmetric;
      entry["is_hermitian"] = rep.is_hermitian;
      entry["is_symplectic"] = rep.is_symplectic;
      entry["is_hamiltonian"] = rep.is_hamiltonian;
      entry["is_sp_complex"] = rep.is_sp_complex;
      entry["max_violation"] = rep.max_violation;
      const bool pass = rep.is_symmetric || rep.is_hermitian || rep.is_symplectic ||
                        rep.is_hamiltonian || rep.is_sp_complex;
      entry["pass"] = pass;
      all_pass = all_pass && pass;
    } else {
      throw io::ParseError("unrecognized document schema in " + file);
    }
    report.push_back(std::move(entry));
  }
  out << report.dump(2) << "\n";
  return all_pass ? kExitOk : kExitDomain;
}

io::AnyPoint apply_transform(const std::string& tag, const io::AnyPoint& p) {
  auto wrong_chart = [&tag]() -> io::AnyPoint {
    throw DomainError("transform " + tag + ": input chart mismatch");
  };
  if (tag == "cayley") {
    if (const auto* x = std::get_if<SiegelUpperPoint>(&p)) return cayley(*x);
    return wrong_chart();
  }
  if (tag == "cayley_inv") {
    if (const auto* x = std::get_if<SiegelBallPoint>(&p)) return cayley_inv(*x);
    return wrong_chart();
  }
  if (tag == "partial_cayley") {
    if (const auto* x = std::get_if<JacobiUpperPoint>(&p)) return partial_cayley(*x);
    return wrong_chart();
  }
  if (tag == "partial_cayley_inv") {
    if (const auto* x = std::get_if<JacobiBallPoint>(&p)) return partial_cayley_inv(*x);
    return wrong_chart();
  }
  if (tag == "fc") {
    if (const auto* x = std::get_if<EtaBallPoint>(&p)) return fc(*x);
    return wrong_chart();
  }
  if (tag == "fc_inv") {
    if (const auto* x = std::get_if<JacobiBallPoint>(&p)) return fc_inv(*x);
    return wrong_chart();
  }
  if (tag == "fc1_inv") {
    if (const auto* x = std::get_if<JacobiUpperPoint>(&p)) {
      EtaBallPoint out;
      out.eta = fc1_inv(*x);
      out.W = cayley(x->v);
      return out;
    }
    return wrong_chart();
  }
  throw DomainError("unknown transform tag: " + tag);
}

int cmd_transform(const std::string& tag, const std::string& in_path,
                  const CliSettings& s, std::ostream& out) {
  const json doc = io::load_file(in_path);
  io::AnyPoint moved = SiegelBallPoint{ComplexMatrix::Zero(1, 1)};
  if (tag == "fc1") {
    // fc1 pairs an eta vector with an upper point; accept both in one
    // document: {"eta": [...], "v": matrix}.
    if (!doc.contains("eta") || !doc.contains("v")) {
      throw DomainError("fc1 expects a document with fields eta and v");
    }
    const ComplexVector eta = io::vector_from_json(doc.at("eta"));
    const SiegelUpperPoint v{io::matrix_from_json(doc.at("v"))};
    moved = fc1(eta, v);
  } else {
    moved = apply_transform(tag, io::point_from_json(doc));
  }
  const json result = io::point_to_json(moved);
  if (!s.out.empty()) {
    io::save_file(s.out, result);
    out << json{{"command", "transform"}, {"transform", tag}, {"out", s.out}}.dump(2)
        << "\n";
  } else {
    out << result.dump(2) << "\n";
  }
  return kExitOk;
}

struct PropagateConfig {
  LinearHamiltonian H;
  io::AnyPoint point;
  io::Chart chart;
  double horizon = 1.0;
  double step = 1e-3;
  double step_error_budget = 1e-6;  // per-step Richardson rejection threshold
  std::string method = "closed_form";
  std::string out_path;
};

PropagateConfig load_propagate_config(const CliSettings& s) {
  if (s.config.empty()) throw io::ParseError("propagate requires --config");
  const json cfg = io::load_file(s.config);
  PropagateConfig pc;
  pc.H = io::hamiltonian_from_json(io::load_file(cfg.at("hamiltonian").get<std::string>()),
                                   s.tol);
  pc.point = io::point_from_json(io::load_file(cfg.at("initial_point").get<std::string>()));
  pc.chart = io::chart_of(pc.point);
  if (cfg.contains("chart")) {
    const auto want = io::chart_from_name(cfg.at("chart").get<std::string>());
    if (!want) throw io::ParseError("config chart tag unknown");
    if (*want != pc.chart) throw DomainError("config chart differs from the point file");
  }
  pc.horizon = cfg.at("horizon").get<double>();
  pc.step = cfg.at("step").get<double>();
  if (!(pc.horizon > 0.0)) throw DomainError("config horizon must be positive");
  if (!(pc.step > 0.0)) throw DomainError("config step must be positive");
  if (!s.method.empty()) {
    pc.method = s.method;  // command-line flag wins over the config file
  } else if (cfg.contains("method")) {
    pc.method = cfg.at("method").get<std::string>();
  }
  if (cfg.contains("step_error_budget")) {
    pc.step_error_budget = cfg.at("step_error_budget").get<double>();
    if (!(pc.step_error_budget > 0.0)) {
      throw DomainError("config step_error_budget must be positive");
    }
  }
  pc.out_path = cfg.contains("out") ? cfg.at("out").get<std::string>() : "";
  if (!s.out.empty()) pc.out_path = s.out;
  if (pc.out_path.empty()) throw io::ParseError("propagate requires an output path");
  if (pc.method != "closed_form" && pc.method != "oracle" && pc.method != "both") {
    throw io::ParseError("method must be closed_form, oracle or both");
  }
  return pc;
}

struct ChartFlow {
  std::vector<std::string> labels;
  std::function<ComplexVector(double)> closed;          // coords at time t
  OdeRhs rhs;                                           // oracle right-hand side
  MembershipCheck member;
  ComplexVector y0;                                     // oracle state
  std::function<ComplexVector(const ComplexVector&)> to_coords;  // state -> coords
};

ComplexVector upper_point_coords(const JacobiUpperPoint& x) {
  const Eigen::Index n = x.dim();
  ComplexVector c(coord_count(n));
  c.head(n) = x.u;
  Eigen::Index idx = n;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) c(idx++) = x.v.v(i, j);
  return c;
}

std::vector<std::string> upper_coord_labels(Eigen::Index n, bool with_u) {
  std::vector<std::string> labels;
  if (with_u)
    for (Eigen::Index i = 0; i < n; ++i) labels.push_back("u" + std::to_string(i + 1));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      labels.push_back("v" + std::to_string(i + 1) + std::to_string(j + 1));
  return labels;
}

ComplexVector matrix_upper_coords(const ComplexMatrix& W) {
  const Eigen::Index n = W.rows();
  ComplexVector c(n * (n + 1) / 2);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) c(idx++) = W(i, j);
  return c;
}

std::vector<std::string> matrix_upper_labels(Eigen::Index n, const char* name) {
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      labels.push_back(name + std::to_string(i + 1) + std::to_string(j + 1));
  return labels;
}

ChartFlow make_flow(const PropagateConfig& pc) {
  const Eigen::Index n = pc.H.dim();
  ChartFlow flow;
  switch (pc.chart) {
    case io::Chart::JacobiBall: {
      const JacobiBallPoint x0 = std::get<JacobiBallPoint>(pc.point);
      require(x0.dim() == n, "point/hamiltonian dimension mismatch");
      const BallSystem S = build_ball_system(pc.H);
      flow.labels = io::ball_coord_labels(n);
      flow.closed = [x0, H = pc.H](double t) {
        return point_to_coords(ball_state_closed_form(x0, H, t));
      };
      flow.rhs = [S, n](double, const ComplexVector& y) { return ball_rhs(y, S, n); };
      flow.member = [n](const ComplexVector& y) {
        return ball_contains(unpack_ball_state(y, n).W.W);
      };
      flow.y0 = pack_ball_state(x0);
      flow.to_coords = [n](const ComplexVector& y) {
        return point_to_coords(unpack_ball_state(y, n));
      };
      break;
    }
    case io::Chart::EtaBall: {
      const EtaBallPoint p0 = std::get<EtaBallPoint>(pc.point);
      require(p0.dim() == n, "point/hamiltonian dimension mismatch");
      const BallSystem S = build_ball_system(pc.H);
      flow.labels.clear();
      for (Eigen::Index i = 0; i < n; ++i)
        flow.labels.push_back("eta" + std::to_string(i + 1));
      for (const std::string& l : matrix_upper_labels(n, "w")) flow.labels.push_back(l);
      flow.closed = [p0, H = pc.H, S](double t) {
        const ComplexVector eta = solve_eta(p0.eta, H, t);
        const ComplexMatrix W = riccati_solve_const(p0.W.W, S.sys, t);
        ComplexVector c(eta.size() + W.rows() * (W.rows() + 1) / 2);
        c.head(eta.size()) = eta;
        c.tail(c.size() - eta.size()) = matrix_upper_coords(W);
        return c;
      };
      flow.rhs = [S, H = pc.H, n](double, const ComplexVector& y) {
        const ComplexVector eta = y.head(n);
        ComplexMatrix W(n, n);
        for (Eigen::Index i = 0; i < n; ++i) W.col(i) = y.segment(n + i * n, n);
        const ComplexVector etadot =
            -kI * (H.eps + H.epsm * eta.conjugate() + 0.5 * H.eps0.transpose() * eta);
        const ComplexMatrix Wdot = S.sys.A * W + W * S.sys.D + S.sys.B + W * S.sys.C * W;
        ComplexVector out(y.size());
        out.head(n) = etadot;
        for (Eigen::Index i = 0; i < n; ++i) out.segment(n + i * n, n) = Wdot.col(i);
        return out;
      };
      flow.member = [n](const ComplexVector& y) {
        ComplexMatrix W(n, n);
        for (Eigen::Index i = 0; i < n; ++i) W.col(i) = y.segment(n + i * n, n);
        return ball_contains(W);
      };
      ComplexVector y0(n + n * n);
      y0.head(n) = p0.eta;
      for (Eigen::Index i = 0; i < n; ++i) y0.segment(n + i * n, n) = p0.W.W.col(i);
      flow.y0 = y0;
      flow.to_coords = [n](const ComplexVector& y) {
        ComplexMatrix W(n, n);
        for (Eigen::Index i = 0; i < n; ++i) W.col(i) = y.segment(n + i * n, n);
        ComplexVector c(n + n * (n + 1) / 2);
        c.head(n) = y.head(n);
        c.tail(c.size() - n) = matrix_upper_coords(W);
        return c;
      };
      break;
    }
    case io::Chart::Ball: {
      const SiegelBallPoint W0 = std::get<SiegelBallPoint>(pc.point);
      require(W0.dim() == n, "point/hamiltonian dimension mismatch");
      const BallSystem S = build_ball_system(pc.H);
      flow.labels = matrix_upper_labels(n, "w");
      flow.closed = [W0, S](double t) {
        return matrix_upper_coords(riccati_solve_const(W0.W, S.sys, t));
      };
      flow.rhs = [S, n](double, const ComplexVector& y) {
        ComplexMatrix W(n, n);
        for (Eigen::Index i = 0; i < n; ++i) W.col(i) = y.segment(i * n, n);
        const ComplexMatrix Wdot = S.sys.A * W + W * S.sys.D + S.sys.B + W * S.sys.C * W;
        ComplexVector out(y.size());
        for (Eigen::Index i = 0; i < n; ++i) out.segment(i * n, n) = Wdot.col(i);
        return out;
      };
      flow.member = [n](const ComplexVector& y) {
        ComplexMatrix W(n, n);
        for (Eigen::Index i = 0; i < n; ++i) W.col(i) = y.segment(i * n, n);
        return ball_contains(W);
      };
      ComplexVector y0(n * n);
      for (Eigen::Index i = 0; i < n; ++i) y0.segment(i * n, n) = W0.W.col(i);
      flow.y0 = y0;
      flow.to_coords = [n](const ComplexVector& y) {
        ComplexMatrix W(n, n);
        for (Eigen::Index i = 0; i < n; ++i) W.col(i) = y.segment(i * n, n);
        return matrix_upper_coords(W);
      };
      break;
    }
    case io::Chart::Upper: {
      const SiegelUpperPoint v0 = std::get<SiegelUpperPoint>(pc.point);
      require(v0.dim() == n, "point/hamiltonian dimension mismatch");
      const UpperSystem S = build_upper_system(pc.H);
      flow.labels = matrix_upper_labels(n, "v");
      flow.closed = [v0, S](double t) {
        return matrix_upper_coords(riccati_solve_const(v0.v, S.sys, t));
      };
      flow.rhs = [S, n](double, const ComplexVector& y) {
        ComplexMatrix v(n, n);
        for (Eigen::Index i = 0; i < n; ++i) v.col(i) = y.segment(i * n, n);
        const ComplexMatrix vdot = S.sys.A * v + v * S.sys.D + S.sys.B + v * S.sys.C * v;
        ComplexVector out(y.size());
        for (Eigen::Index i = 0; i < n; ++i) out.segment(i * n, n) = vdot.col(i);
        return out;
      };
      flow.member = [n](const ComplexVector& y) {
        ComplexMatrix v(n, n);
        for (Eigen::Index i = 0; i < n; ++i) v.col(i) = y.segment(i * n, n);
        return upper_contains(v);
      };
      ComplexVector y0(n * n);
      for (Eigen::Index i = 0; i < n; ++i) y0.segment(i * n, n) = v0.v.col(i);
      flow.y0 = y0;
      flow.to_coords = [n](const ComplexVector& y) {
        ComplexMatrix v(n, n);
        for (Eigen::Index i = 0; i < n; ++i) v.col(i) = y.segment(i * n, n);
        return matrix_upper_coords(v);
      };
      break;
    }
    case io::Chart::JacobiUpper: {
      const JacobiUpperPoint x0 = std::get<JacobiUpperPoint>(pc.point);
      require(x0.dim() == n, "point/hamiltonian dimension mismatch");
      const UpperSystem S = build_upper_system(pc.H);
      flow.labels = upper_coord_labels(n, true);
      flow.closed = [x0, H = pc.H, S](double t) {
        // u through the decoupled eta flow and the FC_1 transform.
        const ComplexVector eta0 = fc1_inv(x0);
        const ComplexVector eta = solve_eta(eta0, H, t);
        const ComplexMatrix v = riccati_solve_const(x0.v.v, S.sys, t);
        const JacobiUpperPoint xt = fc1(eta, SiegelUpperPoint{v});
        return upper_point_coords(xt);
      };
      flow.rhs = [S, n](double, const ComplexVector& y) { return upper_rhs(y, S, n); };
      flow.member = [n](const ComplexVector& y) {
        return upper_contains(unpack_upper_state(y, n).v.v);
      };
      flow.y0 = pack_upper_state(x0);
      flow.to_coords = [n](const ComplexVector& y) {
        return upper_point_coords(unpack_upper_state(y, n));
      };
      break;
    }
  }
  return flow;
}

int cmd_propagate(const CliSettings& s, std::ostream& out) {
  const PropagateConfig pc = load_propagate_config(s);
  const ChartFlow flow = make_flow(pc);
  const long long steps = std::max(1LL, std::llround(pc.horizon / pc.step));
  const double dt = pc.horizon / static_cast<double>(steps);

  std::vector<double> times(steps + 1);
  for (long long i = 0; i <= steps; ++i) times[i] = i * dt;

  std::vector<ComplexVector> closed_coords;
  std::vector<ComplexVector> oracle_coords;
  if (pc.method == "closed_form" || pc.method == "both") {
    closed_coords.reserve(times.size());
    for (double t : times) closed_coords.push_back(flow.closed(t));
  }
  if (pc.method == "oracle" || pc.method == "both") {
    const Trajectory traj = integrate_oracle(flow.rhs, flow.y0, 0.0, pc.horizon, dt,
                                             flow.member, pc.step_error_budget);
    oracle_coords.reserve(traj.states.size());
    for (const ComplexVector& y : traj.states) oracle_coords.push_back(flow.to_coords(y));
  }

  const std::vector<ComplexVector>& primary =
      (pc.method == "oracle") ? oracle_coords : closed_coords;
  std::ofstream file(pc.out_path);
  if (!file) throw io::ParseError("cannot write trajectory file: " + pc.out_path);
  file << io::trajectory_to_csv(times, primary, flow.labels);

  json report;
  report["command"] = "propagate";
  report["chart"] = io::chart_name(pc.chart);
  report["method"] = pc.method;
  report["rows"] = times.size();
  report["out"] = pc.out_path;
  if (pc.method == "both") {
    double dev = 0.0;
    for (size_t i = 0; i < times.size(); ++i) {
      dev = std::max(dev,
                     (closed_coords[i] - oracle_coords[i]).cwiseAbs().maxCoeff());
    }
    report["max_deviation"] = dev;
  }
  out << report.dump(2) << "\n";
  return kExitOk;
}

int cmd_analyze(const CliSettings& s, std::ostream& out) {
  if (s.config.empty()) throw io::ParseError("analyze requires --config");
  const json cfg = io::load_file(s.config);
  const LinearHamiltonian H = io::hamiltonian_from_json(
      io::load_file(cfg.at("hamiltonian").get<std::string>()), s.tol);
  const Eigen::Index n = H.dim();
  const double horizon = cfg.contains("horizon") ? cfg.at("horizon").get<double>() : 1.0;
  const double step = cfg.contains("step") ? cfg.at("step").get<double>() : 1e-2;
  if (!(horizon > 0.0) || !(step > 0.0)) {
    throw DomainError("analyze horizon and step must be positive");
  }

  JacobiBallPoint x0{ComplexVector::Zero(n),
                     SiegelBallPoint{ComplexMatrix::Zero(n, n)}};
  if (cfg.contains("point")) {
    const io::AnyPoint p = io::point_from_json(io::load_file(cfg.at("point").get<std::string>()));
    if (const auto* jb = std::get_if<JacobiBallPoint>(&p)) {
      x0 = *jb;
    } else if (const auto* eb = std::get_if<EtaBallPoint>(&p)) {
      x0 = fc(*eb);
    } else {
      throw DomainError("analyze point must live on the (Jacobi) ball");
    }
  }

  json report;
  report["command"] = "analyze";
  report["n"] = n;
  report["k"] = H.k;

  // Floquet analysis of the constant ball lift over the configured period.
  const BallSystem S = build_ball_system(H);
  const double period = cfg.contains("period") ? cfg.at("period").get<double>() : horizon;
  const int fl_steps = cfg.contains("floquet_steps")
                           ? cfg.at("floquet_steps").get<int>()
                           : 2000;
  const ComplexMatrix h_c = S.sys.lift();
  const std::function<ComplexMatrix(double)> const_coeffs = [&h_c](double) {
    return h_c;
  };
  report["floquet"] = io::floquet_to_json(monodromy(const_coeffs, period, fl_steps));

  report["energy_at_point"] = energy_ball(x0, H);
  report["energy_at_origin"] = energy_w_part(ComplexMatrix::Zero(n, n), H);

  json crit = json::array();
  for (const SiegelBallPoint& W : critical_points(H)) {
    crit.push_back(io::matrix_to_json(W.W));
  }
  report["critical_points"] = std::move(crit);

  report["kernel_diag"] = kernel_diag(x0, H.k);
  report["kernel_eta"] = kernel_eta(fc_inv(x0), H.k);
  const MetricMatrix G = metric(x0, H.k);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (G.G + G.G.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  report["metric"] = json{{"dim", G.G.rows()},
                          {"hermiticity_residual", G.hermiticity_residual()},
                          {"min_eigenvalue", es.eigenvalues().minCoeff()}};

  // phases along a supplied path file, or along an internally propagated one
  std::vector<PathSample> path;
  if (cfg.contains("path")) {
    path = io::path_from_json(io::load_file(cfg.at("path").get<std::string>()));
  } else {
    const BallTrajectory traj = propagate_coupled_ball(x0, H, horizon, step);
    path.reserve(traj.points.size());
    for (size_t i = 0; i < traj.points.size(); ++i) {
      path.push_back(PathSample{traj.times[i], traj.points[i]});
    }
  }
  const PhaseReport ph = phases(path, H);
  report["phases"] =
      json{{"berry", ph.berry}, {"dynamical", ph.dynamical}, {"total", ph.total}};

  if (!s.out.empty()) {
    io::save_file(s.out, report);
    out << json{{"command", "analyze"}, {"out", s.out}}.dump(2) << "\n";
  } else {
    out << report.dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Siegel-Jacobi domain toolkit"};
  app.require_subcommand(1);

  CliSettings settings;
  std::vector<std::string> check_files;
  std::string transform_tag;
  std::string transform_in;

  CLI::App* check = app.add_subcommand("check", "validate structured input files");
  check->add_option("files", check_files, "input documents")->required();
  check->add_option("--tol", settings.tol, "membership tolerance");

  CLI::App* transform = app.add_subcommand("transform", "apply a coordinate transform");
  transform
      ->add_option("tag", transform_tag,
                   "cayley|cayley_inv|partial_cayley|partial_cayley_inv|fc|fc_inv|fc1|fc1_inv")
      ->required();
  transform->add_option("--in", transform_in, "input point file")->required();
  transform->add_option("--out", settings.out, "output point file");
  transform->add_option("--tol", settings.tol, "membership tolerance");

  CLI::App* propagate = app.add_subcommand("propagate", "integrate a trajectory");
  propagate->add_option("--config", settings.config, "run configuration")->required();
  propagate->add_option("--seed", settings.seed, "seed recorded for determinism");
  propagate->add_option("--tol", settings.tol, "tolerance override");
  propagate->add_option("--method", settings.method, "closed_form|oracle|both");
  propagate->add_option("--out", settings.out, "trajectory output path");

  CLI::App* analyze = app.add_subcommand("analyze", "Floquet/energy/phase report");
  analyze->add_option("--config", settings.config, "run configuration")->required();
  analyze->add_option("--seed", settings.seed, "seed recorded for determinism");
  analyze->add_option("--tol", settings.tol, "tolerance override");
  analyze->add_option("--out", settings.out, "report output path");

  try {
    std::vector<std::string> argv_like = args;
    std::reverse(argv_like.begin(), argv_like.end());
    app.parse(argv_like);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(check_files, settings, out);
    if (transform->parsed()) return cmd_transform(transform_tag, transform_in, settings, out);
    if (propagate->parsed()) return cmd_propagate(settings, out);
    if (analyze->parsed()) return cmd_analyze(settings, out);
    err << "no subcommand\n";
    return kExitUsage;
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ChartEscapeError& e) {
    err << "numerical error: " << e.what() << " (t = " << e.time << ")\n";
    return kExitNumerical;
  } catch (const BranchError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const SingularityError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const StepError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DefectiveLiftError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const nlohmann::json::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace sjd::cli
