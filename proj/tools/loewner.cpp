// loewner: command-line front end.
//
// Exit status: 0 success, 1 input error, 2 a mathematical check failed.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "loewner/chains.hpp"
#include "loewner/coefficients.hpp"
#include "loewner/errors.hpp"
#include "loewner/io.hpp"
#include "loewner/spirallike.hpp"
#include "loewner/transition.hpp"
#include "loewner/verify.hpp"

namespace fs = std::filesystem;
using loewner::io::json;
using loewner::CMatrix;
using loewner::CVector;
using loewner::cplx;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kCheckFailed = 2;

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << loewner::io::dump(j) << '\n';
  } else {
    loewner::io::save_json(out, j);
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw loewner::SchemaError("cannot write '" + path + "'");
  return os;
}

loewner::OperatorA load_A(const std::string& arg) {
  return loewner::analyze(loewner::io::matrix_from_json(loewner::io::load_json(arg)));
}

// --h may be a full generator or just {"H": [...]} / {"terms": [...]} to be
// combined with --A.
loewner::GeneratorSpec load_generator(const std::string& h_arg, const std::string& A_arg) {
  json j = h_arg.empty() ? json::object() : loewner::io::load_json(h_arg);
  if (!A_arg.empty()) j["A"] = loewner::io::load_json(A_arg);
  if (!j.contains("form")) j["form"] = j.contains("terms") ? "time_dependent" : "polynomial";
  return loewner::io::generator_from_json(j);
}

CVector parse_point(const std::string& text, int n) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
  if (static_cast<int>(v.size()) != 2 * n)
    throw loewner::SchemaError("--z: expected " + std::to_string(2 * n) + " numbers (re,im per component)");
  CVector z(n);
  for (int i = 0; i < n; ++i) z(i) = {v[2 * i], v[2 * i + 1]};
  return z;
}

std::vector<double> uniform_grid(double t0, double t1, double dt) {
  std::vector<double> g;
  const int count = static_cast<int>(std::floor((t1 - t0) / dt + 1e-9));
  for (int i = 0; i <= count; ++i) g.push_back(t0 + i * dt);
  if (g.back() < t1 - 1e-12) g.push_back(t1);
  return g;
}

std::string component_name(const loewner::MultiIndex& m, int s) {
  std::ostringstream os;
  os << "z^(";
  for (std::size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
  os << ") e_" << s;
  return os.str();
}

json obstruction_json(const loewner::Resonant& e) {
  json w = json::array();
  for (const auto& r : e.witnesses())
    w.push_back(json{{"m", r.m}, {"s", r.s}, {"direction", component_name(r.m, r.s)}});
  return json{{"verdict", "no_holomorphic_solution"}, {"degree", e.degree()}, {"witnesses", w},
              {"message", e.what()}};
}

struct Options {
  std::string A, h, generator, coeffs, points, out, z, f = "koebe", suite = "all";
  double s = 0.0, t = 10.0, tol = 1e-9, dt = 0.0, tmax = 10.0, eps = 0.1;
  double alpha = 1.5, beta = 0.5, lambda = 2.0, lambda_im = 0.0, M = 100.0, h_scale = 0.0;
  int K = 5, kmax = 4, samples = 50;
  std::uint64_t seed = 0;
};

int cmd_analyze(const Options& o) {
  const auto A = load_A(o.A);
  json j = loewner::io::to_json(A);
  std::vector<double> ts{0.0, 1.0, 2.0, 5.0, 10.0};
  const auto cert = loewner::exp_norm_certificates(A, ts);
  json samples = json::array();
  for (const auto& s : cert.samples)
    samples.push_back(json{{"t", s.t}, {"norm", s.norm}, {"bound", s.bound}, {"ratio", s.ratio}});
  j["exp_norm"] = json{{"samples", samples}, {"max_ratio", cert.max_ratio},
                       {"normal_equality_violated", cert.normal_equality_violated}};
  emit(j, o.out);
  return cert.normal_equality_violated ? kCheckFailed : kOk;
}

int cmd_resonance(const Options& o) {
  const auto A = load_A(o.A);
  emit(loewner::io::to_json(loewner::resonance_report(A, o.kmax)), o.out);
  return kOk;
}

int cmd_evolve(const Options& o) {
  const auto h = load_generator(o.generator, o.A);
  std::vector<CVector> pts;
  if (!o.points.empty()) pts = loewner::io::read_points_csv(o.points, h.n());
  if (!o.z.empty()) pts.push_back(parse_point(o.z, h.n()));
  if (pts.empty()) throw loewner::SchemaError("evolve: give --z or --points");
  loewner::IntegrateOptions io;
  if (o.dt > 0.0) io.output_times = uniform_grid(o.s, o.t, o.dt);
  const auto trajs = loewner::integrate_batch(h, pts, o.s, o.t, o.tol, io);
  bool ok = true;
  json summary = json::array();
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const auto rep = loewner::check_transition_inequality(trajs[i], h.A());
    ok = ok && rep.pass && rep.schwarz;
    json meta = loewner::io::trajectory_metadata(trajs[i], h);
    meta["transition_inequality"] = json{{"max_ratio", rep.max_ratio}, {"pass", rep.pass},
                                         {"schwarz", rep.schwarz}};
    if (!o.out.empty()) {
      fs::create_directories(o.out);
      const std::string stem = (fs::path(o.out) / ("trajectory_" + std::to_string(i))).string();
      auto csv = open_out(stem + ".csv");
      loewner::io::write_trajectory_csv(csv, trajs[i]);
      loewner::io::save_json(stem + ".json", meta);
    }
    summary.push_back(meta);
  }
  if (o.out.empty()) {
    if (trajs.size() == 1) loewner::io::write_trajectory_csv(std::cout, trajs[0]);
    else emit(summary, "");
  }
  return ok ? kOk : kCheckFailed;
}

loewner::io::CoefficientConfig load_coeffs(const std::string& path, int n) {
  if (path.empty()) return {};
  return loewner::io::coefficient_config_from_json(loewner::io::load_json(path), n);
}

int cmd_chain_coefficients(const Options& o) {
  const auto h = load_generator(o.generator, o.A);
  const auto cfg = load_coeffs(o.coeffs, h.n());
  const auto set = loewner::solve_coefficients(h, cfg.F0_le, cfg.K, cfg.options);
  const auto grid = uniform_grid(0.0, o.tmax, o.dt > 0.0 ? o.dt : 0.1);
  json meta = loewner::io::coefficient_metadata(set, h);
  meta["config"] = loewner::io::to_json(cfg);
  bool ok = true;
  json residuals = json::array();
  for (const auto& F : set.F) {
    const auto rep = loewner::residual_check(*F, grid);
    ok = ok && rep.pass;
    residuals.push_back(json{{"k", F->k()}, {"max_relative", rep.max_relative}, {"pass", rep.pass}});
  }
  meta["residuals"] = residuals;
  if (o.out.empty()) {
    loewner::io::write_coefficient_csv(std::cout, set, grid);
  } else {
    fs::create_directories(o.out);
    auto csv = open_out((fs::path(o.out) / "coefficients.csv").string());
    loewner::io::write_coefficient_csv(csv, set, grid);
    loewner::io::save_json((fs::path(o.out) / "coefficients.json").string(), meta);
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_chain_evaluate(const Options& o) {
  const auto h = load_generator(o.generator, o.A);
  const auto cfg = load_coeffs(o.coeffs, h.n());
  const auto set = loewner::solve_coefficients(h, cfg.F0_le, cfg.K, cfg.options);
  std::vector<CVector> pts;
  if (!o.points.empty()) pts = loewner::io::read_points_csv(o.points, h.n());
  if (!o.z.empty()) pts.push_back(parse_point(o.z, h.n()));
  if (pts.empty()) throw loewner::SchemaError("chain evaluate: give --z or --points");
  loewner::ChainOptions copt;
  copt.throw_on_failure = false;
  const auto ev = loewner::chain_limit_batch(h, set, pts, o.s, o.tol, copt);

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!o.out.empty()) {
    file = open_out(o.out);
    os = &file;
  }
  std::vector<std::string> names;
  for (int i = 1; i <= h.n(); ++i) {
    names.push_back("re_z" + std::to_string(i));
    names.push_back("im_z" + std::to_string(i));
  }
  for (int i = 1; i <= h.n(); ++i) {
    names.push_back("re_g" + std::to_string(i));
    names.push_back("im_g" + std::to_string(i));
  }
  names.push_back("tail_estimate");
  names.push_back("converged");
  loewner::io::write_csv_header(*os, names);
  for (const auto& p : ev.points) {
    std::vector<double> row;
    for (int i = 0; i < h.n(); ++i) {
      row.push_back(p.z(i).real());
      row.push_back(p.z(i).imag());
    }
    for (int i = 0; i < h.n(); ++i) {
      row.push_back(p.g(i).real());
      row.push_back(p.g(i).imag());
    }
    row.push_back(p.tail_estimate);
    row.push_back(p.converged ? 1.0 : 0.0);
    loewner::io::write_csv_row(*os, row);
  }
  return ev.all_converged() ? kOk : kCheckFailed;
}

int cmd_spirallike_solve(const Options& o) {
  const auto h = load_generator(o.h.empty() ? o.generator : o.h, o.A);
  try {
    const auto f = loewner::solve_spirallike(h, o.K);
    const std::vector<double> radii{0.2, 0.1};
    const auto rep = loewner::spirallike_residual(f, h, radii, 100, o.seed);
    emit(json{{"verdict", f.unique ? "unique" : "affine_family"},
              {"map", loewner::io::to_json(f)},
              {"residual", loewner::io::to_json(rep)}},
         o.out);
    return rep.decay_ok ? kOk : kCheckFailed;
  } catch (const loewner::NoHolomorphicSolution& e) {
    emit(obstruction_json(e), o.out);
    return kCheckFailed;
  }
}

int cmd_witness(const Options& o) {
  const auto A = load_A(o.A);
  const auto w = loewner::noncompactness_witness(A, o.M, o.h_scale);
  const std::vector<double> ts{0.5, 1.0, 2.0, 4.0};
  const auto mem = loewner::spirallike_membership(w.f, A, ts, o.samples, o.seed);
  json H = json::array();
  for (const auto& Q : w.H) H.push_back(loewner::io::to_json(Q));
  emit(json{{"map", loewner::io::to_json(w.f)},
            {"H", H},
            {"kernel_vector", loewner::io::to_json(w.kernel_vector)},
            {"certificate", loewner::io::to_json(w.certificate)},
            {"membership", loewner::io::to_json(mem)}},
       o.out);
  return w.certificate.norm_ok && mem.pass ? kOk : kCheckFailed;
}

int cmd_extend(const Options& o) {
  loewner::OneVarMap f1 = loewner::OneVarMap::identity();
  if (o.f == "koebe") f1 = loewner::OneVarMap::koebe();
  else if (o.f != "identity") throw loewner::SchemaError("--f: expected koebe or identity");
  const cplx lambda(o.lambda, o.lambda_im);
  const auto ext = loewner::roper_suffridge_extend(f1, o.alpha, o.beta, lambda, o.K);
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = 1.0;
  A(1, 1) = lambda;
  const std::vector<double> ts{0.5, 1.0, 2.0};
  const auto mem = loewner::spirallike_membership(ext.map, loewner::analyze(A), ts, o.samples, o.seed);
  emit(json{{"f", o.f},
            {"alpha", o.alpha},
            {"beta", o.beta},
            {"lambda", json::array({lambda.real(), lambda.imag()})},
            {"admissibility", loewner::io::to_json(ext.admissibility)},
            {"taylor", loewner::io::to_json(ext.taylor)},
            {"membership", loewner::io::to_json(mem)}},
       o.out);
  return ext.admissibility.admissible && !mem.pass ? kCheckFailed : kOk;
}

int cmd_verify(const Options& o) {
  const auto results = loewner::run_suite(o.suite, o.seed);
  bool ok = true;
  json suites = json::array();
  for (const auto& r : results) {
    json checks = json::array();
    for (const auto& c : r.checks)
      checks.push_back(json{{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
    suites.push_back(json{{"suite", r.name}, {"pass", r.pass()}, {"checks", checks}});
    ok = ok && r.pass();
  }
  emit(json{{"seed", o.seed}, {"pass", ok}, {"suites", suites}}, o.out);
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loewner chains in the unit ball of C^n"};
  app.require_subcommand(1);
  Options o;
  int status = kOk;
  std::function<int()> action;

  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output path (stdout if omitted)"); };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Sampling seed"); };

  auto* analyze = app.add_subcommand("analyze", "Spectral indices of A");
  analyze->add_option("--A", o.A, "Matrix JSON (file or inline)")->required();
  add_out(analyze);
  analyze->callback([&] { action = [&] { return cmd_analyze(o); }; });

  auto* resonance = app.add_subcommand("resonance", "Resonances of B_k for k <= kmax");
  resonance->add_option("--A", o.A, "Matrix JSON")->required();
  resonance->add_option("--kmax", o.kmax, "Largest degree");
  add_out(resonance);
  resonance->callback([&] { action = [&] { return cmd_resonance(o); }; });

  auto* evolve = app.add_subcommand("evolve", "Integrate the transition equation");
  evolve->add_option("--generator", o.generator, "Generator JSON")->required();
  evolve->add_option("--z", o.z, "Start point re1,im1,...");
  evolve->add_option("--points", o.points, "CSV of start points");
  evolve->add_option("--s", o.s, "Start time");
  evolve->add_option("--t", o.t, "End time");
  evolve->add_option("--tol", o.tol, "Relative tolerance");
  evolve->add_option("--dt", o.dt, "Output spacing (every step if omitted)");
  evolve->add_option("--out", o.out, "Output directory");
  evolve->callback([&] { action = [&] { return cmd_evolve(o); }; });

  auto* chain = app.add_subcommand("chain", "Coefficient ODEs and chain limits");
  chain->require_subcommand(1);
  auto* chain_eval = chain->add_subcommand("evaluate", "g(z, s) at the given points");
  chain_eval->add_option("--generator", o.generator, "Generator JSON")->required();
  chain_eval->add_option("--coeffs", o.coeffs, "Coefficient configuration JSON");
  chain_eval->add_option("--points", o.points, "CSV of points");
  chain_eval->add_option("--z", o.z, "Single point re1,im1,...");
  chain_eval->add_option("--s", o.s, "Base time");
  chain_eval->add_option("--tol", o.tol, "Increment tolerance");
  add_out(chain_eval);
  chain_eval->callback([&] { action = [&] { return cmd_chain_evaluate(o); }; });
  auto* chain_coef = chain->add_subcommand("coefficients", "Tabulate F_2..F_n0");
  chain_coef->add_option("--generator", o.generator, "Generator JSON")->required();
  chain_coef->add_option("--coeffs", o.coeffs, "Coefficient configuration JSON");
  chain_coef->add_option("--tmax", o.tmax, "Last tabulated time");
  chain_coef->add_option("--dt", o.dt, "Table spacing");
  chain_coef->add_option("--out", o.out, "Output directory");
  chain_coef->callback([&] { action = [&] { return cmd_chain_coefficients(o); }; });

  auto add_witness = [&](CLI::App* c) {
    c->add_option("--A", o.A, "Matrix JSON")->required();
    c->add_option("--M", o.M, "Lower bound for the norm of F_k0");
    c->add_option("--h-scale", o.h_scale, "Norm of H_k0 (0 gives h = Az)");
    c->add_option("--samples", o.samples, "Membership sample points");
    add_seed(c);
    add_out(c);
    c->callback([&] { action = [&] { return cmd_witness(o); }; });
  };
  auto add_extend = [&](CLI::App* c) {
    c->add_option("--f", o.f, "koebe or identity");
    c->add_option("--alpha", o.alpha, "alpha");
    c->add_option("--beta", o.beta, "beta");
    c->add_option("--lambda", o.lambda, "Re lambda");
    c->add_option("--lambda-im", o.lambda_im, "Im lambda");
    c->add_option("--K", o.K, "Taylor order");
    c->add_option("--samples", o.samples, "Membership sample points");
    add_seed(c);
    add_out(c);
    c->callback([&] { action = [&] { return cmd_extend(o); }; });
  };

  auto* spir = app.add_subcommand("spirallike", "Autonomous theory");
  spir->require_subcommand(1);
  auto* solve = spir->add_subcommand("solve", "Solve Df h = A f to order K");
  solve->set_help_flag("--help", "Print this help message and exit");
  solve->add_option("--A", o.A, "Matrix JSON");
  solve->add_option("--h", o.h, "Generator JSON or {\"H\": [...]}");
  solve->add_option("--K", o.K, "Truncation order");
  add_seed(solve);
  add_out(solve);
  solve->callback([&] { action = [&] { return cmd_spirallike_solve(o); }; });
  add_witness(spir->add_subcommand("witness", "Non-compactness witness for resonant A"));
  add_extend(spir->add_subcommand("extend", "Roper-Suffridge extension"));
  add_witness(app.add_subcommand("witness", "Same as spirallike witness"));
  add_extend(app.add_subcommand("extend", "Same as spirallike extend"));

  auto* verify = app.add_subcommand("verify", "Property suites");
  verify->add_option("--suite", o.suite, "Suite name or all");
  add_seed(verify);
  add_out(verify);
  verify->callback([&] { action = [&] { return cmd_verify(o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    status = action();
  } catch (const loewner::SchemaError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const loewner::PreconditionViolated& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const loewner::NotAccretive& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const loewner::NotResonant& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const loewner::Error& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  }
  return status;
}
