#include "loewner/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "loewner/errors.hpp"

namespace loewner::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SchemaError("field '" + where + "': " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

double number_or(const json& j, const char* key, double def, const std::string& where) {
  auto it = j.find(key);
  return it == j.end() ? def : number(*it, where + "." + key);
}

cplx complex_pair(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_array() || j.size() != 2) fail(where, "expected a number or [re, im]");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

cplx scale_of(const json& j, const std::string& where) {
  return {number_or(j, "re", 1.0, where), number_or(j, "im", 0.0, where)};
}

std::vector<double> number_array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

json load_json(const std::string& path_or_text) {
  std::string text;
  std::string source = path_or_text;
  const auto first = path_or_text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (path_or_text[first] == '{' || path_or_text[first] == '[')) {
    text = path_or_text;
    source = "<inline>";
  } else {
    std::ifstream in(path_or_text);
    if (!in) throw SchemaError("cannot open '" + path_or_text + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(source + ": " + e.what());
  }
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write '" + path + "'");
  out << dump(j) << '\n';
}

std::string dump(const json& j) { return j.dump(2); }

json to_json(const CMatrix& M) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json r = json::array(), c = json::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) {
      r.push_back(M(i, k).real());
      c.push_back(M(i, k).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return json{{"n", M.rows()}, {"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const json& j, const std::string& where) {
  const int n = integer(field(j, "n", where), where + ".n");
  if (n < 1) fail(where + ".n", "must be >= 1");
  CMatrix M = CMatrix::Zero(n, n);
  for (const char* part : {"re", "im"}) {
    auto it = j.find(part);
    if (it == j.end()) {
      if (std::string(part) == "re") fail(where + ".re", "missing");
      continue;
    }
    const std::string w = where + "." + part;
    if (!it->is_array() || static_cast<int>(it->size()) != n) fail(w, "expected " + std::to_string(n) + " rows");
    for (int r = 0; r < n; ++r) {
      const json& row = (*it)[r];
      const std::string wr = w + "[" + std::to_string(r) + "]";
      if (!row.is_array() || static_cast<int>(row.size()) != n) fail(wr, "expected " + std::to_string(n) + " entries");
      for (int c = 0; c < n; ++c) {
        const double x = number(row[c], wr + "[" + std::to_string(c) + "]");
        if (part[0] == 'r') M(r, c).real(x);
        else M(r, c).imag(x);
      }
    }
  }
  return M;
}

json vector_to_json(const CVector& v) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return json{{"re", re}, {"im", im}};
}

CVector vector_from_json(const json& j, const std::string& where) {
  const auto re = number_array(field(j, "re", where), where + ".re");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = number_array(j["im"], where + ".im");
  if (im.size() != re.size()) fail(where + ".im", "length differs from re");
  CVector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = {re[i], im[i]};
  return v;
}

json to_json(const HomPolyMap& Q) {
  json terms = json::array();
  const auto& b = Q.basis();
  for (int r = 0; r < b.monomials(); ++r)
    for (int s = 0; s < Q.n(); ++s) {
      const cplx c = Q.coeffs()(b.index(r, s));
      if (c == cplx(0.0)) continue;
      terms.push_back(json{{"m", b.multi_index(r)}, {"s", s}, {"re", c.real()}, {"im", c.imag()}});
    }
  return json{{"n", Q.n()}, {"k", Q.k()}, {"terms", terms}};
}

HomPolyMap poly_from_json(const json& j, const std::string& where) {
  const int n = integer(field(j, "n", where), where + ".n");
  const int k = integer(field(j, "k", where), where + ".k");
  if (n < 1) fail(where + ".n", "must be >= 1");
  if (k < 1) fail(where + ".k", "must be >= 1");
  HomPolyMap Q(n, k);
  const json& terms = field(j, "terms", where);
  if (!terms.is_array()) fail(where + ".terms", "expected an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string w = where + ".terms[" + std::to_string(i) + "]";
    const json& t = terms[i];
    const json& mj = field(t, "m", w);
    if (!mj.is_array() || static_cast<int>(mj.size()) != n) fail(w + ".m", "expected " + std::to_string(n) + " exponents");
    MultiIndex m;
    int deg = 0;
    for (std::size_t q = 0; q < mj.size(); ++q) {
      const int e = integer(mj[q], w + ".m[" + std::to_string(q) + "]");
      if (e < 0) fail(w + ".m", "negative exponent");
      m.push_back(e);
      deg += e;
    }
    if (deg != k) fail(w + ".m", "exponents sum to " + std::to_string(deg) + ", expected " + std::to_string(k));
    const int s = integer(field(t, "s", w), w + ".s");
    if (s < 0 || s >= n) fail(w + ".s", "component out of range (0-based)");
    const cplx c{number_or(t, "re", 0.0, w), number_or(t, "im", 0.0, w)};
    Q.set(m, s, Q.coefficient(m, s) + c);
  }
  return Q;
}

json to_json(const TimeFunction& a) {
  json j;
  switch (a.kind()) {
    case TimeFunction::Kind::Constant: j["kind"] = "constant"; break;
    case TimeFunction::Kind::ExpDecay:
      j["kind"] = "exp_decay";
      j["rate"] = a.parameter();
      break;
    case TimeFunction::Kind::Window:
      j["kind"] = "window";
      j["T"] = a.parameter();
      break;
    case TimeFunction::Kind::Oscillation:
      j["kind"] = "oscillation";
      j["omega"] = a.parameter();
      break;
    case TimeFunction::Kind::Table: {
      j["kind"] = "table";
      j["t"] = a.table_t();
      json re = json::array(), im = json::array();
      for (cplx v : a.table_v()) {
        re.push_back(v.real());
        im.push_back(v.imag());
      }
      j["v_re"] = re;
      j["v_im"] = im;
      return j;
    }
    case TimeFunction::Kind::Closure:
      throw SchemaError("closure time functions cannot be serialized");
  }
  j["re"] = a.scale().real();
  j["im"] = a.scale().imag();
  return j;
}

TimeFunction time_function_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return TimeFunction::constant(j.get<double>());
  const json& kj = field(j, "kind", where);
  if (!kj.is_string()) fail(where + ".kind", "expected a string");
  const std::string kind = kj.get<std::string>();
  const cplx c = scale_of(j, where);
  try {
    if (kind == "constant") return TimeFunction::constant(c);
    if (kind == "exp_decay") return TimeFunction::exp_decay(number(field(j, "rate", where), where + ".rate"), c);
    if (kind == "window") return TimeFunction::window(number(field(j, "T", where), where + ".T"), c);
    if (kind == "oscillation")
      return TimeFunction::oscillation(number(field(j, "omega", where), where + ".omega"), c);
    if (kind == "table") {
      const auto t = number_array(field(j, "t", where), where + ".t");
      const auto re = number_array(field(j, "v_re", where), where + ".v_re");
      std::vector<double> im(re.size(), 0.0);
      if (j.contains("v_im")) im = number_array(j["v_im"], where + ".v_im");
      if (im.size() != re.size()) fail(where + ".v_im", "length differs from v_re");
      std::vector<cplx> v;
      for (std::size_t i = 0; i < re.size(); ++i) v.emplace_back(re[i], im[i]);
      return TimeFunction::table(t, v);
    }
  } catch (const PreconditionViolated& e) {
    fail(where, e.what());
  }
  fail(where + ".kind", "unknown kind '" + kind + "'");
}

json to_json(const GeneratorSpec& h) {
  json j;
  j["A"] = to_json(h.A().entries());
  switch (h.form()) {
    case GeneratorSpec::Form::PolynomialAutonomous: {
      j["form"] = "polynomial";
      json H = json::array();
      for (const auto& t : h.terms()) H.push_back(to_json(t.a.scale() * t.H));
      j["H"] = H;
      break;
    }
    case GeneratorSpec::Form::PolynomialTimeDependent: {
      j["form"] = "time_dependent";
      json terms = json::array();
      for (const auto& t : h.terms()) terms.push_back(json{{"H", to_json(t.H)}, {"a", to_json(t.a)}});
      j["terms"] = terms;
      break;
    }
    case GeneratorSpec::Form::Pushforward:
      if (h.field().recipe.empty()) throw SchemaError("pushforward field without a recipe cannot be serialized");
      j["form"] = "pushforward";
      j["recipe"] = json::parse(h.field().recipe);
      break;
  }
  return j;
}

GeneratorSpec generator_from_json(const json& j) {
  const std::string where = "generator";
  const json& fj = field(j, "form", where);
  if (!fj.is_string()) fail(where + ".form", "expected a string");
  const std::string form = fj.get<std::string>();
  if (form == "pushforward") {
    const json& r = field(j, "recipe", where);
    const std::string w = where + ".recipe";
    if (r.contains("roper_suffridge")) {
      const json& p = r["roper_suffridge"];
      const std::string wp = w + ".roper_suffridge";
      const std::string fname = field(p, "f", wp).get<std::string>();
      OneVarMap f1 = OneVarMap::identity();
      if (fname == "koebe") f1 = OneVarMap::koebe();
      else if (fname != "identity") fail(wp + ".f", "unknown map '" + fname + "'");
      try {
        return roper_suffridge_generator(f1, number(field(p, "alpha", wp), wp + ".alpha"),
                                         number(field(p, "beta", wp), wp + ".beta"),
                                         complex_pair(field(p, "lambda", wp), wp + ".lambda"))
            .h;
      } catch (const PreconditionViolated& e) {
        fail(wp, e.what());
      }
    }
    fail(w, "unknown recipe");
  }
  OperatorA A = [&] {
    const CMatrix M = matrix_from_json(field(j, "A", where), where + ".A");
    try {
      return analyze(M);
    } catch (const NotAccretive& e) {
      fail(where + ".A", e.what());
    }
  }();
  auto check_n = [&](const HomPolyMap& Q, const std::string& w) {
    if (Q.n() != A.n()) fail(w, "dimension differs from A");
    if (Q.k() < 2) fail(w, "degree must be >= 2");
  };
  if (form == "polynomial") {
    std::vector<HomPolyMap> H;
    if (j.contains("H")) {
      const json& hj = j["H"];
      if (!hj.is_array()) fail(where + ".H", "expected an array");
      for (std::size_t i = 0; i < hj.size(); ++i) {
        const std::string w = where + ".H[" + std::to_string(i) + "]";
        H.push_back(poly_from_json(hj[i], w));
        check_n(H.back(), w);
      }
    }
    return H.empty() ? GeneratorSpec::linear(A) : GeneratorSpec::polynomial(A, std::move(H));
  }
  if (form == "time_dependent") {
    std::vector<PolyTerm> terms;
    const json& tj = field(j, "terms", where);
    if (!tj.is_array()) fail(where + ".terms", "expected an array");
    for (std::size_t i = 0; i < tj.size(); ++i) {
      const std::string w = where + ".terms[" + std::to_string(i) + "]";
      PolyTerm t{poly_from_json(field(tj[i], "H", w), w + ".H"),
                 time_function_from_json(field(tj[i], "a", w), w + ".a")};
      check_n(t.H, w + ".H");
      terms.push_back(std::move(t));
    }
    return GeneratorSpec::time_dependent(A, std::move(terms));
  }
  fail(where + ".form", "unknown form '" + form + "'");
}

std::uint64_t generator_hash(const GeneratorSpec& h) {
  const std::string s = to_json(h).dump();
  std::uint64_t x = 14695981039346656037ULL;
  for (unsigned char c : s) {
    x ^= c;
    x *= 1099511628211ULL;
  }
  return x;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json to_json(const OperatorA& A) {
  return json{{"n", A.n()},
              {"m", A.m()},
              {"k_minus", A.k_minus()},
              {"k_plus", A.k_plus()},
              {"n0", A.n0()},
              {"diagonal", A.diagonal()},
              {"normal", A.normal()},
              {"eigenvector_condition", A.eigenvector_condition()},
              {"ill_conditioned", A.ill_conditioned()},
              {"eigenvalues", vector_to_json(A.eigenvalues())}};
}

json to_json(const ResonanceReport& r) {
  auto entries = [](const std::vector<ResonanceEntry>& es) {
    json a = json::array();
    for (const auto& e : es)
      a.push_back(json{{"k", e.k}, {"m", e.m}, {"s", e.s}, {"re", e.value.real()}, {"im", e.value.imag()}});
    return a;
  };
  return json{{"k_max", r.k_max},
              {"n0", r.n0},
              {"nonresonant", r.nonresonant},
              {"real_nonresonant", r.real_nonresonant},
              {"none_above_n0", r.none_above_n0},
              {"exact", entries(r.exact)},
              {"real_part", entries(r.real_part)}};
}

json to_json(const SpectralSplit& s) {
  return json{{"sigma_plus", vector_to_json(s.sigma_plus())},
              {"sigma_le", vector_to_json(s.sigma_le())},
              {"sigma_zero", vector_to_json(s.sigma_zero())},
              {"eigenvector_condition", s.eig.condition}};
}

json to_json(const TruncatedMap& f) {
  json F = json::array();
  for (const auto& Q : f.F) F.push_back(to_json(Q));
  json kernel = json::array();
  for (const auto& k : f.kernel) kernel.push_back(to_json(k.Q));
  return json{{"n", f.n}, {"K", f.K}, {"provenance", f.provenance}, {"unique", f.unique},
              {"F", F}, {"kernel", kernel}};
}

json to_json(const WitnessCertificate& c) {
  return json{{"k0", c.k0}, {"norm_Fk0", c.norm_Fk0}, {"target", c.target},
              {"residual", c.residual}, {"norm_ok", c.norm_ok}};
}

json to_json(const QuadraticAdmissibility& q) {
  return json{{"q_min", q.q_min}, {"argmin", q.argmin}, {"admissible", q.admissible},
              {"hypotheses_hold", q.hypotheses_hold}};
}

json to_json(const SpirallikeResidualReport& r) {
  return json{{"radii", r.radii}, {"residuals", r.residuals}, {"ratios", r.ratios},
              {"expected", r.expected}, {"max_residual", r.max_residual}, {"decay_ok", r.decay_ok}};
}

json to_json(const MembershipReport& r) {
  return json{{"inside", r.inside}, {"outside", r.outside}, {"inconclusive", r.inconclusive},
              {"pass", r.pass}};
}

json to_json(const GrowthReport& r) {
  json radii = json::array(), sups = json::array();
  for (const auto& s : r.samples) {
    radii.push_back(s.r);
    sups.push_back(s.sup);
  }
  return json{{"radii", radii}, {"sup", sups}, {"exponent", r.exponent},
              {"loglog_slope", r.loglog_slope}, {"bound", r.bound}, {"epsilon", r.epsilon},
              {"pass", r.pass}};
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv_row(std::ostream& os, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
  os << '\n';
}

void write_csv_header(std::ostream& os, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << '\n';
}

std::vector<CVector> read_points_csv(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::vector<CVector> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (out.empty() && lineno == 1) continue;
      throw SchemaError(path + ":" + std::to_string(lineno) + ": non-numeric entry");
    }
    if (static_cast<int>(vals.size()) != 2 * n)
      throw SchemaError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(2 * n) + " columns");
    CVector z(n);
    for (int i = 0; i < n; ++i) z(i) = {vals[2 * i], vals[2 * i + 1]};
    out.push_back(z);
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  std::vector<std::string> names{"t"};
  const Eigen::Index n = traj.z0.size();
  for (Eigen::Index i = 1; i <= n; ++i) {
    names.push_back("re_v" + std::to_string(i));
    names.push_back("im_v" + std::to_string(i));
  }
  write_csv_header(os, names);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::vector<double> row{traj.times[k]};
    for (Eigen::Index i = 0; i < n; ++i) {
      row.push_back(traj.values[k](i).real());
      row.push_back(traj.values[k](i).imag());
    }
    write_csv_row(os, row);
  }
}

json trajectory_metadata(const Trajectory& traj, const GeneratorSpec& h) {
  return json{{"tol", traj.tol},
              {"s", traj.s},
              {"z", vector_to_json(traj.z0)},
              {"generator_hash", hex(generator_hash(h))},
              {"samples", traj.times.size()},
              {"accepted_steps", traj.step_stats.accepted},
              {"rejected_steps", traj.step_stats.rejected},
              {"rhs_evals", traj.step_stats.rhs_evals}};
}

CoefficientConfig coefficient_config_from_json(const json& j, int n) {
  const std::string where = "coefficients";
  CoefficientConfig c;
  if (!j.is_object()) fail(where, "expected an object");
  if (j.contains("F0_le")) {
    const json& a = j["F0_le"];
    if (!a.is_array()) fail(where + ".F0_le", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string w = where + ".F0_le[" + std::to_string(i) + "]";
      HomPolyMap Q = poly_from_json(a[i], w);
      if (Q.n() != n) fail(w, "dimension differs from A");
      if (Q.k() != static_cast<int>(i) + 2) fail(w + ".k", "entry i must have degree i + 2");
      c.F0_le.push_back(std::move(Q));
    }
  }
  if (j.contains("K")) c.K = integer(j["K"], where + ".K");
  c.options.horizon = number_or(j, "horizon", c.options.horizon, where);
  if (j.contains("cheb_degree")) c.options.cheb_degree = integer(j["cheb_degree"], where + ".cheb_degree");
  c.options.max_piece = number_or(j, "max_piece", c.options.max_piece, where);
  c.options.tail_tol = number_or(j, "tail_tol", c.options.tail_tol, where);
  return c;
}

json to_json(const CoefficientConfig& c) {
  json F = json::array();
  for (const auto& Q : c.F0_le) F.push_back(to_json(Q));
  return json{{"F0_le", F},
              {"K", c.K},
              {"horizon", c.options.horizon},
              {"cheb_degree", c.options.cheb_degree},
              {"max_piece", c.options.max_piece},
              {"tail_tol", c.options.tail_tol}};
}

void write_coefficient_csv(std::ostream& os, const CoefficientSet& set,
                           const std::vector<double>& t_grid) {
  std::vector<std::string> names{"t"};
  for (const auto& F : set.F) {
    const auto basis = monomial_basis(F->n(), F->k());
    for (int r = 0; r < basis->monomials(); ++r)
      for (int s = 0; s < F->n(); ++s) {
        std::string tag = "F" + std::to_string(F->k()) + "_";
        for (int e : basis->multi_index(r)) tag += std::to_string(e);
        tag += "_" + std::to_string(s);
        names.push_back("re_" + tag);
        names.push_back("im_" + tag);
      }
  }
  write_csv_header(os, names);
  for (double t : t_grid) {
    std::vector<double> row{t};
    for (const auto& F : set.F) {
      const CVector c = (*F)(t).coeffs();
      for (Eigen::Index i = 0; i < c.size(); ++i) {
        row.push_back(c(i).real());
        row.push_back(c(i).imag());
      }
    }
    write_csv_row(os, row);
  }
}

json coefficient_metadata(const CoefficientSet& set, const GeneratorSpec& h) {
  json degrees = json::array();
  for (const auto& F : set.F) {
    degrees.push_back(json{{"k", F->k()},
                           {"split", to_json(F->split())},
                           {"F0_le", to_json(F->F0_le())},
                           {"projected_initial", F->solution().projected_initial()},
                           {"resonant_unbounded", F->resonant_unbounded()},
                           {"bound_degree", F->bound_degree()},
                           {"bound_constant", F->bound(0.0)},
                           {"horizon", F->horizon()},
                           {"tail_length", F->tail_length()}});
  }
  const ResonanceReport rr = resonance_report(h.A(), std::max(2, set.max_degree()));
  return json{{"generator_hash", hex(generator_hash(h))},
              {"n0", h.A().n0()},
              {"nonresonant", rr.nonresonant},
              {"real_nonresonant", rr.real_nonresonant},
              {"degrees", degrees}};
}

}  // namespace loewner::io
