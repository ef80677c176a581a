#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctile/assemble.hpp"
#include "ctile/verify.hpp"

namespace ctile {

using Json = nlohmann::json;

enum ExitCode : int {
  kPass = 0,
  kInternal = 1,
  kVerificationFailed = 2,
  kIncomplete = 3,
  kInputError = 4,
};

struct RunOptions {
  long max_coeff_radius = 12;
  std::size_t max_pieces = 4096;
  double fourier_radius = 5;
  double tol = 1e-8;
  double radius = 3;  // modelset box radius, Gabor family radius
  std::string strategy = "chain";
  bool simple_case = false;
  double witness_epsilon = 1e-3;
  long witness_radius = 64;
};

struct ProblemSpec {
  std::int64_t D = 0;
  std::size_t d = 0;
  std::string command;
  std::optional<Lattice> L, M, K, Lmod;
  std::optional<Region> region, window;
  RunOptions options;
};

// scalars ----------------------------------------------------------------

inline Quad parse_scalar(const Json& j, std::int64_t D) {
  if (j.is_string()) return Quad(parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return Quad(Rational(Integer(j.dump())));
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      if (k != "a" && k != "b") throw InputError("unknown scalar field \"" + k + "\"");
    Rational a = j.contains("a") ? parse_scalar(j.at("a"), 0).to_rational() : Rational(0);
    Rational b = j.contains("b") ? parse_scalar(j.at("b"), 0).to_rational() : Rational(0);
    if (b != 0 && D == 0) throw InputError("irrational scalar but no radicand D declared");
    return b == 0 ? Quad(a) : Quad(a, b, D);
  }
  throw InputError("scalar must be a \"p/q\" string or an {\"a\",\"b\"} object, got " + j.dump());
}

inline std::string rational_text(const Rational& r) { return r.get_str(); }

inline Json scalar_json(const Quad& x) {
  if (x.is_rational()) return rational_text(x.a());
  return Json{{"a", rational_text(x.a())}, {"b", rational_text(x.b())}};
}

inline Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(scalar_json(x));
  return out;
}

inline Json float_vector_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

inline Vector parse_vector(const Json& j, std::int64_t D) {
  if (!j.is_array()) throw InputError("expected an array of scalars, got " + j.dump());
  Vector v;
  for (const auto& x : j) v.push_back(parse_scalar(x, D));
  return v;
}

// matrices are row lists; lattice bases are the columns
inline QuadMatrix parse_matrix(const Json& j, std::int64_t D) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
  std::vector<Vector> rows;
  for (const auto& r : j) rows.push_back(parse_vector(r, D));
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw InputError("ragged matrix");
  return QuadMatrix::from_rows(rows);
}

inline Json matrix_json(const QuadMatrix& A) {
  Json out = Json::array();
  for (std::size_t i = 0; i < A.rows(); ++i) out.push_back(vector_json(A.row(i)));
  return out;
}

inline Lattice parse_lattice(const Json& j, std::int64_t D, const std::string& name) {
  QuadMatrix A = parse_matrix(j, D);
  if (A.rows() != A.cols()) throw InputError(name + " must be a square matrix");
  if (determinant(A).is_zero()) throw InputError(name + " is singular");
  return Lattice(A);
}

// regions ----------------------------------------------------------------

inline Region parse_region(const Json& j, std::int64_t D, std::size_t d) {
  if (!j.is_object() || !j.contains("cells") || !j.at("cells").is_array())
    throw InputError("region must be an object with a \"cells\" array");
  Region r{d, {}};
  for (const auto& c : j.at("cells")) {
    if (!c.contains("conditions")) throw InputError("cell without \"conditions\"");
    Cell cell{d, {}};
    for (const auto& h : c.at("conditions")) {
      if (!h.contains("normal") || !h.contains("offset"))
        throw InputError("condition needs \"normal\" and \"offset\"");
      Vector n = parse_vector(h.at("normal"), D);
      if (n.size() != d) throw InputError("condition normal has wrong dimension");
      bool strict = h.contains("strict") && h.at("strict").get<bool>();
      cell.conditions.push_back({std::move(n), parse_scalar(h.at("offset"), D), strict});
    }
    r.cells.push_back(std::move(cell));
  }
  return r;
}

inline Json cell_json(const Cell& c) {
  Json conds = Json::array();
  for (const auto& h : c.conditions)
    conds.push_back({{"normal", vector_json(h.normal)}, {"offset", scalar_json(h.offset)}, {"strict", h.strict}});
  Json verts = Json::array();
  for (const auto& v : vertices(c)) verts.push_back(vector_json(v));
  return {{"conditions", conds}, {"vertices", verts}};
}

inline Json region_json(const Region& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) cells.push_back(cell_json(c));
  return {{"dim", r.dim}, {"cells", cells}};
}

inline Json box_json(const Box& b) {
  return {{"lo", vector_json(b.lo)}, {"hi", vector_json(b.hi)}};
}

// documents ----------------------------------------------------------------

inline ProblemSpec parse_problem(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("document is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("document must be a JSON object");
  ProblemSpec s;
  try {
    if (j.contains("D")) {
      s.D = j.at("D").get<std::int64_t>();
      validate_radicand(s.D);
    }
    if (j.contains("command")) s.command = j.at("command").get<std::string>();
    auto lattice = [&](const char* key) -> std::optional<Lattice> {
      if (!j.contains(key)) return std::nullopt;
      return parse_lattice(j.at(key), s.D, key);
    };
    s.L = lattice("L");
    s.M = lattice("M");
    s.K = lattice("K");
    s.Lmod = lattice("Lmod");
    for (const auto* X : {&s.L, &s.M, &s.K, &s.Lmod})
      if (*X) {
        if (s.d == 0) s.d = (*X)->dim();
        if ((*X)->dim() != s.d) throw InputError("lattices of different dimension");
      }
    if (j.contains("d") && j.at("d").get<std::size_t>() != s.d && s.d != 0)
      throw InputError("declared dimension d disagrees with the matrices");
    if (s.d == 0 && j.contains("d")) s.d = j.at("d").get<std::size_t>();
    if (j.contains("region")) s.region = parse_region(j.at("region"), s.D, s.d);
    if (j.contains("window")) s.window = parse_region(j.at("window"), s.D, s.d);
    if (j.contains("options")) {
      const Json& o = j.at("options");
      RunOptions& r = s.options;
      if (o.contains("max_coeff_radius")) r.max_coeff_radius = o.at("max_coeff_radius").get<long>();
      if (o.contains("max_pieces")) r.max_pieces = o.at("max_pieces").get<std::size_t>();
      if (o.contains("fourier_radius")) r.fourier_radius = o.at("fourier_radius").get<double>();
      if (o.contains("tol")) r.tol = o.at("tol").get<double>();
      if (o.contains("radius")) r.radius = o.at("radius").get<double>();
      if (o.contains("strategy")) r.strategy = o.at("strategy").get<std::string>();
      if (o.contains("simple_case")) r.simple_case = o.at("simple_case").get<bool>();
      if (o.contains("witness_epsilon")) r.witness_epsilon = o.at("witness_epsilon").get<double>();
      if (o.contains("witness_radius")) r.witness_radius = o.at("witness_radius").get<long>();
      if (r.strategy != "chain" && r.strategy != "greedy")
        throw InputError("strategy must be \"chain\" or \"greedy\"");
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed document field: ") + e.what());
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  return s;
}

inline Json problem_json(const ProblemSpec& s) {
  Json j;
  j["D"] = s.D;
  j["d"] = s.d;
  if (s.L) j["L"] = matrix_json(s.L->basis());
  if (s.M) j["M"] = matrix_json(s.M->basis());
  if (s.K) j["K"] = matrix_json(s.K->basis());
  if (s.Lmod) j["Lmod"] = matrix_json(s.Lmod->basis());
  return j;
}

// reports ----------------------------------------------------------------

inline Json tiling_json(const TilingReport& r) {
  Json overlaps = Json::array();
  for (const auto& o : r.overlaps)
    overlaps.push_back({{"ell", vector_json(o.ell)}, {"volume", scalar_json(o.volume)}});
  return {{"lattice", r.lattice_id},
          {"kind", r.kind},
          {"region_volume", scalar_json(r.region_volume)},
          {"lattice_volume", scalar_json(r.lattice_volume)},
          {"volume_ok", r.volume_ok},
          {"deficit", scalar_json(r.deficit())},
          {"overlaps", overlaps},
          {"translates_examined", r.translates_examined},
          {"pass", r.pass}};
}

inline Json fourier_json(const FourierReport& r) {
  return {{"lattice", r.lattice_id},
          {"radius", r.radius},
          {"tol", r.tol},
          {"frequencies", r.frequencies},
          {"max_nonzero", r.max_nonzero},
          {"worst_lambda", r.worst_lambda},
          {"at_zero", {r.at_zero.real(), r.at_zero.imag()}},
          {"zero_error_vs_lattice", r.zero_error_vs_lattice},
          {"zero_relative_error", r.zero_relative_error},
          {"pass", r.pass}};
}

inline Json construction_json(const ConstructionReport& r) {
  Json j{{"case", r.case_taken},
         {"m", r.m},
         {"n", r.n},
         {"T", matrix_json(r.T)},
         {"piece_count", r.piece_count},
         {"volume", scalar_json(r.volume)},
         {"bounding_box", box_json(r.bounds)}};
  if (!r.equidecomposition.empty()) {
    j["equidecomposition"] = r.equidecomposition;
    j["chain_length"] = r.chain_length;
  }
  if (r.case_taken == "general" || r.case_taken == "simple") {
    j["volume_chain"] = {{"E", scalar_json(r.e_volume)},
                         {"E_prime", scalar_json(r.eprime_volume)},
                         {"K1", r.k1_size.get_str()},
                         {"J1", r.j1_size.get_str()}};
  }
  if (r.case_taken == "rational") {
    Json F = Json::array();
    for (const auto& f : r.transversal) {
      Json v = Json::array();
      for (const auto& x : f) v.push_back(x.get_str());
      F.push_back(v);
    }
    j["transversal"] = F;
  }
  if (r.fiber) j["fiber"] = construction_json(*r.fiber);
  return j;
}

// SVG --------------------------------------------------------------------

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

// Omega cells and nearby lattice points; d <= 2.
inline std::string render_svg(const Region& omega, const std::vector<std::pair<Lattice, std::string>>& lattices) {
  std::size_t d = omega.dim;
  if (d == 0 || d > 2) throw InputError("plot needs dimension 1 or 2");
  Box b = bounding_box(omega);
  double margin = 0;
  for (const auto& [L, colour] : lattices) {
    Box pb = bounding_box(parallelotope(L.basis()));
    for (std::size_t i = 0; i < d; ++i) margin = std::max(margin, to_double(pb.hi[i] - pb.lo[i]));
  }
  double lo[2] = {0, -0.5}, hi[2] = {0, 0.5};
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = to_double(b.lo[i]) - margin;
    hi[i] = to_double(b.hi[i]) + margin;
  }
  const double scale = 400.0 / std::max(hi[0] - lo[0], hi[1] - lo[1]);
  auto X = [&](double x) { return fmt((x - lo[0]) * scale); };
  auto Y = [&](double y) { return fmt((hi[1] - y) * scale); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt((hi[0] - lo[0]) * scale)
     << "\" height=\"" << fmt((hi[1] - lo[1]) * scale) << "\">\n";
  const char* fills[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462"};
  std::size_t k = 0;
  for (const auto& c : omega.cells) {
    auto vs = vertices(c);
    if (vs.empty()) continue;
    const char* fill = fills[k++ % 6];
    if (d == 1) {
      double a = to_double(vs.front()[0]), z = to_double(vs.back()[0]);
      os << "  <rect x=\"" << X(a) << "\" y=\"" << Y(0.1) << "\" width=\"" << fmt((z - a) * scale)
         << "\" height=\"" << fmt(0.2 * scale) << "\" fill=\"" << fill << "\" stroke=\"black\"/>\n";
      continue;
    }
    std::vector<std::pair<double, double>> pts;
    double cx = 0, cy = 0;
    for (const auto& v : vs) {
      pts.emplace_back(to_double(v[0]), to_double(v[1]));
      cx += pts.back().first;
      cy += pts.back().second;
    }
    cx /= pts.size();
    cy /= pts.size();
    std::sort(pts.begin(), pts.end(), [&](const auto& p, const auto& q) {
      return std::atan2(p.second - cy, p.first - cx) < std::atan2(q.second - cy, q.first - cx);
    });
    os << "  <polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
      os << (i ? " " : "") << X(pts[i].first) << "," << Y(pts[i].second);
    os << "\" fill=\"" << fill << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
  }
  for (const auto& [L, colour] : lattices) {
    Vector vlo, vhi;
    for (std::size_t i = 0; i < d; ++i) {
      vlo.push_back(Quad(Rational(static_cast<long>(std::floor(lo[i])))));
      vhi.push_back(Quad(Rational(static_cast<long>(std::ceil(hi[i])))));
    }
    for (const auto& p : enumerate_points(L, Box{vlo, vhi})) {
      double x = to_double(p[0]), y = d == 2 ? to_double(p[1]) : 0.0;
      if (x < lo[0] || x > hi[0] || y < lo[1] || y > hi[1]) continue;
      os << "  <circle cx=\"" << X(x) << "\" cy=\"" << Y(y) << "\" r=\"2.5\" fill=\"" << colour << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

// commands ---------------------------------------------------------------

struct RunResult {
  Json document;
  int exit_code = kPass;
  std::string svg;
};

namespace detail {

inline const Lattice& require(const std::optional<Lattice>& X, const char* name, const std::string& cmd) {
  if (!X) throw InputError("command " + cmd + " needs lattice " + name);
  return *X;
}

inline ConstructOptions construct_options(const RunOptions& o) {
  ConstructOptions c;
  c.equidecompose.max_coeff_radius = o.max_coeff_radius;
  c.equidecompose.max_pieces = o.max_pieces;
  c.equidecompose.strategy = o.strategy == "greedy" ? Strategy::Greedy : Strategy::BasisChain;
  c.prefer_simple_case = o.simple_case;
  return c;
}

inline Json verification_json(const Region& omega, const std::vector<std::pair<const Lattice*, std::string>>& ls,
                              const RunOptions& o, bool& pass) {
  Json exact = Json::array(), partition = Json::array(), fourier = Json::array();
  pass = true;
  for (const auto& [L, id] : ls) {
    TilingReport t = verify_tiling_exact(omega, *L, id);
    TilingReport p = verify_partition_of_fundamental_domain(omega, *L, id);
    FourierReport f = fourier_tiling_check(omega, *L, o.fourier_radius, o.tol, id);
    pass = pass && t.pass && p.pass && f.pass;
    exact.push_back(tiling_json(t));
    partition.push_back(tiling_json(p));
    fourier.push_back(fourier_json(f));
  }
  return {{"exact", exact}, {"partition", partition}, {"fourier", fourier}, {"pass", pass}};
}

inline std::vector<std::pair<Lattice, std::string>> plot_lattices(const ProblemSpec& s) {
  std::vector<std::pair<Lattice, std::string>> out;
  if (s.L) out.emplace_back(*s.L, "#1f77b4");
  if (s.M) out.emplace_back(*s.M, "#d62728");
  return out;
}

inline Construction construct(const ProblemSpec& s) {
  const Lattice& L = require(s.L, "L", s.command);
  const Lattice& M = require(s.M, "M", s.command);
  if (volume(L) != volume(M))
    throw InputError("volumes differ: vol(L) = " + volume(L).str() + ", vol(M) = " + volume(M).str());
  try {
    return common_fundamental_domain(L, M, construct_options(s.options));
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
}

}  // namespace detail

inline RunResult run_construct(const ProblemSpec& s, bool want_svg) {
  Construction c = detail::construct(s);
  RunResult out;
  bool pass = false;
  Json j = problem_json(s);
  j["command"] = "construct";
  j["construction"] = construction_json(c.report);
  j["region"] = region_json(c.omega);
  j["verification"] = detail::verification_json(c.omega, {{&*s.L, "L"}, {&*s.M, "M"}}, s.options, pass);
  j["pass"] = pass;
  out.document = j;
  out.exit_code = pass ? kPass : kVerificationFailed;
  if (want_svg && s.d <= 2) out.svg = render_svg(c.omega, detail::plot_lattices(s));
  return out;
}

inline RunResult run_verify(const ProblemSpec& s) {
  if (!s.region) throw InputError("command verify needs a region");
  std::vector<std::pair<const Lattice*, std::string>> ls;
  if (s.L) ls.emplace_back(&*s.L, "L");
  if (s.M) ls.emplace_back(&*s.M, "M");
  if (ls.empty()) throw InputError("command verify needs at least one lattice");
  bool pass = false;
  Json j = problem_json(s);
  j["command"] = "verify";
  j["region_volume"] = scalar_json(volume(*s.region));
  j["verification"] = detail::verification_json(*s.region, ls, s.options, pass);
  j["pass"] = pass;
  return {j, pass ? kPass : kVerificationFailed, {}};
}

inline RunResult run_closure(const ProblemSpec& s) {
  const Lattice& L = detail::require(s.L, "L", s.command);
  const Lattice& M = detail::require(s.M, "M", s.command);
  ClosureDecomposition cd;
  try {
    cd = closure_of_sum(L, M);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  Json j = problem_json(s);
  j["command"] = "closure";
  j["m"] = cd.m;
  j["n"] = cd.n;
  j["T"] = matrix_json(cd.T);
  j["T_inv"] = matrix_json(cd.T_inv);
  j["dual_group"] = matrix_json(cd.dual_group.basis());
  j["TL"] = matrix_json(cd.T * L.basis());
  j["TM"] = matrix_json(cd.T * M.basis());
  if (cd.n > 0) {
    DensityWitness w = density_witness(cd, L, M, s.options.witness_epsilon, s.options.witness_radius);
    j["density_witness"] = {{"epsilon", w.epsilon},
                            {"reached", w.reached},
                            {"worst_distance", w.worst_distance},
                            {"radius_used", w.radius_used},
                            {"samples", w.samples}};
  }
  return {j, kPass, {}};
}

inline RunResult run_transversal(const ProblemSpec& s) {
  const Lattice& L = detail::require(s.L, "L", s.command);
  const Lattice& M = detail::require(s.M, "M", s.command);
  if (!is_integral(L.basis()) || !is_integral(M.basis()))
    throw InputError("transversal needs integer matrices");
  TransversalResult t;
  try {
    t = common_transversal(to_integer(L.basis()), to_integer(M.basis()));
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  Json reps = Json::array(), certs = Json::array();
  for (const auto& f : t.reps) {
    Json v = Json::array();
    for (const auto& x : f) v.push_back(x.get_str());
    reps.push_back(v);
  }
  for (const auto& c : t.certificates) {
    Json a = Json::array(), b = Json::array();
    for (const auto& x : c.xi1) a.push_back(rational_text(x));
    for (const auto& x : c.xi2) b.push_back(rational_text(x));
    certs.push_back({{"i", c.i}, {"j", c.j}, {"xi_L", a}, {"xi_M", b}});
  }
  Json j = problem_json(s);
  j["command"] = "transversal";
  j["index"] = t.size.get_str();
  j["F"] = reps;
  j["certificates"] = certs;
  j["verified"] = is_transversal(to_integer(L.basis()), t.reps) && is_transversal(to_integer(M.basis()), t.reps);
  return {j, j["verified"].get<bool>() ? kPass : kVerificationFailed, {}};
}

inline RunResult run_modelset(const ProblemSpec& s) {
  const Lattice& L = detail::require(s.L, "L", s.command);
  const Lattice& M = detail::require(s.M, "M", s.command);
  if (!s.window) throw InputError("command modelset needs a window region");
  if (s.D == 0) throw InputError("modelset needs a radicand D");
  CutProjectScheme sc = build_scheme(L, M, s.D);
  Quad R(Rational(static_cast<long>(std::llround(s.options.radius * 1000)), 1000));
  auto pts = model_set_points(sc, *s.window, R);
  Json exact = Json::array(), approx = Json::array();
  for (const auto& p : pts) {
    exact.push_back(vector_json(p));
    approx.push_back(float_vector_json(p));
  }
  Json j = problem_json(s);
  j["command"] = "modelset";
  j["c"] = sc.c.get_str();
  j["Gamma"] = matrix_json(sc.Gamma);
  j["radius"] = scalar_json(R);
  j["count"] = pts.size();
  j["points"] = exact;
  j["points_float"] = approx;
  return {j, kPass, {}};
}

inline RunResult run_gabor(const ProblemSpec& s) {
  const Lattice& K = s.K ? *s.K : detail::require(s.L, "K (or L)", s.command);
  const Lattice& Lmod = s.Lmod ? *s.Lmod : detail::require(s.M, "Lmod (or M)", s.command);
  Region omega;
  if (s.region) {
    omega = *s.region;
  } else {
    ProblemSpec c = s;
    c.L = K;
    c.M = dual(Lmod);
    omega = detail::construct(c).omega;
  }
  GaborReport g = gabor_gram(omega, K, Lmod, s.options.radius, s.options.tol, 1e-10);
  Json j = problem_json(s);
  j["command"] = "gabor-gram";
  j["region"] = region_json(omega);
  j["gabor"] = {{"family_size", g.family_size},
                {"max_off_diagonal", g.max_off_diagonal},
                {"max_diagonal_error", g.max_diagonal_error},
                {"volume", g.volume},
                {"precondition_ok", g.precondition_ok},
                {"radius", s.options.radius},
                {"pass", g.pass}};
  j["pass"] = g.pass;
  return {j, g.pass ? kPass : kVerificationFailed, {}};
}

inline RunResult run_plot(const ProblemSpec& s) {
  RunResult out;
  Region omega = s.region ? *s.region : detail::construct(s).omega;
  out.svg = render_svg(omega, detail::plot_lattices(s));
  Json j = problem_json(s);
  j["command"] = "plot";
  j["cells"] = omega.cells.size();
  out.document = j;
  return out;
}

// Dispatch with the exit-code contract; never throws.
inline RunResult run(const std::string& command, const ProblemSpec& spec, bool want_svg = false) {
  ProblemSpec s = spec;
  s.command = command;
  try {
    if (command == "construct") return run_construct(s, want_svg);
    if (command == "verify") return run_verify(s);
    if (command == "closure") return run_closure(s);
    if (command == "transversal") return run_transversal(s);
    if (command == "modelset") return run_modelset(s);
    if (command == "gabor-gram") return run_gabor(s);
    if (command == "plot") return run_plot(s);
    throw InputError("unknown command \"" + command + "\"");
  } catch (const EquidecompositionIncomplete& e) {
    return {Json{{"command", command},
                 {"error", e.what()},
                 {"residual_volume", scalar_json(e.residual_volume)},
                 {"pieces_so_far", e.pieces_so_far}},
            kIncomplete, {}};
  } catch (const InputError& e) {
    return {Json{{"command", command}, {"error", e.what()}}, kInputError, {}};
  } catch (const DomainError& e) {
    return {Json{{"command", command}, {"error", e.what()}}, kInputError, {}};
  } catch (const std::exception& e) {
    return {Json{{"command", command}, {"error", std::string("internal: ") + e.what()}}, kInternal, {}};
  }
}

}  // namespace ctile
