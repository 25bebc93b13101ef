// Command-line front end. Every command reads JSON files, prints a human
// summary (or JSON with --json) to stdout and keeps diagnostics on stderr.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "logsparse/entsdp.hpp"
#include "logsparse/error.hpp"
#include "logsparse/io.hpp"
#include "logsparse/lssm.hpp"
#include "logsparse/numimpl.hpp"
#include "logsparse/symimpl.hpp"

namespace {

using logsparse::Error;
using logsparse::ErrorKind;
using logsparse::io::Json;

constexpr const char* kVersion = "0.1.0";

struct Global {
  std::uint64_t seed = 0;
  bool json = false;
  bool pretty = false;
  std::optional<double> tol;
  std::string out;
};

// What a command produced: the machine payload, a human rendering, and
// whether the check it ran came out negative.
struct Outcome {
  Json payload;
  std::string human;
  bool negative = false;
};

std::string dump(const Json& j, bool pretty) { return pretty ? j.dump(2) : j.dump(); }

void warn_all(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string ideal_listing(const std::vector<logsparse::RatPoly>& gens, const std::vector<std::string>& vars) {
  std::ostringstream os;
  if (gens.empty()) {
    os << "J = <0>  (the Gibbs variety is the whole ambient space)\n";
    return os.str();
  }
  os << "J = <" << gens.size() << " generator" << (gens.size() == 1 ? "" : "s") << ">\n";
  for (std::size_t i = 0; i < gens.size(); ++i)
    os << "  [" << i + 1 << "] degree " << gens[i].degree() << ", " << gens[i].term_count()
       << " terms: " << gens[i].to_string(vars) << "\n";
  return os.str();
}

std::string verification_line(const logsparse::VerifyReport& v) {
  std::ostringstream os;
  os << "verification: " << (v.passed ? "passed" : "FAILED") << " on " << v.samples << " samples, max residual "
     << std::scientific << std::setprecision(2) << v.max_residual;
  if (!v.symmetries_used.empty()) os << ", " << v.symmetries_used.size() << " symmetries";
  os << "\n";
  return os.str();
}

Outcome cmd_pattern(const std::string& path) {
  const auto l = logsparse::io::lssm_from_json(logsparse::io::read_file(path));
  Outcome o;
  o.payload = logsparse::io::to_json(l);
  const auto rows = l.constraints();
  o.payload["constraint_count"] = rows.size();
  std::ostringstream os;
  os << "n = " << l.size() << ", dim L = " << l.dim() << ", kind " << o.payload["kind"].get<std::string>()
     << ", id " << (l.contains_identity() ? "in" : "not in") << " L\n";
  if (l.graph()) {
    os << "edges:";
    for (const auto& [i, j] : l.graph()->edges()) os << " " << i + 1 << "-" << j + 1;
    os << (l.graph()->is_connected() ? "  (connected)" : "  (disconnected)") << "\n";
  }
  os << rows.size() << " linear constraints cut L out of S^" << l.size() << "\n";
  os << "generic element:\n";
  // Symbolic rendering y1*A1 + ... entry by entry.
  for (std::size_t i = 0; i < l.size(); ++i) {
    os << "  ";
    for (std::size_t j = 0; j < l.size(); ++j) {
      std::ostringstream cell;
      bool first = true;
      for (std::size_t b = 0; b < l.dim(); ++b) {
        const double v = l.basis()[b](i, j);
        if (v == 0.0) continue;
        if (!first) cell << (v > 0 ? "+" : "");
        if (v == -1.0) cell << "-";
        else if (v != 1.0) cell << v << "*";
        cell << "y" << b + 1;
        first = false;
      }
      const std::string s = first ? "0" : cell.str();
      os << std::setw(12) << s;
    }
    os << "\n";
  }
  o.human = os.str();
  return o;
}

Outcome cmd_dim(const std::string& path, const Global& g, int trials) {
  const auto l = logsparse::io::lssm_from_json(logsparse::io::read_file(path));
  logsparse::DimensionOptions opts;
  opts.seed = g.seed;
  opts.centralizer_trials = trials;
  opts.eigen.seed = g.seed;
  const auto r = logsparse::gibbs_dimension(l, opts);
  warn_all(r.warnings);
  Outcome o;
  o.payload = logsparse::io::to_json(r);
  std::ostringstream os;
  os << "n        " << r.n << "\n"
     << "dim L    " << r.d << "\n"
     << "m        " << r.m << "   (Q-dimension of the eigenvalue span)\n"
     << "k        " << r.k << "   (generic centralizer dimension)\n"
     << "gv_dim   " << r.gv_dim << "   (= m + d - k, capped at " << r.ambient << ")\n";
  for (const auto& b : r.bounds) os << "bound    " << b.name << " = " << b.value << "\n";
  if (r.conjecture_value) os << "conjectured value " << *r.conjecture_value << "\n";
  os << "GM semialgebraic (m = k): " << (r.semialgebraic ? "yes" : "no") << "\n";
  for (const auto& rel : r.relations) {
    os << "relation";
    for (long c : rel) os << " " << c;
    os << "\n";
  }
  o.human = os.str();
  return o;
}

struct ImplicitizeArgs {
  bool numeric = false, symbolic = false;
  unsigned maxdeg = 0;
  bool stop_after_first = false;
  double rtol = logsparse::kDefaultKernelRtol;
  double gap = logsparse::kDefaultKernelGap;
  std::string basis = "auto";
  std::string method = "reduced";
  unsigned cap_degree = logsparse::GbCaps{}.max_degree;
  std::size_t cap_pairs = logsparse::GbCaps{}.max_pairs;
  double cap_seconds = logsparse::GbCaps{}.time_budget_seconds;
};

logsparse::VerifyOptions verify_options(const Global& g, std::size_t samples) {
  logsparse::VerifyOptions v;
  v.samples = samples;
  if (g.tol) v.tol = *g.tol;
  return v;
}

Outcome cmd_implicitize(const std::string& path, const Global& g, const ImplicitizeArgs& a) {
  if (a.numeric == a.symbolic) throw Error(ErrorKind::InvalidInput, "implicitize: give exactly one of --numeric and --symbolic");
  const auto l = logsparse::io::lssm_from_json(logsparse::io::read_file(path));
  Outcome o;
  if (a.numeric) {
    if (a.maxdeg == 0) throw Error(ErrorKind::InvalidInput, "implicitize --numeric: --maxdeg K is required");
    logsparse::Algorithm1Options opts;
    opts.seed = g.seed;
    opts.stop_after_first = a.stop_after_first;
    opts.rtol = a.rtol;
    opts.gap = a.gap;
    opts.verify = verify_options(g, 200);
    if (a.basis == "homogeneous") opts.basis = logsparse::BasisMode::Homogeneous;
    else if (a.basis == "full") opts.basis = logsparse::BasisMode::Full;
    const auto r = logsparse::run_algorithm1(l, a.maxdeg, opts);
    warn_all(r.warnings);
    o.payload = logsparse::io::to_json(r);
    std::ostringstream os;
    for (const auto& d : r.per_degree)
      os << "degree " << d.degree << ": " << d.basis_size << " monomials, " << d.samples << " samples, kernel "
         << d.kernel_dim << ", new " << d.found << "\n";
    os << ideal_listing(r.polynomials, r.vars) << verification_line(r.verification);
    o.human = os.str();
  } else {
    logsparse::Algorithm2Options opts;
    opts.seed = g.seed;
    opts.caps.max_degree = a.cap_degree;
    opts.caps.max_pairs = a.cap_pairs;
    opts.caps.time_budget_seconds = a.cap_seconds;
    opts.verify = verify_options(g, 200);
    opts.method = a.method == "sylvester" ? logsparse::Algorithm2Method::Sylvester : logsparse::Algorithm2Method::Reduced;
    const auto r = logsparse::run_algorithm2(l, opts);
    o.payload = logsparse::io::to_json(r);
    o.human = ideal_listing(r.generators, r.vars) + verification_line(r.verification);
  }
  return o;
}

Outcome cmd_verify(const std::string& space, const std::string& equations, const Global& g, std::size_t samples) {
  const auto l = logsparse::io::lssm_from_json(logsparse::io::read_file(space));
  const auto vars = logsparse::matrix_variable_names(l.size());
  const auto polys = logsparse::io::polynomials_from_json(logsparse::io::read_file(equations), vars);
  auto opts = verify_options(g, samples);
  opts.seed = g.seed;
  const auto r = logsparse::verify(polys, l, opts);
  Outcome o;
  o.payload = logsparse::io::to_json(r);
  o.negative = !r.passed;
  std::ostringstream os;
  for (std::size_t i = 0; i < polys.size(); ++i)
    os << "  [" << i + 1 << "] residual " << std::scientific << std::setprecision(2) << r.residuals[i] << "  "
       << polys[i].to_string(vars) << "\n";
  for (const auto& f : r.failures) os << "  failure: " << f << "\n";
  os << verification_line(r);
  o.human = os.str();
  return o;
}

Outcome cmd_logcheck(const std::string& space, const std::string& matrix, const Global& g) {
  const auto l = logsparse::io::lssm_from_json(logsparse::io::read_file(space));
  const auto x = logsparse::io::matrix_from_json(logsparse::io::read_file(matrix));
  if (x.size() != l.size()) throw Error(ErrorKind::InvalidInput, "logcheck: matrix and space sizes differ");
  const double tol = g.tol.value_or(1e-9);
  const auto lg = logsparse::logm(x);
  const double dist = logsparse::distance_to_span(lg, l.basis());
  const bool in = logsparse::logcheck(x, l, tol);
  Outcome o;
  o.payload = {{"in_log_space", in}, {"distance", dist}, {"log_norm", lg.frobenius_norm()}, {"tol", tol}};
  o.negative = !in;
  std::ostringstream os;
  os << "log X " << (in ? "lies" : "does not lie") << " in L (distance " << std::scientific << std::setprecision(2)
     << dist << ", tolerance " << tol << " relative)\n";
  o.human = os.str();
  return o;
}

struct SdpArgs {
  std::string space, b, cost, epsilon = "inf";
  std::size_t max_iterations = logsparse::EntropicOptions{}.max_iterations;
};

Outcome cmd_sdp(const SdpArgs& a, const Global& g) {
  logsparse::SdpInstance inst{logsparse::io::lssm_from_json(logsparse::io::read_file(a.space)), {},
                              logsparse::io::vector_from_json(logsparse::io::read_file(a.b)), {}};
  if (a.epsilon != "inf") {
    double e = 0.0;
    try {
      std::size_t used = 0;
      e = std::stod(a.epsilon, &used);
      if (used != a.epsilon.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "sdp: --epsilon must be 'inf' or a positive number");
    }
    inst.epsilon = e;
    if (a.cost.empty()) throw Error(ErrorKind::InvalidInput, "sdp: a finite --epsilon needs --cost");
  }
  if (!a.cost.empty()) inst.cost = logsparse::io::matrix_from_json(logsparse::io::read_file(a.cost));
  logsparse::EntropicOptions opts;
  opts.max_iterations = a.max_iterations;
  if (g.tol) opts.tol = *g.tol;
  const auto s = logsparse::solve_entropic(inst, opts);
  warn_all(s.warnings);
  Outcome o;
  o.payload = logsparse::io::to_json(s);
  std::ostringstream os;
  os << "converged in " << s.iterations << " Newton steps, residual " << std::scientific << std::setprecision(2)
     << s.residual << "\n"
     << "entropy " << std::defaultfloat << std::setprecision(12) << s.entropy << "\n"
     << "X* =\n";
  for (std::size_t i = 0; i < s.x_star.size(); ++i) {
    os << " ";
    for (std::size_t j = 0; j < s.x_star.size(); ++j) os << std::setw(14) << std::setprecision(8) << s.x_star(i, j);
    os << "\n";
  }
  o.human = os.str();
  return o;
}

void emit(const Outcome& o, const Global& g) {
  if (!g.out.empty()) {
    std::ofstream f(g.out);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + g.out);
    f << dump(o.payload, true) << "\n";
  }
  if (g.json) std::cout << dump(o.payload, g.pretty) << "\n";
  else std::cout << o.human;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs varieties of logarithmically sparse symmetric matrices"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "Seed for every random choice (default 0)");
  app.add_flag("--json", g.json, "Print the JSON payload instead of a summary");
  app.add_flag("--pretty", g.pretty, "Indent JSON output (implies --json)");
  app.add_option("--tol", g.tol, "Tolerance for verify, logcheck and sdp");
  app.add_option("--out", g.out, "Also write the JSON payload to this file");
  app.set_version_flag("--version", std::string("logsparse ") + kVersion + " (file format " +
                                        std::to_string(logsparse::io::kFormatVersion) + ")");

  std::string space, second;

  auto* pattern = app.add_subcommand("pattern", "Inspect a pattern or space");
  pattern->add_option("space", space, "Graph or space JSON")->required();

  int trials = 2;
  auto* dim = app.add_subcommand("dim", "Dimension of the Gibbs variety");
  dim->add_option("space", space, "Graph or space JSON")->required();
  dim->add_option("--trials", trials, "Random points for the centralizer dimension")->check(CLI::PositiveNumber);

  ImplicitizeArgs ia;
  auto* impl = app.add_subcommand("implicitize", "Equations of the Gibbs variety");
  impl->add_option("space", space, "Graph or space JSON")->required();
  impl->add_flag("--numeric", ia.numeric, "Vandermonde kernel method");
  impl->add_flag("--symbolic", ia.symbolic, "Saturation and elimination");
  impl->add_option("--maxdeg", ia.maxdeg, "Largest degree to search (numeric)");
  impl->add_flag("--stop-after-first", ia.stop_after_first, "Stop at the first degree with equations");
  impl->add_option("--rtol", ia.rtol, "Relative singular value threshold")->check(CLI::PositiveNumber);
  impl->add_option("--gap", ia.gap, "Required singular value gap")->check(CLI::PositiveNumber);
  impl->add_option("--basis", ia.basis, "Monomial basis")->check(CLI::IsMember({"auto", "homogeneous", "full"}));
  impl->add_option("--method", ia.method, "Symbolic formulation")->check(CLI::IsMember({"reduced", "sylvester"}));
  impl->add_option("--cap-degree", ia.cap_degree, "Groebner degree cap");
  impl->add_option("--cap-pairs", ia.cap_pairs, "Groebner pair cap");
  impl->add_option("--cap-seconds", ia.cap_seconds, "Groebner time budget");

  std::size_t samples = 200;
  auto* ver = app.add_subcommand("verify", "Check equations on sampled Gibbs points");
  ver->add_option("--graph,--space", space, "Graph or space JSON")->required();
  ver->add_option("equations", second, "Polynomial JSON")->required();
  ver->add_option("--samples", samples, "Number of samples")->check(CLI::PositiveNumber);

  auto* lc = app.add_subcommand("logcheck", "Is log X in the space?");
  lc->add_option("--graph,--space", space, "Graph or space JSON")->required();
  lc->add_option("matrix", second, "Matrix JSON (or a solution JSON)")->required();

  SdpArgs sa;
  auto* sdp = app.add_subcommand("sdp", "Entropic regularization of the spectrahedral program");
  sdp->add_option("--graph,--space", sa.space, "Graph or space JSON")->required();
  sdp->add_option("--b", sa.b, "Right-hand side JSON")->required();
  sdp->add_option("--cost", sa.cost, "Cost matrix JSON");
  sdp->add_option("--epsilon", sa.epsilon, "Regularization weight, or inf");
  sdp->add_option("--max-iterations", sa.max_iterations, "Newton step cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (g.pretty) g.json = true;

  try {
    Outcome o;
    if (*pattern) o = cmd_pattern(space);
    else if (*dim) o = cmd_dim(space, g, trials);
    else if (*impl) o = cmd_implicitize(space, g, ia);
    else if (*ver) o = cmd_verify(space, second, g, samples);
    else if (*lc) o = cmd_logcheck(space, second, g);
    else o = cmd_sdp(sa, g);
    emit(o, g);
    return o.negative ? 1 : 0;
  } catch (const Error& e) {
    std::cerr << "error: " << logsparse::to_string(e.kind()) << ": " << e.what() << "\n";
    if (g.json) std::cout << dump({{"error", {{"kind", logsparse::to_string(e.kind())}, {"message", e.what()}}}}, g.pretty) << "\n";
    return logsparse::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
