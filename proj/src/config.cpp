#include "strfm/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace strfm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = (char)std::tolower((unsigned char)c);
  return s;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty() || !std::isfinite(out))
    throw ConfigError(key, "expected a finite number, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string lv = lower(v);
  if (lv == "true") return true;
  if (lv == "false") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::istringstream ss(v);
  std::string tok;
  while (ss >> tok) out.push_back(to_int(key, tok));
  if (out.empty()) throw ConfigError(key, "expected at least one integer");
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::set<std::string> kSections = {"domain", "discretization", "features",
                                         "solver", "sweep", "output"};

void apply_key(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "schema") c.schema = to_int(key, v);
  else if (key == "mode") {
    const std::string m = lower(v);
    if (m == "solve") c.mode = RunMode::Solve;
    else if (m == "sweep") c.mode = RunMode::Sweep;
    else if (m == "compare") c.mode = RunMode::Compare;
    else if (m == "eigen") c.mode = RunMode::Eigen;
    else throw ConfigError(key, "unknown mode '" + v + "'");
  } else if (key == "problem") c.problem = lower(v);
  else if (key == "domain.geometry") c.geometry = v;
  else if (key == "discretization.n_x") c.n_x = to_ints(key, v);
  else if (key == "discretization.n_t") c.n_t = to_int(key, v);
  else if (key == "discretization.n_b") c.n_b = to_int(key, v);
  else if (key == "discretization.q_x") c.q_x = to_int(key, v);
  else if (key == "discretization.q_t") c.q_t = to_int(key, v);
  else if (key == "features.j_n") c.j_n = to_int(key, v);
  else if (key == "features.kind") {
    const std::string k = lower(v);
    if (k == "stc") c.kind = FeatureKind::STC;
    else if (k == "sov") c.kind = FeatureKind::SoV;
    else throw ConfigError(key, "unknown feature kind '" + v + "'");
  } else if (key == "features.pou") {
    const std::string k = lower(v);
    if (k == "a") c.pou = PouKind::A;
    else if (k == "b") c.pou = PouKind::B;
    else throw ConfigError(key, "unknown partition kind '" + v + "'");
  } else if (key == "features.r_m") c.r_m = to_double(key, v);
  else if (key == "features.seed") c.seed = to_u64(key, v);
  else if (key == "solver.trunc_tol") c.trunc_tol = to_double(key, v);
  else if (key == "solver.weight_interior") c.weights.interior = to_double(key, v);
  else if (key == "solver.weight_boundary") c.weights.boundary = to_double(key, v);
  else if (key == "solver.weight_initial") c.weights.initial = to_double(key, v);
  else if (key == "solver.weight_interface")
    c.weights.interface_rows = to_double(key, v);
  else if (key == "sweep.axis") {
    const std::string a = lower(v);
    if (a == "nt") c.axis = SweepAxis::NT;
    else if (a == "nb") c.axis = SweepAxis::NB;
    else if (a == "jn") c.axis = SweepAxis::JN;
    else if (a == "q") c.axis = SweepAxis::Q;
    else throw ConfigError(key, "unknown sweep axis '" + v + "'");
  } else if (key == "sweep.values") c.values = to_ints(key, v);
  else if (key == "output.dir") c.output_dir = v;
  else if (key == "output.grid_x") c.grid_x = to_int(key, v);
  else if (key == "output.grid_t") c.grid_t = to_int(key, v);
  else if (key == "output.reference") c.reference = v;
  else if (key == "output.save_solution") c.save_solution = to_bool(key, v);
  else throw ConfigError(key, "unknown config key");
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  RunConfig c;
  std::string line, section;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config", "unterminated section header at line " +
                                        std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(section))
        throw ConfigError(section, "unknown config section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config", "expected 'key = value' at line " +
                                      std::to_string(lineno));
    const std::string key =
        (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      throw ConfigError(key, "duplicate config key");
    apply_key(c, key, value);
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse_run_config(in);
}

const char* run_mode_name(RunMode m) {
  switch (m) {
    case RunMode::Solve: return "solve";
    case RunMode::Sweep: return "sweep";
    case RunMode::Compare: return "compare";
    case RunMode::Eigen: return "eigen";
  }
  return "solve";
}

const char* sweep_axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::NT: return "nt";
    case SweepAxis::NB: return "nb";
    case SweepAxis::JN: return "jn";
    case SweepAxis::Q: return "q";
  }
  return "jn";
}

std::string dump_run_config(const RunConfig& c) {
  std::ostringstream out;
  out << "schema = " << c.schema << "\n";
  out << "mode = " << run_mode_name(c.mode) << "\n";
  out << "problem = " << c.problem << "\n";
  if (!c.geometry.empty())
    out << "\n[domain]\ngeometry = " << c.geometry << "\n";
  out << "\n[discretization]\n";
  out << "n_x =";
  for (int n : c.n_x) out << " " << n;
  out << "\n";
  out << "n_t = " << c.n_t << "\n";
  out << "n_b = " << c.n_b << "\n";
  out << "q_x = " << c.q_x << "\n";
  out << "q_t = " << c.q_t << "\n";
  out << "\n[features]\n";
  out << "j_n = " << c.j_n << "\n";
  out << "kind = " << (c.kind == FeatureKind::STC ? "stc" : "sov") << "\n";
  out << "pou = " << (c.pou == PouKind::A ? "a" : "b") << "\n";
  out << "r_m = " << fmt(c.r_m) << "\n";
  out << "seed = " << c.seed << "\n";
  out << "\n[solver]\n";
  out << "trunc_tol = " << fmt(c.trunc_tol) << "\n";
  out << "weight_interior = " << fmt(c.weights.interior) << "\n";
  out << "weight_boundary = " << fmt(c.weights.boundary) << "\n";
  out << "weight_initial = " << fmt(c.weights.initial) << "\n";
  out << "weight_interface = " << fmt(c.weights.interface_rows) << "\n";
  if (!c.values.empty()) {
    out << "\n[sweep]\n";
    out << "axis = " << sweep_axis_name(c.axis) << "\n";
    out << "values =";
    for (int v : c.values) out << " " << v;
    out << "\n";
  }
  out << "\n[output]\n";
  out << "dir = " << c.output_dir << "\n";
  out << "grid_x = " << c.grid_x << "\n";
  out << "grid_t = " << c.grid_t << "\n";
  if (!c.reference.empty()) out << "reference = " << c.reference << "\n";
  out << "save_solution = " << (c.save_solution ? "true" : "false") << "\n";
  return out.str();
}

void RunConfig::validate() const {
  if (schema != 1)
    throw ConfigError("schema", "unsupported config schema version " +
                                    std::to_string(schema));
  static const std::set<std::string> kProblems = {
      "heat",     "heat-nonsmooth", "wave",
      "schrodinger", "membrane",    "membrane-complex"};
  if (!kProblems.count(problem))
    throw ConfigError("problem", "unknown problem '" + problem + "'");
  const int dim = problem.rfind("membrane", 0) == 0 ? 2 : 1;
  if ((int)n_x.size() != dim)
    throw ConfigError("discretization.n_x",
                      "needs one entry per spatial axis (" +
                          std::to_string(dim) + " for " + problem + ")");
  for (int n : n_x)
    if (n < 1)
      throw ConfigError("discretization.n_x", "cell counts must be at least 1");
  if (n_t < 1)
    throw ConfigError("discretization.n_t", "must be at least 1");
  if (n_b < 1)
    throw ConfigError("discretization.n_b", "must be at least 1");
  if (n_t > 1 && n_b > 1)
    throw ConfigError("discretization.n_t",
                      "global time cells and marching blocks cannot both "
                      "exceed 1; pick one run mode");
  if (q_x < 1) throw ConfigError("discretization.q_x", "must be at least 1");
  if (q_t < 1) throw ConfigError("discretization.q_t", "must be at least 1");
  if (j_n < 1) throw ConfigError("features.j_n", "must be at least 1");
  if (!(r_m > 0.0)) throw ConfigError("features.r_m", "must be positive");
  if (!(trunc_tol > 0.0))
    throw ConfigError("solver.trunc_tol", "must be positive");
  if (!(weights.interior > 0.0) || !(weights.boundary > 0.0) ||
      !(weights.initial > 0.0) || !(weights.interface_rows > 0.0))
    throw ConfigError("solver.weight_interior", "row weights must be positive");
  if (grid_x < 1) throw ConfigError("output.grid_x", "must be at least 1");
  if (grid_t < 1) throw ConfigError("output.grid_t", "must be at least 1");
  if (!geometry.empty() && problem != "membrane-complex")
    throw ConfigError("domain.geometry",
                      "only applies to the membrane-complex problem");

  if (mode == RunMode::Sweep || mode == RunMode::Eigen) {
    if (values.empty())
      throw ConfigError("sweep.values", "required for sweep and eigen modes");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] < 1)
        throw ConfigError("sweep.values", "must be at least 1");
      if (i > 0 && values[i] <= values[i - 1])
        throw ConfigError("sweep.values", "must be strictly increasing");
    }
  }
  if (mode == RunMode::Sweep) {
    if (axis == SweepAxis::NT && n_b > 1)
      throw ConfigError("sweep.axis",
                        "a time-cell sweep cannot fix a block count");
    if (axis == SweepAxis::NB && n_b > 1)
      throw ConfigError("discretization.n_b",
                        "the block count is the sweep variable; leave it 1");
  }
  if (mode == RunMode::Eigen && axis != SweepAxis::JN)
    throw ConfigError("sweep.axis", "eigen mode sweeps the feature count");
  if (mode == RunMode::Compare) {
    if (n_b < 2)
      throw ConfigError("discretization.n_b",
                        "compare mode needs at least 2 blocks");
    if (n_t != 1)
      throw ConfigError("discretization.n_t",
                        "compare mode derives the global time cells from n_b");
  }
}

SolverConfig solver_config(const RunConfig& c) {
  SolverConfig s;
  s.n_x = c.n_x;
  s.n_t = c.n_t;
  s.q_x = c.q_x;
  s.q_t = c.q_t;
  s.j_n = c.j_n;
  s.kind = c.kind;
  s.pou_space = c.pou;
  s.pou_time = c.pou;
  s.seed = c.seed;
  s.r_m = c.r_m;
  s.trunc_tol = c.trunc_tol;
  s.weights = c.weights;
  return s;
}

ProblemSpec make_problem(const RunConfig& c) {
  if (c.problem == "heat") return make_heat();
  if (c.problem == "heat-nonsmooth") return make_heat_nonsmooth();
  if (c.problem == "wave") return make_wave();
  if (c.problem == "schrodinger") return make_schrodinger();
  if (c.problem == "membrane") return make_membrane();
  if (c.problem == "membrane-complex")
    return c.geometry.empty()
               ? make_membrane_complex()
               : make_membrane_complex(
                     SpatialDomain::load_composite_file(c.geometry));
  throw ConfigError("problem", "unknown problem '" + c.problem + "'");
}

}  // namespace strfm
