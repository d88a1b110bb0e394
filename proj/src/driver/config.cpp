#include "quinpi/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "quinpi/errors.hpp"

namespace quinpi {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "default";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& text) {
  if (text == "default") return std::nan("");
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + text + "'");
}

int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::string linear_kind_name(LinearSolverKind k) {
  switch (k) {
    case LinearSolverKind::automatic:
      return "auto";
    case LinearSolverKind::direct:
      return "direct";
    case LinearSolverKind::gmres:
      return "gmres";
  }
  return "auto";
}

std::string preconditioner_name(PreconditionerKind k) {
  switch (k) {
    case PreconditionerKind::none:
      return "none";
    case PreconditionerKind::ilu0:
      return "ilu0";
    case PreconditionerKind::ilu0_compact:
      return "ilu0_compact";
    case PreconditionerKind::lu_compact:
      return "lu_compact";
  }
  return "none";
}

struct Key {
  std::string section;
  std::string name;
  std::function<void(const std::string&, const std::string&)> set;
  std::function<std::string()> get;
};

void add_double(std::vector<Key>& keys, const std::string& sec, const std::string& name, double& ref) {
  keys.push_back({sec, name, [&ref](const std::string& k, const std::string& v) { ref = parse_double(k, v); },
                  [&ref] { return format_double(ref); }});
}

template <class Int>
void add_int(std::vector<Key>& keys, const std::string& sec, const std::string& name, Int& ref) {
  keys.push_back({sec, name, [&ref](const std::string& k, const std::string& v) { ref = static_cast<Int>(parse_int(k, v)); },
                  [&ref] { return std::to_string(ref); }});
}

void add_bool(std::vector<Key>& keys, const std::string& sec, const std::string& name, bool& ref) {
  keys.push_back({sec, name, [&ref](const std::string& k, const std::string& v) { ref = parse_bool(k, v); },
                  [&ref] { return std::string(ref ? "true" : "false"); }});
}

void add_string(std::vector<Key>& keys, const std::string& sec, const std::string& name, std::string& ref) {
  keys.push_back({sec, name, [&ref](const std::string&, const std::string& v) { ref = v; }, [&ref] { return ref; }});
}

void add_newton(std::vector<Key>& keys, const std::string& sec, NewtonConfig& n) {
  add_double(keys, sec, "abs_tol", n.abs_tol);
  add_double(keys, sec, "rel_tol", n.rel_tol);
  add_int(keys, sec, "max_iter", n.max_iter);
  add_double(keys, sec, "linear_rel_tol", n.linear_rel_tol);
  keys.push_back({sec, "solver",
                  [&n](const std::string&, const std::string& v) { n.linear.kind = linear_solver_from_string(v); },
                  [&n] { return linear_kind_name(n.linear.kind); }});
  keys.push_back({sec, "preconditioner",
                  [&n](const std::string&, const std::string& v) {
                    n.linear.preconditioner = preconditioner_from_string(v);
                  },
                  [&n] { return preconditioner_name(n.linear.preconditioner); }});
  add_bool(keys, sec, "lump", n.linear.lump);
  add_int(keys, sec, "restart", n.linear.restart);
  add_int(keys, sec, "linear_max_iter", n.linear.max_iter);
  add_int(keys, sec, "direct_max_unknowns", n.linear.direct_max_unknowns);
}

std::vector<Key> key_table(SimulationConfig& c) {
  std::vector<Key> k;
  add_string(k, "case", "id", c.test_case);
  add_double(k, "case", "mach", c.params.mach);
  add_double(k, "case", "beta", c.params.beta);
  add_double(k, "case", "baroclinic_eps", c.params.baroclinic_eps);
  add_double(k, "case", "t_final", c.t_final);
  add_int(k, "case", "acoustic_startup_steps", c.acoustic_startup_steps);
  add_int(k, "case", "init_degree", c.init_degree);
  add_int(k, "case", "max_steps", c.max_steps);

  add_string(k, "mesh", "kind", c.mesh.kind);
  add_int(k, "mesh", "nx", c.mesh.nx);
  add_int(k, "mesh", "ny", c.mesh.ny);
  add_int(k, "mesh", "tri_n", c.mesh.tri_n);
  add_int(k, "mesh", "refinements", c.mesh.refinements);
  add_double(k, "mesh", "jitter", c.mesh.jitter);
  add_int(k, "mesh", "seed", c.mesh.seed);
  add_string(k, "mesh", "pattern", c.mesh.pattern);
  add_string(k, "mesh", "file", c.mesh.file);

  k.push_back({"time", "mode",
               [&c](const std::string&, const std::string& v) { c.timestep.mode = timestep_mode_from_string(v); },
               [&c] { return to_string(c.timestep.mode); }});
  add_double(k, "time", "courant", c.timestep.courant);
  add_double(k, "time", "fixed_dt", c.timestep.fixed_dt);
  add_double(k, "time", "growth", c.timestep.growth);
  add_double(k, "time", "min_fraction", c.timestep.min_fraction);

  add_bool(k, "limiter", "enabled", c.limiter.enabled);
  add_double(k, "limiter", "threshold", c.limiter_threshold);
  add_int(k, "limiter", "max_sweeps", c.limiter.max_sweeps);
  add_bool(k, "limiter", "cell_average_entropy", c.limiter.cell_average_entropy);

  add_double(k, "reconstruction", "d0", c.cwenoz.d0);
  add_double(k, "reconstruction", "eps_scale", c.cwenoz.eps_scale);

  add_newton(k, "predictor", c.stepper.predictor);
  add_newton(k, "corrector", c.stepper.corrector);
  k.push_back({"debug", "fail_attempts",
               [&c](const std::string& key, const std::string& v) {
                 c.stepper.fail_attempts.clear();
                 std::stringstream ss(v);
                 std::string item;
                 while (std::getline(ss, item, ','))
                   if (!item.empty()) c.stepper.fail_attempts.push_back(parse_int(key, item));
               },
               [&c] {
                 std::string s;
                 for (std::size_t i = 0; i < c.stepper.fail_attempts.size(); ++i)
                   s += (i ? "," : "") + std::to_string(c.stepper.fail_attempts[i]);
                 return s;
               }});

  add_string(k, "output", "dir", c.output.dir);
  add_string(k, "output", "format", c.output.format);
  add_int(k, "output", "every", c.output.every);
  add_bool(k, "output", "verbose", c.verbose);
  return k;
}

}  // namespace

SimulationConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  SimulationConfig cfg;
  std::vector<Key> keys = key_table(cfg);
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("config: key '" + section + "' outside of any section");
    for (const auto& [name, value] : body) {
      const std::string full = section + "." + name;
      bool found = false;
      for (Key& k : keys) {
        if (k.section == section && k.name == name) {
          k.set(full, value.get_value<std::string>());
          found = true;
          break;
        }
      }
      if (!found) throw ConfigError("config: unknown key '" + full + "'");
    }
  }
  validate(cfg);
  return cfg;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void write_config(std::ostream& out, const SimulationConfig& cfg) {
  SimulationConfig copy = cfg;
  const std::vector<Key> keys = key_table(copy);
  std::string section;
  for (const Key& k : keys) {
    if (k.section != section) {
      if (!section.empty()) out << '\n';
      section = k.section;
      out << '[' << section << "]\n";
    }
    out << k.name << " = " << k.get() << '\n';
  }
}

void validate(const SimulationConfig& cfg) {
  if (cfg.mesh.kind != "cartesian" && cfg.mesh.kind != "triangles" && cfg.mesh.kind != "gmsh")
    throw ConfigError("mesh.kind must be cartesian, triangles or gmsh");
  if (cfg.mesh.kind == "cartesian" && (cfg.mesh.nx < 1 || cfg.mesh.ny < 0))
    throw ConfigError("mesh.nx must be >= 1");
  if (cfg.mesh.kind == "triangles" && (cfg.mesh.tri_n < 1 || cfg.mesh.refinements < 0))
    throw ConfigError("mesh.tri_n must be >= 1 and mesh.refinements >= 0");
  if (cfg.mesh.kind == "gmsh" && cfg.mesh.file.empty()) throw ConfigError("mesh.file is required for gmsh meshes");
  if (cfg.t_final == 0.0) throw ConfigError("case.t_final must be positive");
  if (!(cfg.timestep.courant > 0.0)) throw ConfigError("time.courant must be positive");
  if (cfg.timestep.fixed_dt < 0.0) throw ConfigError("time.fixed_dt must be non-negative");
  if (!(cfg.timestep.growth >= 1.0)) throw ConfigError("time.growth must be >= 1");
  if (cfg.limiter_threshold < 0.0) throw ConfigError("limiter.threshold must be non-negative");
  if (cfg.init_degree != 2 && cfg.init_degree != 4) throw ConfigError("case.init_degree must be 2 or 4");
  if (cfg.output.format != "csv" && cfg.output.format != "vtk" && cfg.output.format != "both")
    throw ConfigError("output.format must be csv, vtk or both");
  for (const NewtonConfig* n : {&cfg.stepper.predictor, &cfg.stepper.corrector}) {
    if (!(n->rel_tol > 0.0)) throw ConfigError("newton rel_tol must be positive");
    if (n->max_iter < 0) throw ConfigError("newton max_iter must be non-negative");
    if (!(n->linear_rel_tol > 0.0 && n->linear_rel_tol < 1.0))
      throw ConfigError("newton linear_rel_tol must lie in (0, 1)");
  }
}

}  // namespace quinpi
