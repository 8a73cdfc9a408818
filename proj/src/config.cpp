#include "fsc/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "fsc/error.hpp"

namespace fsc {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

std::string trim(std::string s) {
  s.erase(0, s.find_first_not_of(" \t\r\n"));
  s.erase(s.find_last_not_of(" \t\r\n") + 1);
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
    s = s.substr(1, s.size() - 2);
  return s;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    config_error("'" + key + "' expects a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  double x = to_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 9e15) config_error("'" + key + "' expects an integer, got '" + v + "'");
  return static_cast<long long>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  config_error("'" + key + "' expects true or false, got '" + v + "'");
}

// key=value list inside parentheses; values may be bracketed lists.
std::map<std::string, std::string> parse_args(const std::string& body, const std::string& text) {
  std::map<std::string, std::string> out;
  std::size_t i = 0;
  while (i < body.size()) {
    std::size_t eq = body.find('=', i);
    if (eq == std::string::npos) {
      if (trim(body.substr(i)).empty()) break;
      config_error("expected key=value in '" + text + "'");
    }
    std::string key = trim(body.substr(i, eq - i));
    std::size_t j = eq + 1;
    while (j < body.size() && body[j] == ' ') ++j;
    std::size_t end;
    if (j < body.size() && body[j] == '[') {
      end = body.find(']', j);
      if (end == std::string::npos) config_error("unterminated list in '" + text + "'");
      ++end;
    } else {
      end = body.find(',', j);
      if (end == std::string::npos) end = body.size();
    }
    out[key] = trim(body.substr(j, end - j));
    i = body.find(',', end);
    i = i == std::string::npos ? body.size() : i + 1;
  }
  return out;
}

}  // namespace

QuadratureSpec parse_quadrature(const std::string& text) {
  static const std::regex outer(R"(^\s*([A-Za-z]+)\s*\((.*)\)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, outer)) config_error("cannot parse quadrature '" + text + "'");
  std::string name = m[1];
  auto args = parse_args(m[2], text);
  QuadratureSpec q;
  if (name == "gauss") {
    q.kind = QuadratureSpec::Kind::Gauss;
    for (auto& [k, v] : args) {
      if (k != "points_per_dim") config_error("unknown gauss option '" + k + "'");
      std::string list = v;
      if (!list.empty() && list.front() == '[') list = list.substr(1, list.size() - 2);
      std::stringstream ss(list);
      std::string item;
      while (std::getline(ss, item, ',')) {
        long long n = to_int("points_per_dim", trim(item));
        if (n < 1) config_error("points_per_dim entries must be >= 1");
        q.points_per_dim.push_back(static_cast<int>(n));
      }
    }
  } else if (name == "mc") {
    q.kind = QuadratureSpec::Kind::MonteCarlo;
    for (auto& [k, v] : args) {
      if (k == "q") {
        long long n = to_int(k, v);
        if (n < 1) config_error("mc q must be >= 1");
        q.q = static_cast<std::size_t>(n);
      } else if (k == "seed") {
        q.seed = static_cast<std::uint64_t>(to_int(k, v));
      } else {
        config_error("unknown mc option '" + k + "'");
      }
    }
  } else {
    config_error("unknown quadrature '" + name + "'");
  }
  return q;
}

std::string describe(const QuadratureSpec& spec) {
  std::ostringstream os;
  if (spec.kind == QuadratureSpec::Kind::Gauss) {
    os << "gauss(";
    if (!spec.points_per_dim.empty()) {
      os << "points_per_dim=[";
      for (std::size_t i = 0; i < spec.points_per_dim.size(); ++i) os << (i ? "," : "") << spec.points_per_dim[i];
      os << "]";
    }
    os << ")";
  } else {
    os << "mc(q=" << spec.q << ", seed=" << spec.seed << ")";
  }
  return os.str();
}

RunConfig parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    config_error(std::string("malformed config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  static const std::map<std::string, std::set<std::string>> allowed = {
      {"problem", {"id", "problem", "variant", "d"}},
      {"fsc",
       {"P", "M", "transfer", "dt", "T", "bootstrap_order", "bootstrap_duration", "orthogonalizer",
        "midpoint", "tol_drop", "h_fd", "check_transfer"}},
      {"quadrature", {"rule", "quadrature"}},
      {"oracle", {"kind", "realizations", "seed", "dense_points"}},
      {"output", {"dir", "plots"}},
  };
  std::map<std::string, std::map<std::string, std::string>> kv;
  for (const auto& [section, node] : tree) {
    auto it = allowed.find(section);
    if (it == allowed.end()) {
      if (node.empty()) config_error("key '" + section + "' must be inside a section");
      config_error("unknown section [" + section + "]");
    }
    for (const auto& [key, val] : node) {
      if (!it->second.count(key)) config_error("unknown key '" + key + "' in [" + section + "]");
      kv[section][key] = trim(val.get_value<std::string>());
    }
  }
  auto get = [&](const std::string& s, const std::string& k) -> const std::string* {
    auto a = kv.find(s);
    if (a == kv.end()) return nullptr;
    auto b = a->second.find(k);
    return b == a->second.end() ? nullptr : &b->second;
  };

  RunConfig cfg;
  if (auto v = get("problem", "id")) cfg.problem = *v;
  if (auto v = get("problem", "problem")) cfg.problem = *v;
  if (auto v = get("problem", "variant")) cfg.variant = *v;
  if (auto v = get("problem", "d")) cfg.d = static_cast<int>(to_int("d", *v));

  ProblemSpec problem;
  try {
    problem = make_problem(cfg.problem, cfg.variant, cfg.d);
  } catch (const Error& e) {
    config_error(e.what());
  }
  cfg.variant = problem.variant;
  cfg.fsc = problem.defaults;
  if (problem.requires_monte_carlo) {
    cfg.quadrature.kind = QuadratureSpec::Kind::MonteCarlo;
    cfg.oracle.kind = "mc";
  }

  FscConfig& f = cfg.fsc;
  if (auto v = get("fsc", "P")) f.P = static_cast<int>(to_int("P", *v));
  if (auto v = get("fsc", "M")) f.M = static_cast<int>(to_int("M", *v));
  if (auto v = get("fsc", "transfer")) {
    if (*v == "fsc1" || *v == "FSC1" || *v == "FSC-1")
      f.transfer = Transfer::FSC1;
    else if (*v == "fsc2" || *v == "FSC2" || *v == "FSC-2")
      f.transfer = Transfer::FSC2;
    else
      config_error("transfer must be fsc1 or fsc2");
  }
  if (auto v = get("fsc", "dt")) f.dt = to_double("dt", *v);
  if (auto v = get("fsc", "T")) f.T = to_double("T", *v);
  if (auto v = get("fsc", "bootstrap_order")) f.bootstrap.order = static_cast<int>(to_int("bootstrap_order", *v));
  if (auto v = get("fsc", "bootstrap_duration")) f.bootstrap.duration = to_double("bootstrap_duration", *v);
  if (auto v = get("fsc", "orthogonalizer")) {
    if (*v == "gs" || *v == "gram_schmidt")
      f.orthogonalizer = Orthogonalizer::GramSchmidt;
    else if (*v == "theorem1" || *v == "determinants")
      f.orthogonalizer = Orthogonalizer::Theorem1;
    else
      config_error("orthogonalizer must be gs or theorem1");
  }
  if (auto v = get("fsc", "midpoint")) f.midpoint = to_bool("midpoint", *v);
  if (auto v = get("fsc", "tol_drop")) f.tol_drop = to_double("tol_drop", *v);
  if (auto v = get("fsc", "h_fd")) f.fd.h = to_double("h_fd", *v);
  if (auto v = get("fsc", "check_transfer")) f.check_transfer = to_bool("check_transfer", *v);

  if (auto v = get("quadrature", "rule")) cfg.quadrature = parse_quadrature(*v);
  if (auto v = get("quadrature", "quadrature")) cfg.quadrature = parse_quadrature(*v);
  if (problem.requires_monte_carlo && cfg.quadrature.kind == QuadratureSpec::Kind::Gauss)
    throw Error(ErrorCode::DimensionTooLarge,
                "problem '" + cfg.problem + "' has d = " + std::to_string(problem.d) +
                    " and needs Monte Carlo nodes");

  if (auto v = get("oracle", "kind")) {
    static const std::set<std::string> kinds{"auto", "closed_form", "dense", "mc", "none"};
    if (!kinds.count(*v)) config_error("oracle kind must be one of auto, closed_form, dense, mc, none");
    cfg.oracle.kind = *v;
  }
  if (auto v = get("oracle", "realizations")) {
    long long n = to_int("realizations", *v);
    if (n < 1) config_error("realizations must be >= 1");
    cfg.oracle.realizations = static_cast<std::size_t>(n);
  }
  if (auto v = get("oracle", "seed")) cfg.oracle.seed = static_cast<std::uint64_t>(to_int("seed", *v));
  if (auto v = get("oracle", "dense_points")) {
    long long n = to_int("dense_points", *v);
    if (n < 1) config_error("dense_points must be >= 1");
    cfg.oracle.dense_points = static_cast<int>(n);
  }
  if (cfg.oracle.kind == "closed_form" && !problem.exact_response)
    config_error("problem '" + cfg.problem + "' has no closed-form oracle");

  if (auto v = get("output", "dir")) cfg.out_dir = *v;
  if (auto v = get("output", "plots")) cfg.plots = to_bool("plots", *v);

  try {
    validate(cfg.fsc, problem.ode->order());
  } catch (const Error& e) {
    config_error(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& c) {
  std::ostringstream os;
  os.precision(17);
  const FscConfig& f = c.fsc;
  os << "[problem]\n"
     << "id = " << c.problem << "\n"
     << "variant = " << c.variant << "\n"
     << "d = " << c.d << "\n\n"
     << "[fsc]\n"
     << "P = " << f.P << "\n"
     << "M = " << f.M << "\n"
     << "transfer = " << (f.transfer == Transfer::FSC2 ? "fsc2" : "fsc1") << "\n"
     << "dt = " << f.dt << "\n"
     << "T = " << f.T << "\n"
     << "bootstrap_order = " << f.bootstrap.order << "\n"
     << "bootstrap_duration = " << f.bootstrap.duration << "\n"
     << "orthogonalizer = " << (f.orthogonalizer == Orthogonalizer::GramSchmidt ? "gs" : "theorem1") << "\n"
     << "midpoint = " << (f.midpoint ? "true" : "false") << "\n"
     << "tol_drop = " << f.tol_drop << "\n"
     << "h_fd = " << f.fd.h << "\n"
     << "check_transfer = " << (f.check_transfer ? "true" : "false") << "\n\n"
     << "[quadrature]\n"
     << "rule = " << describe(c.quadrature) << "\n\n"
     << "[oracle]\n"
     << "kind = " << c.oracle.kind << "\n"
     << "realizations = " << c.oracle.realizations << "\n"
     << "seed = " << c.oracle.seed << "\n"
     << "dense_points = " << c.oracle.dense_points << "\n\n"
     << "[output]\n"
     << "dir = " << c.out_dir << "\n"
     << "plots = " << (c.plots ? "true" : "false") << "\n";
  return os.str();
}

void apply_full_scale(RunConfig& cfg) {
  cfg.fsc.T = 150.0;
  cfg.oracle.realizations = 1000000;
}

void apply_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.quadrature.seed = seed;
  cfg.oracle.seed = seed + 1;
}

NodeSetPtr make_nodes(const QuadratureSpec& spec, const ProblemSpec& problem) {
  if (spec.kind == QuadratureSpec::Kind::MonteCarlo) return mc_nodes(problem.measure, spec.q, spec.seed);
  std::vector<int> pts = spec.points_per_dim.empty() ? problem.gauss_points : spec.points_per_dim;
  if (pts.size() == 1 && problem.measure.dim() > 1) pts.assign(problem.measure.dim(), pts[0]);
  if (pts.size() != problem.measure.dim())
    throw Error(ErrorCode::ConfigError, "points_per_dim must list one count per random dimension");
  return gauss_grid(problem.measure, pts);
}

ProblemSpec problem_for(const RunConfig& cfg) { return make_problem(cfg.problem, cfg.variant, cfg.d); }

}  // namespace fsc
