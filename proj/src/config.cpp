#include "nlms/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "nlms/io.hpp"

namespace nlms {

std::string command_name(Command c) {
  switch (c) {
    case Command::minimize: return "minimize";
    case Command::curvature_scan: return "curvature-scan";
    case Command::lemma_check: return "lemma-check";
    case Command::slide: return "slide";
    case Command::verify: return "verify";
  }
  return "minimize";
}

std::optional<Command> command_from_name(const std::string& s) {
  if (s == "minimize") return Command::minimize;
  if (s == "curvature-scan") return Command::curvature_scan;
  if (s == "lemma-check") return Command::lemma_check;
  if (s == "slide") return Command::slide;
  if (s == "verify") return Command::verify;
  return std::nullopt;
}

std::shared_ptr<const Grid> RunConfig::make_grid() const {
  return std::make_shared<Grid>(Grid::centered(n, h, horiz_cells, vert_cells));
}

std::shared_ptr<const CylinderDomain> RunConfig::make_domain() const {
  return std::make_shared<CylinderDomain>(CylinderDomain::intervals(omega));
}

std::shared_ptr<const ExteriorGraphData> RunConfig::make_exterior() const {
  if (exterior_kind == "constant")
    return std::make_shared<ExteriorGraphData>(ExteriorGraphData::constant(exterior_value));
  if (exterior_kind == "jump")
    return std::make_shared<ExteriorGraphData>(
        ExteriorGraphData::jump(exterior_left, exterior_right));
  return std::make_shared<ExteriorGraphData>(
      ExteriorGraphData::piecewise_linear(exterior_breakpoints));
}

std::shared_ptr<const Kernel> RunConfig::make_kernel() const {
  return std::make_shared<Kernel>(n, s, tail_policy);
}

Problem RunConfig::make_problem() const {
  return Problem::make(make_grid(), make_domain(), make_exterior(), make_kernel());
}

namespace {

struct RawDoc {
  // section -> key -> (value, line)
  std::map<std::string, std::map<std::string, std::pair<std::string, int>>> kv;
  std::vector<ConfigError> errors;
};

RawDoc lex(const std::string& text) {
  RawDoc doc;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto trim = [](std::string s) {
      size_t b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      size_t e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        doc.errors.push_back({lineno, "malformed section header"});
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      doc.errors.push_back({lineno, "expected key = value"});
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) {
      doc.errors.push_back({lineno, "empty key"});
      continue;
    }
    if (doc.kv[section].count(key))
      doc.errors.push_back({lineno, "duplicate key '" + key + "'"});
    doc.kv[section][key] = {val, lineno};
  }
  return doc;
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& v, bool colon_pairs,
                                                   bool& ok) {
  // "a b; c d" intervals or "x:y x:y" breakpoints
  std::vector<std::pair<double, double>> out;
  ok = true;
  if (colon_pairs) {
    std::istringstream is(v);
    std::string tok;
    while (is >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos) {
        ok = false;
        return out;
      }
      try {
        out.emplace_back(std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1)));
      } catch (...) {
        ok = false;
        return out;
      }
    }
    return out;
  }
  std::istringstream groups(v);
  std::string grp;
  while (std::getline(groups, grp, ';')) {
    std::istringstream is(grp);
    double a, b;
    if (is >> a >> b)
      out.emplace_back(a, b);
    else {
      ok = false;
      return out;
    }
  }
  return out;
}

std::vector<double> parse_list(const std::string& v, bool& ok) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string tok;
  ok = true;
  while (is >> tok) {
    try {
      out.push_back(std::stod(tok));
    } catch (...) {
      ok = false;
      return out;
    }
  }
  return out;
}

}  // namespace

ParseOutcome parse_config(const std::string& text) {
  ParseOutcome out;
  RawDoc doc = lex(text);
  out.errors = doc.errors;
  RunConfig cfg;

  const std::map<std::string, std::set<std::string>> known = {
      {"", {"command"}},
      {"grid", {"h", "horiz_cells", "vert_cells"}},
      {"domain", {"n", "omega"}},
      {"exterior", {"kind", "value", "left", "right", "breakpoints"}},
      {"kernel", {"s", "tail_policy"}},
      {"solver", {"mode", "max_free_cells", "graph_radius_cells"}},
      {"lemma", {"R", "lambda", "lambdas", "alpha", "C_o", "L"}},
      {"output", {"dir"}},
  };
  for (auto& [sec, keys] : doc.kv) {
    auto it = known.find(sec);
    if (it == known.end()) {
      out.errors.push_back({keys.begin()->second.second, "unknown section [" + sec + "]"});
      continue;
    }
    for (auto& [key, vl] : keys)
      if (!it->second.count(key))
        out.errors.push_back({vl.second, "unknown key '" + key + "' in [" + sec + "]"});
  }

  auto get = [&](const std::string& sec, const std::string& key) -> const std::pair<std::string, int>* {
    auto s = doc.kv.find(sec);
    if (s == doc.kv.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    return &k->second;
  };
  auto want_double = [&](const std::string& sec, const std::string& key, double& dst) {
    if (auto* v = get(sec, key)) {
      try {
        dst = std::stod(v->first);
      } catch (...) {
        out.errors.push_back({v->second, "'" + key + "' is not a number"});
      }
    }
  };
  auto want_int = [&](const std::string& sec, const std::string& key, auto& dst) {
    if (auto* v = get(sec, key)) {
      try {
        dst = std::stoll(v->first);
      } catch (...) {
        out.errors.push_back({v->second, "'" + key + "' is not an integer"});
      }
    }
  };

  if (auto* v = get("", "command")) {
    auto c = command_from_name(v->first);
    if (!c)
      out.errors.push_back({v->second, "unknown command '" + v->first + "'"});
    else
      cfg.command = *c;
  }
  want_double("grid", "h", cfg.h);
  want_int("grid", "horiz_cells", cfg.horiz_cells);
  want_int("grid", "vert_cells", cfg.vert_cells);
  want_int("domain", "n", cfg.n);
  if (auto* v = get("domain", "omega")) {
    bool ok;
    cfg.omega = parse_pairs(v->first, false, ok);
    if (!ok || cfg.omega.empty())
      out.errors.push_back({v->second, "'omega' expects interval pairs 'a b[; a b]'"});
  }
  if (auto* v = get("exterior", "kind")) {
    if (v->first != "constant" && v->first != "jump" && v->first != "piecewise")
      out.errors.push_back({v->second, "exterior kind must be constant, jump or piecewise"});
    else
      cfg.exterior_kind = v->first;
  }
  want_double("exterior", "value", cfg.exterior_value);
  want_double("exterior", "left", cfg.exterior_left);
  want_double("exterior", "right", cfg.exterior_right);
  if (auto* v = get("exterior", "breakpoints")) {
    bool ok;
    cfg.exterior_breakpoints = parse_pairs(v->first, true, ok);
    if (!ok) out.errors.push_back({v->second, "'breakpoints' expects 'x:y' tokens"});
  }
  want_double("kernel", "s", cfg.s);
  if (auto* v = get("kernel", "tail_policy")) {
    if (v->first == "none")
      cfg.tail_policy = TailPolicy::none;
    else if (v->first == "halfspace_columns")
      cfg.tail_policy = TailPolicy::halfspace_columns;
    else if (v->first == "radial")
      cfg.tail_policy = TailPolicy::radial;
    else
      out.errors.push_back({v->second, "tail_policy must be none, halfspace_columns or radial"});
  }
  if (auto* v = get("solver", "mode")) {
    if (v->first != "exact" && v->first != "descent")
      out.errors.push_back({v->second, "solver mode must be exact or descent"});
    else
      cfg.solver_mode = v->first;
  }
  want_int("solver", "max_free_cells", cfg.max_free_cells);
  want_int("solver", "graph_radius_cells", cfg.graph_radius_cells);
  if (auto* v = get("lemma", "R")) {
    bool ok;
    cfg.lemma_R = parse_list(v->first, ok);
    if (!ok || cfg.lemma_R.empty()) out.errors.push_back({v->second, "'R' expects numbers"});
  }
  want_double("lemma", "lambda", cfg.lemma_lambda);
  if (auto* v = get("lemma", "lambdas")) {
    bool ok;
    cfg.lemma_lambdas = parse_list(v->first, ok);
    if (!ok || cfg.lemma_lambdas.empty())
      out.errors.push_back({v->second, "'lambdas' expects numbers"});
  }
  want_double("lemma", "alpha", cfg.lemma_alpha);
  want_double("lemma", "C_o", cfg.lemma_C_o);
  want_double("lemma", "L", cfg.lemma_L);
  if (auto* v = get("output", "dir")) cfg.out_dir = v->first;

  // Range validation (independent of syntax errors above).
  auto semantic = [&](const std::string& msg) { out.errors.push_back({0, msg}); };
  if (!(cfg.s > 0.0 && cfg.s < 0.5)) semantic("s must lie in (0, 1/2)");
  if (!(cfg.h > 0.0)) semantic("h must be positive");
  if (cfg.horiz_cells < 4 || cfg.vert_cells < 4) semantic("window must be at least 4x4 cells");
  if (cfg.n != 2) semantic("the command pipeline supports n=2 (library types cover n=3)");
  if (cfg.omega.empty()) cfg.omega = {{-1.0, 1.0}};
  for (auto& [a, b] : cfg.omega)
    if (!(a < b)) semantic("omega intervals must be nonempty");
  double W = 0.5 * cfg.horiz_cells * cfg.h;
  for (auto& [a, b] : cfg.omega)
    if (a <= -W + cfg.h || b >= W - cfg.h)
      semantic("omega must leave at least one exterior column inside the window");
  if (cfg.exterior_kind == "piecewise" && cfg.exterior_breakpoints.empty())
    semantic("piecewise exterior data needs breakpoints");
  if (cfg.max_free_cells < 1) semantic("max_free_cells must be positive");
  if (cfg.graph_radius_cells < 1) semantic("graph_radius_cells must be positive");

  if (out.errors.empty()) out.config = cfg;
  return out;
}

std::string emit_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "command = " << command_name(cfg.command) << "\n\n";
  os << "[grid]\n";
  os << "h = " << fmt_double(cfg.h) << "\n";
  os << "horiz_cells = " << cfg.horiz_cells << "\n";
  os << "vert_cells = " << cfg.vert_cells << "\n\n";
  os << "[domain]\n";
  os << "n = " << cfg.n << "\n";
  os << "omega = ";
  for (size_t i = 0; i < cfg.omega.size(); ++i) {
    if (i) os << "; ";
    os << fmt_double(cfg.omega[i].first) << " " << fmt_double(cfg.omega[i].second);
  }
  os << "\n\n[exterior]\n";
  os << "kind = " << cfg.exterior_kind << "\n";
  if (cfg.exterior_kind == "constant") os << "value = " << fmt_double(cfg.exterior_value) << "\n";
  if (cfg.exterior_kind == "jump") {
    os << "left = " << fmt_double(cfg.exterior_left) << "\n";
    os << "right = " << fmt_double(cfg.exterior_right) << "\n";
  }
  if (cfg.exterior_kind == "piecewise") {
    os << "breakpoints =";
    for (auto& [x, y] : cfg.exterior_breakpoints)
      os << " " << fmt_double(x) << ":" << fmt_double(y);
    os << "\n";
  }
  os << "\n[kernel]\n";
  os << "s = " << fmt_double(cfg.s) << "\n";
  os << "tail_policy = "
     << (cfg.tail_policy == TailPolicy::none
             ? "none"
             : cfg.tail_policy == TailPolicy::radial ? "radial" : "halfspace_columns")
     << "\n\n";
  os << "[solver]\n";
  os << "mode = " << cfg.solver_mode << "\n";
  os << "max_free_cells = " << cfg.max_free_cells << "\n";
  os << "graph_radius_cells = " << cfg.graph_radius_cells << "\n\n";
  os << "[lemma]\n";
  os << "R =";
  for (double r : cfg.lemma_R) os << " " << fmt_double(r);
  os << "\nlambda = " << fmt_double(cfg.lemma_lambda) << "\n";
  os << "lambdas =";
  for (double l : cfg.lemma_lambdas) os << " " << fmt_double(l);
  os << "\nalpha = " << fmt_double(cfg.lemma_alpha) << "\n";
  os << "C_o = " << fmt_double(cfg.lemma_C_o) << "\n";
  os << "L = " << fmt_double(cfg.lemma_L) << "\n\n";
  os << "[output]\n";
  os << "dir = " << cfg.out_dir << "\n";
  return os.str();
}

}  // namespace nlms
