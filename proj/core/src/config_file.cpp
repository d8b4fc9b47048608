#include "prodnet/config_file.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace prodnet {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string suggest(const std::string& key, const std::vector<std::string>& known) {
  std::string best;
  int best_d = 4;  // only suggest close matches
  for (const auto& k : known) {
    const int d = edit_distance(key, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

double parse_double(const Entry& e, const std::string& key, const std::string& origin) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(e.value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != e.value.size() || !std::isfinite(v)) {
    throw ParseError(origin + ":" + std::to_string(e.line) + ": key '" + key +
                     "' expects a finite decimal, got '" + e.value + "'");
  }
  return v;
}

std::vector<double> parse_doubles(const Entry& e, const std::string& key,
                                  const std::string& origin) {
  std::istringstream is(e.value);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    Entry t{tok, e.line, false};
    out.push_back(parse_double(t, key, origin));
  }
  if (out.empty()) {
    throw ParseError(origin + ":" + std::to_string(e.line) + ": key '" + key +
                     "' expects at least one value");
  }
  return out;
}

class Parsed {
 public:
  Parsed(const std::string& text, std::string origin) : origin_(std::move(origin)) {
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          throw ParseError(origin_ + ":" + std::to_string(lineno) + ": malformed section header");
        }
        section = trim(line.substr(1, line.size() - 2));
        sections_[section];
        continue;
      }
      auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ParseError(origin_ + ":" + std::to_string(lineno) + ": expected 'key = value'");
      }
      if (section.empty()) {
        throw ParseError(origin_ + ":" + std::to_string(lineno) + ": key outside any section");
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      auto [it, inserted] = sections_[section].emplace(key, Entry{value, lineno, false});
      if (!inserted) {
        throw ParseError(origin_ + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
      }
    }
  }

  bool has(const std::string& sec, const std::string& key) {
    auto s = sections_.find(sec);
    if (s == sections_.end()) return false;
    return s->second.count(key) > 0;
  }

  Entry& get(const std::string& sec, const std::string& key) {
    auto& e = sections_.at(sec).at(key);
    e.used = true;
    return e;
  }

  double number(const std::string& sec, const std::string& key) {
    return parse_double(get(sec, key), key, origin_);
  }

  std::vector<double> numbers(const std::string& sec, const std::string& key) {
    return parse_doubles(get(sec, key), key, origin_);
  }

  std::string text(const std::string& sec, const std::string& key) {
    return get(sec, key).value;
  }

  void require(const std::string& sec, const std::string& key) {
    if (!has(sec, key)) {
      throw ParseError(origin_ + ": missing required key '" + key + "' in [" + sec + "]");
    }
  }

  void check_known(const std::map<std::string, std::vector<std::string>>& known) {
    for (const auto& [sec, entries] : sections_) {
      auto k = known.find(sec);
      if (k == known.end()) {
        throw ParseError(origin_ + ": unknown section [" + sec + "]");
      }
      for (const auto& [key, entry] : entries) {
        bool match = std::find(k->second.begin(), k->second.end(), key) != k->second.end();
        // table keys carry a processor suffix
        if (!match && sec == "initial" && key.rfind("flux_table_", 0) == 0) match = true;
        if (!match) {
          std::string s = suggest(key, k->second);
          std::string msg = origin_ + ":" + std::to_string(entry.line) + ": unknown key '" +
                            key + "' in [" + sec + "]";
          if (!s.empty()) msg += "; did you mean '" + s + "'?";
          throw ParseError(msg);
        }
      }
    }
  }

  const std::string& origin() const { return origin_; }
  std::map<std::string, Section>& sections() { return sections_; }

 private:
  std::string origin_;
  std::map<std::string, Section> sections_;
};

std::vector<double> broadcast(std::vector<double> v, int m, const std::string& key,
                              const std::string& origin) {
  if (static_cast<int>(v.size()) == 1) return std::vector<double>(m, v[0]);
  if (static_cast<int>(v.size()) != m) {
    throw ParseError(origin + ": key '" + key + "' expects 1 or m=" + std::to_string(m) +
                     " values, got " + std::to_string(v.size()));
  }
  return v;
}

}  // namespace

Scenario parse_config_text(const std::string& text, const std::string& origin) {
  Parsed p(text, origin);
  p.check_known({
      {"network", {"m", "v", "velocity", "mu", "capacity", "l"}},
      {"grid", {"h", "tau", "cfl", "T"}},
      {"initial", {"flux", "queues"}},
      {"lyapunov", {"p", "eta", "c", "eta_tilde", "boundary_coords"}},
      {"feedback", {"kind", "kappa", "epsilon", "inflow", "inflow_table"}},
      {"output", {"stride"}},
  });

  for (const char* key : {"m", "l"}) p.require("network", key);
  for (const char* key : {"h", "T"}) p.require("grid", key);

  auto aliased = [&](const char* primary, const char* alias) {
    const bool hp = p.has("network", primary);
    const bool ha = p.has("network", alias);
    if (hp && ha) {
      throw ParseError(origin + ": give either '" + primary + "' or '" + alias +
                       "', not both");
    }
    if (!hp && !ha) {
      throw ParseError(origin + ": missing required key '" + std::string(primary) +
                       "' in [network]");
    }
    return p.numbers("network", hp ? primary : alias);
  };

  const double m_raw = p.number("network", "m");
  const int m = static_cast<int>(std::lround(m_raw));
  if (m < 1 || m != m_raw) throw ParseError(origin + ": m must be a positive integer");

  NetworkSpec net;
  net.m = m;
  net.velocity = broadcast(aliased("v", "velocity"), m, "v", origin);
  net.capacity = broadcast(aliased("mu", "capacity"), m, "mu", origin);
  net.length = p.number("network", "l");

  const double h = p.number("grid", "h");
  const double T = p.number("grid", "T");
  double tau;
  if (p.has("grid", "tau")) {
    if (p.has("grid", "cfl")) throw ParseError(origin + ": give either tau or cfl, not both");
    tau = p.number("grid", "tau");
  } else if (p.has("grid", "cfl")) {
    tau = p.number("grid", "cfl") * h / net.max_velocity();
  } else {
    throw ParseError(origin + ": [grid] needs tau or cfl");
  }

  BoundaryCoords coords = BoundaryCoords::Interface;
  if (p.has("lyapunov", "boundary_coords")) {
    const std::string c = p.text("lyapunov", "boundary_coords");
    if (c == "interface") {
      coords = BoundaryCoords::Interface;
    } else if (c == "cell-center") {
      coords = BoundaryCoords::CellCenter;
    } else {
      throw ParseError(origin + ": boundary_coords must be 'interface' or 'cell-center'");
    }
  }

  GridSpec grid = GridSpec::from_resolution(net.length, h, tau, T);
  auto issues = validate_network(net, grid);
  if (!issues.empty()) {
    std::ostringstream os;
    os << origin << ": invalid configuration:";
    for (const auto& i : issues) os << "\n  - " << i.detail;
    throw ValidationError(os.str());
  }

  Scenario sc;
  sc.name = origin;
  sc.config = Config::validated(net, grid, coords);

  p.require("initial", "flux");
  p.require("initial", "queues");
  sc.initial_flux = broadcast(p.numbers("initial", "flux"), m, "flux", origin);
  sc.initial_queues = broadcast(p.numbers("initial", "queues"), m, "queues", origin);
  for (int e = 1; e <= m; ++e) {
    const std::string key = "flux_table_" + std::to_string(e);
    if (p.has("initial", key)) {
      if (sc.initial_flux_table.empty()) sc.initial_flux_table.assign(m, {});
      sc.initial_flux_table[e - 1] = p.numbers("initial", key);
    }
  }
  if (!sc.initial_flux_table.empty()) {
    for (int e = 0; e < m; ++e) {
      if (sc.initial_flux_table[e].empty()) {
        sc.initial_flux_table[e].assign(grid.cells, sc.initial_flux[e]);
      }
    }
  }
  auto weights = [&](const char* key, double fallback) {
    return p.has("lyapunov", key)
               ? broadcast(p.numbers("lyapunov", key), m, key, origin)
               : std::vector<double>(m, fallback);
  };
  sc.weights.p = weights("p", 1.0);
  sc.weights.c = weights("c", 1.0);
  p.require("lyapunov", "eta");
  p.require("lyapunov", "eta_tilde");
  sc.weights.eta = broadcast(p.numbers("lyapunov", "eta"), m, "eta", origin);
  sc.weights.eta_tilde = broadcast(p.numbers("lyapunov", "eta_tilde"), m, "eta_tilde", origin);
  sc.weights.validate(m);

  p.require("feedback", "kind");
  const std::string kind = p.text("feedback", "kind");
  if (kind == "open-loop") {
    if (p.has("feedback", "inflow_table")) {
      auto table = p.numbers("feedback", "inflow_table");
      const double tau_ = sc.config.grid.tau;
      OpenLoopLaw law;
      law.inflow = [table, tau_](double t) {
        const std::size_t k = static_cast<std::size_t>(std::lround(t / tau_));
        return table[std::min(k, table.size() - 1)];
      };
      sc.law = law;
    } else {
      p.require("feedback", "inflow");
      const double c = p.number("feedback", "inflow");
      OpenLoopLaw law;
      law.inflow = [c](double) { return c; };
      sc.law = law;
    }
  } else if (kind == "linear" || kind == "mixed") {
    p.require("feedback", "kappa");
    const double kappa = p.number("feedback", "kappa");
    if (!(kappa > 0.0)) throw ParseError(origin + ": kappa must be positive");
    if (kind == "linear") {
      sc.law = LinearLaw{kappa};
    } else {
      sc.law = MixedLaw{kappa};
    }
  } else {
    throw ParseError(origin + ": feedback kind must be open-loop, linear or mixed");
  }
  if (p.has("feedback", "epsilon")) {
    sc.coupling.epsilon = p.number("feedback", "epsilon");
    if (!(sc.coupling.epsilon > 0.0)) throw ParseError(origin + ": epsilon must be positive");
  }

  if (p.has("output", "stride")) {
    const double s = p.number("output", "stride");
    sc.output_stride = static_cast<int>(std::lround(s));
    if (sc.output_stride < 1 || sc.output_stride != s) {
      throw ParseError(origin + ": stride must be a positive integer");
    }
  }
  return sc;
}

Scenario parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str(), path);
}

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt(v[i]);
  }
  return out;
}
}  // namespace

std::string export_scenario(const Scenario& sc) {
  std::ostringstream os;
  const auto& net = sc.config.net;
  const auto& grid = sc.config.grid;
  os << "[network]\n";
  os << "m = " << net.m << "\n";
  os << "v = " << fmt(net.velocity) << "\n";
  os << "mu = " << fmt(net.capacity) << "\n";
  os << "l = " << fmt(net.length) << "\n\n";
  os << "[grid]\n";
  os << "h = " << fmt(grid.h) << "\n";
  os << "tau = " << fmt(grid.tau) << "\n";
  os << "T = " << fmt(grid.horizon) << "\n\n";
  os << "[initial]\n";
  os << "flux = " << fmt(sc.initial_flux) << "\n";
  for (std::size_t e = 0; e < sc.initial_flux_table.size(); ++e) {
    os << "flux_table_" << e + 1 << " = " << fmt(sc.initial_flux_table[e]) << "\n";
  }
  os << "queues = " << fmt(sc.initial_queues) << "\n\n";
  os << "[lyapunov]\n";
  os << "p = " << fmt(sc.weights.p) << "\n";
  os << "eta = " << fmt(sc.weights.eta) << "\n";
  os << "c = " << fmt(sc.weights.c) << "\n";
  os << "eta_tilde = " << fmt(sc.weights.eta_tilde) << "\n";
  os << "boundary_coords = "
     << (sc.config.boundary_coords == BoundaryCoords::Interface ? "interface" : "cell-center")
     << "\n\n";
  os << "[feedback]\n";
  if (const auto* open = std::get_if<OpenLoopLaw>(&sc.law)) {
    os << "kind = open-loop\n";
    os << "inflow_table =";
    for (int k = 0; k < grid.steps; ++k) os << ' ' << fmt(open->inflow(k * grid.tau));
    os << "\n";
  } else if (const auto* lin = std::get_if<LinearLaw>(&sc.law)) {
    os << "kind = linear\n";
    os << "kappa = " << fmt(lin->kappa) << "\n";
  } else {
    os << "kind = mixed\n";
    os << "kappa = " << fmt(std::get<MixedLaw>(sc.law).kappa) << "\n";
  }
  os << "epsilon = " << fmt(sc.coupling.epsilon) << "\n\n";
  os << "[output]\n";
  os << "stride = " << sc.output_stride << "\n";
  return os.str();
}

}  // namespace prodnet
