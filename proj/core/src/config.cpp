#include "lubstep/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "lubstep/csv.hpp"
#include "lubstep/errors.hpp"

namespace lubstep {
namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

using Section = std::map<std::string, Entry, std::less<>>;

const std::map<std::string, std::vector<std::string_view>, std::less<>>& known_keys() {
  static const std::map<std::string, std::vector<std::string_view>, std::less<>> keys{
      {"problem", {"drag", "epsilon", "p", "forcing.breakpoints", "forcing.values", "q0", "v0",
                   "t_end"}},
      {"scheme", {"kind", "dt", "q_s", "C", "tol", "dt_min", "dt_init"}},
      {"sweep", {"param", "values"}},
      {"output", {"dir", "name", "certificates"}},
      {"reference", {"dt", "richardson_tol", "max_refinements"}},
  };
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string describe(std::string_view message, std::size_t line) {
  std::ostringstream out;
  if (line > 0) out << "line " << line << ": ";
  out << message;
  return out.str();
}

std::string join(const std::vector<ConfigIssue>& issues) {
  std::string out;
  for (const ConfigIssue& i : issues) {
    if (!out.empty()) out += '\n';
    out += describe(i.message, i.line);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::vector<ConfigIssue>& issues) : issues_(issues) {}

  void issue(std::size_t line, std::string message) {
    issues_.push_back({line, std::move(message)});
  }

  std::optional<double> number(const Section& s, std::string_view key) {
    const auto it = s.find(key);
    if (it == s.end()) return std::nullopt;
    try {
      const double x = csv::parse_double(trim(it->second.value));
      if (!std::isfinite(x)) throw std::invalid_argument("non-finite");
      return x;
    } catch (const std::invalid_argument&) {
      issue(it->second.line, std::string(key) + ": expected a number, got '" + it->second.value + "'");
      return std::nullopt;
    }
  }

  std::optional<std::vector<double>> list(const Section& s, std::string_view key) {
    const auto it = s.find(key);
    if (it == s.end()) return std::nullopt;
    std::vector<double> out;
    std::string_view rest = it->second.value;
    for (;;) {
      const auto comma = rest.find(',');
      const std::string_view token = trim(rest.substr(0, comma));
      try {
        const double x = csv::parse_double(token);
        if (!std::isfinite(x)) throw std::invalid_argument("non-finite");
        out.push_back(x);
      } catch (const std::invalid_argument&) {
        issue(it->second.line,
              std::string(key) + ": expected a comma-separated list of numbers, got '" +
                  it->second.value + "'");
        return std::nullopt;
      }
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return out;
  }

  std::optional<std::string> text(const Section& s, std::string_view key) {
    const auto it = s.find(key);
    if (it == s.end()) return std::nullopt;
    return it->second.value;
  }

 private:
  std::vector<ConfigIssue>& issues_;
};

std::size_t line_of(const Section& s, std::string_view key, std::size_t fallback) {
  const auto it = s.find(key);
  return it == s.end() ? fallback : it->second.line;
}

std::optional<Scheme> scheme_from(std::string_view name) {
  if (name == "euler") return Scheme::Euler;
  if (name == "implicit") return Scheme::Implicit;
  if (name == "threshold") return Scheme::Threshold;
  if (name == "adaptive") return Scheme::Adaptive;
  return std::nullopt;
}

std::optional<DragKind> drag_from(std::string_view name) {
  if (name == "disk") return DragKind::Disk;
  if (name == "sphere") return DragKind::Sphere;
  if (name == "power") return DragKind::Power;
  if (name == "zero") return DragKind::Zero;
  return std::nullopt;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

OdeProblem ProblemSpec::build() const {
  OdeProblem problem;
  switch (drag) {
    case DragKind::Disk: problem.drag = DragLaw::disk(epsilon); break;
    case DragKind::Sphere: problem.drag = DragLaw::sphere(epsilon); break;
    case DragKind::Power: problem.drag = DragLaw::power_law(epsilon, p); break;
    case DragKind::Zero: problem.drag = DragLaw::zero(); break;
  }
  problem.forcing = breakpoints.empty() ? Forcing::constant(values.at(0))
                                        : Forcing::piecewise_constant(breakpoints, values);
  problem.q0 = q0;
  problem.v0 = v0;
  problem.t_end = t_end;
  problem.validate();
  return problem;
}

const std::vector<std::string_view>& sweepable_parameters() {
  static const std::vector<std::string_view> names{"dt",      "C",       "q_s",     "tol",
                                                   "dt_min",  "dt_init", "epsilon", "t_end"};
  return names;
}

ExperimentConfig with_parameter(const ExperimentConfig& config, std::string_view param,
                                double value) {
  ExperimentConfig out = config;
  SchemeConfig& s = out.scheme;
  if (param == "dt") {
    s.dt = value;
  } else if (param == "C") {
    s.C = value;
    s.q_s.reset();
  } else if (param == "q_s") {
    s.q_s = value;
    s.C.reset();
  } else if (param == "tol") {
    s.tol = value;
  } else if (param == "dt_min") {
    s.dt_min = value;
  } else if (param == "dt_init") {
    s.dt_init = value;
  } else if (param == "epsilon") {
    out.problem.epsilon = value;
  } else if (param == "t_end") {
    out.problem.t_end = value;
  } else {
    throw DomainError("unknown sweep parameter '" + std::string(param) + "'");
  }
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  std::vector<ConfigIssue> issues;
  std::map<std::string, Section, std::less<>> sections;
  std::map<std::string, std::size_t, std::less<>> section_lines;
  Section* current = nullptr;
  std::string current_name;

  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      current = nullptr;
      if (line.back() != ']') {
        issues.push_back({line_no, "malformed section header"});
        continue;
      }
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().contains(name)) {
        issues.push_back({line_no, "unknown section [" + name + "]"});
        continue;
      }
      if (sections.contains(name)) {
        issues.push_back({line_no, "duplicate section [" + name + "]"});
        continue;
      }
      current = &sections[name];
      current_name = name;
      section_lines[name] = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back({line_no, "expected 'key = value'"});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (current == nullptr) {
      issues.push_back({line_no, "key '" + key + "' outside of a known section"});
      continue;
    }
    const std::string& section = current_name;
    const auto& allowed = known_keys().at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      issues.push_back({line_no, "unknown key '" + key + "' in [" + section + "]"});
      continue;
    }
    if (current->contains(key)) {
      issues.push_back({line_no, "duplicate key '" + key + "'"});
      continue;
    }
    if (value.empty()) {
      issues.push_back({line_no, "empty value for '" + key + "'"});
      continue;
    }
    (*current)[key] = Entry{value, line_no};
  }

  ExperimentConfig cfg;
  Reader r(issues);
  static const Section kEmpty;
  auto section = [&](std::string_view name) -> const Section& {
    const auto it = sections.find(name);
    return it == sections.end() ? kEmpty : it->second;
  };

  // [problem]
  const Section& prob = section("problem");
  const std::size_t prob_line = section_lines.contains("problem") ? section_lines["problem"] : 0;
  if (!sections.contains("problem")) {
    issues.push_back({0, "missing [problem] section"});
  } else {
    ProblemSpec& p = cfg.problem;
    if (auto d = r.text(prob, "drag")) {
      if (auto kind = drag_from(*d)) {
        p.drag = *kind;
      } else {
        r.issue(line_of(prob, "drag", prob_line),
                "unknown drag '" + *d + "' (expected disk, sphere, power or zero)");
      }
    }
    const auto eps = r.number(prob, "epsilon");
    if (p.drag != DragKind::Zero) {
      if (!eps) {
        if (!prob.contains("epsilon")) r.issue(prob_line, "epsilon is required");
      } else if (!(*eps > 0.0)) {
        r.issue(line_of(prob, "epsilon", prob_line), "epsilon must be positive");
      } else {
        p.epsilon = *eps;
      }
    }
    if (auto pv = r.number(prob, "p")) {
      if (p.drag != DragKind::Power) {
        r.issue(line_of(prob, "p", prob_line), "p is only used with drag = power");
      } else if (!(*pv > 0.0)) {
        r.issue(line_of(prob, "p", prob_line), "p must be positive");
      } else {
        p.p = *pv;
      }
    } else if (p.drag == DragKind::Power && !prob.contains("p")) {
      r.issue(prob_line, "p is required for drag = power");
    }
    if (auto bp = r.list(prob, "forcing.breakpoints")) p.breakpoints = *bp;
    if (auto vals = r.list(prob, "forcing.values")) {
      p.values = *vals;
      if (p.values.size() != p.breakpoints.size() + 1) {
        r.issue(line_of(prob, "forcing.values", prob_line),
                "forcing.values needs one more entry than forcing.breakpoints");
      }
    } else if (!prob.contains("forcing.values")) {
      r.issue(prob_line, "forcing.values is required");
    }
    if (!std::is_sorted(p.breakpoints.begin(), p.breakpoints.end()) ||
        std::adjacent_find(p.breakpoints.begin(), p.breakpoints.end()) != p.breakpoints.end()) {
      r.issue(line_of(prob, "forcing.breakpoints", prob_line),
              "forcing.breakpoints must be strictly increasing");
    }
    if (auto q0 = r.number(prob, "q0")) {
      if (!(*q0 > 0.0)) r.issue(line_of(prob, "q0", prob_line), "q0 must be positive");
      p.q0 = *q0;
    }
    if (auto v0 = r.number(prob, "v0")) p.v0 = *v0;
    if (auto t_end = r.number(prob, "t_end")) {
      if (!(*t_end > 0.0)) r.issue(line_of(prob, "t_end", prob_line), "t_end must be positive");
      p.t_end = *t_end;
    }
  }

  // [scheme]
  const Section& sch = section("scheme");
  const std::size_t sch_line = section_lines.contains("scheme") ? section_lines["scheme"] : 0;
  bool scheme_ok = false;
  if (!sections.contains("scheme")) {
    issues.push_back({0, "missing [scheme] section"});
  } else {
    SchemeConfig& s = cfg.scheme;
    if (auto kind = r.text(sch, "kind")) {
      if (auto sc = scheme_from(*kind)) {
        s.scheme = *sc;
        scheme_ok = true;
      } else {
        r.issue(line_of(sch, "kind", sch_line),
                "unknown scheme '" + *kind + "' (expected euler, implicit, threshold or adaptive)");
      }
    } else {
      r.issue(sch_line, "kind is required");
    }
    if (auto v = r.number(sch, "dt")) s.dt = *v;
    if (auto v = r.number(sch, "q_s")) s.q_s = *v;
    if (auto v = r.number(sch, "C")) s.C = *v;
    if (auto v = r.number(sch, "tol")) s.tol = *v;
    if (auto v = r.number(sch, "dt_min")) s.dt_min = *v;
    if (auto v = r.number(sch, "dt_init")) s.dt_init = *v;
  }

  // [sweep]
  if (sections.contains("sweep")) {
    const Section& sw = section("sweep");
    const std::size_t sw_line = section_lines["sweep"];
    SweepSpec spec;
    if (auto param = r.text(sw, "param")) {
      const auto& names = sweepable_parameters();
      if (std::find(names.begin(), names.end(), *param) == names.end()) {
        r.issue(line_of(sw, "param", sw_line), "unknown sweep parameter '" + *param + "'");
      }
      spec.param = *param;
    } else {
      r.issue(sw_line, "param is required");
    }
    if (auto values = r.list(sw, "values")) {
      spec.values = *values;
    } else if (!sw.contains("values")) {
      r.issue(sw_line, "values is required");
    }
    cfg.sweep = spec;
  }

  // [output]
  const Section& out = section("output");
  if (auto dir = r.text(out, "dir")) cfg.output.dir = *dir;
  if (auto name = r.text(out, "name")) cfg.output.name = *name;
  if (auto c = r.text(out, "certificates")) {
    if (*c == "true" || *c == "yes" || *c == "1") {
      cfg.output.certificates = true;
    } else if (*c == "false" || *c == "no" || *c == "0") {
      cfg.output.certificates = false;
    } else {
      r.issue(line_of(out, "certificates", 0), "certificates: expected true or false");
    }
  }

  // [reference]
  const Section& ref = section("reference");
  if (auto v = r.number(ref, "dt")) {
    if (!(*v > 0.0)) r.issue(line_of(ref, "dt", 0), "reference dt must be positive");
    cfg.reference.dt = *v;
  }
  if (auto v = r.number(ref, "richardson_tol")) {
    if (!(*v > 0.0)) r.issue(line_of(ref, "richardson_tol", 0), "richardson_tol must be positive");
    cfg.reference.richardson_tol = *v;
  }
  if (auto v = r.number(ref, "max_refinements")) {
    if (!(*v >= 0.0) || *v != std::floor(*v)) {
      r.issue(line_of(ref, "max_refinements", 0), "max_refinements must be a non-negative integer");
    }
    cfg.reference.max_refinements = static_cast<int>(*v);
  }

  // Cross-field checks once the pieces parsed cleanly.
  if (issues.empty() && scheme_ok) {
    auto check = [&](const ExperimentConfig& c, std::size_t line, const std::string& prefix) {
      try {
        const OdeProblem problem = c.problem.build();
        c.scheme.validate(problem.drag);
        if (c.scheme.scheme == Scheme::Threshold) (void)c.scheme.threshold(problem.drag);
      } catch (const std::exception& e) {
        r.issue(line, prefix + e.what());
      }
    };
    if (cfg.sweep) {
      const std::size_t sw_line = line_of(section("sweep"), "values", section_lines["sweep"]);
      for (double v : cfg.sweep->values) {
        check(with_parameter(cfg, cfg.sweep->param, v), sw_line,
              cfg.sweep->param + " = " + csv::format_double(v) + ": ");
      }
    } else {
      check(cfg, line_of(sch, "kind", sch_line), "");
    }
  }

  if (!issues.empty()) {
    std::stable_sort(issues.begin(), issues.end(),
                     [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
    throw ConfigError(std::move(issues));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{0, "cannot read config file '" + path + "'"}});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace lubstep
