#include "adrc/scenario_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "adrc/builtin_scenarios.hpp"
#include "adrc/linalg.hpp"
#include "adrc/protocol.hpp"

namespace adrc::harness {

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += (out.empty() ? "" : "\n") + l;
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_list(const Vector& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : ", ") + format_number(x);
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry, std::less<>> keys;
  std::vector<std::pair<std::string, int>> edge_lines;
};

class Reader {
 public:
  Reader(std::string_view text, std::string_view origin) : origin_(origin) { split(text); }

  void fail(int line, const std::string& message) {
    problems_.push_back(origin_ + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message);
  }
  bool failed() const { return !problems_.empty(); }
  [[noreturn]] void raise() { throw ScenarioError(problems_); }
  void check() {
    if (failed()) raise();
  }

  Section* section(std::string_view name, bool required) {
    const auto it = sections_.find(name);
    if (it == sections_.end()) {
      if (required) fail(0, "missing section [" + std::string(name) + "]");
      return nullptr;
    }
    used_sections_.insert(std::string(name));
    return &it->second;
  }

  Entry* entry(Section* s, std::string_view section_name, std::string_view key, bool required) {
    if (s == nullptr) return nullptr;
    const auto it = s->keys.find(key);
    if (it == s->keys.end()) {
      if (required) fail(s->line, "[" + std::string(section_name) + "] missing key '" + std::string(key) + "'");
      return nullptr;
    }
    it->second.used = true;
    return &it->second;
  }

  std::optional<double> number(Entry* e, std::string_view key) {
    if (e == nullptr) return std::nullopt;
    const std::string_view v = trim(e->value);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
      fail(e->line, "'" + std::string(key) + "' is not a number: " + e->value);
      return std::nullopt;
    }
    return out;
  }

  std::optional<int> integer(Entry* e, std::string_view key) {
    if (e == nullptr) return std::nullopt;
    const std::string_view v = trim(e->value);
    int out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
      fail(e->line, "'" + std::string(key) + "' is not an integer: " + e->value);
      return std::nullopt;
    }
    return out;
  }

  std::optional<Vector> list(Entry* e, std::string_view key) {
    if (e == nullptr) return std::nullopt;
    Vector out;
    std::string_view rest = e->value;
    for (;;) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
        fail(e->line, "'" + std::string(key) + "' must be a comma-separated list of numbers");
        return std::nullopt;
      }
      out.push_back(v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

  std::optional<bool> boolean(Entry* e, std::string_view key) {
    if (e == nullptr) return std::nullopt;
    const std::string_view v = trim(e->value);
    if (v == "true") return true;
    if (v == "false") return false;
    fail(e->line, "'" + std::string(key) + "' must be true or false");
    return std::nullopt;
  }

  std::optional<std::string> quoted(Entry* e, std::string_view key) {
    if (e == nullptr) return std::nullopt;
    const std::string_view v = trim(e->value);
    if (v.size() < 2 || v.front() != '"' || v.back() != '"') {
      fail(e->line, "'" + std::string(key) + "' must be a quoted string");
      return std::nullopt;
    }
    return std::string(v.substr(1, v.size() - 2));
  }

  void report_unused() {
    for (const auto& [name, sec] : sections_) {
      if (!used_sections_.contains(name)) {
        fail(sec.line, "unknown section [" + name + "]");
        continue;
      }
      for (const auto& [key, entry] : sec.keys) {
        if (!entry.used) fail(entry.line, "unknown key '" + key + "' in [" + name + "]");
      }
    }
  }

  const std::string& origin() const { return origin_; }

 private:
  void split(std::string_view text) {
    Section* current = nullptr;
    std::string current_name;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;

      // Strip a trailing comment, ignoring '#' inside quotes.
      bool in_quotes = false;
      for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == '"') in_quotes = !in_quotes;
        if (raw[i] == '#' && !in_quotes) {
          raw = raw.substr(0, i);
          break;
        }
      }
      const std::string_view line = trim(raw);
      if (line.empty()) continue;

      if (line.front() == '[') {
        if (line.back() != ']') {
          fail(line_no, "malformed section header");
          current = nullptr;
          continue;
        }
        current_name = std::string(trim(line.substr(1, line.size() - 2)));
        if (sections_.contains(current_name)) {
          fail(line_no, "duplicate section [" + current_name + "]");
          current = nullptr;
          continue;
        }
        current = &sections_[current_name];
        current->line = line_no;
        continue;
      }
      if (current == nullptr) {
        fail(line_no, "content outside of a section");
        continue;
      }
      if (current_name == "topology") {
        current->edge_lines.emplace_back(std::string(line), line_no);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        fail(line_no, "expected 'key = value'");
        continue;
      }
      const std::string key(trim(line.substr(0, eq)));
      if (current->keys.contains(key)) {
        fail(line_no, "duplicate key '" + key + "'");
        continue;
      }
      current->keys[key] = Entry{std::string(trim(line.substr(eq + 1))), line_no, false};
    }
  }

  std::string origin_;
  std::map<std::string, Section, std::less<>> sections_;
  std::set<std::string> used_sections_;
  std::vector<std::string> problems_;
};

std::optional<topology::Edge> parse_edge(std::string_view line) {
  const auto arrow = line.find("->");
  if (arrow == std::string_view::npos) return std::nullopt;
  auto to_int = [](std::string_view s) -> std::optional<int> {
    s = trim(s);
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  };
  const auto from = to_int(line.substr(0, arrow));
  const auto to = to_int(line.substr(arrow + 2));
  if (!from || !to) return std::nullopt;
  return topology::Edge{*from, *to};
}

// Coefficients of (lambda + 1)^{n+1} after the leading one.
Vector binomial_gains(int n) {
  Vector k;
  double c = 1.0;
  for (int j = 1; j <= n + 1; ++j) {
    c = c * (n + 2 - j) / j;
    k.push_back(c);
  }
  return k;
}

template <class F>
auto parse_or_report(Reader& reader, int line, const std::string& what, F&& f) -> std::optional<decltype(f())> {
  try {
    return f();
  } catch (const std::exception& e) {
    reader.fail(line, what + ": " + e.what());
    return std::nullopt;
  }
}

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> problems)
    : ValidationError(join_lines(problems)), problems_(std::move(problems)) {}

Scenario parse_scenario(std::string_view text, std::string_view origin) {
  Reader reader(text, origin);
  Scenario s;

  Section* meta = reader.section("meta", true);
  Section* topo = reader.section("topology", true);
  Section* leader = reader.section("leader", true);
  if (meta != nullptr) {
    if (auto* e = reader.entry(meta, "meta", "name", false)) s.name = reader.quoted(e, "name").value_or("");
    const auto n = reader.integer(reader.entry(meta, "meta", "n", true), "n");
    const auto m = reader.integer(reader.entry(meta, "meta", "m", true), "m");
    if (n && (*n < 1 || *n > kMaxOrder)) reader.fail(meta->line, "n must be in 1.." + std::to_string(kMaxOrder));
    if (m && (*m < 1 || *m > 16)) reader.fail(meta->line, "m must be in 1..16");
    if (n) s.n = *n;
    if (m) s.m = *m;
  }
  // Dimensions drive every later section.
  reader.check();

  const auto n = static_cast<std::size_t>(s.n);
  const auto m = static_cast<std::size_t>(s.m);

  std::vector<topology::Edge> edges;
  for (const auto& [line, line_no] : topo->edge_lines) {
    if (auto edge = parse_edge(line)) {
      edges.push_back(*edge);
    } else {
      reader.fail(line_no, "expected an edge 'j -> i', got '" + line + "'");
    }
  }
  bool graph_ok = false;
  if (auto g = parse_or_report(reader, topo->line, "[topology]", [&] { return topology::Digraph(s.m, edges); })) {
    s.graph = *g;
    graph_ok = true;
  }

  if (leader != nullptr) {
    Entry* u0 = reader.entry(leader, "leader", "u0", true);
    const auto u0_src = reader.quoted(u0, "u0");
    const auto init = reader.list(reader.entry(leader, "leader", "init", true), "init");
    if (u0_src) {
      if (auto e = parse_or_report(reader, u0->line, "u0",
                                   [&] { return expr::parse_expr(*u0_src, plant::leader_variables(s.n)); })) {
        s.leader.u0 = *e;
      }
    }
    if (init) {
      if (init->size() != n) reader.fail(leader->line, "leader init must have " + std::to_string(n) + " entries");
      s.leader.x0_init = *init;
    }
  }

  for (std::size_t i = 1; i <= m; ++i) {
    const std::string name = "agent." + std::to_string(i);
    Section* sec = reader.section(name, true);
    if (sec == nullptr) continue;
    plant::FollowerSpec spec;
    const auto vars = plant::follower_variables(s.n);
    auto signal = [&](Entry* e, const std::string& key, int order) -> expr::Signal {
      if (e == nullptr) return expr::Signal(expr::Expr(expr::make::constant(0.0), {"t"}), order);
      const auto src = reader.quoted(e, key);
      if (!src) return {};
      auto sig = parse_or_report(reader, e->line, name + " " + key, [&] { return expr::Signal::parse(*src, order); });
      return sig.value_or(expr::Signal{});
    };
    Entry* shared_d = reader.entry(sec, name, "d", false);
    for (std::size_t j = 1; j <= n; ++j) {
      const std::string hkey = "h" + std::to_string(j);
      const std::string dkey = "d" + std::to_string(j);
      Entry* h = reader.entry(sec, name, hkey, true);
      if (const auto src = reader.quoted(h, hkey)) {
        auto e = parse_or_report(reader, h->line, name + " " + hkey, [&] { return expr::parse_expr(*src, vars); });
        spec.h.push_back(e.value_or(expr::Expr(expr::make::constant(0.0), vars)));
        if (e) {
          for (std::size_t k = j; k < n; ++k) {
            if (e->uses(static_cast<int>(k))) {
              reader.fail(h->line, name + " " + hkey + " depends on x" + std::to_string(k + 1) +
                                       " (h_j may only use x1..xj and d)");
            }
          }
        }
      } else {
        spec.h.emplace_back(expr::make::constant(0.0), vars);
      }
      Entry* d = reader.entry(sec, name, dkey, false);
      if (d != nullptr && shared_d != nullptr) reader.fail(d->line, name + ": give either 'd' or '" + dkey + "', not both");
      spec.d.push_back(signal(d != nullptr ? d : shared_d, dkey, s.n));
    }
    spec.w = signal(reader.entry(sec, name, "w", false), "w", s.n + 1);
    if (auto init = reader.list(reader.entry(sec, name, "init", true), "init")) {
      if (init->size() != n) reader.fail(sec->line, name + " init must have " + std::to_string(n) + " entries");
      spec.x_init = *init;
    }
    s.followers.push_back(std::move(spec));
  }

  s.eso.k = binomial_gains(s.n);
  if (Section* obs = reader.section("observer", false)) {
    if (auto k = reader.list(reader.entry(obs, "observer", "k", false), "k")) s.eso.k = *k;
    if (auto r = reader.number(reader.entry(obs, "observer", "r", false), "r")) s.eso.r = *r;
  }

  s.protocol.n_levels.assign(m, 5.0);
  bool design_k = true;
  if (Section* pro = reader.section("protocol", false)) {
    if (Entry* k = reader.entry(pro, "protocol", "K", false); k != nullptr && trim(k->value) != "design") {
      if (auto v = reader.list(k, "K")) {
        s.protocol.k = *v;
        design_k = false;
      }
    }
    if (auto level = reader.number(reader.entry(pro, "protocol", "M", false), "M")) s.protocol.m_level = *level;
    if (Entry* e = reader.entry(pro, "protocol", "N", false)) {
      if (auto v = reader.list(e, "N")) {
        if (v->size() == 1) {
          s.protocol.n_levels.assign(m, v->front());
        } else if (v->size() == m) {
          s.protocol.n_levels = *v;
        } else {
          reader.fail(e->line, "N must be one value or m values");
        }
      }
    }
    if (auto ff = reader.boolean(reader.entry(pro, "protocol", "leader_feedforward", false), "leader_feedforward")) {
      s.protocol.leader_feedforward = *ff;
    }
  }

  if (Section* sim = reader.section("sim", false)) {
    if (auto v = reader.number(reader.entry(sim, "sim", "dt", false), "dt")) s.sim.dt = *v;
    if (auto v = reader.number(reader.entry(sim, "sim", "t_final", false), "t_final")) s.sim.t_final = *v;
    if (auto v = reader.integer(reader.entry(sim, "sim", "record_stride", false), "record_stride")) {
      s.sim.record_stride = *v;
    }
  }

  reader.report_unused();
  reader.check();

  if (design_k && graph_ok && topology::check_spanning_tree(s.graph)) {
    parse_or_report(reader, 0, "gain design", [&] {
      s.protocol.k = protocol::design_gains(s.graph, s.n).riccati.k;
      return true;
    });
    s.k_from_design = true;
  }
  for (const auto& problem : validate(s)) reader.fail(0, problem);
  reader.check();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  const std::string text = path.string();
  if (text.starts_with("builtin:")) {
    const auto builtin = builtin_scenario(std::string_view(text).substr(8));
    if (!builtin) throw ScenarioError({text + ": no such built-in scenario"});
    return parse_scenario(*builtin, text);
  }
  std::ifstream in(path);
  if (!in) throw ScenarioError({path.string() + ": cannot open file"});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.string());
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "[meta]\n";
  out << "name = \"" << s.name << "\"\n";
  out << "n = " << s.n << "\n";
  out << "m = " << s.m << "\n\n";

  out << "[topology]\n";
  for (const auto& e : s.graph.edges()) out << e.from << " -> " << e.to << "\n";
  out << "\n[leader]\n";
  out << "u0 = \"" << expr::to_string(s.leader.u0) << "\"\n";
  out << "init = " << format_list(s.leader.x0_init) << "\n";

  for (std::size_t i = 0; i < s.followers.size(); ++i) {
    const auto& f = s.followers[i];
    out << "\n[agent." << i + 1 << "]\n";
    for (std::size_t j = 0; j < f.h.size(); ++j) out << "h" << j + 1 << " = \"" << expr::to_string(f.h[j]) << "\"\n";
    for (std::size_t j = 0; j < f.d.size(); ++j) {
      out << "d" << j + 1 << " = \"" << expr::to_string(f.d[j].base()) << "\"\n";
    }
    out << "w = \"" << expr::to_string(f.w.base()) << "\"\n";
    out << "init = " << format_list(f.x_init) << "\n";
  }

  out << "\n[observer]\n";
  out << "k = " << format_list(s.eso.k) << "\n";
  out << "r = " << format_number(s.eso.r) << "\n";

  out << "\n[protocol]\n";
  out << "K = " << (s.k_from_design ? std::string("design") : format_list(s.protocol.k)) << "\n";
  out << "M = " << format_number(s.protocol.m_level) << "\n";
  out << "N = " << format_list(s.protocol.n_levels) << "\n";
  out << "leader_feedforward = " << (s.protocol.leader_feedforward ? "true" : "false") << "\n";

  out << "\n[sim]\n";
  out << "dt = " << format_number(s.sim.dt) << "\n";
  out << "t_final = " << format_number(s.sim.t_final) << "\n";
  out << "record_stride = " << s.sim.record_stride << "\n";
  return out.str();
}

bool equivalent(const Scenario& a, const Scenario& b) {
  if (a.name != b.name || a.n != b.n || a.m != b.m || !(a.graph == b.graph)) return false;
  if (!(a.leader.u0 == b.leader.u0) || a.leader.x0_init != b.leader.x0_init) return false;
  if (a.followers.size() != b.followers.size()) return false;
  for (std::size_t i = 0; i < a.followers.size(); ++i) {
    const auto& fa = a.followers[i];
    const auto& fb = b.followers[i];
    if (fa.h.size() != fb.h.size() || fa.d.size() != fb.d.size() || fa.x_init != fb.x_init) return false;
    for (std::size_t j = 0; j < fa.h.size(); ++j)
      if (!(fa.h[j] == fb.h[j])) return false;
    for (std::size_t j = 0; j < fa.d.size(); ++j)
      if (!(fa.d[j].base() == fb.d[j].base())) return false;
    if (!(fa.w.base() == fb.w.base())) return false;
  }
  return a.eso == b.eso && a.protocol == b.protocol && a.k_from_design == b.k_from_design && a.sim == b.sim;
}

void override_r(Scenario& s, double r) {
  s.eso.r = r;
  s.overrides.push_back("r=" + format_number(r));
}

}  // namespace adrc::harness
