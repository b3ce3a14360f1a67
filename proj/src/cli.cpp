#include "phi4/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <fmt/core.h>

#include "json.hpp"
#include "phi4/errors.hpp"
#include "phi4/lcu.hpp"
#include "phi4/scattering.hpp"
#include "phi4/verify.hpp"

namespace phi4::cli {

namespace {

using json = nlohmann::json;

constexpr int kCsvSchema = 1;

std::string num(double v) { return fmt::format("{:.12g}", v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigParse, what + ": '" + s + "' is not a number");
  }
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + p.string());
  f << text;
  if (!f) throw Error(ErrorCode::IoError, "write failed for " + p.string());
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// Leading-order scalings per algorithm, as reported alongside the evaluated closed forms.
std::string anchors(CostAlgorithm a) {
  switch (a) {
    case CostAlgorithm::occ_trotter:
      return "T ~ lambda N^7 |Omega|^3 M^-5/2 eps^-3/2 log(lambda N |Omega|/(M eps)); qubits ~ N |Omega| + "
             "log(lambda N/(M eps))";
    case CostAlgorithm::amp_trotter:
      return "T ~ |Omega|^3/2 sqrt(Lambda^2 k^5 + Lambda M^2 k^4) log^4 k eps^-3/2 (up to logs); qubits ~ |Omega| log "
             "k + log(|Omega| Lambda k (Lambda k + M^2)/eps)";
    case CostAlgorithm::I_equal_weight:
      return "T ~ |Omega|^2 (k^2 Lambda + k M^2) log^2 k / eps; qubits ~ |Omega| log k + log^2 k + log(|Omega| (k^2 "
             "Lambda + k M^2)/eps)";
    case CostAlgorithm::IIIa_z_lcu:
      return "T ~ |Omega|^2 (k^2 Lambda + k M^2) log^4 k / eps; qubits ~ |Omega| log k + log(|Omega| (k^2 Lambda + k "
             "M^2)/eps)";
    case CostAlgorithm::IIIb_signature:
      return "T ~ |Omega|^2 (k^2 Lambda + k M^2) log^2 k / eps (conjectured); qubits ~ |Omega| log k + log(|Omega| "
             "(k^2 Lambda + k M^2)/eps)";
  }
  return "";
}

CostOptions cost_options(const RunConfig& cfg) {
  CostOptions o = cfg.settings.cost;
  o.conjecture_iiib = o.conjecture_iiib || cfg.conjecture_iiib;
  if (cfg.surface) o.surface = cfg.settings.surface;
  return o;
}

int cutoff_for(CostAlgorithm a, const Settings& s) { return a == CostAlgorithm::occ_trotter ? s.N : s.k; }

template <class T>
T take(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigParse, std::string("key '") + key + "': " + e.what());
  }
}

void only_keys(const json& obj, const std::string& section, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw Error(ErrorCode::ConfigParse, "section '" + section + "' must be an object");
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
      throw Error(ErrorCode::ConfigParse, "unknown key '" + k + "' in section '" + section + "'");
  }
}

}  // namespace

Command parse_command(const std::string& s) {
  if (s == "verify") return Command::verify;
  if (s == "cost-table") return Command::cost_table;
  if (s == "cost-sweep") return Command::cost_sweep;
  if (s == "scatter") return Command::scatter;
  if (s == "census") return Command::census;
  throw Error(ErrorCode::ConfigParse, "unknown command '" + s + "'");
}

Axis parse_axis(const std::string& s) {
  if (s == "k") return Axis::k;
  if (s == "N") return Axis::N;
  if (s == "omega") return Axis::omega;
  if (s == "eps") return Axis::eps;
  throw Error(ErrorCode::ConfigParse, "axis must be one of k, N, omega, eps");
}

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::k: return "k";
    case Axis::N: return "N";
    case Axis::omega: return "omega";
    case Axis::eps: return "eps";
  }
  return "?";
}

Range parse_range(const std::string& s) {
  auto parts = split(s, ':');
  if (parts.size() < 3 || parts.size() > 4) throw Error(ErrorCode::ConfigParse, "range must be lo:hi:steps[:log|lin]");
  Range r;
  std::string steps = parts[2], mode = parts.size() == 4 ? parts[3] : "";
  for (const char* suffix : {"log", "lin"}) {
    if (mode.empty() && steps.size() > 3 && steps.ends_with(suffix)) {
      mode = suffix;
      steps.resize(steps.size() - 3);
    }
  }
  if (!mode.empty() && mode != "log" && mode != "lin") throw Error(ErrorCode::ConfigParse, "range mode must be log or lin");
  r.lo = to_double(parts[0], "range lo");
  r.hi = to_double(parts[1], "range hi");
  const double n = to_double(steps, "range steps");
  if (n < 1 || n != std::floor(n)) throw Error(ErrorCode::ConfigParse, "range steps must be a positive integer");
  r.steps = static_cast<int>(n);
  r.log = mode != "lin";
  if (!(r.lo <= r.hi)) throw Error(ErrorCode::ConfigParse, "range is empty (lo > hi)");
  if (r.log && !(r.lo > 0)) throw Error(ErrorCode::ConfigParse, "log range needs lo > 0");
  return r;
}

std::vector<double> Range::values(bool integral) const {
  std::vector<double> v;
  for (int i = 0; i < steps; ++i) {
    const double f = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    double x = log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    if (i == steps - 1) x = hi;
    if (integral) x = std::round(x);
    if (v.empty() || x != v.back()) v.push_back(x);
  }
  return v;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// key = value lines under optional [section] headers. Values use JSON scalar/array syntax,
// anything else is taken as a bare string.
json parse_flat(const std::string& text) {
  json j = json::object();
  json* sec = &j;
  int line_no = 0;
  for (std::string line : split(text, '\n')) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos && line.find('"') > h) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::ConfigParse, where + ": unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw Error(ErrorCode::ConfigParse, where + ": empty section name");
      if (j.contains(name)) throw Error(ErrorCode::ConfigParse, where + ": duplicate section '" + name + "'");
      j[name] = json::object();
      sec = &j[name];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ConfigParse, where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), raw = trim(line.substr(eq + 1));
    if (key.empty() || raw.empty()) throw Error(ErrorCode::ConfigParse, where + ": empty key or value");
    if (sec->contains(key)) throw Error(ErrorCode::ConfigParse, where + ": duplicate key '" + key + "'");
    json v = json::parse(raw, nullptr, false);
    (*sec)[key] = v.is_discarded() ? json(raw) : v;
  }
  return j;
}

}  // namespace

Settings parse_settings(const std::string& text) {
  json j;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ConfigParse, e.what());
    }
  } else {
    j = parse_flat(text);
  }
  only_keys(j, "top level", {"lattice", "k", "N", "epsilon", "algs", "cost", "surface", "scatter", "census"});
  Settings s;
  if (j.contains("lattice")) {
    const json& l = j["lattice"];
    only_keys(l, "lattice", {"m", "lambda", "a", "d", "P"});
    for (const auto& [k, v] : l.items()) {
      if (!v.is_number()) throw Error(ErrorCode::ConfigParse, "lattice." + k + " must be a number");
      s.lattice[k] = v.get<double>();
    }
  }
  s.k = take(j, "k", s.k);
  s.N = take(j, "N", s.N);
  s.epsilon = take(j, "epsilon", s.epsilon);
  s.algs = take(j, "algs", s.algs);
  if (j.contains("cost")) {
    const json& c = j["cost"];
    only_keys(c, "cost", {"conjecture_iiib", "phi4_short_form", "kappa", "qsvt", "qsvt_time"});
    s.cost.conjecture_iiib = take(c, "conjecture_iiib", s.cost.conjecture_iiib);
    s.cost.phi4_short_form = take(c, "phi4_short_form", s.cost.phi4_short_form);
    s.cost.kappa = take(c, "kappa", s.cost.kappa);
    s.cost.qsvt = take(c, "qsvt", s.cost.qsvt);
    s.cost.qsvt_time = take(c, "qsvt_time", s.cost.qsvt_time);
  }
  if (j.contains("surface")) {
    const json& m = j["surface"];
    only_keys(m, "surface", {"cycle_ns", "p_phys", "p_threshold", "prefactor", "patch_factor", "routing_overhead",
                             "factory_qubits_per_d2", "factories", "cycles_per_t", "failure_budget", "d_max"});
    SurfaceModel& sm = s.surface;
    sm.cycle_ns = take(m, "cycle_ns", sm.cycle_ns);
    sm.p_phys = take(m, "p_phys", sm.p_phys);
    sm.p_threshold = take(m, "p_threshold", sm.p_threshold);
    sm.prefactor = take(m, "prefactor", sm.prefactor);
    sm.patch_factor = take(m, "patch_factor", sm.patch_factor);
    sm.routing_overhead = take(m, "routing_overhead", sm.routing_overhead);
    sm.factory_qubits_per_d2 = take(m, "factory_qubits_per_d2", sm.factory_qubits_per_d2);
    sm.factories = take(m, "factories", sm.factories);
    sm.cycles_per_t = take(m, "cycles_per_t", sm.cycles_per_t);
    sm.failure_budget = take(m, "failure_budget", sm.failure_budget);
    sm.d_max = take(m, "d_max", sm.d_max);
  }
  if (j.contains("scatter")) {
    const json& c = j["scatter"];
    only_keys(c, "scatter", {"input", "mass", "kink_mass", "dE", "P", "k", "lambdas"});
    s.scatter_input = take(c, "input", s.scatter_input);
    s.scatter_mass = take(c, "mass", s.scatter_mass);
    s.scatter_kink_mass = take(c, "kink_mass", s.scatter_kink_mass);
    s.scatter_dE = take(c, "dE", s.scatter_dE);
    s.scatter_P = take(c, "P", s.scatter_P);
    s.scatter_k = take(c, "k", s.scatter_k);
    s.scatter_lambdas = take(c, "lambdas", s.scatter_lambdas);
  }
  if (j.contains("census")) {
    const json& c = j["census"];
    only_keys(c, "census", {"powers", "n_max"});
    s.census_powers = take(c, "powers", s.census_powers);
    s.census_n_max = take(c, "n_max", s.census_n_max);
  }
  return s;
}

Settings load_settings(const std::string& path) { return parse_settings(read_file(path)); }

std::vector<CostAlgorithm> selected_algorithms(const RunConfig& cfg) {
  const std::vector<std::string>& names = !cfg.algs.empty() ? cfg.algs : cfg.settings.algs;
  std::vector<CostAlgorithm> out;
  if (names.empty()) {
    out = {CostAlgorithm::occ_trotter, CostAlgorithm::amp_trotter, CostAlgorithm::I_equal_weight,
           CostAlgorithm::IIIa_z_lcu};
    if (cost_options(cfg).conjecture_iiib) out.push_back(CostAlgorithm::IIIb_signature);
    return out;
  }
  for (const auto& n : names) out.push_back(parse_cost_algorithm(n));
  return out;
}

namespace {

std::vector<CostReport> table_reports(const RunConfig& cfg) {
  const LatticeParams p = build_params(cfg.settings.lattice);
  const CostOptions o = cost_options(cfg);
  std::vector<CostReport> out;
  for (CostAlgorithm a : selected_algorithms(cfg)) out.push_back(total_cost(a, p, cutoff_for(a, cfg.settings), cfg.settings.epsilon, o));
  return out;
}

}  // namespace

std::string cost_table_csv(const RunConfig& cfg) {
  std::ostringstream os;
  os << "schema,algorithm,cutoff,epsilon_E,qubit_formula_value,t_formula_value,anchors,rotation_t,aqft_t,other_t,"
        "alpha,m,ancilla_qubits,code_distance,physical_qubits,wallclock_s,source\n";
  for (const CostReport& r : table_reports(cfg)) {
    os << kCsvSchema << ',' << cost_algorithm_name(r.algorithm) << ',' << r.cutoff << ',' << num(r.budget.epsilon_E)
       << ',' << num(r.logical_qubits) << ',' << num(r.total_t) << ',' << csv_field(anchors(r.algorithm)) << ','
       << num(r.rotations) << ',' << num(r.aqft) << ',' << num(r.other) << ',' << num(r.alpha) << ',' << r.budget.m
       << ',' << num(r.ancilla_qubits) << ',';
    if (r.surface)
      os << r.surface->code_distance << ',' << num(r.surface->physical_qubits) << ','
         << num(r.surface->wallclock_seconds);
    else
      os << ",,";
    os << ',' << csv_field(r.source) << '\n';
  }
  return os.str();
}

std::string cost_table_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["schema"] = kCostReportSchema;
  j["lattice"] = cfg.settings.lattice;
  j["epsilon_E"] = cfg.settings.epsilon;
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  for (const CostReport& r : table_reports(cfg)) reports.push_back(nlohmann::ordered_json::parse(r.to_json()));
  j["reports"] = reports;
  return j.dump(2) + "\n";
}

SweepResult cost_sweep(const RunConfig& cfg) {
  SweepResult s;
  s.axis = cfg.axis.value_or(Axis::k);
  Range range;
  if (cfg.range) {
    range = *cfg.range;
  } else {
    switch (s.axis) {
      case Axis::k: range = parse_range("4:128:6:log"); break;
      case Axis::N: range = parse_range("2:16:4:log"); break;
      case Axis::omega: range = parse_range("4:128:6:log"); break;
      case Axis::eps: range = parse_range("1e-4:1e-1:7:log"); break;
    }
  }
  s.values = range.values(s.axis != Axis::eps);
  if (s.axis != Axis::eps && s.values.front() < 1) throw Error(ErrorCode::ConfigParse, "sweep values must be >= 1");

  std::vector<CostAlgorithm> algs;
  for (CostAlgorithm a : selected_algorithms(cfg)) {
    const bool occ = a == CostAlgorithm::occ_trotter;
    if (s.axis == Axis::k && occ) continue;      // no amplitude cutoff in the occupation basis
    if (s.axis == Axis::N && !occ) continue;     // no occupation cutoff in the amplitude basis
    algs.push_back(a);
  }
  if (algs.empty()) throw Error(ErrorCode::ConfigParse, std::string("no selected algorithm depends on axis ") + axis_name(s.axis));

  const CostOptions o = cost_options(cfg);
  std::vector<std::future<CostReport>> jobs;
  for (CostAlgorithm a : algs) {
    for (double v : s.values) {
      jobs.push_back(std::async(std::launch::async, [&cfg, &o, a, v, axis = s.axis] {
        RawParams raw = cfg.settings.lattice;
        Settings st = cfg.settings;
        double eps = st.epsilon;
        switch (axis) {
          case Axis::k: st.k = static_cast<int>(v); break;
          case Axis::N: st.N = static_cast<int>(v); break;
          case Axis::omega: raw["P"] = v; break;
          case Axis::eps: eps = v; break;
        }
        return total_cost(a, build_params(raw), cutoff_for(a, st), eps, o);
      }));
    }
  }
  std::size_t idx = 0;
  for (CostAlgorithm a : algs) {
    SweepSeries t{cost_algorithm_name(a), {}, {}}, q{cost_algorithm_name(a), {}, {}};
    std::string source;
    for (double v : s.values) {
      const CostReport r = jobs[idx++].get();
      t.x.push_back(v);
      t.y.push_back(r.total_t);
      q.x.push_back(v);
      q.y.push_back(r.logical_qubits);
      source = r.source;
    }
    s.total_t.push_back(t);
    s.qubits.push_back(q);
    s.sources.push_back(source);
  }
  return s;
}

std::string sweep_csv(const SweepResult& s) {
  std::ostringstream os;
  os << "schema,axis,value,algorithm,total_t,logical_qubits,source\n";
  for (std::size_t a = 0; a < s.total_t.size(); ++a)
    for (std::size_t i = 0; i < s.values.size(); ++i)
      os << kCsvSchema << ',' << axis_name(s.axis) << ',' << num(s.values[i]) << ',' << s.total_t[a].name << ','
         << num(s.total_t[a].y[i]) << ',' << num(s.qubits[a].y[i]) << ',' << csv_field(s.sources[a]) << '\n';
  return os.str();
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '&') o += "&amp;";
    else if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else o += c;
  }
  return o;
}

std::string tick_label(double v) {
  if (v > 0 && (v >= 1e4 || v < 1e-2)) return fmt::format("1e{}", static_cast<int>(std::round(std::log10(v))));
  return fmt::format("{:g}", v);
}

}  // namespace

std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<SweepSeries>& series, bool log_x) {
  const double W = 760, H = 500, left = 90, right = 190, top = 50, bottom = 70;
  const double pw = W - left - right, ph = H - top - bottom;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.y[i] > 0)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!std::isfinite(xmin)) throw Error(ErrorCode::InvalidParameter, "nothing positive to plot");
  const int ylo = static_cast<int>(std::floor(std::log10(ymin))), yhi = std::max(ylo + 1, static_cast<int>(std::ceil(std::log10(ymax))));
  auto fx_raw = [&](double x) { return log_x ? std::log10(x) : x; };
  double x0 = fx_raw(xmin), x1 = fx_raw(xmax);
  if (x1 == x0) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  auto px = [&](double x) { return left + (fx_raw(x) - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - (std::log10(y) - ylo) / (yhi - ylo) * ph; };

  static const char* colors[] = {"#1b6ca8", "#d1495b", "#2e933c", "#edae49", "#6c4f9c", "#444444"};
  std::ostringstream os;
  os << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
                    "font-family=\"sans-serif\" font-size=\"12\">\n",
                    W, H, W, H);
  os << fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, H);
  os << fmt::format("<text x=\"{}\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n", left + pw / 2,
                    escape_xml(title));
  os << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", left, top, pw, ph);
  const int ystep = (yhi - ylo) > 12 ? 2 : 1;
  for (int e = ylo; e <= yhi; e += ystep) {
    const double y = py(std::pow(10.0, e));
    os << fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#dddddd\"/>\n", left, y, left + pw, y);
    os << fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">1e{}</text>\n", left - 6, y + 4, e);
  }
  std::vector<double> xt;
  for (const auto& s : series) xt.insert(xt.end(), s.x.begin(), s.x.end());
  std::sort(xt.begin(), xt.end());
  xt.erase(std::unique(xt.begin(), xt.end()), xt.end());
  if (xt.size() > 10) {
    std::vector<double> thin;
    const std::size_t stride = (xt.size() + 9) / 10;
    for (std::size_t i = 0; i < xt.size(); i += stride) thin.push_back(xt[i]);
    xt = thin;
  }
  for (double x : xt) {
    const double X = px(x);
    os << fmt::format("<line x1=\"{:.2f}\" y1=\"{}\" x2=\"{:.2f}\" y2=\"{}\" stroke=\"black\"/>\n", X, top + ph, X, top + ph + 5);
    os << fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", X, top + ph + 20, tick_label(x));
  }
  os << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", left + pw / 2, H - 20,
                    escape_xml(x_label + (log_x ? " (log scale)" : "")));
  os << fmt::format("<text x=\"20\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {})\">{} (log scale)</text>\n",
                    top + ph / 2, top + ph / 2, escape_xml(y_label));
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* c = colors[si % 6];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (s.y[i] > 0) pts += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
    if (!pts.empty()) pts.pop_back();
    os << fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", c, pts);
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (s.y[i] > 0)
        os << fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", px(s.x[i]), py(s.y[i]), c);
    const double ly = top + 14 + 20 * si;
    os << fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n", left + pw + 14,
                      ly, left + pw + 38, ly, c);
    os << fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", left + pw + 44, ly + 4, escape_xml(s.name));
  }
  os << "</svg>\n";
  return os.str();
}

std::string census_csv(const Settings& s) {
  std::ostringstream os;
  os << "schema,power,n_max,bit,count,characterization_holds\n";
  for (int power : s.census_powers) {
    const int bits = census_bits(power, s.census_n_max);
    for (int b = 1; b <= bits; ++b) {
      bool holds = true;
      for (std::int64_t n = 1; n <= s.census_n_max + 1 && holds; ++n)
        holds = bin_pattern_iff(power, static_cast<std::uint64_t>(n), b);
      os << kCsvSchema << ',' << power << ',' << s.census_n_max << ',' << b << ','
         << bit_pattern_census(power, s.census_n_max, b).size() << ',' << (holds ? "true" : "false") << '\n';
    }
  }
  return os.str();
}

std::string scatter_output(const Settings& s) {
  if (!s.scatter_input.empty())
    return scatter_csv(parse_scatter_csv(read_file(s.scatter_input)), s.scatter_mass, s.scatter_kink_mass);
  std::ostringstream os;
  os << "schema,lambda,P,k,L,mass,E,n,p,delta,ddelta,theta\n";
  for (double lam : s.scatter_lambdas) {
    RawParams raw = s.lattice;
    raw["lambda"] = lam;
    raw["P"] = s.scatter_P;
    const LatticeParams p = build_params(raw, true);
    const AmplitudeCutoffs c = make_amp_cutoffs(s.scatter_k);
    if (p.Omega * c.qubits_per_site > kOracleMaxQubits)
      throw Error(ErrorCode::TooManyQubits, "scatter pipeline exceeds the dense cap");
    const SectorPhase sp = sector_phase(build_amp_hamiltonian(p, c), s.scatter_dE);
    os << kCsvSchema << ',' << num(lam) << ',' << p.P << ',' << c.k << ',' << num(sp.phase.L) << ',' << num(sp.mass)
       << ',' << num(sp.pair_energy) << ',' << sp.phase.n << ',' << num(sp.phase.p) << ',' << num(sp.phase.delta) << ','
       << num(sp.phase.delta_uncertainty) << ',' << num(sp.rap.theta) << '\n';
  }
  return os.str();
}

int run(const RunConfig& cfg, std::ostream& log) {
  try {
    const std::filesystem::path out(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + out.string() + ": " + ec.message());
    switch (cfg.command) {
      case Command::verify: {
        VerifyOptions vo;
        vo.perturb = cfg.perturb;
        vo.only = cfg.suites;
        vo.extended = cfg.dense;
        for (const auto& name : vo.only) suite_criterion(name);  // reject unknown names early
        const auto results = run_verify(vo);
        int passed = 0;
        for (const auto& r : results) {
          passed += r.passed;
          log << (r.passed ? "PASS " : "FAIL ") << r.name << " [" << fmt::format("{:.2f}", r.seconds) << " s] "
              << r.detail << '\n';
        }
        log << passed << "/" << results.size() << " suites passed\n";
        write_file(out / "verify.json", verify_report_json(results));
        return passed == static_cast<int>(results.size()) ? kExitOk : kExitSuite;
      }
      case Command::cost_table: {
        write_file(out / "cost_table.csv", cost_table_csv(cfg));
        write_file(out / "cost_table.json", cost_table_json(cfg));
        log << "wrote " << (out / "cost_table.csv").string() << '\n';
        return kExitOk;
      }
      case Command::cost_sweep: {
        const SweepResult s = cost_sweep(cfg);
        const std::string stem = std::string("sweep_") + axis_name(s.axis);
        write_file(out / (stem + ".csv"), sweep_csv(s));
        const bool log_x = !cfg.range || cfg.range->log;
        write_file(out / (stem + ".svg"),
                   svg_plot(std::string("T count versus ") + axis_name(s.axis), axis_name(s.axis), "T gates", s.total_t,
                            log_x));
        write_file(out / (stem + "_qubits.svg"), svg_plot(std::string("Logical qubits versus ") + axis_name(s.axis),
                                                          axis_name(s.axis), "logical qubits", s.qubits, log_x));
        log << "wrote " << (out / (stem + ".csv")).string() << '\n';
        return kExitOk;
      }
      case Command::scatter: {
        write_file(out / "scatter.csv", scatter_output(cfg.settings));
        log << "wrote " << (out / "scatter.csv").string() << '\n';
        return kExitOk;
      }
      case Command::census: {
        write_file(out / "census.csv", census_csv(cfg.settings));
        log << "wrote " << (out / "census.csv").string() << '\n';
        return kExitOk;
      }
    }
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::SuiteFailure ? kExitSuite : kExitConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
  }
  return kExitConfig;
}

}  // namespace phi4::cli
