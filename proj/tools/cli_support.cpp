#include "cli_support.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace dqa_cli {

namespace {

double parse_number(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError("not a number: '" + std::string(s) + "'");
  return v;
}

int parse_int(std::string_view s) {
  const double v = parse_number(s);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("not an integer: '" + std::string(s) + "'");
  return static_cast<int>(v);
}

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("not a boolean: '" + std::string(s) + "'");
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

void check_status(dqa_status s) {
  if (s == DQA_OK) return;
  if (s == DQA_ERR_CONFIG || s == DQA_ERR_INVALID_ARGUMENT) throw ConfigError(dqa_last_error());
  throw std::runtime_error(dqa_last_error());
}

}  // namespace

std::vector<double> parse_grid(std::string_view spec) {
  if (spec.empty()) throw ConfigError("empty grid");
  if (spec.find(':') != std::string_view::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3 && parts.size() != 4) throw ConfigError("grid must be start:stop:count[:log|:lin]");
    const double a = parse_number(parts[0]);
    const double b = parse_number(parts[1]);
    const int n = parse_int(parts[2]);
    const bool log = parts.size() == 3 || parts[3] == "log";
    if (parts.size() == 4 && parts[3] != "log" && parts[3] != "lin")
      throw ConfigError("grid spacing must be 'log' or 'lin'");
    if (n < 1) throw ConfigError("grid count must be >= 1");
    if (log && !(a > 0.0 && b > 0.0)) throw ConfigError("log grid needs positive end points");
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
      const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      out.push_back(log ? a * std::pow(b / a, f) : a + (b - a) * f);
    }
    if (n > 1) out.back() = b;
    return out;
  }
  std::vector<double> out;
  for (auto p : split(spec, ',')) out.push_back(parse_number(p));
  return out;
}

int RunConfig::resolved_L() const {
  if (L) return *L;
  return bath == "dephasing" ? 501 : 1000;
}

int RunConfig::bath_code() const {
  int code = 0;
  if (dqa_parse_bath(bath.c_str(), &code) != DQA_OK) throw ConfigError(dqa_last_error());
  return code;
}

int RunConfig::sector_code() const {
  if (sector == "auto") return DQA_SECTOR_AUTO;
  if (sector == "even") return DQA_SECTOR_EVEN;
  if (sector == "odd") return DQA_SECTOR_ODD;
  throw ConfigError("sector must be auto, even or odd");
}

dqa_problem RunConfig::problem() const {
  dqa_problem p;
  dqa_problem_init(&p);
  p.L = resolved_L();
  p.sector = sector_code();
  p.bath = bath_code();
  p.kappa = kappa;
  p.eta = eta;
  p.tau = tau;
  p.dt = dt;
  p.t_in_factor = t_in_factor;
  p.stride = stride;
  p.workers = workers;
  return p;
}

void load_config_file(const std::string& path, RunConfig& cfg) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside a section");
    for (const auto& [key, node] : body) {
      const std::string v = node.get_value<std::string>();
      const std::string name = section + "." + key;
      if (name == "chain.L") cfg.L = parse_int(v);
      else if (name == "chain.sector") cfg.sector = v;
      else if (name == "schedule.tau") cfg.tau = parse_number(v);
      else if (name == "schedule.tau_grid") cfg.tau_grid = v;
      else if (name == "schedule.dt") cfg.dt = parse_number(v);
      else if (name == "schedule.t_in_factor") cfg.t_in_factor = parse_number(v);
      else if (name == "bath.kind") cfg.bath = v;
      else if (name == "bath.kappa") cfg.kappa = parse_number(v);
      else if (name == "bath.kappa_grid") cfg.kappa_grid = v;
      else if (name == "bath.eta") cfg.eta = parse_number(v);
      else if (name == "bath.eta_grid") cfg.eta_grid = v;
      else if (name == "bath.baseline") cfg.baseline = parse_bool(v);
      else if (name == "output.csv") cfg.csv_path = v;
      else if (name == "output.json") cfg.json_path = v;
      else if (name == "output.stride") cfg.stride = parse_int(v);
      else if (name == "run.workers") cfg.workers = parse_int(v);
      else if (name == "run.tolerance") cfg.tolerance = parse_number(v);
      else if (name == "analysis.kz_window") {
        const auto g = parse_grid(v);
        if (g.size() != 2) throw ConfigError("analysis.kz_window must be lo,hi");
        cfg.kz_lo = g[0];
        cfg.kz_hi = g[1];
      } else {
        throw ConfigError("unknown config key '" + name + "'");
      }
    }
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

void write_trajectory_csv(std::ostream& os, const dqa_trajectory* t) {
  os << "t,gamma,energy,ground_energy,epsilon\n";
  const size_t n = dqa_trajectory_length(t);
  for (size_t i = 0; i < n; ++i) {
    dqa_sample s;
    check_status(dqa_trajectory_sample(t, i, &s));
    os << format_double(s.t) << ',' << format_double(s.gamma) << ',' << format_double(s.energy) << ','
       << format_double(s.ground_energy) << ',' << format_double(s.epsilon) << '\n';
  }
}

SweepTable collect_sweep(const dqa_sweep* s) {
  SweepTable t;
  const size_t n = dqa_sweep_size(s);
  for (size_t i = 0; i < n; ++i) {
    dqa_sweep_point p;
    check_status(dqa_sweep_point_get(s, i, &p));
    t.points.push_back(p);
    t.errors.emplace_back(dqa_sweep_point_error(s, i));
  }
  return t;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  bool any_error = false;
  for (const auto& e : table.errors) any_error = any_error || !e.empty();
  os << "bath,L,kappa,eta,tau,epsilon_final,dt" << (any_error ? ",error" : "") << '\n';
  for (std::size_t i = 0; i < table.points.size(); ++i) {
    const auto& p = table.points[i];
    os << dqa_bath_name(p.bath) << ',' << p.L << ',' << format_double(p.kappa) << ',' << format_double(p.eta) << ','
       << format_double(p.tau) << ',' << format_double(p.epsilon_final) << ',' << format_double(p.dt);
    if (any_error) os << ',' << csv_field(table.errors[i]);
    os << '\n';
  }
}

nlohmann::ordered_json sweep_summary(const SweepTable& table, const RunConfig& cfg) {
  using json = nlohmann::ordered_json;
  struct CurveData {
    int solver = 0;
    int L = 0;
    std::vector<double> tau, eps;
  };
  // (bath, kappa, eta) -> curve; std::map keeps the output order fixed.
  std::map<std::tuple<int, double, double>, CurveData> curves;
  for (std::size_t i = 0; i < table.points.size(); ++i) {
    const auto& p = table.points[i];
    if (!table.errors[i].empty()) continue;
    auto& c = curves[{p.bath, p.kappa, p.eta}];
    c.solver = p.solver;
    c.L = p.L;
    c.tau.push_back(p.tau);
    c.eps.push_back(p.epsilon_final);
  }

  json out;
  out["schema"] = "dqa.sweep.v1";
  out["L"] = cfg.resolved_L();
  out["dt"] = cfg.dt;
  out["t_in_factor"] = cfg.t_in_factor;
  out["curves"] = json::array();

  // (bath, eta) -> per-kappa optimum and overshoot values for the scaling fits
  struct Family {
    std::vector<double> kappa_opt, tau_opt, eps_opt;
    std::vector<double> kappa_max, tau_max, eps_max;
  };
  std::map<std::pair<int, double>, Family> families;
  json fits = json::array();

  for (auto& [key, c] : curves) {
    const auto [bath, kappa, eta] = key;
    // Points arrive tau-major within a bath; sort by tau.
    std::vector<std::size_t> order(c.tau.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return c.tau[a] < c.tau[b]; });
    std::vector<double> tau, eps;
    for (auto i : order) {
      tau.push_back(c.tau[i]);
      eps.push_back(c.eps[i]);
    }

    json cj;
    cj["bath"] = dqa_bath_name(bath);
    cj["kappa"] = kappa;
    cj["eta"] = eta;
    cj["solver"] = dqa_solver_name(c.solver);
    cj["n_points"] = tau.size();

    dqa_problem p = cfg.problem();
    p.bath = bath;
    p.kappa = kappa;
    p.eta = eta;
    double eps_inf = std::nan("");
    if (dqa_epsilon_infinity(&p, 0.0, &eps_inf) != DQA_OK) eps_inf = std::nan("");
    cj["epsilon_inf"] = number_or_null(eps_inf);

    dqa_curve_point opt{};
    if (dqa_find_optimum(tau.data(), eps.data(), tau.size(), &opt) == DQA_OK) {
      cj["optimum"] = {{"tau", opt.tau}, {"epsilon", opt.epsilon}};
      if (kappa > 0.0) {
        auto& f = families[{bath, eta}];
        f.kappa_opt.push_back(kappa);
        f.tau_opt.push_back(opt.tau);
        f.eps_opt.push_back(opt.epsilon);
      }
    } else {
      cj["optimum"] = nullptr;
      cj["optimum_error"] = dqa_last_error();
    }

    cj["overshoot"] = nullptr;
    if (bath != DQA_BATH_NONE && std::isfinite(eps_inf) && tau.size() >= 3) {
      int found = 0;
      dqa_curve_point os{};
      if (dqa_find_overshoot(tau.data(), eps.data(), tau.size(), eps_inf, 1e-3, &found, &os) == DQA_OK && found) {
        cj["overshoot"] = {{"tau", os.tau}, {"epsilon", os.epsilon}};
        auto& f = families[{bath, eta}];
        f.kappa_max.push_back(kappa);
        f.tau_max.push_back(os.tau);
        f.eps_max.push_back(os.epsilon);
      }
    }

    if (kappa > 0.0) {
      dqa_ansatz_prediction a{};
      check_status(dqa_ansatz(kappa, 1.0, &a));
      cj["ansatz"] = {{"tau_opt", a.tau_opt}, {"epsilon_opt", a.epsilon_opt}};
    } else {
      cj["ansatz"] = nullptr;
    }
    out["curves"].push_back(cj);

    if (bath == DQA_BATH_NONE || kappa == 0.0) {
      dqa_power_law f{};
      if (dqa_fit_power_law(tau.data(), eps.data(), tau.size(), cfg.kz_lo, cfg.kz_hi, &f) == DQA_OK) {
        fits.push_back({{"name", "kz"},
                        {"bath", dqa_bath_name(bath)},
                        {"eta", eta},
                        {"x", "tau"},
                        {"y", "epsilon"},
                        {"exponent", f.exponent},
                        {"prefactor", f.prefactor},
                        {"residual", f.residual},
                        {"window", {f.lo, f.hi}},
                        {"n", f.n},
                        {"expected_exponent", -0.5}});
      }
    }
  }

  auto add_fit = [&](const char* name, int bath, double eta, const char* y, const std::vector<double>& xs,
                     const std::vector<double>& ys, double expected) {
    dqa_power_law f{};
    if (xs.size() < 4) return;
    if (dqa_fit_power_law(xs.data(), ys.data(), xs.size(), 0.0, INFINITY, &f) != DQA_OK) return;
    fits.push_back({{"name", name},
                    {"bath", dqa_bath_name(bath)},
                    {"eta", eta},
                    {"x", "kappa"},
                    {"y", y},
                    {"exponent", f.exponent},
                    {"prefactor", f.prefactor},
                    {"residual", f.residual},
                    {"window", {f.lo, f.hi}},
                    {"n", f.n},
                    {"expected_exponent", expected}});
  };
  for (const auto& [key, f] : families) {
    const auto [bath, eta] = key;
    add_fit("epsilon_opt", bath, eta, "epsilon_opt", f.kappa_opt, f.eps_opt, 1.0 / 3.0);
    add_fit("tau_opt", bath, eta, "tau_opt", f.kappa_opt, f.tau_opt, -2.0 / 3.0);
    add_fit("tau_max", bath, eta, "tau_max", f.kappa_max, f.tau_max, -1.0);
  }
  out["fits"] = fits;
  return out;
}

std::string error_line(int code, std::string_view message) {
  static const char* kinds[] = {"ok", "config", "numerical", "oracle"};
  nlohmann::json j;
  j["error"] = code >= 0 && code <= 3 ? kinds[code] : "internal";
  j["code"] = code;
  j["message"] = std::string(message);
  return j.dump();
}

}  // namespace dqa_cli
