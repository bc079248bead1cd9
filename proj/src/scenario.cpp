#include "torusns/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "torusns/errors.hpp"
#include "torusns/random.hpp"
#include "torusns/serialization.hpp"
#include "torusns/spectral.hpp"

namespace torusns {
namespace {

using ojson = nlohmann::ordered_json;

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

template <typename T>
T parse_number(const std::string& value, const std::string& key, int line) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) throw ConfigError("cannot parse '" + value + "' as a number", line, key);
  return out;
}

bool parse_bool(const std::string& value, const std::string& key, int line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("expected true or false, got '" + value + "'", line, key);
}

std::vector<double> parse_arguments(const std::string& spec, const std::string& name) {
  const auto open = spec.find('(');
  const auto close = spec.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open || trim(spec.substr(close + 1)) != "") {
    throw ConfigError("malformed tensor preset '" + spec + "'", 0, "tensor");
  }
  std::vector<double> args;
  std::stringstream ss(spec.substr(open + 1, close - open - 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty argument in '" + spec + "'", 0, "tensor");
    args.push_back(parse_number<double>(item, "tensor", 0));
  }
  (void)name;
  return args;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string default_tensor(const ScenarioConfig& c) {
  if (c.scenario == "random-anisotropic") {
    std::string s = "anisotropic-diagonal(";
    for (int d = 0; d < c.n; ++d) s += (d ? "," : "") + format_double(std::sqrt(c.nu) * (1.0 + 0.5 * d));
    return s + ")";
  }
  return "isotropic(0," + format_double(c.nu) + ")";
}

}  // namespace

std::vector<std::string> scenario_names() { return {"taylor-green", "zero", "manufactured", "random-anisotropic"}; }

void apply_setting(ScenarioConfig& c, const std::string& raw_key, const std::string& raw_value, int line) {
  std::string key = raw_key;
  std::replace(key.begin(), key.end(), '-', '_');
  std::string value = trim(raw_value);
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
  if (value.empty()) throw ConfigError("missing value", line, key);

  if (key == "scenario") {
    const auto names = scenario_names();
    if (std::find(names.begin(), names.end(), value) == names.end()) {
      throw ConfigError("unknown scenario '" + value + "'", line, key);
    }
    c.scenario = value;
  } else if (key == "n") {
    c.n = parse_number<int>(value, key, line);
    if (c.n < 2 || c.n > 3) throw ConfigError("dimension must be 2 or 3", line, key);
  } else if (key == "K") {
    c.K = parse_number<int>(value, key, line);
    if (c.K < 1) throw ConfigError("cutoff must be >= 1", line, key);
  } else if (key == "m") {
    c.m = parse_number<std::size_t>(value, key, line);
  } else if (key == "T") {
    c.T = parse_number<double>(value, key, line);
    if (!(c.T > 0.0)) throw ConfigError("T must be positive", line, key);
  } else if (key == "dt") {
    c.dt = parse_number<double>(value, key, line);
    if (!(c.dt > 0.0)) throw ConfigError("dt must be positive", line, key);
  } else if (key == "stepper") {
    try {
      c.stepper = parse_stepper(value);
    } catch (const ConfigError& e) {
      throw ConfigError("unknown stepper '" + value + "'", line, key);
    }
  } else if (key == "adaptive_tolerance") {
    c.adaptive_tolerance = parse_number<double>(value, key, line);
  } else if (key == "nu") {
    c.nu = parse_number<double>(value, key, line);
  } else if (key == "tensor") {
    c.tensor = value;
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(value, key, line);
  } else if (key == "out_dir") {
    c.out_dir = value;
  } else if (key == "diagnostics_every") {
    c.diagnostics_every = parse_number<int>(value, key, line);
    if (c.diagnostics_every < 1) throw ConfigError("diagnostics cadence must be >= 1", line, key);
  } else if (key == "checkpoint_every") {
    c.checkpoint_every = parse_number<int>(value, key, line);
  } else if (key == "amplitude") {
    c.amplitude = parse_number<double>(value, key, line);
  } else if (key == "decay") {
    c.decay = parse_number<double>(value, key, line);
  } else if (key == "forcing_amplitude") {
    c.forcing_amplitude = parse_number<double>(value, key, line);
  } else if (key == "advection") {
    c.advection = parse_bool(value, key, line);
  } else {
    throw ConfigError("unknown key", line, key);
  }
}

ScenarioConfig parse_config(std::istream& in, ScenarioConfig base) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = trim(strip_comment(line));
    if (body.empty() || body.front() == '[') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", number);
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw ConfigError("missing key", number);
    apply_setting(base, key, body.substr(eq + 1), number);
  }
  return base;
}

ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, std::move(base));
}

std::string config_json(const ScenarioConfig& c) {
  ojson j;
  j["scenario"] = c.scenario;
  j["n"] = c.n;
  j["K"] = c.K;
  j["m"] = c.m;
  j["T"] = c.T;
  j["dt"] = c.dt;
  j["stepper"] = to_string(c.stepper);
  j["adaptive_tolerance"] = c.adaptive_tolerance ? ojson(*c.adaptive_tolerance) : ojson(nullptr);
  j["nu"] = c.nu;
  j["tensor"] = c.tensor.empty() ? default_tensor(c) : c.tensor;
  j["seed"] = c.seed;
  j["diagnostics_every"] = c.diagnostics_every;
  j["checkpoint_every"] = c.checkpoint_every;
  j["amplitude"] = c.amplitude;
  j["decay"] = c.decay;
  j["forcing_amplitude"] = c.forcing_amplitude;
  j["advection"] = c.advection;
  return j.dump();
}

std::string config_hash(const ScenarioConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config_json(c))));
  return buf;
}

ViscosityTensor parse_tensor(const std::string& raw, int n) {
  const std::string spec = trim(raw);
  auto starts = [&](const char* p) { return spec.rfind(p, 0) == 0; };
  if (starts("isotropic-variable")) {
    const auto a = parse_arguments(spec, "isotropic-variable");
    if (a.size() != 3) throw ConfigError("isotropic-variable takes (mu0, amplitude, mode)", 0, "tensor");
    return isotropic_variable(n, a[0], a[1], static_cast<int>(a[2]));
  }
  if (starts("isotropic")) {
    const auto a = parse_arguments(spec, "isotropic");
    if (a.size() != 2) throw ConfigError("isotropic takes (lambda, mu)", 0, "tensor");
    return isotropic_constant(n, a[0], a[1]);
  }
  if (starts("anisotropic-diagonal")) {
    const auto a = parse_arguments(spec, "anisotropic-diagonal");
    if (static_cast<int>(a.size()) != n) {
      throw ConfigError("anisotropic-diagonal takes n = " + std::to_string(n) + " weights", 0, "tensor");
    }
    return anisotropic_diagonal(a);
  }
  if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
    ViscosityTensor A = load_tensor_table(spec);
    if (A.dimension() != n) throw ConfigError("tensor table dimension differs from n", 0, "tensor");
    return A;
  }
  throw ConfigError("unknown tensor preset '" + spec + "'", 0, "tensor");
}

EllipticityCertificate certify(const ViscosityTensor& A, int cutoff, double T) {
  const int grid = A.quadrature_grid(cutoff);
  std::vector<double> times{0.0};
  if (A.time_dependent()) {
    times.clear();
    for (int i = 0; i <= 8; ++i) times.push_back(T * i / 8.0);
  }
  std::ostringstream os;
  os << "uniform grid " << grid << "^" << A.dimension() << " at " << times.size() << " time"
     << (times.size() > 1 ? "s in [0, T]" : " (t = 0)");
  return ellipticity_constant(A, sample_grid(A.dimension(), grid, times), os.str());
}

SolverConfig Scenario::solver_config() const {
  SolverConfig s;
  s.modes = config.m;
  s.T = config.T;
  s.dt = config.dt;
  s.stepper = config.stepper;
  s.adaptive_tolerance = config.adaptive_tolerance;
  s.diagnostics_every = config.diagnostics_every;
  s.advection = config.advection;
  return s;
}

FourierField taylor_green_field(int cutoff, double amplitude) {
  Lattice lat(2, cutoff);
  FourierField u(lat, 2, FieldFlags{true, true, false});
  const Complex q = amplitude / Complex(0.0, 4.0);
  for (int a : {-1, 1}) {
    for (int b : {-1, 1}) {
      const int xi[2] = {a, b};
      const std::size_t i = lat.index_of(xi);
      u.at(i, 0) = static_cast<double>(a) * q;
      u.at(i, 1) = -static_cast<double>(b) * q;
    }
  }
  return u;
}

Scenario build_scenario(const ScenarioConfig& config) {
  const ScenarioConfig& c = config;
  if (c.scenario == "taylor-green" && c.n != 2) throw ConfigError("taylor-green needs n = 2", 0, "n");
  auto basis = std::make_shared<const GalerkinBasis>(c.n, c.K);
  if (c.m > basis->size()) {
    throw ConfigError("m = " + std::to_string(c.m) + " exceeds the basis size " + std::to_string(basis->size()), 0,
                      "m");
  }
  ViscosityTensor A = parse_tensor(c.tensor.empty() ? default_tensor(c) : c.tensor, c.n);
  EllipticityCertificate cert = certify(A, c.K, c.T);
  const Lattice& lat = basis->lattice();
  const std::size_t m = c.m == 0 ? basis->size() : c.m;

  Scenario s{c, basis, A, cert, Forcing{}, FourierField(lat, c.n, FieldFlags{true, true, false}), {}};
  if (c.scenario == "taylor-green") {
    s.initial = taylor_green_field(c.K, c.amplitude);
  } else if (c.scenario == "random-anisotropic") {
    RandomFieldOptions opt;
    opt.decay = c.decay;
    opt.amplitude = c.amplitude;
    opt.solenoidal = true;
    opt.ball_radius = c.K;
    s.initial = random_field(lat, c.n, c.seed, opt);
    if (c.forcing_amplitude != 0.0) {
      opt.amplitude = c.forcing_amplitude;
      s.forcing = Forcing::steady(random_field(lat, c.n, c.seed + 1, opt));
    }
  } else if (c.scenario == "manufactured") {
    // u*(t) = sum_l a_l(t) w_l over the |eta| = 1 shell.
    std::vector<std::size_t> shell;
    for (std::size_t j = 0; j < std::min(m, basis->size()); ++j) {
      if (basis->entry(j).norm_sq == 1) shell.push_back(j);
    }
    const double amp = c.amplitude;
    auto coeffs = [basis, shell, amp, m](double t, bool derivative) {
      std::vector<double> a(m, 0.0);
      constexpr double w = 2.0 * std::numbers::pi;
      for (std::size_t i = 0; i < shell.size(); ++i) {
        const double ci = amp / (1.0 + static_cast<double>(i));
        const double ph = w * t + static_cast<double>(i);
        a[shell[i]] = derivative ? ci * 0.5 * w * std::cos(ph) : ci * (1.0 + 0.5 * std::sin(ph));
      }
      return a;
    };
    s.exact = [basis, coeffs](double t) { return basis->synthesize(coeffs(t, false)); };
    const bool adv = c.advection;
    s.forcing = Forcing::unsteady(lat, [basis, coeffs, A, adv](double t) {
      const FourierField u = basis->synthesize(coeffs(t, false));
      FourierField f = basis->synthesize(coeffs(t, true));
      if (adv) f += advect(u, u);
      f -= apply_L(A, u, t);
      return f;
    });
    s.initial = s.exact(0.0);
  } else if (c.scenario != "zero") {
    throw ConfigError("unknown scenario '" + c.scenario + "'", 0, "scenario");
  }
  return s;
}

Description describe(const Scenario& s) {
  Description d;
  const GalerkinBasis& b = *s.basis;
  d.lattice_modes = b.lattice().size();
  for (std::size_t i = 0; i < b.lattice().size(); ++i) {
    const int nsq = b.lattice().norm_sq(i);
    if (nsq > 0 && nsq <= b.cutoff() * b.cutoff()) ++d.ball_modes;
  }
  d.basis_size = b.size();
  d.m = s.config.m == 0 ? b.size() : s.config.m;
  d.c_a = s.certificate.c_a;
  d.mu_min = s.certificate.mu_min;
  d.tensor_norm = s.certificate.tensor_norm;
  const auto eta0 = b.coefficients(s.initial, d.m);
  for (double v : eta0) d.initial_energy += v * v;
  d.forcing_dual_sq = s.forcing.dual_norm_sq(s.config.T);
  const EnergyLedger l = make_ledger(d.initial_energy, s.certificate, d.forcing_dual_sq);
  d.b1 = l.b1;
  d.b2 = l.b2;
  d.stability_dt = 2.78 / (d.tensor_norm * rho_sq(b.cutoff() * b.cutoff()));
  d.quadrature_grid = s.tensor.quadrature_grid(b.cutoff());
  d.quadrature_exact = s.tensor.quadrature_is_exact();
  d.tensor = s.tensor.description();
  d.sample_description = s.certificate.sample_description;
  return d;
}

std::string description_json(const Description& d) {
  ojson j;
  j["lattice_modes"] = d.lattice_modes;
  j["ball_modes"] = d.ball_modes;
  j["basis_size"] = d.basis_size;
  j["m"] = d.m;
  j["tensor"] = d.tensor;
  j["C_A"] = d.c_a;
  j["mu_min"] = d.mu_min;
  j["tensor_norm"] = d.tensor_norm;
  j["certificate_samples"] = d.sample_description;
  j["quadrature_grid"] = d.quadrature_grid;
  j["quadrature_exact"] = d.quadrature_exact;
  j["initial_energy"] = d.initial_energy;
  j["forcing_L2_Hminus1_sq"] = d.forcing_dual_sq;
  j["B1"] = d.b1;
  j["B2"] = d.b2;
  j["stability_dt_rk4"] = d.stability_dt;
  return j.dump(2);
}

RunSummary run_scenario(const Scenario& s) {
  namespace fs = std::filesystem;
  const ScenarioConfig& c = s.config;
  GalerkinSystem system(s.basis, s.tensor, s.forcing, s.solver_config());
  const GalerkinState initial = set_initial(*s.basis, system.size(), s.initial);

  RunSummary out;
  out.result = integrate(system, initial, s.certificate);
  const auto& result = out.result;
  const auto& ledger = result.ledger;

  fs::create_directories(c.out_dir / "checkpoints");
  std::vector<std::pair<double, std::string>> checkpoints;
  const std::size_t every = static_cast<std::size_t>(std::max(1, c.checkpoint_every));
  for (std::size_t i = 0; i < result.samples.size(); ++i) {
    if (i % every != 0 && i + 1 != result.samples.size()) continue;
    char name[32];
    std::snprintf(name, sizeof name, "u_%06zu.bin", i);
    const fs::path rel = fs::path("checkpoints") / name;
    save_field(c.out_dir / rel, s.basis->synthesize(result.samples[i].eta));
    checkpoints.emplace_back(result.samples[i].t, rel.generic_string());
    out.checkpoints.push_back(c.out_dir / rel);
  }

  const std::vector<double> residual = energy_residuals(ledger);
  out.diagnostics = c.out_dir / "diagnostics.csv";
  {
    std::ofstream csv(out.diagnostics);
    csv << "t,energy,a_T,forcing_power,energy_residual,nonlinear_work,b1_margin,b2_margin\n";
    for (std::size_t i = 0; i < ledger.samples.size(); ++i) {
      const auto& r = ledger.samples[i];
      const double b1m = ledger.b1 - r.sup_energy;
      const double b2m = ledger.b2 - r.int_h1;
      out.max_b1_violation = std::max(out.max_b1_violation, -b1m);
      out.max_b2_violation = std::max(out.max_b2_violation, -b2m);
      csv << format_double(r.t) << ',' << format_double(r.energy) << ',' << format_double(r.a_T) << ','
          << format_double(r.forcing_power) << ',' << format_double(residual[i]) << ','
          << format_double(r.nonlinear_work) << ',' << format_double(b1m) << ',' << format_double(b2m) << '\n';
    }
  }

  ojson m;
  m["format"] = "torusns-run";
  m["version"] = 1;
  m["config"] = ojson::parse(config_json(c));
  m["config_hash"] = config_hash(c);
  m["certificate"] = {{"C_A", s.certificate.c_a},
                      {"mu_min", s.certificate.mu_min},
                      {"tensor_norm", s.certificate.tensor_norm},
                      {"samples", s.certificate.sample_count},
                      {"sample_description", s.certificate.sample_description},
                      {"quadrature_exact", s.tensor.quadrature_is_exact()}};
  m["bounds"] = {{"B1", ledger.b1}, {"B2", ledger.b2}, {"forcing_L2_Hminus1_sq", ledger.forcing_dual_sq}};
  m["basis_size"] = s.basis->size();
  m["m"] = system.size();
  m["stiffness"] = system.assembled() ? "assembled" : "matrix-free";
  m["steps"] = result.steps;
  m["rejected_steps"] = result.rejected;
  m["diagnostics"] = "diagnostics.csv";
  ojson cps = ojson::array();
  for (const auto& [t, file] : checkpoints) cps.push_back({{"t", t}, {"file", file}});
  m["checkpoints"] = cps;
  const auto& last = ledger.samples.back();
  m["final"] = {{"t", last.t},
                {"energy", last.energy},
                {"b1_margin", ledger.b1 - last.sup_energy},
                {"b2_margin", ledger.b2 - last.int_h1}};
  out.manifest = c.out_dir / "manifest.json";
  std::ofstream(out.manifest) << m.dump(2) << '\n';
  return out;
}

}  // namespace torusns
