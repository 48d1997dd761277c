#include "hjgraph/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "hjgraph/error.hpp"

namespace hjg {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) fail("key '" + key + "': not a real number: '" + v + "'");
  return out;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) fail("key '" + key + "': not an integer: '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) fail("key '" + key + "' out of range");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail("key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_reals(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_real(key, s));
  return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& s : split_list(v)) out.push_back(to_int(key, s));
  return out;
}

void check_choice(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (v == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  fail("key '" + key + "': unknown value '" + v + "' (expected one of " + list + ")");
}

double sum_squares(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double min_coord(std::span<const double> x) { return *std::min_element(x.begin(), x.end()); }

}  // namespace

std::vector<std::string> builtin_initial_names() {
  return {"squared_l2", "min_cos", "neg_min_cos", "centered_squared_l2", "constant"};
}

ScalarField builtin_initial(const std::string& name, double value) {
  if (name == "constant") return [value](std::span<const double>) { return value; };
  if (name == "squared_l2") return [](std::span<const double> x) { return sum_squares(x); };
  if (name == "min_cos") return [](std::span<const double> x) { return min_coord(x) * std::cos(sum_squares(x)); };
  if (name == "neg_min_cos") return [](std::span<const double> x) { return -min_coord(x) * std::cos(sum_squares(x)); };
  if (name == "centered_squared_l2") {
    return [](std::span<const double> x) {
      const double c = 1.0 / static_cast<double>(x.size());
      double s = 0.0;
      for (double v : x) s += (v - c) * (v - c);
      return s;
    };
  }
  fail("unknown initial condition '" + name + "'");
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"d", [&](auto& k, auto& v) { c.d = to_int(k, v); }},
      {"graph", [&](auto&, auto& v) { c.graph = v; }},
      {"edge_weight", [&](auto& k, auto& v) { c.edge_weight = to_real(k, v); }},
      {"weights", [&](auto& k, auto& v) { c.weights = to_reals(k, v); }},
      {"N", [&](auto& k, auto& v) { c.N = to_int(k, v); }},
      {"h", [&](auto& k, auto& v) { c.h = to_real(k, v); }},
      {"eps", [&](auto& k, auto& v) { c.eps = to_real(k, v); }},
      {"tau", [&](auto& k, auto& v) { c.tau = to_real(k, v); }},
      {"ratio", [&](auto& k, auto& v) { c.ratio = to_real(k, v); }},
      {"T", [&](auto& k, auto& v) { c.T = to_real(k, v); }},
      {"tensor", [&](auto&, auto& v) { c.tensor = v; }},
      {"tensor_weights",
       [&](auto& k, auto& v) {
         const auto w = to_reals(k, v);
         if (w.size() != 3) fail("key 'tensor_weights' needs three values");
         std::copy(w.begin(), w.end(), c.tensor_weights.begin());
       }},
      {"hamiltonian", [&](auto&, auto& v) { c.hamiltonian = v; }},
      {"kappa", [&](auto& k, auto& v) { c.kappa = to_real(k, v); }},
      {"coefficient", [&](auto&, auto& v) { c.coefficient = v; }},
      {"theta", [&](auto& k, auto& v) { c.theta = to_real(k, v); }},
      {"coefficient_value", [&](auto& k, auto& v) { c.coefficient_value = to_real(k, v); }},
      {"noise_intensity", [&](auto& k, auto& v) { c.noise_intensity = to_real(k, v); }},
      {"discrete_hamiltonian", [&](auto&, auto& v) { c.discrete_hamiltonian = v; }},
      {"lf_gamma", [&](auto& k, auto& v) { c.lf_gamma = to_reals(k, v); }},
      {"lf_radius", [&](auto& k, auto& v) { c.lf_radius = to_real(k, v); }},
      {"boundary", [&](auto&, auto& v) { c.boundary = v; }},
      {"dirichlet_value", [&](auto& k, auto& v) { c.dirichlet_value = to_real(k, v); }},
      {"scheme", [&](auto&, auto& v) { c.scheme = v; }},
      {"max_iters", [&](auto& k, auto& v) { c.max_iters = to_int(k, v); }},
      {"tol", [&](auto& k, auto& v) { c.tol = to_real(k, v); }},
      {"implicit_solver", [&](auto&, auto& v) { c.implicit_solver = v; }},
      {"initial", [&](auto&, auto& v) { c.initial = v; }},
      {"initial_value", [&](auto& k, auto& v) { c.initial_value = to_real(k, v); }},
      {"potential", [&](auto&, auto& v) { c.potential = v; }},
      {"potential_value", [&](auto& k, auto& v) { c.potential_value = to_real(k, v); }},
      {"seed",
       [&](auto& k, auto& v) {
         const long long s = to_integer(k, v);
         if (s < 0) fail("key 'seed' must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"resolutions", [&](auto& k, auto& v) { c.resolutions = to_ints(k, v); }},
      {"reference_N", [&](auto& k, auto& v) { c.reference_N = to_int(k, v); }},
      {"snapshot_times", [&](auto& k, auto& v) { c.snapshot_times = to_reals(k, v); }},
      {"strict_cfl", [&](auto& k, auto& v) { c.strict_cfl = to_bool(k, v); }},
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) fail("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (seen.count(key)) fail("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    if (value.empty()) fail("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    seen[key] = lineno;
    it->second(key, value);
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

void ExperimentConfig::validate() const {
  if (d < 2) fail("d must be at least 2");
  check_choice("graph", graph, {"complete", "path", "matrix"});
  if (graph == "matrix" && weights.size() != static_cast<std::size_t>(d * d)) fail("weights needs d*d entries");
  if (!(edge_weight > 0.0)) fail("edge_weight must be positive");
  if (N && h) fail("give either N or h, not both");
  if (N && *N < 1) fail("N must be positive");
  if (h && !(*h > 0.0)) fail("h must be positive");
  if (!(eps >= 0.0) || eps * d >= 1.0) fail("eps must lie in [0, 1/d)");
  if (tau && !(*tau > 0.0)) fail("tau must be positive");
  if (!(ratio > 0.0)) fail("ratio must be positive");
  if (!(T >= 0.0)) fail("T must be nonnegative");
  check_choice("tensor", tensor, {"average", "logarithmic", "harmonic", "convex"});
  check_choice("hamiltonian", hamiltonian, {"zero", "power"});
  if (hamiltonian == "power" && !(kappa > 1.0)) fail("kappa must exceed 1");
  check_choice("coefficient", coefficient, {"inverse_information", "inverse_theta", "log", "constant"});
  if (coefficient == "constant" && !(coefficient_value >= 0.0)) fail("coefficient_value must be nonnegative");
  if (!(noise_intensity >= 0.0)) fail("noise_intensity must be nonnegative");
  check_choice("discrete_hamiltonian", discrete_hamiltonian, {"osher_sethian", "lax_friedrichs"});
  for (double g : lf_gamma) {
    if (!(g >= 0.0)) fail("lf_gamma entries must be nonnegative");
  }
  if (!(lf_radius > 0.0)) fail("lf_radius must be positive");
  check_choice("boundary", boundary, {"linear", "constant", "dirichlet"});
  check_choice("scheme", scheme, {"explicit", "implicit"});
  if (max_iters < 1) fail("max_iters must be at least 1");
  if (!(tol >= 0.0)) fail("tol must be nonnegative");
  check_choice("implicit_solver", implicit_solver, {"picard", "nodewise"});
  const auto names = builtin_initial_names();
  if (std::find(names.begin(), names.end(), initial) == names.end()) fail("unknown initial condition '" + initial + "'");
  check_choice("potential", potential, {"zero", "constant"});
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    if (resolutions[i] < 1) fail("resolutions must be positive");
    if (i > 0 && resolutions[i] <= resolutions[i - 1]) fail("resolutions must be strictly increasing");
  }
  if (reference_N < 1) fail("reference_N must be positive");
  for (double t : snapshot_times) {
    if (!(t >= 0.0) || t > T) fail("snapshot times must lie in [0, T]");
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  j["graph"] = graph;
  j["edge_weight"] = edge_weight;
  j["weights"] = weights;
  if (N || h) {
    j["N"] = levels();
    j["h"] = (1.0 - d * eps) / levels();
  } else {
    j["N"] = nullptr;
    j["h"] = nullptr;
  }
  j["eps"] = eps;
  j["tau"] = tau ? nlohmann::json(*tau) : nlohmann::json(nullptr);
  j["ratio"] = ratio;
  j["T"] = T;
  j["tensor"] = tensor;
  j["tensor_weights"] = tensor_weights;
  j["hamiltonian"] = hamiltonian;
  j["kappa"] = kappa;
  j["coefficient"] = coefficient;
  j["theta"] = theta;
  j["coefficient_value"] = coefficient_value;
  j["noise_intensity"] = noise_intensity;
  j["discrete_hamiltonian"] = discrete_hamiltonian;
  j["lf_gamma"] = lf_gamma;
  j["lf_radius"] = lf_radius;
  j["boundary"] = boundary;
  j["dirichlet_value"] = dirichlet_value;
  j["scheme"] = scheme;
  j["max_iters"] = max_iters;
  j["tol"] = tol;
  j["implicit_solver"] = implicit_solver;
  j["initial"] = initial;
  j["initial_value"] = initial_value;
  j["potential"] = potential;
  j["potential_value"] = potential_value;
  j["seed"] = seed;
  j["resolutions"] = resolutions;
  j["reference_N"] = reference_N;
  j["snapshot_times"] = snapshot_times;
  j["strict_cfl"] = strict_cfl;
  return j;
}

Graph ExperimentConfig::make_graph() const {
  if (graph == "complete") return Graph::complete(d, edge_weight);
  if (graph == "path") return Graph::path(d, edge_weight);
  return Graph(d, weights);
}

MetricTensor ExperimentConfig::make_tensor() const {
  if (tensor == "average") return MetricTensor::average();
  if (tensor == "logarithmic") return MetricTensor::logarithmic();
  if (tensor == "harmonic") return MetricTensor::harmonic();
  return MetricTensor::convex(tensor_weights);
}

Hamiltonian ExperimentConfig::make_hamiltonian() const {
  if (hamiltonian == "zero") return Hamiltonian::zero();
  Coefficient a = Coefficient::constant(coefficient_value);
  if (coefficient == "inverse_information") a = Coefficient::inverse_information_power(kappa);
  if (coefficient == "inverse_theta") a = Coefficient::inverse_theta_power(theta);
  if (coefficient == "log") a = Coefficient::log_power();
  return Hamiltonian::power_norm(kappa, std::move(a));
}

ScalarField ExperimentConfig::make_initial() const {
  return builtin_initial(initial, initial_value);
}

ScalarField ExperimentConfig::make_potential() const {
  if (potential == "zero") return nullptr;
  const double v = potential_value;
  return [v](std::span<const double>) { return v; };
}

int ExperimentConfig::levels() const {
  if (N) return *N;
  const double span = 1.0 - d * eps;
  if (!h) fail("config needs N or h");
  const double ratio_levels = span / *h;
  const double nearest = std::round(ratio_levels);
  if (std::abs(ratio_levels - nearest) > 1e-9 || nearest < 1) {
    throw Error(ErrorCode::NonIntegerLevels,
                "(1 - d*eps)/h = " + std::to_string(ratio_levels) + " is not an integer; give N instead");
  }
  return static_cast<int>(nearest);
}

std::shared_ptr<const Mesh> ExperimentConfig::make_mesh(int lv) const {
  return std::make_shared<const Mesh>(Mesh::from_levels(make_graph(), lv, eps));
}

double ExperimentConfig::time_step(const Mesh& mesh) const {
  if (tau) return *tau;
  const double target = ratio * mesh.h();
  if (T == 0.0) return target;
  const double steps = std::ceil(T / target - 1e-9);
  return T / steps;
}

DiscreteHamiltonian ExperimentConfig::make_discrete_hamiltonian(const Mesh& mesh) const {
  const auto kind = discrete_hamiltonian == "lax_friedrichs" ? DiscreteHamiltonian::Kind::LaxFriedrichs
                                                              : DiscreteHamiltonian::Kind::OsherSethian;
  const Graph g = make_graph();
  const MetricTensor mt = make_tensor();
  const Hamiltonian H = make_hamiltonian();
  std::vector<double> gamma = lf_gamma;
  if (kind == DiscreteHamiltonian::Kind::LaxFriedrichs) {
    const std::size_t E = g.edges().size();
    if (gamma.size() == 1) gamma.assign(E, gamma[0]);
    if (gamma.empty()) {
      std::vector<std::vector<double>> samples;
      const auto& interior = mesh.interior();
      const std::size_t stride = std::max<std::size_t>(1, interior.size() / 256);
      for (std::size_t i = 0; i < interior.size(); i += stride) {
        const auto p = mesh.point(interior[i]);
        samples.emplace_back(p.begin(), p.end());
      }
      gamma = lf_gamma_default(H, g, mt, samples, lf_radius, 64, seed);
    }
    if (gamma.size() != E) fail("lf_gamma needs one value or one per edge");
  }
  return DiscreteHamiltonian(kind, g, mt, H, noise_intensity, gamma);
}

SchemeConfig ExperimentConfig::make_scheme_config(const Mesh& mesh) const {
  SchemeConfig s;
  s.tau = time_step(mesh);
  s.T = T;
  if (boundary == "linear") s.boundary = BoundaryCondition::linear();
  if (boundary == "constant") s.boundary = BoundaryCondition::constant();
  if (boundary == "dirichlet") {
    const double v = dirichlet_value;
    s.boundary = BoundaryCondition::dirichlet_value([v](std::span<const double>) { return v; });
  }
  s.scheme = scheme == "implicit" ? SchemeKind::Implicit : SchemeKind::Explicit;
  s.implicit.max_iters = max_iters;
  s.implicit.tol = tol;
  s.implicit.solver = implicit_solver == "nodewise" ? ImplicitSolver::Nodewise : ImplicitSolver::Picard;
  return s;
}

}  // namespace hjg
