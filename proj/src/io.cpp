#include "spomdp/io.hpp"

#include "spomdp/linalg.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace spomdp::io {

namespace {

double number(const Json& j, const char* what) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw ValidationError(std::string(what) + ": expected a number");
  return j.get<double>();
}

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ValidationError(std::string("expected an object with key '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("missing key '") + key + "'");
  return *it;
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw ValidationError(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

void check_version(const Json& j, const char* what) {
  const int v = int_field(j, "version");
  if (v != kFormatVersion)
    throw ValidationError(std::string(what) + ": unsupported version " + std::to_string(v));
}

template <typename T>
Json opt(const std::optional<T>& v) {
  return v ? num(*v) : Json(nullptr);
}

std::optional<double> opt_number(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return number(*it, key);
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(num(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + ": expected a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ValidationError(std::string(what) + ": ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = number(row[c], what);
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v(i)));
  return out;
}

Vector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  return v;
}

Json tensor_to_json(const Tensor3& t) {
  Json out = Json::array();
  for (int i = 0; i < t.dim(0); ++i) {
    Json a = Json::array();
    for (int j = 0; j < t.dim(1); ++j) {
      Json b = Json::array();
      for (int k = 0; k < t.dim(2); ++k) b.push_back(num(t(i, j, k)));
      a.push_back(std::move(b));
    }
    out.push_back(std::move(a));
  }
  return out;
}

Tensor3 tensor_from_json(const Json& j, const char* what) {
  const std::string w(what);
  if (!j.is_array()) throw ValidationError(w + ": expected a nested array");
  const int n0 = static_cast<int>(j.size());
  const int n1 = n0 == 0 || !j[0].is_array() ? 0 : static_cast<int>(j[0].size());
  const int n2 = n1 == 0 || !j[0][0].is_array() ? 0 : static_cast<int>(j[0][0].size());
  Tensor3 t(n0, n1, n2);
  for (int a = 0; a < n0; ++a) {
    if (!j[a].is_array() || static_cast<int>(j[a].size()) != n1) throw ValidationError(w + ": ragged tensor");
    for (int b = 0; b < n1; ++b) {
      const Json& fiber = j[a][b];
      if (!fiber.is_array() || static_cast<int>(fiber.size()) != n2)
        throw ValidationError(w + ": ragged tensor");
      for (int c = 0; c < n2; ++c) t(a, b, c) = number(fiber[c], what);
    }
  }
  return t;
}

Json model_to_json(const PomdpModel& m) {
  Json j;
  j["version"] = kFormatVersion;
  j["X"] = m.X;
  j["Y"] = m.Y;
  j["A"] = m.A;
  j["R"] = m.R;
  j["T"] = tensor_to_json(m.T);
  j["O"] = matrix_to_json(m.O);
  j["Gamma"] = tensor_to_json(m.Gamma);
  j["reward_values"] = vector_to_json(m.reward_values);
  return j;
}

PomdpModel model_from_json(const Json& j) {
  check_version(j, "model");
  PomdpModel m;
  m.X = int_field(j, "X");
  m.Y = int_field(j, "Y");
  m.A = int_field(j, "A");
  m.R = int_field(j, "R");
  m.T = tensor_from_json(field(j, "T"), "T");
  m.O = matrix_from_json(field(j, "O"), "O");
  m.Gamma = tensor_from_json(field(j, "Gamma"), "Gamma");
  m.reward_values = vector_from_json(field(j, "reward_values"), "reward_values");
  return m;
}

Json policy_to_json(const MemorylessPolicy& p) {
  Json j;
  j["version"] = kFormatVersion;
  j["Y"] = p.Y();
  j["A"] = p.A();
  j["Pi"] = matrix_to_json(p.Pi);
  return j;
}

MemorylessPolicy policy_from_json(const Json& j) {
  check_version(j, "policy");
  MemorylessPolicy p{matrix_from_json(field(j, "Pi"), "Pi")};
  if (p.Y() != int_field(j, "Y") || p.A() != int_field(j, "A"))
    throw ValidationError("policy: Pi shape disagrees with Y, A");
  return p;
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  const bool hidden = traj.hidden_states && traj.hidden_states->size() == traj.steps.size();
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    const Step& s = traj.steps[t];
    out << "{\"t\":" << t << ",\"y\":" << s.y << ",\"a\":" << s.a << ",\"r\":" << s.r;
    if (hidden) out << ",\"x\":" << (*traj.hidden_states)[t];
    out << "}\n";
  }
}

Trajectory read_trajectory(std::istream& in) {
  Trajectory traj;
  std::vector<int> hidden;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ValidationError("trajectory line " + std::to_string(lineno) + ": " + e.what());
    }
    const int t = int_field(j, "t");
    if (t != static_cast<int>(traj.steps.size()))
      throw ValidationError("trajectory line " + std::to_string(lineno) + ": steps out of order");
    Step s{int_field(j, "y"), int_field(j, "a"), int_field(j, "r")};
    if (s.y < 0 || s.a < 0 || s.r < 0)
      throw ValidationError("trajectory line " + std::to_string(lineno) + ": negative index");
    traj.steps.push_back(s);
    if (j.contains("x")) hidden.push_back(int_field(j, "x"));
  }
  if (!hidden.empty()) {
    if (hidden.size() != traj.steps.size())
      throw ValidationError("trajectory: hidden state present on some lines only");
    traj.hidden_states = std::move(hidden);
  }
  return traj;
}

Json views_to_json(const ViewMatrices& v, const ViewEncoding& enc) {
  Json j;
  j["version"] = kFormatVersion;
  j["encoding_version"] = ViewEncoding::kVersion;
  j["encoding"] = {{"view1", "(k*Y+n)*R+m"}, {"view2", "n*R+m"}, {"view3", "n"},
                   {"Y", enc.Y}, {"A", enc.A}, {"R", enc.R}};
  j["action"] = v.action;
  j["dims"] = {{"d1", enc.d1()}, {"d2", enc.d2()}, {"d3", enc.d3()}, {"X", v.V3.cols()}};
  j["V1"] = matrix_to_json(v.V1);
  j["V2"] = matrix_to_json(v.V2);
  j["V3"] = matrix_to_json(v.V3);
  return j;
}

Json covariances_to_json(const CovarianceSet& c) {
  Json j;
  j["action"] = c.action;
  j["samples"] = c.samples;
  j["K12"] = matrix_to_json(c.K12);
  j["K21"] = matrix_to_json(c.K21);
  j["K31"] = matrix_to_json(c.K31);
  j["K13"] = matrix_to_json(c.K13);
  j["K32"] = matrix_to_json(c.K32);
  j["K23"] = matrix_to_json(c.K23);
  return j;
}

Json moments_to_json(const MomentPair& m) {
  Json j;
  j["version"] = kFormatVersion;
  j["action"] = m.action;
  j["samples"] = m.samples;
  j["d3"] = m.M2.rows();
  j["M2"] = matrix_to_json(m.M2);
  j["M3"] = tensor_to_json(m.M3);
  return j;
}

Json gaps_to_json(const ActionGaps& g) {
  return {{"action", g.action},
          {"sigma12", num(g.sigma12)},
          {"sigma13", num(g.sigma13)},
          {"sigma23", num(g.sigma23)},
          {"sigma31", num(g.sigma31())},
          {"sigma_min_V1", num(g.sigma_min_V1)},
          {"sigma_min_V2", num(g.sigma_min_V2)},
          {"sigma_min_V3", num(g.sigma_min_V3)},
          {"omega_min", num(g.omega_min)},
          {"pi_min", num(g.pi_min)}};
}

ActionGaps gaps_from_json(const Json& j) {
  ActionGaps g;
  g.action = int_field(j, "action");
  g.sigma12 = number(field(j, "sigma12"), "sigma12");
  g.sigma13 = number(field(j, "sigma13"), "sigma13");
  g.sigma23 = number(field(j, "sigma23"), "sigma23");
  g.sigma_min_V1 = number(field(j, "sigma_min_V1"), "sigma_min_V1");
  g.sigma_min_V2 = number(field(j, "sigma_min_V2"), "sigma_min_V2");
  g.sigma_min_V3 = number(field(j, "sigma_min_V3"), "sigma_min_V3");
  g.omega_min = number(field(j, "omega_min"), "omega_min");
  g.pi_min = number(field(j, "pi_min"), "pi_min");
  return g;
}

namespace {

Json options_to_json(const EstimatorOptions& o) {
  return {{"states", o.states},
          {"restarts", o.power.restarts},
          {"sweeps", o.power.sweeps},
          {"tol", o.power.tol},
          {"seed", o.power.seed},
          {"delta", o.delta},
          {"C_O", o.constants.C_O},
          {"C_R", o.constants.C_R},
          {"C_T", o.constants.C_T},
          {"G_override", opt(o.G_override)},
          {"theta_override", opt(o.theta_override)},
          {"Theta", o.Theta},
          {"enforce_sample_condition", o.enforce_sample_condition}};
}

EstimatorOptions options_from_json(const Json& j) {
  EstimatorOptions o;
  o.states = int_field(j, "states");
  o.power.restarts = int_field(j, "restarts");
  o.power.sweeps = int_field(j, "sweeps");
  o.power.tol = number(field(j, "tol"), "tol");
  o.power.seed = field(j, "seed").get<std::uint64_t>();
  o.delta = number(field(j, "delta"), "delta");
  o.constants = {number(field(j, "C_O"), "C_O"), number(field(j, "C_R"), "C_R"),
                 number(field(j, "C_T"), "C_T")};
  o.G_override = opt_number(j, "G_override");
  o.theta_override = opt_number(j, "theta_override");
  o.Theta = number(field(j, "Theta"), "Theta");
  o.enforce_sample_condition = field(j, "enforce_sample_condition").get<bool>();
  return o;
}

Json action_to_json(const ActionReport& a, const std::string& gap_mode, double sigma_min_O,
                    const EstimatorOptions& o, int X, int Y, int R) {
  Json j;
  j["action"] = a.action;
  j["samples"] = a.samples;
  j["status"] = to_string(a.status);
  j["failure"] = a.failure;
  if (a.gaps) {
    j["gaps"] = gaps_to_json(*a.gaps);
    j["gaps"]["mode"] = gap_mode;
  } else {
    j["gaps"] = nullptr;
  }
  if (a.lambda) {
    j["lambda"] = num(*a.lambda);
    j["lambda_inputs"] = {{"sigma_min_O", num(sigma_min_O)},
                          {"pi_min", a.gaps ? num(a.gaps->pi_min) : Json(nullptr)},
                          {"sigma13", a.gaps ? num(a.gaps->sigma13) : Json(nullptr)},
                          {"omega_min", a.gaps ? num(a.gaps->omega_min) : Json(nullptr)},
                          {"min_view_sigma_sq", a.gaps ? num(a.gaps->min_view_sigma_sq()) : Json(nullptr)}};
  } else {
    j["lambda"] = nullptr;
  }
  if (a.bounds) {
    j["bounds"] = {{"B_O", num(a.bounds->B_O)},
                   {"B_R", num(a.bounds->B_R)},
                   {"B_T", num(a.bounds->B_T)},
                   {"inputs",
                    {{"N", a.samples}, {"delta", o.delta}, {"X", X}, {"Y", Y}, {"R", R},
                     {"C_O", o.constants.C_O}, {"C_R", o.constants.C_R}, {"C_T", o.constants.C_T}}}};
  } else {
    j["bounds"] = nullptr;
  }
  if (a.threshold) {
    j["sample_size_threshold"] = {{"spectral_branch", num(a.threshold->spectral_branch)},
                                  {"separation_branch", num(a.threshold->separation_branch)},
                                  {"mixing_branch", num(a.threshold->mixing_branch)},
                                  {"log_factor", num(a.threshold->log_factor)},
                                  {"value", num(a.threshold->value)},
                                  {"Theta", o.Theta},
                                  {"Theta_note", "Theta is a caller-supplied constant (default 1.0); "
                                                 "the threshold scale is not calibrated"}};
  } else {
    j["sample_size_threshold"] = nullptr;
  }
  j["weights"] = vector_to_json(a.weights);
  j["whitening_eigenvalues"] = vector_to_json(a.whitening_eigenvalues);
  Json comps = Json::array();
  for (const ComponentDiagnostics& c : a.components)
    comps.push_back({{"lambda", num(c.lambda)},
                     {"restarts", c.restarts},
                     {"restarts_converged", c.restarts_converged},
                     {"best_restart", c.best_restart},
                     {"iterations", c.iterations},
                     {"final_step", num(c.final_step)},
                     {"sign_flipped", c.sign_flipped}});
  j["components"] = comps;
  j["deflation_residual"] = num(a.deflation_residual);
  j["flags"] = a.flags;
  return j;
}

ActionReport action_from_json(const Json& j) {
  ActionReport a;
  a.action = int_field(j, "action");
  a.samples = field(j, "samples").get<std::size_t>();
  a.status = action_status_from_string(field(j, "status").get<std::string>());
  a.failure = field(j, "failure").get<std::string>();
  if (!field(j, "gaps").is_null()) a.gaps = gaps_from_json(j["gaps"]);
  a.lambda = opt_number(j, "lambda");
  if (!field(j, "bounds").is_null()) {
    const Json& b = j["bounds"];
    a.bounds = ConfidenceBounds{number(field(b, "B_O"), "B_O"), number(field(b, "B_R"), "B_R"),
                                number(field(b, "B_T"), "B_T")};
  }
  if (!field(j, "sample_size_threshold").is_null()) {
    const Json& s = j["sample_size_threshold"];
    a.threshold = SampleSizeThreshold{
        number(field(s, "spectral_branch"), "spectral_branch"),
        number(field(s, "separation_branch"), "separation_branch"),
        number(field(s, "mixing_branch"), "mixing_branch"),
        number(field(s, "log_factor"), "log_factor"), number(field(s, "value"), "value")};
  }
  a.weights = vector_from_json(field(j, "weights"), "weights");
  a.whitening_eigenvalues = vector_from_json(field(j, "whitening_eigenvalues"), "whitening_eigenvalues");
  for (const Json& c : field(j, "components")) {
    ComponentDiagnostics d;
    d.lambda = number(field(c, "lambda"), "lambda");
    d.restarts = int_field(c, "restarts");
    d.restarts_converged = int_field(c, "restarts_converged");
    d.best_restart = int_field(c, "best_restart");
    d.iterations = int_field(c, "iterations");
    d.final_step = number(field(c, "final_step"), "final_step");
    d.sign_flipped = field(c, "sign_flipped").get<bool>();
    a.components.push_back(d);
  }
  a.deflation_residual = number(field(j, "deflation_residual"), "deflation_residual");
  a.flags = field(j, "flags").get<std::vector<std::string>>();
  return a;
}

}  // namespace

Json result_to_json(const EstimationResult& r) {
  const PomdpEstimate& e = r.estimate;
  Json j;
  j["version"] = kFormatVersion;
  j["mode"] = r.mode;
  j["ok"] = r.ok();
  j["inputs"] = options_to_json(r.options);
  j["model"] = model_to_json(e.as_model());
  j["T_raw"] = tensor_to_json(e.T_raw);
  j["reference_action"] = e.reference_action;
  j["permutations"] = e.permutations;
  j["failed_actions"] = e.failed_actions;
  Json obs = Json::array();
  for (const auto& o : e.action_observations) obs.push_back(o ? matrix_to_json(*o) : Json(nullptr));
  j["action_observations"] = obs;
  j["gaps"] = {{"mode", r.gaps.mode}, {"sigma_min_O", num(r.gaps.sigma_min_O)}, {"d_O", opt(r.gaps.d_O)}};
  j["contraction"] = {{"G", num(r.contraction.G)},
                      {"theta", num(r.contraction.theta)},
                      {"contracts", r.contraction.contracts},
                      {"overridden", r.contraction.overridden},
                      {"warning", r.contraction.warning}};
  Json actions = Json::array();
  for (const ActionReport& a : r.actions)
    actions.push_back(action_to_json(a, r.gaps.mode, r.gaps.sigma_min_O, r.options, e.X, e.Y, e.R));
  j["actions"] = actions;
  j["warnings"] = r.warnings;
  return j;
}

EstimationResult result_from_json(const Json& j) {
  check_version(j, "estimate report");
  EstimationResult r;
  r.mode = field(j, "mode").get<std::string>();
  r.options = options_from_json(field(j, "inputs"));
  const PomdpModel m = model_from_json(field(j, "model"));
  PomdpEstimate& e = r.estimate;
  e.X = m.X;
  e.Y = m.Y;
  e.A = m.A;
  e.R = m.R;
  e.O = m.O;
  e.Gamma = m.Gamma;
  e.T = m.T;
  e.reward_values = m.reward_values;
  e.T_raw = tensor_from_json(field(j, "T_raw"), "T_raw");
  e.reference_action = int_field(j, "reference_action");
  e.permutations = field(j, "permutations").get<std::vector<std::vector<int>>>();
  e.failed_actions = field(j, "failed_actions").get<std::vector<int>>();
  for (const Json& o : field(j, "action_observations"))
    e.action_observations.push_back(o.is_null() ? std::nullopt
                                                : std::optional<Matrix>(matrix_from_json(o, "action_observations")));
  const Json& g = field(j, "gaps");
  r.gaps.mode = field(g, "mode").get<std::string>();
  r.gaps.sigma_min_O = number(field(g, "sigma_min_O"), "sigma_min_O");
  r.gaps.d_O = opt_number(g, "d_O");
  const Json& c = field(j, "contraction");
  r.contraction.G = number(field(c, "G"), "G");
  r.contraction.theta = number(field(c, "theta"), "theta");
  r.contraction.contracts = field(c, "contracts").get<bool>();
  r.contraction.overridden = field(c, "overridden").get<bool>();
  r.contraction.warning = field(c, "warning").get<std::string>();
  for (const Json& a : field(j, "actions")) {
    r.actions.push_back(action_from_json(a));
    if (r.actions.back().gaps) r.gaps.actions.push_back(*r.actions.back().gaps);
  }
  r.warnings = field(j, "warnings").get<std::vector<std::string>>();
  return r;
}

void write_error_csv(std::ostream& out, const ErrorReport& report) {
  out << "state,action,err_O_l1,err_R_l1,err_T_l2\n";
  out << std::setprecision(17);
  for (const ErrorRow& row : report.rows)
    out << row.state << ',' << row.action << ',' << row.err_O << ',' << row.err_R << ',' << row.err_T
        << '\n';
}

Json errors_to_json(const ErrorReport& report) {
  Json rows = Json::array();
  for (const ErrorRow& row : report.rows)
    rows.push_back({{"state", row.state}, {"action", row.action}, {"err_O_l1", num(row.err_O)},
                    {"err_R_l1", num(row.err_R)}, {"err_T_l2", num(row.err_T)}});
  auto vec = [](const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(num(x));
    return a;
  };
  return {{"permutation", report.permutation},
          {"max_err_O", num(report.max_err_O)},
          {"max_err_R", num(report.max_err_R)},
          {"max_err_T", num(report.max_err_T)},
          {"action_max_err_O", vec(report.action_max_err_O)},
          {"action_max_err_R", vec(report.action_max_err_R)},
          {"action_max_err_T", vec(report.action_max_err_T)},
          {"rows", rows}};
}

Json oracle_bundle(const PomdpModel& model, const MemorylessPolicy& policy) {
  const auto issues = validate_model(model);
  if (!issues.empty()) throw ValidationError("invalid model: " + issues.front());
  const auto pissues = validate_policy(policy);
  if (!pissues.empty()) throw ValidationError("invalid policy: " + pissues.front());
  check_compatible(model, policy);

  const MarkovChain chain = induced_chain(model, policy);
  const ViewEncoding enc = encoding_for(model);
  Json j;
  j["version"] = kFormatVersion;
  j["X"] = model.X;
  j["Y"] = model.Y;
  j["A"] = model.A;
  j["R"] = model.R;
  j["P"] = matrix_to_json(chain.P);
  j["omega"] = vector_to_json(stationary_distribution(chain));
  j["sigma_min_O"] = num(kth_singular_value(model.O, model.X));
  j["d_O"] = model.X >= 2 ? num(separability(model.O)) : Json(nullptr);
  std::optional<SpectralGaps> gaps;
  try {
    gaps = compute_gaps(model, policy);
  } catch (const DegenerateError& e) {
    j["gap_warning"] = e.what();
  }
  Json actions = Json::array();
  for (int l = 0; l < model.A; ++l) {
    Json a;
    a["action"] = l;
    a["probability"] = num(action_probability(model, policy, l));
    const Vector w = action_conditional_distribution(model, policy, l);
    a["omega_l"] = vector_to_json(w);
    const ViewMatrices views = view_matrices_unchecked(model, policy, l);
    a["views"] = views_to_json(views, enc);
    CovarianceSet cov = covariances_from_views(views, w);
    cov.action = l;
    a["covariances"] = covariances_to_json(cov);
    MomentPair mom = moments_from_components(views.V3, w);
    mom.action = l;
    a["moments"] = moments_to_json(mom);
    if (gaps) {
      a["gaps"] = gaps_to_json(gaps->actions[l]);
      a["gaps"]["mode"] = "oracle";
      a["lambda"] = num(compute_lambda(*gaps, l));
    } else {
      a["gaps"] = nullptr;
      a["lambda"] = nullptr;
    }
    actions.push_back(std::move(a));
  }
  j["actions"] = actions;
  return j;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read error on '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write error on '" + path.string() + "'");
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

PomdpModel load_model(const std::filesystem::path& path) {
  try {
    return model_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    throw ValidationError("model '" + path.string() + "': " + e.what());
  }
}

MemorylessPolicy load_policy(const std::filesystem::path& path) {
  try {
    return policy_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    throw ValidationError("policy '" + path.string() + "': " + e.what());
  }
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  try {
    return read_trajectory(in);
  } catch (const Json::exception& e) {
    throw ValidationError("trajectory '" + path.string() + "': " + e.what());
  }
}

void save_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  std::ostringstream out;
  write_trajectory(out, traj);
  write_text_file(path, out.str());
}

}  // namespace spomdp::io
