#include "rgdc/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "rgdc/discretize.hpp"
#include "rgdc/errors.hpp"
#include "rgdc/format.hpp"
#include "rgdc/governor.hpp"

namespace rgdc::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

const json& require_field(const json& j, const std::string& key,
                          const std::string& ctx) {
  const auto it = j.find(key);
  if (it == j.end())
    throw ConfigError("config: missing field '" + ctx + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& ctx) {
  if (!j.is_number())
    throw ConfigError("config: field '" + ctx + "' must be a number");
  return j.get<double>();
}

long as_count(const json& j, const std::string& ctx) {
  if (!j.is_number_integer())
    throw ConfigError("config: field '" + ctx + "' must be an integer");
  return j.get<long>();
}

Matrix parse_matrix(const json& j, const std::string& ctx) {
  if (!j.is_array())
    throw ConfigError("config: field '" + ctx + "' must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  if (!j[0].is_array())
    throw ConfigError("config: field '" + ctx + "' rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ConfigError("config: field '" + ctx + "' must be rectangular");
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = as_number(row[static_cast<std::size_t>(k)], ctx);
  }
  return m;
}

Vector parse_vector(const json& j, const std::string& ctx) {
  if (!j.is_array())
    throw ConfigError("config: field '" + ctx + "' must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = as_number(j[static_cast<std::size_t>(i)], ctx);
  return v;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

simkit::ReferenceSignal parse_reference(const json& j) {
  const std::string kind =
      require_field(j, "kind", "reference.").get<std::string>();
  if (kind == "constant")
    return simkit::ReferenceSignal::constant(
        as_number(require_field(j, "level", "reference."), "reference.level"));
  if (kind == "step_sequence") {
    const json& steps = require_field(j, "steps", "reference.");
    if (!steps.is_array())
      throw ConfigError("config: reference.steps must be an array");
    std::vector<std::pair<double, double>> parsed;
    for (const auto& entry : steps) {
      if (!entry.is_array() || entry.size() != 2)
        throw ConfigError(
            "config: reference.steps entries must be [time, level] pairs");
      parsed.emplace_back(as_number(entry[0], "reference.steps"),
                          as_number(entry[1], "reference.steps"));
    }
    return simkit::ReferenceSignal::step_sequence(std::move(parsed));
  }
  if (kind == "sinusoid")
    return simkit::ReferenceSignal::sinusoid(
        as_number(require_field(j, "amplitude", "reference."),
                  "reference.amplitude"),
        as_number(require_field(j, "frequency", "reference."),
                  "reference.frequency"));
  throw ConfigError("config: unknown reference kind '" + kind + "'");
}

json reference_to_json(const simkit::ReferenceSignal& ref) {
  json j;
  switch (ref.kind) {
    case simkit::ReferenceSignal::Kind::constant:
      j["kind"] = "constant";
      j["level"] = ref.amplitude;
      break;
    case simkit::ReferenceSignal::Kind::step_sequence: {
      j["kind"] = "step_sequence";
      json steps = json::array();
      for (const auto& [t, lvl] : ref.steps)
        steps.push_back(json::array({t, lvl}));
      j["steps"] = std::move(steps);
      break;
    }
    case simkit::ReferenceSignal::Kind::sinusoid:
      j["kind"] = "sinusoid";
      j["amplitude"] = ref.amplitude;
      j["frequency"] = ref.frequency;
      break;
  }
  return j;
}

Scenario parse_scenario(const json& j, const std::string& default_name) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  Scenario sc;
  sc.name = j.value("name", default_name);
  sc.experiment = j.value("experiment", std::string("simulate"));
  if (j.contains("epsilon"))
    sc.epsilon = as_number(j.at("epsilon"), "epsilon");
  if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
  sc.output_dir = j.value("output_dir", std::string());

  const json& sys = require_field(j, "system", "");
  const int forms = static_cast<int>(sys.contains("pll")) +
                    static_cast<int>(sys.contains("continuous")) +
                    static_cast<int>(sys.contains("discrete"));
  if (forms != 1)
    throw ConfigError(
        "config: system must contain exactly one of pll, continuous, "
        "discrete");
  if (sys.contains("pll")) {
    sc.form = Scenario::SystemForm::pll;
    const json& p = sys.at("pll");
    sc.pll_G_lp = p.contains("G_lp") ? as_number(p.at("G_lp"), "system.pll.G_lp")
                                     : 100.0;
    sc.pll_G_VCO = p.contains("G_VCO")
                       ? as_number(p.at("G_VCO"), "system.pll.G_VCO")
                       : 200.0;
    sc.Ts = p.contains("Ts") ? as_number(p.at("Ts"), "system.pll.Ts") : 1e-4;
  } else {
    const bool cont = sys.contains("continuous");
    sc.form = cont ? Scenario::SystemForm::continuous
                   : Scenario::SystemForm::discrete;
    const std::string key = cont ? "continuous" : "discrete";
    const std::string ctx = "system." + key + ".";
    const json& m = sys.at(key);
    sc.A = parse_matrix(require_field(m, "A", ctx), ctx + "A");
    sc.B = parse_matrix(require_field(m, "B", ctx), ctx + "B");
    sc.C_tr = parse_matrix(require_field(m, "C_tr", ctx), ctx + "C_tr");
    if (m.contains("C_st")) sc.C_st = parse_matrix(m.at("C_st"), ctx + "C_st");
    if (m.contains("D_st")) sc.D_st = parse_matrix(m.at("D_st"), ctx + "D_st");
    sc.Ts = as_number(require_field(m, "Ts", ctx), ctx + "Ts");
  }

  if (j.contains("constraints")) {
    const json& c = j.at("constraints");
    sc.constraints.S =
        parse_matrix(require_field(c, "S", "constraints."), "constraints.S");
    sc.constraints.s =
        parse_vector(require_field(c, "s", "constraints."), "constraints.s");
    sc.has_constraints = true;
  }

  if (j.contains("reference")) sc.reference = parse_reference(j.at("reference"));
  if (j.contains("x0")) sc.x0 = parse_vector(j.at("x0"), "x0");
  if (j.contains("v0") && !j.at("v0").is_null())
    sc.v0 = as_number(j.at("v0"), "v0");
  if (j.contains("horizon")) sc.horizon = as_count(j.at("horizon"), "horizon");

  if (j.contains("bode")) {
    const json& b = j.at("bode");
    if (b.contains("points")) sc.bode.points = as_count(b.at("points"), "bode.points");
    if (b.contains("omega_min"))
      sc.bode.omega_min = as_number(b.at("omega_min"), "bode.omega_min");
    if (b.contains("omega_max"))
      sc.bode.omega_max = as_number(b.at("omega_max"), "bode.omega_max");
    if (b.contains("amplitude"))
      sc.bode.amplitude = as_number(b.at("amplitude"), "bode.amplitude");
    if (b.contains("periods"))
      sc.bode.periods = as_count(b.at("periods"), "bode.periods");
  }

  if (j.contains("converge")) {
    const json& c = j.at("converge");
    if (c.contains("runs")) sc.converge.runs = as_count(c.at("runs"), "converge.runs");
    if (c.contains("omega"))
      sc.converge.omega = as_number(c.at("omega"), "converge.omega");
    if (c.contains("horizon"))
      sc.converge.horizon = as_count(c.at("horizon"), "converge.horizon");
    if (c.contains("x_min")) sc.converge.x_min = parse_vector(c.at("x_min"), "converge.x_min");
    if (c.contains("x_max")) sc.converge.x_max = parse_vector(c.at("x_max"), "converge.x_max");
    if (c.contains("v_min"))
      sc.converge.v_min = as_number(c.at("v_min"), "converge.v_min");
    if (c.contains("v_max"))
      sc.converge.v_max = as_number(c.at("v_max"), "converge.v_max");
  }

  if (j.contains("uncertainty")) {
    const json& u = j.at("uncertainty");
    sc.gvco_min = as_number(require_field(u, "G_VCO_min", "uncertainty."),
                            "uncertainty.G_VCO_min");
    sc.gvco_max = as_number(require_field(u, "G_VCO_max", "uncertainty."),
                            "uncertainty.G_VCO_max");
    sc.has_uncertainty = true;
  }

  if (sc.output_dir.empty()) sc.output_dir = "out/" + sc.name;
  return sc;
}

json scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["experiment"] = sc.experiment;
  j["epsilon"] = sc.epsilon;
  j["seed"] = sc.seed;
  j["output_dir"] = sc.output_dir;
  switch (sc.form) {
    case Scenario::SystemForm::pll:
      j["system"]["pll"] = {
          {"G_lp", sc.pll_G_lp}, {"G_VCO", sc.pll_G_VCO}, {"Ts", sc.Ts}};
      break;
    case Scenario::SystemForm::continuous:
    case Scenario::SystemForm::discrete: {
      json m;
      m["A"] = matrix_to_json(sc.A);
      m["B"] = matrix_to_json(sc.B);
      m["C_tr"] = matrix_to_json(sc.C_tr);
      if (sc.C_st.size() > 0) m["C_st"] = matrix_to_json(sc.C_st);
      if (sc.D_st.size() > 0) m["D_st"] = matrix_to_json(sc.D_st);
      m["Ts"] = sc.Ts;
      j["system"][sc.form == Scenario::SystemForm::continuous ? "continuous"
                                                              : "discrete"] =
          std::move(m);
      break;
    }
  }
  if (sc.has_constraints) {
    j["constraints"]["S"] = matrix_to_json(sc.constraints.S);
    j["constraints"]["s"] = vector_to_json(sc.constraints.s);
  }
  j["reference"] = reference_to_json(sc.reference);
  if (sc.x0.size() > 0) j["x0"] = vector_to_json(sc.x0);
  if (sc.v0) j["v0"] = *sc.v0;
  j["horizon"] = sc.horizon;
  j["bode"] = {{"points", sc.bode.points},
               {"omega_min", sc.bode.omega_min},
               {"omega_max", sc.bode.omega_max},
               {"amplitude", sc.bode.amplitude},
               {"periods", sc.bode.periods}};
  j["converge"] = {{"runs", sc.converge.runs},
                   {"omega", sc.converge.omega},
                   {"horizon", sc.converge.horizon},
                   {"v_min", sc.converge.v_min},
                   {"v_max", sc.converge.v_max}};
  if (sc.converge.x_min.size() > 0)
    j["converge"]["x_min"] = vector_to_json(sc.converge.x_min);
  if (sc.converge.x_max.size() > 0)
    j["converge"]["x_max"] = vector_to_json(sc.converge.x_max);
  if (sc.has_uncertainty)
    j["uncertainty"] = {{"G_VCO_min", sc.gvco_min},
                        {"G_VCO_max", sc.gvco_max}};
  return j;
}

void flatten_json(const json& j, const std::string& prefix,
                  std::vector<std::string>& lines) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      const std::string next = prefix.empty() ? key : prefix + "." + key;
      flatten_json(value, next, lines);
    }
    return;
  }
  lines.push_back(prefix + " = " + j.dump());
}

json manifest_to_json(std::istream& in) {
  json root = json::object();
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto pos = stripped.find('=');
    if (pos == std::string::npos)
      throw ConfigError("manifest line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, pos));
    const std::string value = trim(stripped.substr(pos + 1));
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::exception& e) {
      throw ConfigError("manifest line " + std::to_string(lineno) + ": " +
                        e.what());
    }
    json* node = &root;
    std::size_t start = 0;
    while (true) {
      const auto dot = key.find('.', start);
      if (dot == std::string::npos) {
        (*node)[key.substr(start)] = std::move(parsed);
        break;
      }
      node = &(*node)[key.substr(start, dot - start)];
      start = dot + 1;
    }
  }
  return root;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << f.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  const std::string default_name = fs::path(path).stem().string();
  json j;
  if (first != std::string::npos && text[first] == '{') {
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError("config parse error in " + path + ": " + e.what());
    }
  } else {
    std::istringstream in(text);
    j = manifest_to_json(in);
  }
  return parse_scenario(j, default_name);
}

std::string scenario_manifest(const Scenario& sc) {
  std::vector<std::string> lines;
  flatten_json(scenario_to_json(sc), "", lines);
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

Scenario::RawDiscrete Scenario::raw_discrete() const {
  RawDiscrete raw;
  raw.Ts = Ts;
  switch (form) {
    case SystemForm::pll: {
      Matrix A_cont(2, 2);
      A_cont << 0.0, 1.0, -pll_G_lp * pll_G_VCO, -pll_G_lp;
      Matrix B_cont(2, 1);
      B_cont << 0.0, pll_G_lp * pll_G_VCO;
      std::tie(raw.A, raw.B) = numerics::zoh_discretize(A_cont, B_cont, Ts);
      raw.C_tr.resize(1, 2);
      raw.C_tr << 1.0, 0.0;
      raw.C_st.resize(1, 2);
      raw.C_st << 0.0, 1.0;
      raw.D_st = Matrix::Zero(1, 1);
      break;
    }
    case SystemForm::continuous:
      std::tie(raw.A, raw.B) = numerics::zoh_discretize(A, B, Ts);
      raw.C_tr = C_tr;
      raw.C_st = C_st;
      raw.D_st = D_st;
      break;
    case SystemForm::discrete:
      raw.A = A;
      raw.B = B;
      raw.C_tr = C_tr;
      raw.C_st = C_st;
      raw.D_st = D_st;
      break;
  }
  const Eigen::Index n = raw.A.cols();
  if (raw.C_st.size() == 0) raw.C_st = Matrix(0, n);
  if (raw.D_st.size() == 0) raw.D_st = Matrix(raw.C_st.rows(), 1);
  return raw;
}

mas::DiscreteLtiSystem Scenario::build_system() const {
  RawDiscrete raw = raw_discrete();
  return mas::DiscreteLtiSystem(std::move(raw.A), std::move(raw.B),
                                std::move(raw.C_tr), std::move(raw.C_st),
                                std::move(raw.D_st), raw.Ts);
}

Vector Scenario::resolved_x0(const mas::DiscreteLtiSystem& sys) const {
  if (x0.size() == 0) return Vector::Zero(sys.order());
  if (x0.size() != sys.order())
    throw ConfigError("config: x0 dimension does not match the system order");
  return x0;
}

double Scenario::resolved_v0(const mas::DiscreteLtiSystem& sys) const {
  if (v0) return *v0;
  return (sys.C_tr * resolved_x0(sys))(0, 0);
}

namespace {

governor::GovernorState make_state(const Scenario& sc,
                                   const mas::DiscreteLtiSystem& sys) {
  governor::GovernorState st;
  st.pair = mas::build_dynamic_mas_pair(sys, sc.epsilon);
  if (sc.has_constraints)
    st.static_mas = mas::build_static_mas(sys, sc.constraints, sc.epsilon);
  st.epsilon = sc.epsilon;
  st.v_prev = sc.resolved_v0(sys);
  return st;
}

std::string out_path(const Scenario& sc, const std::string& suffix) {
  return (fs::path(sc.output_dir) / (sc.experiment + "_" + sc.name + suffix))
      .string();
}

void print_rep_summary(const std::string& label,
                       const mas::MasRepresentation& rep) {
  std::cout << label << ": admissibility index " << rep.admissibility_index
            << ", " << rep.rows() << " rows\n";
}

void run_mas(const Scenario& sc) {
  const auto sys = sc.build_system();
  const auto pair = mas::build_dynamic_mas_pair(sys, sc.epsilon);
  mas::write_mas_csv(pair.rep_minus, out_path(sc, "_minus.csv"));
  mas::write_mas_csv(pair.rep_plus, out_path(sc, "_plus.csv"));
  print_rep_summary("dynamic MAS (minus)", pair.rep_minus);
  print_rep_summary("dynamic MAS (plus)", pair.rep_plus);
  if (sc.has_constraints) {
    const auto st = mas::build_static_mas(sys, sc.constraints, sc.epsilon);
    mas::write_mas_csv(st, out_path(sc, ".csv"));
    print_rep_summary("static MAS", st);
  } else {
    mas::write_mas_csv(pair.rep_minus, out_path(sc, ".csv"));
  }
}

void run_simulate(const Scenario& sc) {
  const auto sys = sc.build_system();
  auto state = make_state(sc, sys);
  const Vector x0 = sc.resolved_x0(sys);
  const auto governed =
      simkit::simulate(sys, state, sc.reference, x0, sc.horizon);
  simkit::write_trace_csv(governed, out_path(sc, ".csv"));
  const auto linear =
      simkit::simulate_linear(sys, sc.reference, x0, sc.horizon);
  simkit::write_trace_csv(linear, out_path(sc, "_linear.csv"));
  const double r_final = governed.r.back();
  std::cout << "governed overshoot: "
            << simkit::overshoot_metric(governed, r_final)
            << "\nungoverned overshoot: "
            << simkit::overshoot_metric(linear, r_final) << "\n";
}

void run_multistep(const Scenario& sc) {
  if (sc.reference.kind != simkit::ReferenceSignal::Kind::step_sequence)
    throw ConfigError("multistep experiment needs a step_sequence reference");
  const auto sys = sc.build_system();
  auto state = make_state(sc, sys);
  const auto trace = simkit::multi_step_experiment(sys, state,
                                                   sc.reference.steps,
                                                   sc.horizon);
  simkit::write_trace_csv(trace, out_path(sc, ".csv"));
  long infeasible = 0;
  for (const auto f : trace.feasible)
    if (!f) ++infeasible;
  std::cout << "infeasible samples: " << infeasible
            << "\nfinal applied reference: " << detail::g17(trace.v.back())
            << "\n";
}

void run_bode(const Scenario& sc) {
  const auto sys = sc.build_system();
  const auto state = make_state(sc, sys);
  const auto omegas =
      simkit::log_spaced(sc.bode.points, sc.bode.omega_min, sc.bode.omega_max);
  const auto governed = simkit::nonlinear_bode(sys, state, omegas,
                                               sc.bode.amplitude,
                                               sc.bode.periods);
  simkit::write_bode_csv(governed, out_path(sc, ".csv"));
  const auto linear =
      simkit::bode_linear(sys, omegas, sc.bode.amplitude, sc.bode.periods);
  simkit::write_bode_csv(linear, out_path(sc, "_linear.csv"));
  const auto peak = [](const std::vector<simkit::BodePoint>& pts) {
    double best = -1e300;
    for (const auto& pt : pts) best = std::max(best, pt.magnitude_db);
    return best;
  };
  std::cout << "governed peak: " << peak(governed)
            << " dB\nungoverned peak: " << peak(linear) << " dB\n";
}

void run_converge(const Scenario& sc) {
  const auto sys = sc.build_system();
  const auto state = make_state(sc, sys);
  simkit::InitialConditionRanges ranges;
  ranges.x_min = sc.converge.x_min;
  ranges.x_max = sc.converge.x_max;
  if (ranges.x_min.size() == 0 && sys.order() == 2) {
    ranges.x_min = Vector(2);
    ranges.x_min << -2.0, -200.0;
    ranges.x_max = Vector(2);
    ranges.x_max << 2.0, 200.0;
  }
  if (ranges.x_min.size() != sys.order() ||
      ranges.x_max.size() != sys.order())
    throw ConfigError(
        "config: converge.x_min/x_max must match the system order");
  ranges.v_min = sc.converge.v_min;
  ranges.v_max = sc.converge.v_max;
  const auto traces = simkit::convergence_experiment(
      sys, state, sc.converge.runs, ranges, sc.converge.omega, sc.seed,
      sc.converge.horizon);
  std::ofstream summary(out_path(sc, ".csv"));
  if (!summary)
    throw ConfigError("cannot open output file: " + out_path(sc, ".csv"));
  summary << "run,y_tr_first,v_first,y_tr_last,v_last\n";
  for (std::size_t i = 0; i < traces.size(); ++i)
    summary << i << ',' << detail::g17(traces[i].y_tr.front()) << ','
            << detail::g17(traces[i].v.front()) << ','
            << detail::g17(traces[i].y_tr.back()) << ','
            << detail::g17(traces[i].v.back()) << '\n';
  for (std::size_t i = 0; i < traces.size() && i < 3; ++i)
    simkit::write_trace_csv(
        traces[i], out_path(sc, "_run" + std::to_string(i + 1) + ".csv"));
  std::cout << "final-window spread: "
            << detail::g17(simkit::final_window_spread(traces)) << "\n";
}

void run_robust(const Scenario& sc) {
  if (sc.form != Scenario::SystemForm::pll || !sc.has_uncertainty)
    throw ConfigError(
        "robust experiment needs the pll system form and an uncertainty "
        "block");
  const auto sys = sc.build_system();
  std::vector<mas::DiscreteLtiSystem> vertices;
  vertices.push_back(mas::make_pll(sc.pll_G_lp, sc.gvco_min, sc.Ts));
  vertices.push_back(mas::make_pll(sc.pll_G_lp, sc.gvco_max, sc.Ts));
  const mas::UncertainSystem usys(vertices, 0);

  const auto robust_pair =
      mas::build_robust_dynamic_mas_pair(usys, sc.epsilon);
  const auto nominal_pair = mas::build_dynamic_mas_pair(sys, sc.epsilon);
  mas::write_mas_csv(robust_pair.rep_minus, out_path(sc, ".csv"));
  mas::write_mas_csv(robust_pair.rep_plus, out_path(sc, "_plus.csv"));
  mas::write_mas_csv(nominal_pair.rep_minus, out_path(sc, "_nominal.csv"));
  print_rep_summary("robust MAS (minus)", robust_pair.rep_minus);
  print_rep_summary("robust MAS (plus)", robust_pair.rep_plus);
  print_rep_summary("nominal MAS (minus)", nominal_pair.rep_minus);

  bool contained = true;
  const auto& nom = nominal_pair.rep_minus;
  for (Eigen::Index i = 0; i < nom.rows() && contained; ++i) {
    Vector coeffs(nom.order() + 1);
    coeffs.head(nom.order()) = nom.H_x.row(i);
    coeffs(nom.order()) = nom.H_v(i);
    if (!mas::is_redundant(robust_pair.rep_minus, coeffs, nom.h(i)))
      contained = false;
  }
  std::cout << "robust set contained in nominal: "
            << (contained ? "yes" : "no") << "\n";

  governor::GovernorState proto;
  proto.pair = robust_pair;
  if (sc.has_constraints)
    proto.static_mas = mas::build_robust_mas_polytopic(
        usys, sc.constraints, mas::OutputChannel::static_outputs, sc.epsilon);
  proto.epsilon = sc.epsilon;
  for (std::size_t k = 0; k < usys.vertex_systems.size(); ++k) {
    const auto& plant = usys.vertex_systems[k];
    governor::GovernorState st = proto;
    st.v_prev = 0.0;
    const auto trace = simkit::simulate(plant, st, sc.reference,
                                        Vector::Zero(plant.order()),
                                        sc.horizon);
    simkit::write_trace_csv(
        trace,
        out_path(sc, "_trace_vertex" + std::to_string(k + 1) + ".csv"));
    double max_y = -1e300, max_slew = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      max_y = std::max(max_y, trace.y_tr[i]);
      if (trace.p > 0)
        max_slew = std::max(max_slew,
                            std::abs(trace.y_st[i * static_cast<std::size_t>(
                                                        trace.p)]));
    }
    std::cout << "vertex " << (k + 1)
              << ": max y_tr = " << detail::g17(max_y)
              << ", max |y_st_1| = " << detail::g17(max_slew) << "\n";
  }
}

}  // namespace

int run(const std::string& config_path, const std::string& experiment,
        const RunOverrides& overrides) {
  try {
    Scenario sc = load_scenario(config_path);
    sc.experiment = experiment;
    if (overrides.output_dir) sc.output_dir = *overrides.output_dir;
    if (overrides.epsilon) sc.epsilon = *overrides.epsilon;
    if (overrides.seed) sc.seed = *overrides.seed;
    fs::create_directories(sc.output_dir);
    {
      const auto manifest_path =
          (fs::path(sc.output_dir) / "run_manifest.txt").string();
      std::ofstream mf(manifest_path);
      if (!mf) throw ConfigError("cannot open output file: " + manifest_path);
      mf << scenario_manifest(sc);
    }
    if (experiment == "mas")
      run_mas(sc);
    else if (experiment == "simulate")
      run_simulate(sc);
    else if (experiment == "multistep")
      run_multistep(sc);
    else if (experiment == "bode")
      run_bode(sc);
    else if (experiment == "robust")
      run_robust(sc);
    else if (experiment == "converge")
      run_converge(sc);
    else
      throw ConfigError("unknown experiment: " + experiment);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int validate(const std::string& config_path,
             std::optional<double> epsilon_override) {
  try {
    Scenario sc = load_scenario(config_path);
    if (epsilon_override) sc.epsilon = *epsilon_override;
    const auto raw = sc.raw_discrete();
    bool ok = true;

    bool stable = false;
    double rho = std::numeric_limits<double>::quiet_NaN();
    if (raw.A.rows() == raw.A.cols() && raw.A.rows() > 0 && raw.A.allFinite()) {
      rho = raw.A.eigenvalues().cwiseAbs().maxCoeff();
      stable = rho < 1.0;
    }
    std::cout << "stability: " << (stable ? "pass" : "fail")
              << " (spectral radius " << detail::g17(rho) << ")\n";
    ok = ok && stable;

    bool unit_gain = false;
    double dc = std::numeric_limits<double>::quiet_NaN();
    if (stable && raw.B.rows() == raw.A.rows() && raw.B.cols() == 1 &&
        raw.C_tr.rows() == 1 && raw.C_tr.cols() == raw.A.cols()) {
      const Matrix I = Matrix::Identity(raw.A.rows(), raw.A.cols());
      const Vector P = (I - raw.A).partialPivLu().solve(raw.B);
      dc = (raw.C_tr * P)(0, 0);
      unit_gain = std::isfinite(dc) && std::abs(dc - 1.0) <= 1e-9;
    }
    std::cout << "dc_gain: " << (unit_gain ? "pass" : "fail") << " ("
              << detail::g17(dc) << ")\n";
    ok = ok && unit_gain;

    const bool eps_ok = sc.epsilon > 0.0 && sc.epsilon < 1.0;
    std::cout << "epsilon: " << (eps_ok ? "pass" : "fail") << " ("
              << detail::g17(sc.epsilon) << ")\n";
    ok = ok && eps_ok;

    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rgdc::cli
