#include "lifted/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lifted/error.hpp"

namespace lifted {

using nlohmann::json;

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

namespace {

template <class V>
void append_array(std::string& out, const V& v) {
  out += '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v(i));
  }
  out += ']';
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Vector to_vector(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(std::string(what) + " must hold numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json fields_json(const ModelMoments::Fields& f) {
  return {{"mu0", f.mu0},     {"mu_ell", f.mu_ell}, {"tau_ell", f.tau_ell}, {"mu_q", f.mu_q},
          {"tau_q", f.tau_q}, {"rho_q", f.rho_q},   {"eta_q", f.eta_q}};
}

std::string_view loss_name(LossKind loss) {
  switch (loss) {
    case LossKind::centered: return "centered";
    case LossKind::mean_offset: return "mean-offset";
    case LossKind::phaselift: return "phaselift";
  }
  return "centered";
}

std::string_view width_method_name(WidthMethod m) {
  switch (m) {
    case WidthMethod::mc_projection: return "mc_projection";
    case WidthMethod::polarity_closed_form: return "polarity_closed_form";
    case WidthMethod::formula: return "formula";
  }
  return "formula";
}

}  // namespace

std::string ensemble_to_json(const Ensemble& e) {
  std::string out = "{\n";
  out += "  \"link\": " + json(e.link_id).dump() + ",\n";
  out += "  \"seed\": " + std::to_string(e.seed) + ",\n";
  out += "  \"n\": " + std::to_string(e.dim()) + ",\n";
  out += "  \"m\": " + std::to_string(e.rows()) + ",\n";
  out += "  \"offset_count\": " + std::to_string(e.offset_count) + ",\n";
  out += "  \"signal\": {\"x0\": ";
  append_array(out, e.signal.x0);
  out += ", \"k\": " + (e.signal.sparsity ? std::to_string(*e.signal.sparsity) : std::string("null")) + "},\n";
  out += "  \"design\": [";
  for (int i = 0; i < e.rows(); ++i) {
    out += i ? ",\n    " : "\n    ";
    append_array(out, e.design.row(i));
  }
  out += "\n  ],\n  \"y\": ";
  append_array(out, e.y);
  out += "\n}\n";
  return out;
}

Ensemble ensemble_from_json(std::string_view text) {
  const json doc = parse_document(text);
  try {
    Ensemble e;
    e.link_id = doc.at("link").get<std::string>();
    e.seed = doc.at("seed").get<std::uint64_t>();
    e.offset_count = doc.value("offset_count", 0);
    const json& sig = doc.at("signal");
    e.signal.x0 = to_vector(sig.at("x0"), "signal.x0");
    if (sig.contains("k") && !sig["k"].is_null()) e.signal.sparsity = sig["k"].get<int>();
    const json& rows = doc.at("design");
    if (!rows.is_array()) throw ParseError("design must be an array of rows");
    const auto n = e.signal.x0.size();
    e.design.resize(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Vector row = to_vector(rows[i], "design row");
      if (row.size() != n) throw DimensionError("design row length does not match signal length");
      e.design.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    e.y = to_vector(doc.at("y"), "y");
    if (e.y.size() != e.design.rows()) throw DimensionError("y length does not match design rows");
    if (doc.contains("n") && doc["n"].get<long>() != n) throw DimensionError("n does not match signal length");
    if (doc.contains("m") && doc["m"].get<long>() != e.design.rows()) throw DimensionError("m does not match design rows");
    return e;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed ensemble: ") + ex.what());
  }
}

std::string moments_to_json(const std::string& link_id, const ModelMoments& m) {
  json j = fields_json({m.mu0, m.mu_ell, m.tau_ell, m.mu_q, m.tau_q, m.rho_q, m.eta_q});
  j["link"] = link_id;
  j["method"] = m.method == MomentMethod::quadrature ? "quadrature" : "monte_carlo";
  j["stderr"] = fields_json(m.std_error);
  return j.dump(2) + "\n";
}

std::string report_to_json(const SolveSummary& s) {
  const auto& r = s.report;
  json X = json::array();
  for (Eigen::Index i = 0; i < r.X_hat.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < r.X_hat.cols(); ++j) row.push_back(r.X_hat(i, j));
    X.push_back(std::move(row));
  }
  json program = {{"loss", loss_name(s.spec.loss)},
                  {"mu_tilde", s.spec.mu_tilde},
                  {"l1_radius", s.spec.l1_radius ? json(*s.spec.l1_radius) : json(nullptr)},
                  {"trace_penalty", s.spec.trace_penalty}};
  json j = {{"program", program},
            {"status", r.status == SolveStatus::converged ? "converged" : "max_iter"},
            {"iterations", r.iterations},
            {"objective", r.objective.empty() ? 0.0 : r.objective.back()},
            {"objective_trajectory", r.objective},
            {"min_eigenvalue", r.min_eigenvalue},
            {"trace", r.trace},
            {"l1_norm", r.l1_norm},
            {"feasibility_residual", r.feasibility_residual},
            {"step_size", r.step_size},
            {"lipschitz", r.lipschitz},
            {"inexact_projections", r.inexact_projections},
            {"wall_time_ms", r.wall_time_ms},
            {"mu_q", s.mu_q},
            {"X_hat", X}};
  if (s.metrics) {
    j["metrics"] = {{"frob_error", s.metrics->frob_error},
                    {"vec_error", s.metrics->vec_error ? json(*s.metrics->vec_error) : json(nullptr)},
                    {"correlation", s.metrics->correlation},
                    {"lambda1", s.metrics->lambda1}};
  }
  return j.dump(2) + "\n";
}

std::string width_to_json(const std::string& cone, const WidthEstimate& w) {
  json j = {{"cone", cone},
            {"value", w.value},
            {"stderr", w.std_error},
            {"trials", w.trials},
            {"scale", w.scale},
            {"method", width_method_name(w.method)},
            {"upper_bound", w.upper_bound},
            {"scale_specific", w.scale_specific}};
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(std::string_view text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  ExperimentConfig c;
  try {
    c.name = doc.value("name", c.name);
    c.link_id = doc.value("link", c.link_id);
    c.n = doc.value("n", c.n);
    if (doc.contains("m_grid")) c.m_grid = doc["m_grid"].get<std::vector<int>>();
    if (doc.contains("k")) {
      const json& k = doc["k"];
      if (k.is_null() || (k.is_string() && k.get<std::string>() == "dense")) {
        c.k.reset();
      } else if (k.is_number_integer()) {
        c.k = k.get<int>();
      } else {
        throw ConfigError("k must be an integer, \"dense\" or null");
      }
    }
    c.trials = doc.value("trials", c.trials);
    c.base_seed = doc.value("base_seed", c.base_seed);
    if (doc.contains("methods")) {
      c.methods.clear();
      for (const auto& m : doc["methods"]) c.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (doc.contains("mu_tilde")) {
      const json& mt = doc["mu_tilde"];
      if (mt.is_string() && mt.get<std::string>() == "auto") {
        c.mu_tilde = MuTildePolicy::automatic();
      } else if (mt.is_number()) {
        c.mu_tilde = MuTildePolicy::fixed(mt.get<double>());
      } else if (mt.is_object() && mt.contains("sweep")) {
        c.mu_tilde = MuTildePolicy::sweep(mt["sweep"].get<std::vector<double>>());
      } else {
        throw ConfigError("mu_tilde must be \"auto\", a number, or {\"sweep\": [...]}");
      }
    }
    if (doc.contains("l1")) {
      const json& l1 = doc["l1"];
      if (l1.is_string() && l1.get<std::string>() == "off") {
        c.l1 = L1Policy::off();
      } else if (l1.is_string() && l1.get<std::string>() == "auto") {
        c.l1 = L1Policy::automatic();
      } else if (l1.is_number()) {
        c.l1 = L1Policy::fixed(l1.get<double>());
      } else {
        throw ConfigError("l1 must be \"off\", \"auto\", or a number");
      }
    }
    if (doc.contains("solver")) {
      const json& s = doc["solver"];
      c.solver.max_iter = s.value("max_iter", c.solver.max_iter);
      c.solver.rel_tol = s.value("rel_tol", c.solver.rel_tol);
      c.solver.window = s.value("window", c.solver.window);
      c.solver.dykstra_tol = s.value("dykstra_tol", c.solver.dykstra_tol);
      c.solver.dykstra_max_iter = s.value("dykstra_max_iter", c.solver.dykstra_max_iter);
      const std::string step = s.value("step", std::string("fixed"));
      if (step == "fixed") {
        c.solver.step = StepPolicy::fixed;
      } else if (step == "backtracking") {
        c.solver.step = StepPolicy::backtracking;
      } else {
        throw ConfigError("solver.step must be \"fixed\" or \"backtracking\"");
      }
      const std::string algorithm = s.value("algorithm", std::string("projected-gradient"));
      if (algorithm == "projected-gradient") {
        c.solver.algorithm = Algorithm::projected_gradient;
      } else if (algorithm == "three-operator") {
        c.solver.algorithm = Algorithm::three_operator;
      } else {
        throw ConfigError("solver.algorithm must be \"projected-gradient\" or \"three-operator\"");
      }
      c.solver.splitting_tol = s.value("splitting_tol", c.solver.splitting_tol);
    }
    c.output = doc.value("output", c.output);
    c.timing = doc.value("timing", c.timing);
    c.workers = doc.value("workers", c.workers);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed config: ") + e.what());
  }
  validate(c);
  return c;
}

const char* const kCsvHeader =
    "name,link,method,n,m,k,trial,seed,mu_tilde,frob_error,vec_error,correlation,iterations,runtime_ms,status";

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += (ch == '\n' || ch == '\r') ? ' ' : ch;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  return fields;
}

template <class T>
T parse_number(const std::string& s, const char* column) {
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  T v{};
  in >> v;
  if (in.fail() || !in.eof()) throw ParseError(std::string("bad value '") + s + "' in column " + column);
  return v;
}

double parse_real(const std::string& s, const char* column) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw ParseError(std::string("bad value '") + s + "' in column " + column);
  return v;
}

}  // namespace

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += csv_field(r.name) + ',' + csv_field(r.link) + ',' + csv_field(r.method) + ',';
    out += std::to_string(r.n) + ',' + std::to_string(r.m) + ',';
    out += (r.k ? std::to_string(*r.k) : std::string("dense")) + ',';
    out += std::to_string(r.trial) + ',' + std::to_string(r.seed) + ',';
    out += format_double(r.mu_tilde) + ',' + format_double(r.frob_error) + ',';
    out += (r.vec_error ? format_double(*r.vec_error) : std::string()) + ',';
    out += format_double(r.correlation) + ',' + std::to_string(r.iterations) + ',';
    out += format_double(r.runtime_ms) + ',' + csv_field(r.status) + '\n';
  }
  return out;
}

std::vector<ResultRow> rows_from_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      if (line != kCsvHeader) throw ParseError("CSV header does not match the result schema");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 15) throw ParseError("CSV row has " + std::to_string(f.size()) + " fields, expected 15");
    ResultRow r;
    r.name = f[0];
    r.link = f[1];
    r.method = f[2];
    r.n = parse_number<int>(f[3], "n");
    r.m = parse_number<int>(f[4], "m");
    if (f[5] != "dense") r.k = parse_number<int>(f[5], "k");
    r.trial = parse_number<int>(f[6], "trial");
    r.seed = parse_number<std::uint64_t>(f[7], "seed");
    r.mu_tilde = parse_real(f[8], "mu_tilde");
    r.frob_error = parse_real(f[9], "frob_error");
    if (!f[10].empty()) r.vec_error = parse_real(f[10], "vec_error");
    r.correlation = parse_real(f[11], "correlation");
    r.iterations = parse_number<int>(f[12], "iterations");
    r.runtime_ms = parse_real(f[13], "runtime_ms");
    r.status = f[14];
    rows.push_back(std::move(r));
  }
  if (header) throw ParseError("CSV is empty");
  return rows;
}

}  // namespace lifted
