#include "hzplate/results_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hzplate {

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json config_json(const StudyConfig& c) {
  ordered_json j;
  j["domain"] = to_string(c.domain);
  j["formulation"] = to_string(c.formulation);
  j["p"] = c.p;
  j["t"] = c.material.t;
  j["E"] = c.material.E;
  j["nu"] = c.material.nu;
  j["ks"] = c.material.ks;
  j["refinements"] = c.refinements;
  j["geo_order"] = c.geo_order;
  j["adaptive"] = c.adaptive;
  j["theta"] = c.theta;
  j["max_dofs"] = c.max_dofs;
  j["max_steps"] = c.max_steps;
  j["condense"] = c.condense;
  j["load"] = c.load;
  return j;
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {"step",    "elements", "dofs",        "h",           "err_w",
                                                "err_phi", "err_m",    "err_q",       "estimator",   "slope_w",
                                                "slope_phi", "slope_m", "slope_q",    "slope_estimator"};
  return cols;
}

std::string records_to_csv(const std::vector<ConvergenceRecord>& records) {
  if (records.empty()) throw std::invalid_argument("records_to_csv: no records to write");
  std::ostringstream out;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const StudySlopes s = study_slopes(records, i + 1);
    out << r.step << ',' << r.elements << ',' << r.dofs << ',' << fmt(r.h) << ',' << fmt(r.err_w) << ','
        << fmt(r.err_phi) << ',' << fmt(r.err_m) << ',' << fmt(r.err_q) << ',' << fmt(r.estimator) << ',' << fmt(s.w)
        << ',' << fmt(s.phi) << ',' << fmt(s.m) << ',' << fmt(s.q) << ',' << fmt(s.estimator) << '\n';
  }
  return out.str();
}

std::string records_to_json(const StudyConfig& config, const std::vector<ConvergenceRecord>& records) {
  if (records.empty()) throw std::invalid_argument("records_to_json: no records to write");
  ordered_json j;
  j["config"] = config_json(config);
  ordered_json arr = ordered_json::array();
  for (const auto& r : records) {
    ordered_json o;
    o["step"] = r.step;
    o["elements"] = r.elements;
    o["dofs"] = r.dofs;
    o["h"] = num(r.h);
    o["err_w"] = num(r.err_w);
    o["err_phi"] = num(r.err_phi);
    o["err_m"] = num(r.err_m);
    o["err_q"] = num(r.err_q);
    o["estimator"] = num(r.estimator);
    o["wall_seconds"] = r.wall_seconds;
    arr.push_back(o);
  }
  j["records"] = arr;
  const StudySlopes s = study_slopes(records, records.size());
  j["slopes"] = {{"w", num(s.w)}, {"phi", num(s.phi)}, {"m", num(s.m)}, {"q", num(s.q)}, {"estimator", num(s.estimator)}};
  return j.dump(2) + "\n";
}

std::string config_to_json(const StudyConfig& config) { return config_json(config).dump(2) + "\n"; }

void apply_config_json(StudyConfig& c, const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& ex) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + ex.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const auto& v = it.value();
    auto need_number = [&] {
      if (!v.is_number()) throw std::invalid_argument("config: '" + k + "' must be a number");
      return v.get<double>();
    };
    auto need_int = [&] {
      if (!v.is_number_integer()) throw std::invalid_argument("config: '" + k + "' must be an integer");
      return v.get<int>();
    };
    auto need_bool = [&] {
      if (!v.is_boolean()) throw std::invalid_argument("config: '" + k + "' must be true or false");
      return v.get<bool>();
    };
    auto need_string = [&] {
      if (!v.is_string()) throw std::invalid_argument("config: '" + k + "' must be a string");
      return v.get<std::string>();
    };
    if (k == "domain") c.domain = parse_domain(need_string());
    else if (k == "formulation") c.formulation = parse_formulation(need_string());
    else if (k == "p") c.p = need_int();
    else if (k == "t") c.material.t = need_number();
    else if (k == "E") c.material.E = need_number();
    else if (k == "nu") c.material.nu = need_number();
    else if (k == "ks") c.material.ks = need_number();
    else if (k == "refinements") c.refinements = need_int();
    else if (k == "geo_order") c.geo_order = need_int();
    else if (k == "adaptive") c.adaptive = need_bool();
    else if (k == "theta") c.theta = need_number();
    else if (k == "max_dofs") c.max_dofs = need_int();
    else if (k == "max_steps") c.max_steps = need_int();
    else if (k == "condense") c.condense = need_bool();
    else if (k == "load") c.load = need_number();
    else throw std::invalid_argument("config: unknown key '" + k + "'");
  }
}

std::string probes_to_csv(const std::vector<Vec2>& points, const std::vector<FieldValues>& values) {
  if (points.size() != values.size()) throw std::invalid_argument("probes_to_csv: size mismatch");
  std::ostringstream out;
  out << "x,y,w,phi_x,phi_y,m11,m12,m22,q_x,q_y\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& v = values[i];
    out << fmt(points[i][0]) << ',' << fmt(points[i][1]) << ',' << fmt(v.w) << ',' << fmt(v.phi[0]) << ','
        << fmt(v.phi[1]) << ',' << fmt(v.m.m11) << ',' << fmt(v.m.m12) << ',' << fmt(v.m.m22) << ',' << fmt(v.q[0])
        << ',' << fmt(v.q[1]) << '\n';
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  std::ostringstream s;
  s << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read error on " + path);
  return s.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write error on " + path);
}

}  // namespace hzplate
