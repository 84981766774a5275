#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hzplate/assembly.hpp"
#include "hzplate/basis.hpp"
#include "hzplate/formulations.hpp"
#include "hzplate/mesh.hpp"
#include "hzplate/mesh_io.hpp"
#include "hzplate/results_io.hpp"
#include "hzplate/study.hpp"

namespace {

using hzplate::Vec2;
using json = nlohmann::ordered_json;

// Flags shared by the study subcommands. Unset optionals keep the domain defaults.
struct StudyFlags {
  std::string formulation;
  std::optional<int> p, refinements, geo_order, max_dofs, max_steps;
  std::optional<double> t, E, theta, load;
  bool adaptive = false;
  bool uniform = false;
  bool no_condense = false;
  std::string config_path;
  std::string out;
  std::string format = "csv";
  std::string export_mesh;
  std::string export_matrix;
  std::string probe_points;
  std::string probe_out;
  bool quiet = false;
};

struct BasisFlags {
  std::string space = "hz";
  int p = 3;
  std::string points = "0.25,0.25";
  std::string mesh_path;
  int element = 0;
  std::string out;
};

// "x,y;x,y;..."
std::vector<Vec2> parse_points(const std::string& text) {
  std::vector<Vec2> pts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("point '" + item + "' is not of the form x,y");
    std::size_t used_x = 0, used_y = 0;
    const std::string xs = item.substr(0, comma), ys = item.substr(comma + 1);
    try {
      const double x = std::stod(xs, &used_x);
      const double y = std::stod(ys, &used_y);
      if (xs.find_first_not_of(" \t", used_x) != std::string::npos ||
          ys.find_first_not_of(" \t", used_y) != std::string::npos)
        throw std::invalid_argument("trailing characters");
      pts.emplace_back(x, y);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("point '" + item + "' is not of the form x,y");
    }
  }
  if (pts.empty()) throw std::invalid_argument("no points given");
  return pts;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    hzplate::write_text_file(path, text);
}

hzplate::StudyConfig build_config(hzplate::Domain domain, const StudyFlags& f) {
  hzplate::StudyConfig c = hzplate::default_config(domain);
  if (!f.formulation.empty()) c.formulation = hzplate::parse_formulation(f.formulation);
  if (f.p) c.p = *f.p;
  if (f.t) c.material.t = *f.t;
  if (f.E) c.material.E = *f.E;
  if (f.refinements) c.refinements = *f.refinements;
  if (f.geo_order) c.geo_order = *f.geo_order;
  if (f.theta) c.theta = *f.theta;
  if (f.max_dofs) c.max_dofs = *f.max_dofs;
  if (f.max_steps) c.max_steps = *f.max_steps;
  if (f.load) c.load = *f.load;
  if (f.adaptive) c.adaptive = true;
  if (f.uniform) c.adaptive = false;
  if (f.no_condense) c.condense = false;
  if (!f.config_path.empty()) {
    hzplate::apply_config_json(c, hzplate::read_text_file(f.config_path));
    if (c.domain != domain)
      throw std::invalid_argument("config file selects domain '" + hzplate::to_string(c.domain) +
                                  "' but the subcommand is '" + hzplate::to_string(domain) + "'");
  }
  c.validate();
  return c;
}

int run_study_command(hzplate::Domain domain, const StudyFlags& f) {
  std::string stage = "configuration";
  try {
    const hzplate::StudyConfig config = build_config(domain, f);
    if (!f.quiet) std::cerr << "hzplate: " << hzplate::config_to_json(config) << "\n";

    stage = "study";
    const hzplate::StudyResult result = hzplate::run_study(config);
    if (!f.quiet)
      for (const auto& r : result.records)
        std::fprintf(stderr, "  step %d: %d elements, %d dofs, %.2fs\n", r.step, r.elements, r.dofs, r.wall_seconds);

    stage = "output";
    emit(f.out, f.format == "json" ? hzplate::records_to_json(config, result.records)
                                   : hzplate::records_to_csv(result.records));

    if (!f.export_mesh.empty()) {
      stage = "mesh export";
      hzplate::write_text_file(f.export_mesh, hzplate::mesh_to_json(result.final_mesh));
    }
    if (!f.export_matrix.empty() || !f.probe_points.empty()) {
      stage = "final solve";
      hzplate::PlateProblem problem = hzplate::study_problem(config, result.final_mesh);
      problem.keep_system = !f.export_matrix.empty();
      const hzplate::SolutionFields fields = hzplate::solve(problem);
      if (!f.export_matrix.empty()) {
        stage = "matrix export";
        hzplate::write_matrix_market(fields.system->matrix, f.export_matrix + "_matrix.mtx");
        hzplate::write_matrix_market(fields.system->rhs, f.export_matrix + "_rhs.mtx");
      }
      if (!f.probe_points.empty()) {
        stage = "probe";
        const auto points = parse_points(f.probe_points);
        emit(f.probe_out, hzplate::probes_to_csv(points, hzplate::probe(fields, points)));
      }
    }
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "hzplate: " << stage << " failed: " << ex.what() << "\n";
    return stage == "configuration" ? 2 : 1;
  }
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    json col = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) col.push_back(m(i, j));
    rows.push_back(std::move(col));
  }
  return rows;
}

int run_basis_check(const BasisFlags& f) {
  try {
    const hzplate::Mesh mesh =
        f.mesh_path.empty()
            ? hzplate::Mesh({{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}, {{0, 1, 2}}, {}, {}, 1)
            : hzplate::mesh_from_json(hzplate::read_text_file(f.mesh_path));
    if (f.element < 0 || f.element >= mesh.num_elements())
      throw std::out_of_range("element " + std::to_string(f.element) + " not in [0, " +
                              std::to_string(mesh.num_elements()) + ")");
    if (f.space == "hz" && f.p < 3) throw std::invalid_argument("hz needs p >= 3");
    if (f.space == "rt" && f.p < 0) throw std::invalid_argument("rt needs p >= 0");

    json doc;
    doc["space"] = f.space;
    doc["p"] = f.p;
    doc["element"] = f.element;
    doc["value_layout"] = f.space == "hz" ? "orthonormal symmetric coordinates (m11, sqrt(2) m12, m22)" : "(v1, v2)";
    doc["dim"] = f.space == "hz" ? hzplate::hz_local_dim(f.p) : hzplate::rt_local_dim(f.p);
    json pts = json::array();
    for (const Vec2& xi : parse_points(f.points)) {
      const hzplate::GeometryPoint g = mesh.geometry(f.element, xi);
      Eigen::MatrixXd value, div;
      if (f.space == "hz")
        hzplate::hz_evaluate(mesh, f.element, f.p, xi, g, value, div);
      else
        hzplate::rt_evaluate(mesh, f.element, f.p, xi, g, value, div);
      json entry;
      entry["xi"] = {xi[0], xi[1]};
      entry["x"] = {g.x[0], g.x[1]};
      entry["values"] = matrix_rows(value);
      entry["divergence"] = matrix_rows(div);
      pts.push_back(std::move(entry));
    }
    doc["points"] = std::move(pts);
    emit(f.out, doc.dump(1) + "\n");
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "hzplate: basis-check failed: " << ex.what() << "\n";
    return 1;
  }
}

void add_study_flags(CLI::App* cmd, StudyFlags& f) {
  cmd->add_option("--formulation", f.formulation, "prm, tfsrm or qfsrm")
      ->check(CLI::IsMember({"prm", "tfsrm", "qfsrm"}));
  cmd->add_option("--p", f.p, "Polynomial order");
  cmd->add_option("--t", f.t, "Plate thickness");
  cmd->add_option("--E", f.E, "Young's modulus");
  cmd->add_option("--refinements", f.refinements, "Number of meshes in a uniform study");
  cmd->add_option("--geo-order", f.geo_order, "Boundary geometry order")->check(CLI::IsMember({1, 3}));
  cmd->add_option("--theta", f.theta, "Dörfler marking fraction");
  cmd->add_option("--max-dofs", f.max_dofs, "Adaptive dof budget");
  cmd->add_option("--max-steps", f.max_steps, "Adaptive step limit");
  cmd->add_option("--load", f.load, "Constant load g (L-shape)");
  cmd->add_flag("--adaptive", f.adaptive, "Adaptive refinement");
  cmd->add_flag("--uniform", f.uniform, "Uniform refinement")->excludes("--adaptive");
  cmd->add_flag("--no-condense", f.no_condense, "Solve without static condensation");
  cmd->add_option("--config", f.config_path, "JSON config file; its keys override flags")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "Result file (stdout when omitted)");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--export-mesh", f.export_mesh, "Write the final mesh as JSON");
  cmd->add_option("--export-matrix", f.export_matrix,
                  "Write the final assembled system to PREFIX_matrix.mtx and PREFIX_rhs.mtx");
  cmd->add_option("--probe", f.probe_points, "Points x,y;x,y;... probed on the final solution");
  cmd->add_option("--probe-out", f.probe_out, "Probe CSV file (stdout when omitted)");
  cmd->add_flag("--quiet", f.quiet, "No progress output on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hu-Zhang mixed finite element plate studies"};
  app.require_subcommand(1);

  StudyFlags square_flags, disk_flags, lshape_flags;
  BasisFlags basis_flags;
  auto* square = app.add_subcommand("square", "Clamped unit square with analytic solution");
  auto* disk = app.add_subcommand("disk", "Clamped unit disk with analytic solution");
  auto* lshape = app.add_subcommand("lshape", "L-shaped plate with recovery estimator");
  auto* basis = app.add_subcommand("basis-check", "Dump HZ or RT basis values and divergences as JSON");
  add_study_flags(square, square_flags);
  add_study_flags(disk, disk_flags);
  add_study_flags(lshape, lshape_flags);
  basis->add_option("--space", basis_flags.space, "hz or rt")->check(CLI::IsMember({"hz", "rt"}));
  basis->add_option("--p", basis_flags.p, "Order (HZ degree or RT index)");
  basis->add_option("--points", basis_flags.points, "Reference points x,y;x,y;...");
  basis->add_option("--mesh", basis_flags.mesh_path, "Mesh JSON file (reference triangle when omitted)")
      ->check(CLI::ExistingFile);
  basis->add_option("--element", basis_flags.element, "Element index in the mesh");
  basis->add_option("--out", basis_flags.out, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (square->parsed()) return run_study_command(hzplate::Domain::Square, square_flags);
  if (disk->parsed()) return run_study_command(hzplate::Domain::Disk, disk_flags);
  if (lshape->parsed()) return run_study_command(hzplate::Domain::LShape, lshape_flags);
  return run_basis_check(basis_flags);
}
