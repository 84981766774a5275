#include "hzplate/assembly.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "hzplate/quadrature.hpp"

namespace hzplate {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

int operator_dim(const FeSpace& space, Operator op) {
  const SpaceKind k = space.desc().kind;
  switch (op) {
    case Operator::Value: return space.value_dim();
    case Operator::Grad:
      if (k != SpaceKind::Lagrange && k != SpaceKind::DG) break;
      return 2 * space.desc().ncomp;
    case Operator::Div:
      if (k == SpaceKind::HZ) return 2;
      if (k == SpaceKind::RT) return 1;
      break;
    case Operator::SymGrad:
      if ((k == SpaceKind::Lagrange || k == SpaceKind::DG) && space.desc().ncomp == 2) return 3;
      break;
  }
  throw std::invalid_argument("operator not defined for a " + to_string(k) + " space");
}

Eigen::MatrixXd apply_operator(const FeSpace& space, const BasisEval& eval, Operator op) {
  (void)operator_dim(space, op);
  switch (op) {
    case Operator::Value: return eval.value;
    case Operator::Grad: return eval.grad;
    case Operator::Div: return eval.div;
    case Operator::SymGrad: {
      // rows of grad: ∂1u1, ∂2u1, ∂1u2, ∂2u2
      Eigen::MatrixXd s(3, eval.grad.cols());
      s.row(0) = eval.grad.row(0);
      s.row(1) = kInvSqrt2 * (eval.grad.row(1) + eval.grad.row(2));
      s.row(2) = eval.grad.row(3);
      return s;
    }
  }
  return {};
}

int assembly_degree(int p, int geo_order) { return 2 * p + 2 * (geo_order - 1); }

SparseSystem assemble_system(const std::vector<const FeSpace*>& fields, const std::vector<std::string>& names,
                             const std::vector<BlockTerm>& terms, const std::vector<LoadTerm>& loads,
                             int quadrature_degree) {
  if (fields.empty()) throw std::invalid_argument("assemble_system: no fields");
  if (names.size() != fields.size()) throw std::invalid_argument("assemble_system: one name per field required");
  const Mesh& mesh = fields[0]->mesh();
  for (const FeSpace* f : fields)
    if (&f->mesh() != &mesh) throw std::invalid_argument("assemble_system: fields live on different meshes");
  const int nf = static_cast<int>(fields.size());
  SparseSystem sys;
  sys.names = names;
  sys.offsets.assign(nf + 1, 0);
  for (int f = 0; f < nf; ++f) sys.offsets[f + 1] = sys.offsets[f] + fields[f]->num_dofs();
  const int n = sys.offsets[nf];

  // Which operators of which fields are needed.
  std::vector<std::array<bool, 4>> needed(nf, {false, false, false, false});
  for (const auto& t : terms) {
    if (t.test_field < 0 || t.test_field >= nf || t.trial_field < 0 || t.trial_field >= nf)
      throw std::invalid_argument("assemble_system: term references a missing field");
    const int r = operator_dim(*fields[t.test_field], t.test_op);
    const int c = operator_dim(*fields[t.trial_field], t.trial_op);
    if (t.weight.rows() != r || t.weight.cols() != c)
      throw std::invalid_argument("assemble_system: weight is " + std::to_string(t.weight.rows()) + "x" +
                                  std::to_string(t.weight.cols()) + ", operators need " + std::to_string(r) + "x" +
                                  std::to_string(c));
    needed[t.test_field][static_cast<int>(t.test_op)] = true;
    needed[t.trial_field][static_cast<int>(t.trial_op)] = true;
  }
  for (const auto& l : loads) {
    if (l.field < 0 || l.field >= nf) throw std::invalid_argument("assemble_system: load references a missing field");
    (void)operator_dim(*fields[l.field], l.op);
    needed[l.field][static_cast<int>(l.op)] = true;
  }

  const QuadratureRule& rule = triangle_quadrature(quadrature_degree);
  const int nel = mesh.num_elements();
  std::vector<std::vector<Eigen::Triplet<double>>> elem_trip(nel);
  std::vector<std::vector<std::pair<int, double>>> elem_rhs(nel);
  std::vector<std::string> errors(nel);

#pragma omp parallel for schedule(static)
  for (int e = 0; e < nel; ++e) {
    try {
      std::vector<Eigen::MatrixXd> kloc(terms.size());
      for (std::size_t t = 0; t < terms.size(); ++t)
        kloc[t].setZero(fields[terms[t].test_field]->local_dim(), fields[terms[t].trial_field]->local_dim());
      std::vector<Eigen::VectorXd> floc(loads.size());
      for (std::size_t l = 0; l < loads.size(); ++l) floc[l].setZero(fields[loads[l].field]->local_dim());
      std::vector<BasisEval> ev(nf);
      std::vector<std::array<Eigen::MatrixXd, 4>> ops(nf);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const GeometryPoint g = mesh.geometry(e, rule.points[q]);
        const double w = rule.weights[q] * g.det;
        for (int f = 0; f < nf; ++f) {
          bool any = false;
          for (bool b : needed[f]) any = any || b;
          if (!any) continue;
          fields[f]->evaluate(e, rule.points[q], g, ev[f]);
          for (int o = 0; o < 4; ++o)
            if (needed[f][o]) ops[f][o] = apply_operator(*fields[f], ev[f], static_cast<Operator>(o));
        }
        for (std::size_t t = 0; t < terms.size(); ++t) {
          const auto& a = ops[terms[t].test_field][static_cast<int>(terms[t].test_op)];
          const auto& b = ops[terms[t].trial_field][static_cast<int>(terms[t].trial_op)];
          kloc[t].noalias() += w * a.transpose() * (terms[t].weight * b);
        }
        for (std::size_t l = 0; l < loads.size(); ++l) {
          const auto& a = ops[loads[l].field][static_cast<int>(loads[l].op)];
          floc[l].noalias() += w * a.transpose() * loads[l].f(g.x);
        }
      }
      auto& trip = elem_trip[e];
      for (std::size_t t = 0; t < terms.size(); ++t) {
        const auto rows = fields[terms[t].test_field]->element_dofs(e);
        const auto cols = fields[terms[t].trial_field]->element_dofs(e);
        const int ro = sys.offsets[terms[t].test_field];
        const int co = sys.offsets[terms[t].trial_field];
        for (int i = 0; i < kloc[t].rows(); ++i)
          for (int j = 0; j < kloc[t].cols(); ++j) {
            const double v = kloc[t](i, j);
            if (v == 0.0) continue;
            trip.emplace_back(ro + rows[i], co + cols[j], v);
            if (terms[t].add_transpose) trip.emplace_back(co + cols[j], ro + rows[i], v);
          }
      }
      for (std::size_t l = 0; l < loads.size(); ++l) {
        const auto rows = fields[loads[l].field]->element_dofs(e);
        const int ro = sys.offsets[loads[l].field];
        for (int i = 0; i < floc[l].size(); ++i) elem_rhs[e].emplace_back(ro + rows[i], floc[l][i]);
      }
    } catch (const std::exception& ex) {
      errors[e] = ex.what();
    }
  }
  for (int e = 0; e < nel; ++e)
    if (!errors[e].empty()) throw std::runtime_error("assembly failed in element " + std::to_string(e) + ": " + errors[e]);

  std::size_t total = 0;
  for (const auto& t : elem_trip) total += t.size();
  std::vector<Eigen::Triplet<double>> all;
  all.reserve(total);
  for (auto& t : elem_trip) {
    all.insert(all.end(), t.begin(), t.end());
    std::vector<Eigen::Triplet<double>>().swap(t);
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(all.begin(), all.end());
  sys.rhs.setZero(n);
  for (const auto& r : elem_rhs)
    for (const auto& [i, v] : r) sys.rhs[i] += v;
  return sys;
}

SparseMatrix assemble_block(const FeSpace& test, Operator test_op, const FeSpace& trial, Operator trial_op,
                            const Eigen::MatrixXd& weight, int quadrature_degree) {
  SparseSystem s = assemble_system({&test, &trial}, {"test", "trial"}, {{0, 1, test_op, trial_op, weight, false}}, {},
                                   quadrature_degree);
  return s.matrix.block(0, test.num_dofs(), test.num_dofs(), trial.num_dofs());
}

void write_matrix_market(const SparseMatrix& m, const std::string& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  std::fprintf(f.get(), "%%%%MatrixMarket matrix coordinate real general\n");
  std::fprintf(f.get(), "%lld %lld %lld\n", static_cast<long long>(m.rows()), static_cast<long long>(m.cols()),
               static_cast<long long>(m.nonZeros()));
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      std::fprintf(f.get(), "%lld %lld %.17g\n", static_cast<long long>(it.row() + 1), static_cast<long long>(it.col() + 1),
                   it.value());
  if (std::ferror(f.get())) throw std::runtime_error("write error on " + path);
}

void write_matrix_market(const Eigen::VectorXd& v, const std::string& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  std::fprintf(f.get(), "%%%%MatrixMarket matrix array real general\n%lld 1\n", static_cast<long long>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) std::fprintf(f.get(), "%.17g\n", v[i]);
  if (std::ferror(f.get())) throw std::runtime_error("write error on " + path);
}

}  // namespace hzplate
