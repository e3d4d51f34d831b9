#include "sdkit/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sdkit {

std::string_view to_string(FeKind k)
{
  return k == FeKind::HdivConforming ? "hdiv" : "nonconforming";
}

FeKind parse_fe_kind(std::string_view s)
{
  if (s == "hdiv" || s == "conforming" || s == "HdivConforming") return FeKind::HdivConforming;
  if (s == "nonconforming" || s == "Nonconforming" || s == "cr") return FeKind::Nonconforming;
  throw std::invalid_argument("unknown element kind '" + std::string(s) + "'");
}

namespace {

void validate_tags(const TriMesh& mesh)
{
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    if (edge.interface && edge.tag != BoundaryTag::None)
      throw std::invalid_argument("build_space: interface edge " + std::to_string(e) + " carries a boundary tag");
    if (edge.on_boundary() && edge.tag == BoundaryTag::None)
      throw std::invalid_argument("build_space: boundary edge " + std::to_string(e) + " is untagged");
    if (!edge.on_boundary() && !edge.interface && edge.tag != BoundaryTag::None)
      throw std::invalid_argument("build_space: interior edge " + std::to_string(e) + " carries a boundary tag");
    if (edge.on_boundary()) {
      const bool stokes_side = mesh.triangle(edge.triangles[0]).domain == Subdomain::Stokes;
      const bool stokes_tag = edge.tag == BoundaryTag::StokesEssential || edge.tag == BoundaryTag::StokesNatural;
      if (stokes_side != stokes_tag)
        throw std::invalid_argument("build_space: boundary tag of edge " + std::to_string(e) +
                                    " does not match its subdomain");
    }
  }
}

}  // namespace

CoupledSpace::CoupledSpace(std::shared_ptr<const TriMesh> mesh, FeKind kind)
    : mesh_(std::move(mesh)), kind_(kind)
{
  if (!mesh_) throw std::invalid_argument("build_space: null mesh");
  validate_tags(*mesh_);
  number_dofs();
  mark_essential();
  eliminate_interface();
  build_extension();
}

void CoupledSpace::number_dofs()
{
  const TriMesh& m = *mesh_;
  stokes_vertex_.assign(static_cast<std::size_t>(m.num_vertices()), -1);
  stokes_edge_.assign(static_cast<std::size_t>(m.num_edges()), -1);
  darcy_edge_.assign(static_cast<std::size_t>(m.num_edges()), -1);

  int n_se = 0;
  int n_de = 0;
  for (const Triangle& tri : m.triangles()) {
    if (tri.domain == Subdomain::Stokes) {
      ++n_stokes_p_;
      for (int v : tri.vertices)
        if (stokes_vertex_[static_cast<std::size_t>(v)] < 0) stokes_vertex_[static_cast<std::size_t>(v)] = n_stokes_vertices_++;
      for (int e : tri.edges)
        if (stokes_edge_[static_cast<std::size_t>(e)] < 0) stokes_edge_[static_cast<std::size_t>(e)] = n_se++;
    } else {
      ++n_darcy_p_;
      for (int e : tri.edges)
        if (darcy_edge_[static_cast<std::size_t>(e)] < 0) darcy_edge_[static_cast<std::size_t>(e)] = n_de++;
    }
  }

  if (kind_ == FeKind::HdivConforming) {
    n_stokes_vel_ = 2 * n_stokes_vertices_ + n_se;
    n_darcy_vel_ = n_de;
  } else {
    n_stokes_vel_ = 2 * n_se;
    n_darcy_vel_ = 2 * n_de;
  }

  element_dofs_.assign(static_cast<std::size_t>(m.num_triangles()), {});
  for (int t = 0; t < m.num_triangles(); ++t) {
    const Triangle& tri = m.triangle(t);
    auto& dofs = element_dofs_[static_cast<std::size_t>(t)];
    if (kind_ == FeKind::HdivConforming) {
      if (tri.domain == Subdomain::Stokes) {
        for (int k = 0; k < 3; ++k)
          for (int c = 0; c < 2; ++c)
            dofs.push_back({p1_dof(tri.vertices[static_cast<std::size_t>(k)], c), BasisType::P1, k, c, 1.0});
        for (int k = 0; k < 3; ++k)
          dofs.push_back({stokes_edge_dof(tri.edges[static_cast<std::size_t>(k)]), BasisType::RT0, k, -1, 1.0});
      } else {
        for (int k = 0; k < 3; ++k) {
          const int e = tri.edges[static_cast<std::size_t>(k)];
          const double orient = m.edge(e).interface ? -1.0 : 1.0;
          dofs.push_back({darcy_edge_dof(e), BasisType::RT0, k, -1, orient});
        }
      }
    } else {
      for (int k = 0; k < 3; ++k) {
        const int e = tri.edges[static_cast<std::size_t>(k)];
        for (int c = 0; c < 2; ++c) {
          const int idx = tri.domain == Subdomain::Stokes ? stokes_edge_dof(e, c) : darcy_edge_dof(e, c);
          dofs.push_back({idx, BasisType::CR, k, c, 1.0});
        }
      }
    }
  }
}

int CoupledSpace::p1_dof(int vertex, int component) const
{
  if (kind_ != FeKind::HdivConforming) return -1;
  const int sv = stokes_vertex_.at(static_cast<std::size_t>(vertex));
  return sv < 0 ? -1 : 2 * sv + component;
}

int CoupledSpace::stokes_edge_dof(int edge, int component) const
{
  const int se = stokes_edge_.at(static_cast<std::size_t>(edge));
  if (se < 0) return -1;
  if (kind_ == FeKind::HdivConforming) return 2 * n_stokes_vertices_ + se;
  return 2 * se + component;
}

int CoupledSpace::darcy_edge_dof(int edge, int component) const
{
  const int de = darcy_edge_.at(static_cast<std::size_t>(edge));
  if (de < 0) return -1;
  if (kind_ == FeKind::HdivConforming) return n_stokes_vel_ + de;
  return n_stokes_vel_ + 2 * de + component;
}

void CoupledSpace::mark_essential()
{
  const TriMesh& m = *mesh_;
  status_.assign(static_cast<std::size_t>(full_velocity_size()), Status::Free);
  auto mark = [&](int idx) {
    if (idx >= 0) status_[static_cast<std::size_t>(idx)] = Status::Essential;
  };
  for (int e = 0; e < m.num_edges(); ++e) {
    const Edge& edge = m.edge(e);
    if (edge.tag == BoundaryTag::StokesEssential) {
      if (kind_ == FeKind::HdivConforming) {
        for (int v : edge.vertices) {
          mark(p1_dof(v, 0));
          mark(p1_dof(v, 1));
        }
        mark(stokes_edge_dof(e));
      } else {
        mark(stokes_edge_dof(e, 0));
        mark(stokes_edge_dof(e, 1));
      }
    } else if (edge.tag == BoundaryTag::DarcyEssential) {
      if (kind_ == FeKind::HdivConforming) {
        mark(darcy_edge_dof(e));
      } else {
        // only the normal component; boundary edges are axis aligned
        const int normal_comp = std::abs(edge.normal.x()) > 0.5 ? 0 : 1;
        mark(darcy_edge_dof(e, normal_comp));
      }
    }
  }
  for (int i = 0; i < full_velocity_size(); ++i)
    if (status_[static_cast<std::size_t>(i)] == Status::Essential) essential_.push_back(i);
}

SparseFunctional CoupledSpace::interface_flux_functional(int e) const
{
  const TriMesh& m = *mesh_;
  if (e < 0 || e >= m.num_edges() || !m.edge(e).interface)
    throw std::invalid_argument("interface_flux_functional: edge is not on the interface");
  const Edge& edge = m.edge(e);
  if (kind_ == FeKind::HdivConforming) {
    const double half = 0.5 * edge.length;
    // n_S = (1,0): only x-components of the P1 part enter
    return {{p1_dof(edge.vertices[0], 0), half}, {p1_dof(edge.vertices[1], 0), half}, {stokes_edge_dof(e), 1.0}};
  }
  return {{stokes_edge_dof(e, 0), 1.0}};
}

double CoupledSpace::darcy_interface_flux(int e, const Vec& full) const
{
  const TriMesh& m = *mesh_;
  if (e < 0 || e >= m.num_edges() || !m.edge(e).interface)
    throw std::invalid_argument("darcy_interface_flux: edge is not on the interface");
  if (full.size() != full_velocity_size()) throw std::invalid_argument("darcy_interface_flux: length mismatch");
  if (kind_ == FeKind::HdivConforming) return full(darcy_edge_dof(e));
  // v_D . n_D with n_D = (-1, 0)
  return -full(darcy_edge_dof(e, 0));
}

void CoupledSpace::eliminate_interface()
{
  const TriMesh& m = *mesh_;
  eliminated_slot_.assign(static_cast<std::size_t>(full_velocity_size()), -1);
  for (int e : m.interface_edges()) {
    EliminatedDof elim;
    elim.edge = e;
    const SparseFunctional stokes = interface_flux_functional(e);
    if (kind_ == FeKind::HdivConforming) {
      // int_e v_D.n_D = -int_e v_S.n_S
      elim.full_index = darcy_edge_dof(e);
      for (auto [idx, c] : stokes) elim.stokes_terms.emplace_back(idx, -c);
    } else {
      // v_D.n_D = -v_S.n_S at the midpoint, i.e. equal x-components
      elim.full_index = darcy_edge_dof(e, 0);
      for (auto [idx, c] : stokes) elim.stokes_terms.emplace_back(idx, c);
    }
    status_[static_cast<std::size_t>(elim.full_index)] = Status::Eliminated;
    eliminated_slot_[static_cast<std::size_t>(elim.full_index)] = static_cast<int>(eliminated_.size());
    eliminated_.push_back(std::move(elim));
  }
}

void CoupledSpace::build_extension()
{
  const int nfull = full_velocity_size();
  full_to_free_.assign(static_cast<std::size_t>(nfull), -1);
  free_to_full_.clear();
  for (int i = 0; i < nfull; ++i) {
    if (status_[static_cast<std::size_t>(i)] == Status::Free) {
      full_to_free_[static_cast<std::size_t>(i)] = static_cast<int>(free_to_full_.size());
      free_to_full_.push_back(i);
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(free_to_full_.size() + 3 * eliminated_.size());
  for (std::size_t j = 0; j < free_to_full_.size(); ++j) trip.emplace_back(free_to_full_[j], static_cast<int>(j), 1.0);
  for (const EliminatedDof& elim : eliminated_) {
    for (auto [idx, c] : elim.stokes_terms) {
      const int col = full_to_free_[static_cast<std::size_t>(idx)];
      if (col >= 0) trip.emplace_back(elim.full_index, col, c);
    }
  }
  extension_.resize(nfull, free_velocity_size());
  extension_.setFromTriplets(trip.begin(), trip.end());
  extension_.makeCompressed();
}

Vec CoupledSpace::expand(const Vec& free) const
{
  if (free.size() != free_velocity_size()) throw std::invalid_argument("expand: length mismatch");
  return extension_ * free;
}

void CoupledSpace::apply_interface_constraints(Vec& full) const
{
  if (full.size() != full_velocity_size()) throw std::invalid_argument("apply_interface_constraints: length mismatch");
  for (const EliminatedDof& elim : eliminated_) {
    double value = 0.0;
    for (auto [idx, c] : elim.stokes_terms) value += c * full(idx);
    full(elim.full_index) = value;
  }
}

std::vector<std::vector<int>> CoupledSpace::vertex_patches() const
{
  const TriMesh& m = *mesh_;
  std::vector<std::vector<int>> patches(static_cast<std::size_t>(m.num_vertices()));
  for (int v = 0; v < m.num_vertices(); ++v) {
    auto& patch = patches[static_cast<std::size_t>(v)];
    for (int t : m.vertex_triangles(v)) {
      for (const LocalDof& d : element_dofs(t)) {
        const int col = full_to_free_[static_cast<std::size_t>(d.index)];
        if (col >= 0) {
          patch.push_back(col);
        } else if (const int slot = eliminated_slot_[static_cast<std::size_t>(d.index)]; slot >= 0) {
          for (auto [idx, c] : eliminated_[static_cast<std::size_t>(slot)].stokes_terms) {
            const int sc = full_to_free_[static_cast<std::size_t>(idx)];
            if (sc >= 0) patch.push_back(sc);
          }
        }
      }
    }
    std::sort(patch.begin(), patch.end());
    patch.erase(std::unique(patch.begin(), patch.end()), patch.end());
  }
  return patches;
}

CoupledSpace build_space(std::shared_ptr<const TriMesh> mesh, FeKind kind)
{
  return CoupledSpace(std::move(mesh), kind);
}

}  // namespace sdkit
