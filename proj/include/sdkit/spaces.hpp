#pragma once

#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sdkit/mesh.hpp"

namespace sdkit {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// Element pair used on both subdomains.
///  - HdivConforming: (P1 + RT0)-P0 on Stokes, RT0-P0 on Darcy.
///  - Nonconforming:  CR-P0 on both.
enum class FeKind { HdivConforming, Nonconforming };

std::string_view to_string(FeKind k);
/// Accepts "hdiv", "conforming", "HdivConforming", "nonconforming",
/// "Nonconforming", "cr". Throws std::invalid_argument otherwise.
FeKind parse_fe_kind(std::string_view s);

enum class BasisType : std::uint8_t { P1, RT0, CR };

/// One velocity basis function restricted to a triangle.
struct LocalDof {
  int index = -1;  // full velocity DOF
  BasisType type = BasisType::P1;
  int local = 0;       // local vertex (P1) or local edge (RT0, CR)
  int component = -1;  // vector component for P1/CR, -1 for RT0
  /// RT0 only: the DOF is the net flux along orientation * n_e.
  double orientation = 1.0;
};

/// Linear functional over full velocity DOFs, as (index, coefficient) pairs.
using SparseFunctional = std::vector<std::pair<int, double>>;

/// A Darcy interface DOF expressed through Stokes DOFs.
struct EliminatedDof {
  int full_index = -1;
  int edge = -1;
  SparseFunctional stokes_terms;  // coefficients over full Stokes DOFs
};

/// DOF bookkeeping for the coupled velocity/pressure space V_h x Q_h.
///
/// Full velocity vectors concatenate the Stokes and Darcy fields:
///   HdivConforming: [P1 (2 per Stokes vertex) | RT0 Stokes edges | RT0 Darcy edges]
///   Nonconforming:  [CR (2 per Stokes edge)   | CR (2 per Darcy edge)]
/// RT0 DOFs are signed net fluxes. On interface edges the Darcy RT0 DOF is
/// measured along n_D = -n_S, every other RT0 DOF along the stored n_e.
/// CR DOFs are midpoint values. Pressures are one value per triangle.
///
/// The extension C maps free velocity DOFs to full vectors: free DOFs map
/// to themselves, essential DOFs to zero, and the Darcy interface DOFs are
/// expressed through the Stokes trace so that the discrete flux condition
/// holds for every element of range(C).
class CoupledSpace {
 public:
  CoupledSpace(std::shared_ptr<const TriMesh> mesh, FeKind kind);

  [[nodiscard]] FeKind kind() const { return kind_; }
  [[nodiscard]] const TriMesh& mesh() const { return *mesh_; }
  [[nodiscard]] std::shared_ptr<const TriMesh> mesh_ptr() const { return mesh_; }
  [[nodiscard]] BcCase bc_case() const { return mesh_->bc_case(); }

  [[nodiscard]] int num_stokes_velocity() const { return n_stokes_vel_; }
  [[nodiscard]] int num_darcy_velocity() const { return n_darcy_vel_; }
  [[nodiscard]] int num_stokes_pressure() const { return n_stokes_p_; }
  [[nodiscard]] int num_darcy_pressure() const { return n_darcy_p_; }
  [[nodiscard]] int full_velocity_size() const { return n_stokes_vel_ + n_darcy_vel_; }
  [[nodiscard]] int free_velocity_size() const { return static_cast<int>(free_to_full_.size()); }
  [[nodiscard]] int pressure_size() const { return n_stokes_p_ + n_darcy_p_; }

  [[nodiscard]] const std::vector<LocalDof>& element_dofs(int t) const
  {
    return element_dofs_.at(static_cast<std::size_t>(t));
  }

  [[nodiscard]] const SpMat& extension() const { return extension_; }
  [[nodiscard]] const std::vector<EliminatedDof>& eliminated() const { return eliminated_; }
  [[nodiscard]] const std::vector<int>& essential() const { return essential_; }
  [[nodiscard]] bool is_essential(int full) const { return status_.at(static_cast<std::size_t>(full)) == Status::Essential; }
  [[nodiscard]] bool is_eliminated(int full) const { return status_.at(static_cast<std::size_t>(full)) == Status::Eliminated; }
  /// Column of C for a free DOF, -1 for constrained ones.
  [[nodiscard]] int free_index(int full) const { return full_to_free_.at(static_cast<std::size_t>(full)); }
  [[nodiscard]] int full_index(int free) const { return free_to_full_.at(static_cast<std::size_t>(free)); }
  [[nodiscard]] bool is_darcy_dof(int full) const { return full >= n_stokes_vel_; }

  /// P1 vector DOF at a Stokes vertex (HdivConforming), -1 otherwise.
  [[nodiscard]] int p1_dof(int vertex, int component) const;
  /// Stokes RT0 DOF (component ignored) or CR DOF on an edge, -1 if absent.
  [[nodiscard]] int stokes_edge_dof(int edge, int component = 0) const;
  [[nodiscard]] int darcy_edge_dof(int edge, int component = 0) const;

  /// The Stokes normal-trace quantity on interface edge e:
  ///   HdivConforming: int_e v_S . n_S = h_e (v_i + v_j).n_S / 2 + r_e
  ///   Nonconforming:  v_S(midpoint) . n_S
  /// Throws std::invalid_argument for a non-interface edge.
  [[nodiscard]] SparseFunctional interface_flux_functional(int e) const;

  /// The matching Darcy quantity along n_D (int_e v_D.n_D, resp. the
  /// midpoint value v_D . n_D) evaluated on a full vector.
  [[nodiscard]] double darcy_interface_flux(int e, const Vec& full) const;

  /// C * x. Throws std::invalid_argument on a length mismatch.
  [[nodiscard]] Vec expand(const Vec& free) const;

  /// Overwrites the eliminated Darcy DOFs of a full vector with the values
  /// implied by its Stokes part (used for lifted boundary data).
  void apply_interface_constraints(Vec& full) const;

  /// Free velocity DOFs touching the triangles around each mesh vertex.
  [[nodiscard]] std::vector<std::vector<int>> vertex_patches() const;

 private:
  enum class Status : std::uint8_t { Free, Essential, Eliminated };

  std::shared_ptr<const TriMesh> mesh_;
  FeKind kind_;
  int n_stokes_vel_ = 0;
  int n_darcy_vel_ = 0;
  int n_stokes_p_ = 0;
  int n_darcy_p_ = 0;
  std::vector<int> stokes_vertex_;  // mesh vertex -> Stokes vertex index or -1
  std::vector<int> stokes_edge_;    // mesh edge -> Stokes edge index or -1
  std::vector<int> darcy_edge_;     // mesh edge -> Darcy edge index or -1
  int n_stokes_vertices_ = 0;
  std::vector<std::vector<LocalDof>> element_dofs_;
  std::vector<Status> status_;
  std::vector<int> essential_;
  std::vector<EliminatedDof> eliminated_;
  std::vector<int> eliminated_slot_;  // full index -> position in eliminated_ or -1
  std::vector<int> full_to_free_;
  std::vector<int> free_to_full_;
  SpMat extension_;

  void number_dofs();
  void mark_essential();
  void eliminate_interface();
  void build_extension();
};

/// Throws std::invalid_argument when the mesh tags are inconsistent.
CoupledSpace build_space(std::shared_ptr<const TriMesh> mesh, FeKind kind);

}  // namespace sdkit
