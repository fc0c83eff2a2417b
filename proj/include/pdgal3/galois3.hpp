// Group computation for 3-dimensional systems: the 2-dimensional trichotomy,
// groups of V^diag, and the case dispatcher.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdgal3/diff_module.hpp"
#include "pdgal3/group_model.hpp"
#include "pdgal3/integrability.hpp"

namespace pdgal3 {

enum class TypeTag { CQ, CR, NC };
std::string to_string(TypeTag t);

struct Classification {
  TypeTag tag = TypeTag::NC;
  /// Columns: basis in which the module is upper triangular (diagonal for CR).
  RMatrix basis;
  RMatrix normal_form;
  bool complete = true;
};

/// Throws std::invalid_argument for a simple (irreducible) module.
Classification classify2_full(const DiffSystem& w, const std::optional<FlagCertificate>& cert = std::nullopt,
                              const SolverOptions& opt = {});
TypeTag classify2(const DiffSystem& w, const std::optional<FlagCertificate>& cert = std::nullopt,
                  const SolverOptions& opt = {});

struct DispatchConfig {
  int max_order = 4;
  int m_bound = 12;
  SolverOptions solver;
};

/// Group of a direct sum of the given factors (dim 1, or one simple factor of
/// dim 2), in block-diagonal coordinates following the factor order.
GroupDescription diag_group(const ModuleDiag& d, const DispatchConfig& cfg = {});

struct CaseReport {
  std::string label;
  std::vector<std::string> path;
  std::vector<TypeTag> types;  // V_2, V/V_1 and, for split V_2, V/U
  bool via_dual = false;
  /// Columns: the basis in which the group is written; normal_form is the
  /// system in that basis, i.e. gauge(A, basis^-1).
  RMatrix basis;
  RMatrix normal_form;
  std::vector<std::pair<std::string, RMatrix>> certificates;
  /// Premises cited for τ(G) = 0 conclusions and reductions.
  std::vector<std::string> premises;
  bool complete = true;
};

struct DispatchResult {
  CaseReport report;
  GroupDescription group;
};

/// Throws NonFuchsian when a line search is needed on a non-Fuchsian system
/// and no certificate is given.
DispatchResult dispatch(const DiffSystem& v, const std::optional<FlagCertificate>& cert = std::nullopt,
                        const DispatchConfig& cfg = {});

/// Label of dual(V) given the label of V: the first two types swap.
std::string dual_label(const std::string& label);

/// [[a, k d_t(a - c), k d_t(b)], [0, a, b], [0, 0, c]]: the submodule of the
/// prolongation of [[a, b], [0, c]] twisted by c, with e_1 rescaled by k.
DiffSystem prolongation_normal_form(const DiffSystem& quotient, const Qt& k = Qt(1));

/// Upper triangular Y -> J Y^-T J with J the reversal; the coordinate change
/// between the groups of V and of its reversed dual.
RepMap dual_reversal_rep(std::size_t n);

}  // namespace pdgal3
