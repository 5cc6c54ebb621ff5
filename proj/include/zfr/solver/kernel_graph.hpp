#pragma once

#include <string>
#include <vector>

namespace zfr::solver {

/// Edge classes of the data-flow graph: small dense matrix products, point-wise
/// kernels with direct access, point-wise kernels with partially indirect
/// (face-to-element) access, and cross-rank exchanges.
enum class KernelClass { Gemm, PointwiseDirect, PointwiseIndirect, Exchange };

struct KernelNode {
  std::string name;
  KernelClass cls = KernelClass::PointwiseDirect;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

/// Arrays are nodes, kernels are edges from their inputs to their outputs.
struct KernelGraph {
  std::vector<std::string> sources;  ///< arrays available before the pass
  std::vector<KernelNode> kernels;

  int find(const std::string& kernel) const;  ///< -1 if absent
  /// Throws DomainError unless every array has exactly one producer (or is a
  /// source), every input is produced, and the graph is acyclic.
  void validate() const;
};

/// Kernel groups executed as one pass each.
struct FusionPlan {
  std::vector<std::vector<std::string>> groups;
};

struct Pass {
  std::string name;          ///< kernel name, or member names joined by '+'
  std::vector<int> kernels;  ///< graph indices in dependency order
  bool fused() const { return kernels.size() > 1; }
};

/// Validates graph and plan, then orders passes (fused groups contracted)
/// stably by graph position. Throws DomainError for unknown or repeated
/// kernels, groups containing GEMM or exchange kernels, and groups that
/// cannot run as one pass because a path leaves and re-enters them.
std::vector<Pass> schedule(const KernelGraph& graph, const FusionPlan& plan);

/// Data flow of one residual evaluation; the viscous variant adds the
/// gradient branch.
KernelGraph residual_graph(bool viscous);

/// The two fusion regions: the interface flux with its jump, and the
/// divergence sum, Jacobian scaling and source (five kernels into two).
FusionPlan standard_fusion_plan();

}  // namespace zfr::solver
