#include "zfr/solver/kernel_graph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "zfr/common/error.hpp"

namespace zfr::solver {

int KernelGraph::find(const std::string& kernel) const {
  for (std::size_t i = 0; i < kernels.size(); ++i)
    if (kernels[i].name == kernel) return static_cast<int>(i);
  return -1;
}

namespace {

/// dependency lists: deps[k] = kernels producing an input of k.
std::vector<std::vector<int>> dependencies(const KernelGraph& g) {
  std::map<std::string, int> producer;
  for (const auto& s : g.sources) {
    if (!producer.emplace(s, -1).second) throw DomainError("source array '" + s + "' listed twice");
  }
  std::set<std::string> names;
  for (std::size_t k = 0; k < g.kernels.size(); ++k) {
    if (!names.insert(g.kernels[k].name).second) throw DomainError("kernel '" + g.kernels[k].name + "' listed twice");
    for (const auto& o : g.kernels[k].outputs) {
      if (!producer.emplace(o, static_cast<int>(k)).second)
        throw DomainError("array '" + o + "' has more than one producer");
    }
  }
  std::vector<std::vector<int>> deps(g.kernels.size());
  for (std::size_t k = 0; k < g.kernels.size(); ++k) {
    for (const auto& in : g.kernels[k].inputs) {
      auto it = producer.find(in);
      if (it == producer.end())
        throw DomainError("kernel '" + g.kernels[k].name + "' consumes '" + in + "' which nothing produces");
      if (it->second >= 0) deps[k].push_back(it->second);
    }
  }
  return deps;
}

/// Stable topological order of `nodes` groups; empty result signals a cycle.
std::vector<int> stable_order(const std::vector<std::set<int>>& group_deps, const std::vector<int>& key) {
  const auto n = group_deps.size();
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> users(n);
  for (std::size_t g = 0; g < n; ++g) {
    for (int d : group_deps[g]) {
      ++indeg[g];
      users[static_cast<std::size_t>(d)].push_back(static_cast<int>(g));
    }
  }
  auto cmp = [&](int a, int b) { return key[static_cast<std::size_t>(a)] > key[static_cast<std::size_t>(b)]; };
  std::priority_queue<int, std::vector<int>, decltype(cmp)> ready(cmp);
  for (std::size_t g = 0; g < n; ++g)
    if (indeg[g] == 0) ready.push(static_cast<int>(g));
  std::vector<int> order;
  while (!ready.empty()) {
    const int g = ready.top();
    ready.pop();
    order.push_back(g);
    for (int u : users[static_cast<std::size_t>(g)])
      if (--indeg[static_cast<std::size_t>(u)] == 0) ready.push(u);
  }
  if (order.size() != n) order.clear();
  return order;
}

}  // namespace

void KernelGraph::validate() const {
  const auto deps = dependencies(*this);
  std::vector<std::set<int>> gd(kernels.size());
  std::vector<int> key(kernels.size());
  for (std::size_t k = 0; k < kernels.size(); ++k) {
    gd[k] = std::set<int>(deps[k].begin(), deps[k].end());
    key[k] = static_cast<int>(k);
  }
  if (!kernels.empty() && stable_order(gd, key).empty()) throw DomainError("kernel graph has a cycle");
}

std::vector<Pass> schedule(const KernelGraph& graph, const FusionPlan& plan) {
  graph.validate();
  const auto deps = dependencies(graph);
  const auto nk = graph.kernels.size();
  std::vector<int> group_of(nk, -1);
  std::vector<std::vector<int>> members;
  for (const auto& grp : plan.groups) {
    if (grp.empty()) throw DomainError("empty fusion group");
    std::vector<int> m;
    for (const auto& name : grp) {
      const int k = graph.find(name);
      if (k < 0) throw DomainError("fusion group names unknown kernel '" + name + "'");
      const auto cls = graph.kernels[static_cast<std::size_t>(k)].cls;
      if (cls == KernelClass::Gemm || cls == KernelClass::Exchange)
        throw DomainError("kernel '" + name + "' cannot be fused: only point-wise kernels fuse");
      if (group_of[static_cast<std::size_t>(k)] >= 0) throw DomainError("kernel '" + name + "' is in two fusion groups");
      group_of[static_cast<std::size_t>(k)] = static_cast<int>(members.size());
      m.push_back(k);
    }
    members.push_back(std::move(m));
  }
  // Contract groups; every other kernel is its own node.
  std::vector<int> node_of(nk);
  std::vector<std::vector<int>> nodes = members;
  for (std::size_t k = 0; k < nk; ++k) {
    if (group_of[k] >= 0) {
      node_of[k] = group_of[k];
    } else {
      node_of[k] = static_cast<int>(nodes.size());
      nodes.push_back({static_cast<int>(k)});
    }
  }
  std::vector<std::set<int>> nd(nodes.size());
  std::vector<int> key(nodes.size());
  for (std::size_t n = 0; n < nodes.size(); ++n) key[n] = *std::min_element(nodes[n].begin(), nodes[n].end());
  for (std::size_t k = 0; k < nk; ++k) {
    for (int d : deps[k]) {
      const int a = node_of[static_cast<std::size_t>(d)], b = node_of[k];
      if (a != b) nd[static_cast<std::size_t>(b)].insert(a);
    }
  }
  const auto order = stable_order(nd, key);
  if (order.empty()) throw DomainError("fusion plan violates kernel dependencies");

  std::vector<Pass> passes;
  for (int n : order) {
    auto ks = nodes[static_cast<std::size_t>(n)];
    // Members in dependency order: graph order restricted to the group is
    // topological when the graph lists kernels topologically; re-sort to be safe.
    std::vector<std::set<int>> inner(ks.size());
    std::vector<int> ikey(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
      ikey[i] = ks[i];
      for (int d : deps[static_cast<std::size_t>(ks[i])]) {
        auto it = std::find(ks.begin(), ks.end(), d);
        if (it != ks.end()) inner[i].insert(static_cast<int>(it - ks.begin()));
      }
    }
    const auto io = stable_order(inner, ikey);
    Pass p;
    for (int i : io) {
      p.kernels.push_back(ks[static_cast<std::size_t>(i)]);
      if (!p.name.empty()) p.name += "+";
      p.name += graph.kernels[static_cast<std::size_t>(ks[static_cast<std::size_t>(i)])].name;
    }
    passes.push_back(std::move(p));
  }
  return passes;
}

KernelGraph residual_graph(bool viscous) {
  using C = KernelClass;
  KernelGraph g;
  g.sources = {"Q"};
  g.kernels.push_back({"interp", C::Gemm, {"Q"}, {"Qf"}});
  g.kernels.push_back({"halo_solution", C::Exchange, {"Qf"}, {"Qf_remote"}});
  std::vector<std::string> flux_in{"Q"};
  std::vector<std::string> common_in{"Qf", "Qf_remote"};
  if (viscous) {
    g.kernels.push_back({"common_solution", C::PointwiseIndirect, {"Qf", "Qf_remote"}, {"solution_jump"}});
    g.kernels.push_back({"gradient", C::Gemm, {"Q"}, {"grad_ref_interior"}});
    g.kernels.push_back({"gradient_correction", C::Gemm, {"grad_ref_interior", "solution_jump"}, {"grad_ref"}});
    g.kernels.push_back({"transform_gradient", C::PointwiseDirect, {"grad_ref"}, {"grad"}});
    g.kernels.push_back({"interp_gradient", C::Gemm, {"grad"}, {"grad_f"}});
    g.kernels.push_back({"halo_gradient", C::Exchange, {"grad_f"}, {"grad_f_remote"}});
    flux_in.push_back("grad");
    common_in.push_back("grad_f");
    common_in.push_back("grad_f_remote");
  }
  g.kernels.push_back({"evaluate_flux", C::PointwiseDirect, flux_in, {"Fhat"}});
  g.kernels.push_back({"normal_interp", C::Gemm, {"Fhat"}, {"Fn"}});
  g.kernels.push_back({"divergence", C::Gemm, {"Fhat"}, {"divF"}});
  g.kernels.push_back({"common_flux", C::PointwiseIndirect, common_in, {"FI"}});
  g.kernels.push_back({"flux_jump", C::PointwiseDirect, {"FI", "Fn"}, {"jump"}});
  g.kernels.push_back({"correction", C::Gemm, {"jump"}, {"corrF"}});
  g.kernels.push_back({"sum_divergence", C::PointwiseDirect, {"divF", "corrF"}, {"R_sum"}});
  g.kernels.push_back({"inverse_jacobian", C::PointwiseDirect, {"R_sum"}, {"R_scaled"}});
  g.kernels.push_back({"add_source", C::PointwiseDirect, {"R_scaled", "Q"}, {"R"}});
  return g;
}

FusionPlan standard_fusion_plan() {
  return FusionPlan{{{"common_flux", "flux_jump"}, {"sum_divergence", "inverse_jacobian", "add_source"}}};
}

}  // namespace zfr::solver
