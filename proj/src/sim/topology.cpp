#include "gridsec/sim/topology.hpp"

#include <set>

namespace gridsec::sim {

const char* to_string(NodeRole role) {
  switch (role) {
    case NodeRole::kGrb: return "grb";
    case NodeRole::kDrm: return "drm";
    case NodeRole::kInfo: return "info";
    case NodeRole::kRouter: return "router";
  }
  return "?";
}

NodeRole parse_role(const std::string& name) {
  if (name == "grb") return NodeRole::kGrb;
  if (name == "drm") return NodeRole::kDrm;
  if (name == "info") return NodeRole::kInfo;
  if (name == "router") return NodeRole::kRouter;
  throw InvalidParameter("unknown node role '" + name + "'");
}

EdgeKey edge_key(const std::string& a, const std::string& b) {
  return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

void Topology::add_node(const std::string& id, NodeRole role) {
  if (id.empty()) throw TopologyError("empty node id");
  if (!nodes_.emplace(id, role).second) throw TopologyError("duplicate node '" + id + "'");
}

void Topology::add_edge(const std::string& a, const std::string& b, std::uint64_t latency) {
  if (!has_node(a) || !has_node(b)) throw TopologyError("edge " + a + "-" + b + " names an unknown node");
  if (a == b) throw TopologyError("self loop at '" + a + "'");
  if (latency == 0) throw TopologyError("edge " + a + "-" + b + " needs a latency of at least one tick");
  if (!edges_.emplace(edge_key(a, b), latency).second) throw TopologyError("duplicate edge " + a + "-" + b);
}

void Topology::add_route(const std::string& drm, Route route) { routes_[drm].push_back(std::move(route)); }

void Topology::validate() const {
  if (nodes_with(NodeRole::kGrb).size() != 1) throw TopologyError("exactly one grb node is required");
  const std::string& broker = grb();
  const auto managers = drms();
  if (managers.empty()) throw TopologyError("at least one drm node is required");

  for (const auto& [drm, list] : routes_) {
    if (!has_node(drm) || role(drm) != NodeRole::kDrm) throw TopologyError("paths declared for non-drm '" + drm + "'");
  }
  for (const auto& drm : managers) {
    auto it = routes_.find(drm);
    if (it == routes_.end() || it->second.empty()) throw TopologyError("drm '" + drm + "' has no paths");
    std::set<std::string> interior_seen;
    for (std::size_t r = 0; r < it->second.size(); ++r) {
      const Route& route = it->second[r];
      const std::string label = "path " + std::to_string(r) + " of '" + drm + "'";
      if (route.size() < 2 || route.front() != broker || route.back() != drm)
        throw TopologyError(label + " must run from '" + broker + "' to '" + drm + "'");
      std::set<std::string> on_route;
      for (std::size_t i = 0; i < route.size(); ++i) {
        if (!has_node(route[i])) throw TopologyError(label + " names unknown node '" + route[i] + "'");
        if (!on_route.insert(route[i]).second) throw TopologyError(label + " revisits '" + route[i] + "'");
        if (i > 0 && !has_edge(route[i - 1], route[i]))
          throw TopologyError(label + " uses missing edge " + route[i - 1] + "-" + route[i]);
      }
      for (std::size_t i = 1; i + 1 < route.size(); ++i) {
        if (!interior_seen.insert(route[i]).second)
          throw TopologyError("paths of '" + drm + "' are not disjoint: '" + route[i] + "' is shared");
      }
    }
  }
}

NodeRole Topology::role(const std::string& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw TopologyError("unknown node '" + id + "'");
  return it->second;
}

std::uint64_t Topology::latency(const std::string& a, const std::string& b) const {
  auto it = edges_.find(edge_key(a, b));
  if (it == edges_.end()) throw TopologyError("no edge " + a + "-" + b);
  return it->second;
}

std::uint64_t Topology::route_latency(const Route& route) const {
  std::uint64_t total = 0;
  for (std::size_t i = 1; i < route.size(); ++i) total += latency(route[i - 1], route[i]);
  return total;
}

const std::string& Topology::grb() const {
  for (const auto& [id, r] : nodes_)
    if (r == NodeRole::kGrb) return id;
  throw TopologyError("no grb node");
}

std::vector<std::string> Topology::drms() const { return nodes_with(NodeRole::kDrm); }

std::vector<std::string> Topology::nodes_with(NodeRole role) const {
  std::vector<std::string> out;
  for (const auto& [id, r] : nodes_)
    if (r == role) out.push_back(id);
  return out;
}

const std::vector<Route>& Topology::routes(const std::string& drm) const {
  static const std::vector<Route> kNone;
  auto it = routes_.find(drm);
  return it == routes_.end() ? kNone : it->second;
}

}  // namespace gridsec::sim
