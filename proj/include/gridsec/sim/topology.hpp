#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gridsec/errors.hpp"

namespace gridsec::sim {

enum class NodeRole { kGrb, kDrm, kInfo, kRouter };

const char* to_string(NodeRole role);
/// Throws InvalidParameter on an unknown name.
NodeRole parse_role(const std::string& name);

/// Node list from the broker to a resource manager, endpoints included.
using Route = std::vector<std::string>;

/// Undirected edge key with the endpoints in lexicographic order.
using EdgeKey = std::pair<std::string, std::string>;
EdgeKey edge_key(const std::string& a, const std::string& b);

/// Raised by Topology::validate.
class TopologyError : public Error {
 public:
  using Error::Error;
};

class Topology {
 public:
  void add_node(const std::string& id, NodeRole role);
  void add_edge(const std::string& a, const std::string& b, std::uint64_t latency);
  void add_route(const std::string& drm, Route route);

  /// One broker; every route joins the broker to its DRM over existing
  /// edges without revisiting a node; the routes of each DRM share no
  /// interior node; every DRM has at least one route.
  void validate() const;

  bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }
  bool has_edge(const std::string& a, const std::string& b) const { return edges_.count(edge_key(a, b)) != 0; }
  NodeRole role(const std::string& id) const;
  std::uint64_t latency(const std::string& a, const std::string& b) const;
  std::uint64_t route_latency(const Route& route) const;

  const std::string& grb() const;
  std::vector<std::string> drms() const;
  std::vector<std::string> nodes_with(NodeRole role) const;
  const std::vector<Route>& routes(const std::string& drm) const;

  const std::map<std::string, NodeRole>& nodes() const { return nodes_; }
  const std::map<EdgeKey, std::uint64_t>& edges() const { return edges_; }

 private:
  std::map<std::string, NodeRole> nodes_;
  std::map<EdgeKey, std::uint64_t> edges_;
  std::map<std::string, std::vector<Route>> routes_;
};

}  // namespace gridsec::sim
