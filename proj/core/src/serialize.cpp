#include "sshmt/serialize.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>

namespace sshmt {

using nlohmann::json;

namespace {

// nlohmann reports schema problems as its own exceptions; surface them as Format.
template <class Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(Errc::Format, std::string(what) + ": " + e.what());
  }
}

}  // namespace

json tree_to_json(const MergeTree& tree) {
  json nodes = json::array();
  for (NodeId id = 0; id < tree.size(); ++id) {
    const MergeNode& n = tree.node(id);
    json node;
    node["id"] = id;
    node["parent"] = n.parent == kNoNode ? json(nullptr) : json(n.parent);
    node["children"] = n.is_leaf() ? json::array() : json::array({n.children[0], n.children[1]});
    node["leaf_label"] = n.is_leaf() ? json(n.leaf_label) : json(nullptr);
    nodes.push_back(std::move(node));
  }
  return {{"n_leaves", tree.n_leaves()}, {"nodes", std::move(nodes)}};
}

MergeTree tree_from_json(const json& j) {
  return guarded("merge tree", [&] {
    const auto& arr = j.at("nodes");
    std::vector<MergeNode> nodes(arr.size());
    for (const auto& node : arr) {
      const auto id = node.at("id").get<NodeId>();
      if (id >= nodes.size()) throw Error(Errc::Format, "node id out of range");
      MergeNode& n = nodes[id];
      if (!node.at("parent").is_null()) n.parent = node.at("parent").get<NodeId>();
      const auto& children = node.at("children");
      if (children.size() == 2) {
        n.children = {children[0].get<NodeId>(), children[1].get<NodeId>()};
      } else if (!children.empty()) {
        throw Error(Errc::Format, "node " + std::to_string(id) + " must have 0 or 2 children");
      }
      if (!node.at("leaf_label").is_null()) n.leaf_label = node.at("leaf_label").get<std::uint32_t>();
    }
    MergeTree tree(std::move(nodes));
    if (tree.n_leaves() != j.at("n_leaves").get<std::size_t>()) {
      throw Error(Errc::Format, "n_leaves does not match the node list");
    }
    return tree;
  });
}

json labels_to_json(const MergeTree& tree, std::span<const std::int8_t> y) {
  json out = json::object();
  for (NodeId id : tree.internal_nodes()) {
    if (y[id] != kUnlabeled) out[std::to_string(id)] = static_cast<int>(y[id]);
  }
  return out;
}

NodeLabels labels_from_json(const MergeTree& tree, const json& j) {
  return guarded("labels", [&] {
    NodeLabels y(tree.size(), kUnlabeled);
    for (NodeId id = 0; id < tree.size(); ++id) {
      if (tree.is_leaf(id)) y[id] = 1;
    }
    for (const auto& [key, value] : j.items()) {
      const unsigned long id = std::stoul(key);
      if (id >= tree.size() || tree.is_leaf(static_cast<NodeId>(id))) {
        throw Error(Errc::Format, "label for unknown non-leaf clique " + key);
      }
      const int v = value.get<int>();
      if (v != 0 && v != 1) throw Error(Errc::Format, "labels must be 0 or 1");
      y[id] = static_cast<std::int8_t>(v);
    }
    return y;
  });
}

std::vector<std::vector<std::size_t>> segments_from_json(const json& j) {
  return guarded("segments", [&] { return j.get<std::vector<std::vector<std::size_t>>>(); });
}

json standardizer_to_json(const Standardizer& st) {
  return {{"feature_means", st.means()}, {"feature_stds", st.stds()}};
}

Standardizer standardizer_from_json(const json& j) {
  return guarded("standardizer", [&] {
    return Standardizer(j.at("feature_means").get<std::vector<double>>(),
                        j.at("feature_stds").get<std::vector<double>>());
  });
}

json model_to_json(const Model& model) {
  json j = standardizer_to_json(model.standardizer);
  j["w"] = model.w;
  j["sigma_u"] = model.sigmas.u;
  j["sigma_s"] = model.sigmas.s;
  return j;
}

Model model_from_json(const json& j) {
  return guarded("model", [&] {
    Model m;
    m.w = j.at("w").get<std::vector<double>>();
    m.sigmas = {j.at("sigma_u").get<double>(), j.at("sigma_s").get<double>()};
    m.standardizer = standardizer_from_json(j);
    if (m.w.size() != kFeatureDim) throw Error(Errc::DimMismatch, "model weight vector has the wrong length");
    return m;
  });
}

void write_trace_csv(std::ostream& out, std::span<const TraceEntry> trace) {
  out << "iteration,phase,J,sigma_u,sigma_s,grad_norm\n";
  out << std::setprecision(17);
  for (const auto& t : trace) {
    out << t.iteration << ',' << t.phase << ',' << t.objective << ',' << t.sigma_u << ',' << t.sigma_s << ','
        << t.grad_norm << '\n';
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::Format, path.string() + ": " + e.what());
  }
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace sshmt
