#include "klcells/cells.hpp"

#include <algorithm>
#include <numeric>

#include "klcells/error.hpp"
#include "parallel.hpp"

namespace klcells {
namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> labels() {
    std::vector<std::size_t> out(parent_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = find(i);
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<std::vector<Element>> blocks_from_labels(const std::vector<std::size_t>& labels) {
  std::vector<std::vector<Element>> blocks;
  std::vector<std::size_t> slot(labels.size(), SIZE_MAX);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& s = slot.at(labels[i]);
    if (s == SIZE_MAX) {
      s = blocks.size();
      blocks.emplace_back();
    }
    blocks[s].push_back(Element{static_cast<std::uint32_t>(i)});
  }
  return blocks;
}

// Tarjan's algorithm, iterative. Returns the component label of each node.
std::vector<std::size_t> strong_components(const CellGraph& g, std::size_t* count) {
  const std::size_t n = g.size();
  std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0), comp(n, SIZE_MAX);
  std::vector<std::size_t> stack;
  std::vector<char> on_stack(n, 0);
  std::size_t next_index = 0, ncomp = 0;
  struct Frame {
    std::size_t v, edge;
  };
  std::vector<Frame> call;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != SIZE_MAX) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& f = call.back();
      if (f.edge < g[f.v].size()) {
        const std::size_t w = g[f.v][f.edge++];
        if (index[w] == SIZE_MAX) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
    }
  }
  *count = ncomp;
  return comp;
}

// Renumbers blocks by least member and recomputes order pairs accordingly.
CellPartition canonical_partition(CellSide side, std::vector<std::vector<Element>> blocks,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& order) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::vector<std::size_t> perm(blocks.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(), [&](auto a, auto b) { return blocks[a].front() < blocks[b].front(); });
  std::vector<std::size_t> new_index(blocks.size());
  CellPartition p;
  p.side = side;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    new_index[perm[i]] = i;
    p.blocks.push_back(std::move(blocks[perm[i]]));
  }
  for (auto [i, j] : order) p.order.emplace_back(new_index[i], new_index[j]);
  std::sort(p.order.begin(), p.order.end());
  p.order.erase(std::unique(p.order.begin(), p.order.end()), p.order.end());
  return p;
}

}  // namespace

std::string side_name(CellSide side) {
  switch (side) {
    case CellSide::Left:
      return "L";
    case CellSide::Right:
      return "R";
    case CellSide::TwoSided:
      return "LR";
  }
  return "?";
}

CellSide parse_side(std::string_view text) {
  if (text == "L" || text == "left") return CellSide::Left;
  if (text == "R" || text == "right") return CellSide::Right;
  if (text == "LR" || text == "two-sided" || text == "twosided") return CellSide::TwoSided;
  throw UsageError("unknown side '" + std::string(text) + "' (expected left, right or two-sided)");
}

std::vector<std::size_t> CellPartition::block_index(std::size_t group_size) const {
  std::vector<std::size_t> idx(group_size, SIZE_MAX);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (auto e : blocks[b]) idx.at(e.id) = b;
  return idx;
}

bool CellPartition::leq(std::size_t i, std::size_t j) const {
  return std::binary_search(order.begin(), order.end(), std::make_pair(i, j));
}

CellGraph left_edges(const KLTable& table, unsigned jobs) {
  const auto& sys = table.system();
  const std::size_t n = sys.size();
  CellGraph out(n);
  parallel_for(n, jobs, [&](std::size_t begin, std::size_t end, auto next) {
    for (std::size_t y = begin; y < end; y = next()) {
      std::vector<std::uint32_t> xs{static_cast<std::uint32_t>(y)};
      for (std::size_t s = 0; s < sys.rank(); ++s)
        for (const auto& [x, c] : table.t_times_c(static_cast<int>(s), sys.element(y))) xs.push_back(x);
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
      out[y] = std::move(xs);
    }
  });
  return out;
}

CellPartition cells_from_graph(const CellGraph& graph, CellSide side) {
  std::size_t ncomp = 0;
  const auto comp = strong_components(graph, &ncomp);
  std::vector<std::vector<std::size_t>> dag(ncomp);
  for (std::size_t y = 0; y < graph.size(); ++y)
    for (auto x : graph[y])
      if (comp[x] != comp[y]) dag[comp[y]].push_back(comp[x]);
  for (auto& d : dag) {
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
  }
  // Block i <= block j iff i is reachable from j.
  std::vector<std::pair<std::size_t, std::size_t>> order;
  std::vector<char> seen(ncomp);
  std::vector<std::size_t> todo;
  for (std::size_t j = 0; j < ncomp; ++j) {
    std::fill(seen.begin(), seen.end(), 0);
    todo.assign(1, j);
    seen[j] = 1;
    while (!todo.empty()) {
      const auto v = todo.back();
      todo.pop_back();
      order.emplace_back(v, j);
      for (auto w : dag[v])
        if (!seen[w]) {
          seen[w] = 1;
          todo.push_back(w);
        }
    }
  }
  std::vector<std::vector<Element>> blocks(ncomp);
  for (std::size_t v = 0; v < graph.size(); ++v) blocks[comp[v]].push_back(Element{static_cast<std::uint32_t>(v)});
  return canonical_partition(side, std::move(blocks), order);
}

CellPartition invert_partition(const CoxeterSystem& sys, const CellPartition& p, CellSide new_side) {
  std::vector<std::vector<Element>> blocks;
  for (const auto& b : p.blocks) {
    blocks.emplace_back();
    for (auto e : b) blocks.back().push_back(sys.invert(e));
  }
  return canonical_partition(new_side, std::move(blocks), p.order);
}

CellPartition cells_from_left_edges(const CoxeterSystem& sys, const CellGraph& left, CellSide side) {
  switch (side) {
    case CellSide::Left:
      return cells_from_graph(left, CellSide::Left);
    case CellSide::Right:
      return invert_partition(sys, cells_from_graph(left, CellSide::Left), CellSide::Right);
    case CellSide::TwoSided: {
      CellGraph both = left;
      for (std::size_t y = 0; y < left.size(); ++y) {
        const auto yi = sys.invert(sys.element(y)).id;
        for (auto x : left[y]) both[yi].push_back(sys.invert(Element{x}).id);
      }
      for (auto& xs : both) {
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
      }
      return cells_from_graph(both, CellSide::TwoSided);
    }
  }
  throw UsageError("unknown cell side");
}

CellPartition left_cells(const KLTable& table, unsigned jobs) {
  return cells_from_left_edges(table.system(), left_edges(table, jobs), CellSide::Left);
}

CellPartition right_cells(const KLTable& table, unsigned jobs) {
  return cells_from_left_edges(table.system(), left_edges(table, jobs), CellSide::Right);
}

CellPartition two_sided_cells(const KLTable& table, unsigned jobs) {
  return cells_from_left_edges(table.system(), left_edges(table, jobs), CellSide::TwoSided);
}

nlohmann::ordered_json partition_json(const CoxeterSystem& sys, const CellPartition& p) {
  nlohmann::ordered_json j;
  j["side"] = side_name(p.side);
  auto blocks = nlohmann::ordered_json::array();
  for (const auto& b : p.blocks) {
    auto words = nlohmann::ordered_json::array();
    for (auto e : b) {
      auto word = nlohmann::ordered_json::array();
      for (int s : sys.word(e)) word.push_back(sys.generator_names()[s]);
      words.push_back(std::move(word));
    }
    blocks.push_back(std::move(words));
  }
  j["blocks"] = std::move(blocks);
  auto order = nlohmann::ordered_json::array();
  for (auto [a, b] : p.order) order.push_back({a, b});
  j["order"] = std::move(order);
  return j;
}

std::string partition_fingerprint(const CoxeterSystem& sys, const CellPartition& p) {
  return sha256_hex(partition_json(sys, p).dump());
}

RelationHandle::RelationHandle(std::size_t n, std::vector<std::vector<Element>> blocks) : n_(n) {
  std::vector<char> seen(n, 0);
  for (auto& b : blocks) {
    if (b.empty()) throw UsageError("relation has an empty block");
    std::sort(b.begin(), b.end());
    for (auto e : b) {
      if (e.id >= n || seen[e.id]) throw UsageError("blocks do not partition the group");
      seen[e.id] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw UsageError("blocks do not cover the group");
  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  blocks_ = std::move(blocks);
}

RelationHandle RelationHandle::discrete(std::size_t n) {
  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  return from_labels(labels);
}

RelationHandle RelationHandle::of(const CellPartition& p) {
  std::size_t n = 0;
  for (const auto& b : p.blocks) n += b.size();
  return RelationHandle(n, p.blocks);
}

RelationHandle RelationHandle::from_labels(const std::vector<std::size_t>& labels) {
  std::vector<std::size_t> dense(labels.size());
  std::vector<std::size_t> seen_labels;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find(seen_labels.begin(), seen_labels.end(), labels[i]);
    dense[i] = static_cast<std::size_t>(it - seen_labels.begin());
    if (it == seen_labels.end()) seen_labels.push_back(labels[i]);
  }
  return RelationHandle(labels.size(), blocks_from_labels(dense));
}

std::vector<std::size_t> RelationHandle::labels() const {
  std::vector<std::size_t> out(n_);
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (auto e : blocks_[b]) out[e.id] = b;
  return out;
}

RelationHandle translation_relation(const CoxeterSystem& sys, const std::vector<Element>& h, CellSide side) {
  if (std::find(h.begin(), h.end(), sys.identity()) == h.end())
    throw UsageError("translation set does not contain the identity");
  std::vector<char> in_h(sys.size(), 0);
  for (auto x : h) in_h.at(x.id) = 1;
  for (auto x : h) {
    if (!in_h[sys.invert(x).id]) throw UsageError("translation set is not closed under inverses");
    for (auto y : h)
      if (!in_h[sys.multiply(x, y).id]) throw UsageError("translation set is not closed under multiplication");
  }
  UnionFind uf(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const Element w = sys.element(i);
    for (auto x : h) {
      if (side != CellSide::Right) uf.unite(i, sys.multiply(x, w).id);
      if (side != CellSide::Left) uf.unite(i, sys.multiply(w, x).id);
    }
  }
  return RelationHandle::from_labels(uf.labels());
}

RelationHandle sup_relations(const std::vector<RelationHandle>& rels) {
  if (rels.empty()) throw UsageError("supremum of an empty family");
  const std::size_t n = rels.front().size();
  UnionFind uf(n);
  for (const auto& r : rels) {
    if (r.size() != n) throw UsageError("relations on groups of different sizes");
    for (const auto& b : r.blocks())
      for (auto e : b) uf.unite(b.front().id, e.id);
  }
  return RelationHandle::from_labels(uf.labels());
}

bool is_coarsening(const RelationHandle& fine, const RelationHandle& coarse) {
  if (fine.size() != coarse.size()) throw UsageError("relations on groups of different sizes");
  const auto lab = coarse.labels();
  for (const auto& b : fine.blocks())
    for (auto e : b)
      if (lab[e.id] != lab[b.front().id]) return false;
  return true;
}

}  // namespace klcells
