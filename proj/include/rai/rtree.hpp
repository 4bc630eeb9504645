#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "rai/geo.hpp"

namespace rai {

// Bulk-loaded (sort-tile-recursive) bounding-box tree over a fixed item set.
// Query results are exactly the items whose boxes intersect the window.
class StaticRTree {
 public:
  static constexpr std::size_t kNodeCapacity = 16;

  StaticRTree() = default;

  explicit StaticRTree(const std::vector<GeoBox>& item_boxes) : item_boxes_(item_boxes) {
    const std::size_t n = item_boxes_.size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (n == 0) return;

    // STR leaf packing: slice by box center lon, tile by center lat.
    const std::size_t leaf_count = (n + kNodeCapacity - 1) / kNodeCapacity;
    const std::size_t slice_count =
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(leaf_count))));
    const std::size_t slice_size = (n + slice_count - 1) / slice_count;
    auto center_lon = [&](std::size_t i) {
      return item_boxes_[i].min_lon + item_boxes_[i].max_lon;
    };
    auto center_lat = [&](std::size_t i) {
      return item_boxes_[i].min_lat + item_boxes_[i].max_lat;
    };
    std::sort(order_.begin(), order_.end(),
              [&](std::size_t a, std::size_t b) { return center_lon(a) < center_lon(b); });
    for (std::size_t s = 0; s < n; s += slice_size) {
      const auto end = order_.begin() + std::min(n, s + slice_size);
      std::sort(order_.begin() + s, end,
                [&](std::size_t a, std::size_t b) { return center_lat(a) < center_lat(b); });
    }

    // Leaves reference item slots [first, first + count) in `order_`.
    std::vector<Node> level;
    for (std::size_t i = 0; i < n; i += kNodeCapacity) {
      Node node;
      node.first = static_cast<std::uint32_t>(i);
      node.count = static_cast<std::uint32_t>(std::min(kNodeCapacity, n - i));
      node.leaf = true;
      for (std::uint32_t j = 0; j < node.count; ++j) {
        node.box.expand(item_boxes_[order_[i + j]]);
      }
      level.push_back(node);
    }

    // Pack upper levels until a single root remains.
    std::vector<std::vector<Node>> levels{std::move(level)};
    while (levels.back().size() > 1) {
      const std::vector<Node>& below = levels.back();
      std::vector<Node> above;
      for (std::size_t i = 0; i < below.size(); i += kNodeCapacity) {
        Node node;
        node.first = static_cast<std::uint32_t>(i);
        node.count = static_cast<std::uint32_t>(std::min(kNodeCapacity, below.size() - i));
        node.leaf = false;
        for (std::uint32_t j = 0; j < node.count; ++j) node.box.expand(below[i + j].box);
        above.push_back(node);
      }
      levels.push_back(std::move(above));
    }

    // Flatten root-first; child pointers become absolute node indices.
    std::vector<std::size_t> level_offset(levels.size());
    std::size_t total = 0;
    for (std::size_t l = levels.size(); l-- > 0;) {
      level_offset[l] = total;
      total += levels[l].size();
    }
    nodes_.resize(total);
    for (std::size_t l = 0; l < levels.size(); ++l) {
      for (std::size_t i = 0; i < levels[l].size(); ++i) {
        Node node = levels[l][i];
        if (!node.leaf) {
          node.first = static_cast<std::uint32_t>(level_offset[l - 1] + node.first);
        }
        nodes_[level_offset[l] + i] = node;
      }
    }
    root_ = level_offset.back();
  }

  std::size_t size() const { return item_boxes_.size(); }
  bool empty() const { return item_boxes_.empty(); }

  // Calls fn(item_index) for every item whose box intersects the window.
  template <typename Fn>
  void visit_window(const GeoBox& window, Fn&& fn) const {
    if (empty()) return;
    visit_node(root_, window, fn);
  }

  std::vector<std::size_t> query_window(const GeoBox& window) const {
    std::vector<std::size_t> out;
    visit_window(window, [&](std::size_t i) { out.push_back(i); });
    return out;
  }

 private:
  struct Node {
    GeoBox box;
    std::uint32_t first = 0;
    std::uint32_t count = 0;
    bool leaf = false;
  };

  template <typename Fn>
  void visit_node(std::size_t node_index, const GeoBox& window, Fn& fn) const {
    const Node& node = nodes_[node_index];
    if (!node.box.intersects(window)) return;
    if (node.leaf) {
      for (std::uint32_t j = 0; j < node.count; ++j) {
        const std::size_t item = order_[node.first + j];
        if (item_boxes_[item].intersects(window)) fn(item);
      }
      return;
    }
    for (std::uint32_t j = 0; j < node.count; ++j) {
      visit_node(node.first + j, window, fn);
    }
  }

  std::vector<GeoBox> item_boxes_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

}  // namespace rai
