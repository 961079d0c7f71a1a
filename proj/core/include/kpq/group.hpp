#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <boost/functional/hash.hpp>

namespace kpq {

/// Canonical encoding of a group element:
///   lattice Z^d   -> d integer coordinates
///   free group    -> reduced word of signed generator indices (+1, -2, ...)
///   Heisenberg    -> (a, b, c) with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')
///   cyclic Z/n    -> single residue in [0, n)
using GroupElement = boost::container::small_vector<std::int32_t, 8>;

struct GroupElementHash {
  std::size_t operator()(const GroupElement& x) const noexcept {
    return boost::hash_range(x.begin(), x.end());
  }
};

enum class GroupFamily { lattice, free, heisenberg, cyclic };

/// A finitely generated discrete group given by its multiplication,
/// inversion and a symmetric, identity-free generating set. Immutable.
class GroupModel {
 public:
  static constexpr std::size_t kDefaultBallCap = 2'000'000;
  static constexpr int kDefaultHeisenbergRadius = 12;

  static std::shared_ptr<const GroupModel> lattice(int dim);
  static std::shared_ptr<const GroupModel> free_group(int rank);
  static std::shared_ptr<const GroupModel> heisenberg(int length_radius = kDefaultHeisenbergRadius);
  static std::shared_ptr<const GroupModel> cyclic(int order);

  /// Parses the short names used by the instance registry: "Z", "Z2",
  /// "Z^3", "F2", "H3", "C5".
  static std::shared_ptr<const GroupModel> from_name(std::string_view name);

  [[nodiscard]] GroupFamily family() const noexcept { return family_; }
  /// Lattice dimension, free rank, or cyclic order; 3 for Heisenberg.
  [[nodiscard]] int parameter() const noexcept { return parameter_; }
  [[nodiscard]] std::string name() const;
  [[nodiscard]] bool is_finite() const noexcept { return family_ == GroupFamily::cyclic; }
  [[nodiscard]] bool is_abelian() const noexcept {
    return family_ == GroupFamily::lattice || family_ == GroupFamily::cyclic ||
           (family_ == GroupFamily::free && parameter_ == 1);
  }

  [[nodiscard]] GroupElement identity() const;
  [[nodiscard]] GroupElement multiply(const GroupElement& x, const GroupElement& y) const;
  [[nodiscard]] GroupElement inverse(const GroupElement& x) const;
  [[nodiscard]] const std::vector<GroupElement>& generators() const noexcept { return generators_; }
  [[nodiscard]] bool is_valid(const GroupElement& x) const;

  /// Word length with respect to generators(). Analytic for lattice, free
  /// and cyclic families; Heisenberg lengths come from a BFS table built at
  /// construction and throw cap_exceeded outside its radius.
  [[nodiscard]] int word_length(const GroupElement& x) const;

  /// Text encoding: "+1 -2 +1" (free), "2,-1" (lattice), "a,b,c"
  /// (Heisenberg), "r" (cyclic). The empty free word is the identity.
  [[nodiscard]] std::string encode(const GroupElement& x) const;
  [[nodiscard]] GroupElement decode(std::string_view text) const;

  friend bool operator==(const GroupModel& a, const GroupModel& b) {
    return a.family_ == b.family_ && a.parameter_ == b.parameter_;
  }

 private:
  GroupModel(GroupFamily family, int parameter);

  GroupFamily family_;
  int parameter_;
  std::vector<GroupElement> generators_;
  std::shared_ptr<const std::unordered_map<GroupElement, int, GroupElementHash>> length_table_;
  int length_table_radius_ = 0;
};

using GroupPtr = std::shared_ptr<const GroupModel>;

/// Shortest-word length by breadth-first search of the Cayley graph, up to
/// max_radius. Independent of GroupModel::word_length; returns -1 when x is
/// farther than max_radius.
int word_length_bfs(const GroupModel& g, const GroupElement& x, int max_radius,
                    std::size_t cap = GroupModel::kDefaultBallCap);

/// Exact enumeration of B(e, r) in breadth-first order. Throws cap_exceeded
/// instead of truncating.
std::vector<GroupElement> ball(const GroupModel& g, int r,
                               std::size_t cap = GroupModel::kDefaultBallCap);

/// Elements of word length exactly r (in ball order).
std::vector<GroupElement> sphere(const GroupModel& g, int r,
                                 std::size_t cap = GroupModel::kDefaultBallCap);

}  // namespace kpq
