#include "kpq/group.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "kpq/error.hpp"

namespace kpq {

namespace {

std::int32_t parse_int(std::string_view token) {
  // Accept the typographic minus sign (U+2212) as well as '-'.
  std::string cleaned;
  cleaned.reserve(token.size());
  for (std::size_t i = 0; i < token.size(); ++i) {
    if (token.compare(i, 3, "\xE2\x88\x92") == 0) {
      cleaned.push_back('-');
      i += 2;
    } else if (token[i] != '+') {
      cleaned.push_back(token[i]);
    }
  }
  std::int32_t value = 0;
  const auto* first = cleaned.data();
  const auto* last = cleaned.data() + cleaned.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (cleaned.empty() || ec != std::errc{} || ptr != last) {
    throw Error(ErrorKind::parse, "group element: cannot parse integer '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(sep, start);
    const std::size_t stop = end == std::string_view::npos ? text.size() : end;
    std::string_view tok = text.substr(start, stop - start);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (!tok.empty()) out.push_back(tok);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace

GroupModel::GroupModel(GroupFamily family, int parameter) : family_(family), parameter_(parameter) {
  switch (family_) {
    case GroupFamily::lattice:
      for (int i = 0; i < parameter_; ++i) {
        for (int sgn : {1, -1}) {
          GroupElement g(static_cast<std::size_t>(parameter_), 0);
          g[static_cast<std::size_t>(i)] = sgn;
          generators_.push_back(g);
        }
      }
      break;
    case GroupFamily::free:
      for (int i = 1; i <= parameter_; ++i) {
        generators_.push_back(GroupElement{i});
        generators_.push_back(GroupElement{-i});
      }
      break;
    case GroupFamily::heisenberg:
      generators_ = {GroupElement{1, 0, 0}, GroupElement{-1, 0, 0}, GroupElement{0, 1, 0},
                     GroupElement{0, -1, 0}};
      break;
    case GroupFamily::cyclic:
      if (parameter_ >= 2) generators_.push_back(GroupElement{1});
      if (parameter_ >= 3) generators_.push_back(GroupElement{parameter_ - 1});
      break;
  }
}

std::shared_ptr<const GroupModel> GroupModel::lattice(int dim) {
  if (dim < 1) throw Error(ErrorKind::domain, "lattice group: dimension must be >= 1");
  return std::shared_ptr<const GroupModel>(new GroupModel(GroupFamily::lattice, dim));
}

std::shared_ptr<const GroupModel> GroupModel::free_group(int rank) {
  if (rank < 1) throw Error(ErrorKind::domain, "free group: rank must be >= 1");
  return std::shared_ptr<const GroupModel>(new GroupModel(GroupFamily::free, rank));
}

std::shared_ptr<const GroupModel> GroupModel::cyclic(int order) {
  if (order < 1) throw Error(ErrorKind::domain, "cyclic group: order must be >= 1");
  return std::shared_ptr<const GroupModel>(new GroupModel(GroupFamily::cyclic, order));
}

std::shared_ptr<const GroupModel> GroupModel::heisenberg(int length_radius) {
  if (length_radius < 0) throw Error(ErrorKind::domain, "heisenberg: negative length radius");
  auto* model = new GroupModel(GroupFamily::heisenberg, 3);
  std::shared_ptr<const GroupModel> ptr(model);
  auto table = std::make_shared<std::unordered_map<GroupElement, int, GroupElementHash>>();
  std::vector<GroupElement> frontier{model->identity()};
  (*table)[model->identity()] = 0;
  for (int r = 1; r <= length_radius; ++r) {
    std::vector<GroupElement> next;
    for (const auto& x : frontier) {
      for (const auto& s : model->generators_) {
        GroupElement y = model->multiply(x, s);
        if (table->emplace(y, r).second) next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  model->length_table_ = std::move(table);
  model->length_table_radius_ = length_radius;
  return ptr;
}

std::shared_ptr<const GroupModel> GroupModel::from_name(std::string_view name) {
  auto number = [&](std::string_view rest) {
    if (!rest.empty() && rest.front() == '^') rest.remove_prefix(1);
    return rest.empty() ? 1 : static_cast<int>(parse_int(rest));
  };
  if (name.empty()) throw Error(ErrorKind::parse, "group name is empty");
  switch (name.front()) {
    case 'Z':
      return lattice(number(name.substr(1)));
    case 'F':
      return free_group(number(name.substr(1)));
    case 'H':
      if (name == "H" || name == "H3") return heisenberg();
      break;
    case 'C':
      return cyclic(number(name.substr(1)));
    default:
      break;
  }
  throw Error(ErrorKind::parse, "unknown group name '" + std::string(name) + "'");
}

std::string GroupModel::name() const {
  switch (family_) {
    case GroupFamily::lattice:
      return parameter_ == 1 ? "Z" : "Z" + std::to_string(parameter_);
    case GroupFamily::free:
      return "F" + std::to_string(parameter_);
    case GroupFamily::heisenberg:
      return "H3";
    case GroupFamily::cyclic:
      return "C" + std::to_string(parameter_);
  }
  return "?";
}

GroupElement GroupModel::identity() const {
  switch (family_) {
    case GroupFamily::lattice:
      return GroupElement(static_cast<std::size_t>(parameter_), 0);
    case GroupFamily::free:
      return {};
    case GroupFamily::heisenberg:
      return GroupElement{0, 0, 0};
    case GroupFamily::cyclic:
      return GroupElement{0};
  }
  return {};
}

GroupElement GroupModel::multiply(const GroupElement& x, const GroupElement& y) const {
  switch (family_) {
    case GroupFamily::lattice: {
      GroupElement z(x);
      for (std::size_t i = 0; i < z.size(); ++i) z[i] += y[i];
      return z;
    }
    case GroupFamily::free: {
      GroupElement z(x);
      for (std::int32_t letter : y) {
        if (!z.empty() && z.back() == -letter) {
          z.pop_back();
        } else {
          z.push_back(letter);
        }
      }
      return z;
    }
    case GroupFamily::heisenberg:
      return GroupElement{x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1]};
    case GroupFamily::cyclic:
      return GroupElement{static_cast<std::int32_t>((static_cast<std::int64_t>(x[0]) + y[0]) % parameter_)};
  }
  return {};
}

GroupElement GroupModel::inverse(const GroupElement& x) const {
  switch (family_) {
    case GroupFamily::lattice: {
      GroupElement z(x);
      for (auto& c : z) c = -c;
      return z;
    }
    case GroupFamily::free: {
      GroupElement z;
      z.reserve(x.size());
      for (auto it = x.rbegin(); it != x.rend(); ++it) z.push_back(-*it);
      return z;
    }
    case GroupFamily::heisenberg:
      return GroupElement{-x[0], -x[1], -x[2] + x[0] * x[1]};
    case GroupFamily::cyclic:
      return GroupElement{(parameter_ - x[0]) % parameter_};
  }
  return {};
}

bool GroupModel::is_valid(const GroupElement& x) const {
  switch (family_) {
    case GroupFamily::lattice:
      return x.size() == static_cast<std::size_t>(parameter_);
    case GroupFamily::free:
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0 || std::abs(x[i]) > parameter_) return false;
        if (i > 0 && x[i] == -x[i - 1]) return false;
      }
      return true;
    case GroupFamily::heisenberg:
      return x.size() == 3;
    case GroupFamily::cyclic:
      return x.size() == 1 && x[0] >= 0 && x[0] < parameter_;
  }
  return false;
}

int GroupModel::word_length(const GroupElement& x) const {
  switch (family_) {
    case GroupFamily::lattice: {
      int s = 0;
      for (auto c : x) s += std::abs(c);
      return s;
    }
    case GroupFamily::free:
      return static_cast<int>(x.size());
    case GroupFamily::cyclic:
      return std::min(x[0], parameter_ - x[0]);
    case GroupFamily::heisenberg: {
      auto it = length_table_->find(x);
      if (it == length_table_->end()) {
        throw Error(ErrorKind::cap_exceeded,
                    "heisenberg word length: element " + encode(x) +
                        " lies outside the enumerated radius " + std::to_string(length_table_radius_));
      }
      return it->second;
    }
  }
  return 0;
}

std::string GroupModel::encode(const GroupElement& x) const {
  std::ostringstream os;
  if (family_ == GroupFamily::free) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i) os << ' ';
      os << (x[i] > 0 ? "+" : "-") << std::abs(x[i]);
    }
    return os.str();
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ',';
    os << x[i];
  }
  return os.str();
}

GroupElement GroupModel::decode(std::string_view text) const {
  GroupElement x;
  if (family_ == GroupFamily::free) {
    for (auto tok : split(text, ' ')) x.push_back(parse_int(tok));
  } else {
    for (auto tok : split(text, ',')) x.push_back(parse_int(tok));
  }
  if (family_ == GroupFamily::cyclic && x.size() == 1) {
    x[0] = ((x[0] % parameter_) + parameter_) % parameter_;
  }
  if (!is_valid(x)) {
    throw Error(ErrorKind::parse, "'" + std::string(text) + "' is not a canonical element of " + name());
  }
  return x;
}

int word_length_bfs(const GroupModel& g, const GroupElement& x, int max_radius, std::size_t cap) {
  std::unordered_set<GroupElement, GroupElementHash> seen{g.identity()};
  std::vector<GroupElement> frontier{g.identity()};
  if (x == g.identity()) return 0;
  for (int r = 1; r <= max_radius; ++r) {
    std::vector<GroupElement> next;
    for (const auto& y : frontier) {
      for (const auto& s : g.generators()) {
        GroupElement z = g.multiply(y, s);
        if (z == x) return r;
        if (seen.insert(z).second) next.push_back(std::move(z));
      }
    }
    if (seen.size() > cap) throw Error(ErrorKind::cap_exceeded, "word_length_bfs: ball cap exceeded");
    frontier = std::move(next);
  }
  return -1;
}

std::vector<GroupElement> ball(const GroupModel& g, int r, std::size_t cap) {
  if (r < 0) throw Error(ErrorKind::domain, "ball: negative radius");
  std::unordered_set<GroupElement, GroupElementHash> seen{g.identity()};
  std::vector<GroupElement> out{g.identity()};
  std::size_t layer_begin = 0;
  for (int k = 1; k <= r; ++k) {
    const std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (const auto& s : g.generators()) {
        GroupElement z = g.multiply(out[i], s);
        if (seen.insert(z).second) {
          out.push_back(std::move(z));
          if (out.size() > cap) {
            throw Error(ErrorKind::cap_exceeded, "ball: |B(e," + std::to_string(r) + ")| exceeds cap " +
                                                     std::to_string(cap) + " in " + g.name());
          }
        }
      }
    }
    if (out.size() == layer_end) break;  // finite group exhausted
    layer_begin = layer_end;
  }
  return out;
}

std::vector<GroupElement> sphere(const GroupModel& g, int r, std::size_t cap) {
  auto b = ball(g, r, cap);
  std::vector<GroupElement> out;
  for (auto& x : b) {
    if (g.word_length(x) == r) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace kpq
