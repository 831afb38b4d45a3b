#include "klcells/coxeter.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "klcells/error.hpp"

namespace klcells {
namespace {

using Key = std::vector<std::int64_t>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : k) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Exact model of the group used only during enumeration.
class GroupModel {
 public:
  virtual ~GroupModel() = default;
  virtual Key identity() const = 0;
  virtual Key act(const Key& w, int s, Side side) const = 0;
};

// Dihedral group I2(m) on generators {0, 1}. An element is the pair
// (length, first letter) of its alternating reduced word; the longest
// element is normalized to (m, 0).
class DihedralModel final : public GroupModel {
 public:
  explicit DihedralModel(int m) : m_(m) {}

  Key identity() const override { return {0, 0}; }

  Key act(const Key& w, int s, Side side) const override {
    const auto len = w[0];
    const auto first = w[1];
    if (len == 0) return {1, s};
    if (len == m_) {
      // Drop the letter s from w0: the remaining word avoids s at that end.
      if (side == Side::Left) return make(m_ - 1, 1 - s);
      const auto last_other = 1 - s;  // the word must end with 1-s
      const auto f = ((m_ - 1) % 2 == 1) ? last_other : 1 - last_other;
      return make(m_ - 1, f);
    }
    if (side == Side::Left) {
      if (first == s) return make(len - 1, 1 - s);
      return make(len + 1, s);
    }
    const auto last = (len % 2 == 1) ? first : 1 - first;
    if (last == s) return make(len - 1, first);
    return make(len + 1, first);
  }

 private:
  Key make(std::int64_t len, std::int64_t first) const {
    if (len == 0) return {0, 0};
    if (len == m_) return {m_, 0};
    return {len, first};
  }
  std::int64_t m_;
};

// Integer reflection representation s_i(a_j) = a_j - A_ij a_i built from a
// Cartan matrix with A_ij A_ji = 4 cos^2(pi / m_ij). Elements are keyed by
// their matrices.
class ReflectionModel final : public GroupModel {
 public:
  using Mat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  explicit ReflectionModel(const CoxeterMatrix& m) : n_(static_cast<int>(m.size())) {
    Mat cartan = Mat::Zero(n_, n_);
    for (int i = 0; i < n_; ++i) {
      cartan(i, i) = 2;
      for (int j = i + 1; j < n_; ++j) {
        switch (m[i][j]) {
          case 2: break;
          case 3: cartan(i, j) = cartan(j, i) = -1; break;
          case 4: cartan(i, j) = -1; cartan(j, i) = -2; break;
          case 6: cartan(i, j) = -1; cartan(j, i) = -3; break;
          default: throw UsageError("bond order " + std::to_string(m[i][j]) +
                                    " has no integer reflection representation");
        }
      }
    }
    for (int i = 0; i < n_; ++i) {
      Mat g = Mat::Identity(n_, n_);
      for (int j = 0; j < n_; ++j) g(i, j) -= cartan(i, j);
      gens_.push_back(std::move(g));
    }
  }

  Key identity() const override { return to_key(Mat::Identity(n_, n_)); }

  Key act(const Key& w, int s, Side side) const override {
    Eigen::Map<const Mat> mw(w.data(), n_, n_);
    return side == Side::Left ? to_key(gens_[s] * mw) : to_key(mw * gens_[s]);
  }

 private:
  static Key to_key(const Mat& m) { return Key(m.data(), m.data() + m.size()); }
  int n_;
  std::vector<Mat> gens_;
};

bool is_forest(const CoxeterMatrix& m) {
  const int n = static_cast<int>(m.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (m[i][j] == 2) continue;
      const int a = find(i), b = find(j);
      if (a == b) return false;
      parent[a] = b;
    }
  return true;
}

std::string stem(const std::string& name) {
  auto end = name.size();
  while (end > 1 && std::isdigit(static_cast<unsigned char>(name[end - 1]))) --end;
  return name.substr(0, end);
}

void validate(const std::vector<std::string>& names, const CoxeterMatrix& m) {
  const auto n = names.size();
  if (n == 0) throw UsageError("Coxeter system needs at least one generator");
  if (n > 32) throw UsageError("at most 32 generators are supported");
  if (m.size() != n) throw UsageError("Coxeter matrix size does not match generator count");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& name = names[i];
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
      throw UsageError("generator names must start with a letter: '" + name + "'");
    for (char c : name)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        throw UsageError("invalid character in generator name '" + name + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (names[j] == name) throw UsageError("duplicate generator name '" + name + "'");
    if (m[i].size() != n) throw UsageError("Coxeter matrix is not square");
    if (m[i][i] != 1) throw UsageError("Coxeter matrix diagonal must be 1");
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (m[i][j] < 2) throw UsageError("off-diagonal Coxeter matrix entries must be >= 2");
      if (m[i][j] != m[j][i]) throw UsageError("Coxeter matrix must be symmetric");
    }
  }
}

CoxeterMatrix chain(int n, const std::vector<std::pair<int, int>>& bonds_with_order) {
  CoxeterMatrix m(n, std::vector<int>(n, 2));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  for (int i = 0; i + 1 < n; ++i) m[i][i + 1] = m[i + 1][i] = 3;
  for (auto [i, order] : bonds_with_order) m[i][i + 1] = m[i + 1][i] = order;
  return m;
}

}  // namespace

std::string canonical_type_name(std::string_view name) {
  std::string s;
  for (char c : name)
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::toupper(c));
  auto bad = [&] { return UsageError("unknown or unsupported Coxeter type '" + std::string(name) + "'"); };
  if (s.size() < 2) throw bad();
  if (s.rfind("I2", 0) == 0) {
    std::string rest = s.substr(2);
    if (!rest.empty() && (rest.front() == ':' || rest.front() == '('))
      rest = rest.substr(1);
    if (!rest.empty() && rest.back() == ')') rest.pop_back();
    if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](unsigned char c) { return std::isdigit(c) != 0; }) || rest.size() > 6) throw bad();
    const int m = std::stoi(rest);
    if (m < 2) throw bad();
    return "I2:" + std::to_string(m);
  }
  const char family = s[0];
  const std::string rest = s.substr(1);
  if (!std::all_of(rest.begin(), rest.end(), [](unsigned char c) { return std::isdigit(c) != 0; }) || rest.size() > 2) throw bad();
  const int n = std::stoi(rest);
  const bool ok = (family == 'A' && n >= 1 && n <= 4) || (family == 'B' && n >= 2 && n <= 4) ||
                  (family == 'D' && n == 4) || (family == 'F' && n == 4);
  if (!ok) throw bad();
  return std::string(1, family) + std::to_string(n);
}

CoxeterSystem CoxeterSystem::from_type(std::string_view name, std::size_t element_cap) {
  const std::string type = canonical_type_name(name);
  const char family = type[0];
  std::vector<std::string> names;
  CoxeterMatrix m;
  if (family == 'I') {
    const int order = std::stoi(type.substr(3));
    names = {"s", "t"};
    m = {{1, order}, {order, 1}};
  } else {
    const int n = std::stoi(type.substr(1));
    switch (family) {
      case 'A':
        if (n == 1) {
          names = {"s"};
        } else {
          for (int i = 1; i <= n; ++i) names.push_back("s" + std::to_string(i));
        }
        m = chain(n, {});
        break;
      case 'B':
        names = {"t"};
        if (n == 2) {
          names.push_back("s");
        } else {
          for (int i = 1; i < n; ++i) names.push_back("s" + std::to_string(i));
        }
        m = chain(n, {{0, 4}});
        break;
      case 'D':
        names = {"s1", "s2", "s3", "s4"};
        m = CoxeterMatrix(4, std::vector<int>(4, 2));
        for (int i = 0; i < 4; ++i) m[i][i] = 1;
        for (int j : {0, 2, 3}) m[1][j] = m[j][1] = 3;
        break;
      case 'F':
        names = {"s2", "s1", "t1", "t2"};
        m = chain(4, {{1, 4}});
        break;
      default: throw InternalError("unhandled catalog family");
    }
  }
  return from_matrix(std::move(names), std::move(m), element_cap, type);
}

CoxeterSystem CoxeterSystem::from_matrix(std::vector<std::string> generator_names, CoxeterMatrix matrix,
                                         std::size_t element_cap, std::optional<std::string> catalog_type) {
  validate(generator_names, matrix);
  CoxeterSystem sys;
  sys.names_ = std::move(generator_names);
  sys.matrix_ = std::move(matrix);
  sys.catalog_ = std::move(catalog_type);
  const int n = static_cast<int>(sys.names_.size());

  // Generators are conjugate iff joined by a path of odd bonds.
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> raw_classes;
  for (int i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    std::vector<int> members{i}, stack{i};
    comp[i] = static_cast<int>(raw_classes.size());
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < n; ++b) {
        if (comp[b] < 0 && a != b && sys.matrix_[a][b] % 2 == 1) {
          comp[b] = comp[i];
          members.push_back(b);
          stack.push_back(b);
        }
      }
    }
    std::sort(members.begin(), members.end());
    raw_classes.push_back(std::move(members));
  }
  std::vector<std::string> raw_names;
  for (const auto& cls : raw_classes) {
    std::string st = stem(sys.names_[cls.front()]);
    for (int g : cls)
      if (stem(sys.names_[g]) != st) st = sys.names_[cls.front()];
    raw_names.push_back(st);
  }
  // Colliding stems (e.g. commuting s1, s2) fall back to full generator names.
  const auto stems = raw_names;
  for (std::size_t i = 0; i < raw_names.size(); ++i)
    if (std::count(stems.begin(), stems.end(), stems[i]) > 1) raw_names[i] = sys.names_[raw_classes[i].front()];
  std::vector<std::size_t> order(raw_classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return raw_names[a] < raw_names[b]; });
  sys.class_of_.assign(n, 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    sys.classes_.push_back(raw_classes[order[k]]);
    sys.class_names_.push_back(raw_names[order[k]]);
    for (int g : raw_classes[order[k]]) sys.class_of_[g] = static_cast<int>(k);
  }

  std::unique_ptr<GroupModel> model;
  if (n == 2) {
    model = std::make_unique<DihedralModel>(sys.matrix_[0][1]);
  } else {
    if (!is_forest(sys.matrix_))
      throw UsageError("Coxeter graphs with cycles are not supported for rank >= 3");
    model = std::make_unique<ReflectionModel>(sys.matrix_);
  }

  // Layered BFS. Visiting the previous layer in ShortLex order and generators
  // in declaration order makes the first discovery of each element its
  // ShortLex-least reduced word.
  std::unordered_map<Key, std::uint32_t, KeyHash> index;
  std::vector<Key> keys;
  auto add = [&](Key k, Word w) {
    if (keys.size() >= element_cap)
      throw ResourceError("group enumeration exceeded the element cap of " + std::to_string(element_cap));
    index.emplace(k, static_cast<std::uint32_t>(keys.size()));
    keys.push_back(std::move(k));
    sys.words_.push_back(std::move(w));
  };
  add(model->identity(), {});
  std::size_t layer_begin = 0;
  while (layer_begin < keys.size()) {
    const std::size_t layer_end = keys.size();
    for (std::size_t u = layer_begin; u < layer_end; ++u) {
      for (int s = 0; s < n; ++s) {
        Key k = model->act(keys[u], s, Side::Right);
        if (index.count(k)) continue;
        Word w = sys.words_[u];
        w.push_back(s);
        add(std::move(k), std::move(w));
      }
    }
    layer_begin = layer_end;
  }

  const std::size_t size = keys.size();
  sys.left_.resize(n * size);
  sys.right_.resize(n * size);
  for (std::size_t w = 0; w < size; ++w) {
    for (int s = 0; s < n; ++s) {
      sys.left_[s * size + w] = index.at(model->act(keys[w], s, Side::Left));
      sys.right_[s * size + w] = index.at(model->act(keys[w], s, Side::Right));
    }
  }
  sys.length_vectors_.resize(size);
  sys.inverse_.resize(size);
  for (std::size_t w = 0; w < size; ++w) {
    auto& lv = sys.length_vectors_[w];
    lv.assign(sys.classes_.size(), 0);
    for (int s : sys.words_[w]) ++lv[sys.class_of_[s]];
    Word rev(sys.words_[w].rbegin(), sys.words_[w].rend());
    sys.inverse_[w] = sys.from_word(rev).id;
  }
  sys.build_conjugacy_classes();
  return sys;
}

void CoxeterSystem::build_conjugacy_classes() {
  const std::size_t n = size();
  std::vector<int> seen(n, -1);
  for (std::size_t w = 0; w < n; ++w) {
    if (seen[w] >= 0) continue;
    std::vector<Element> cls{Element{static_cast<std::uint32_t>(w)}};
    seen[w] = static_cast<int>(conjugacy_classes_.size());
    for (std::size_t i = 0; i < cls.size(); ++i) {
      for (int s = 0; s < static_cast<int>(rank()); ++s) {
        const Element c = apply(apply(cls[i], s, Side::Left), s, Side::Right);
        if (seen[c.id] < 0) {
          seen[c.id] = seen[w];
          cls.push_back(c);
        }
      }
    }
    std::sort(cls.begin(), cls.end());
    conjugacy_classes_.push_back(std::move(cls));
  }
}

Element CoxeterSystem::from_word(const Word& word) const {
  Element w = identity();
  for (int s : word) {
    if (s < 0 || s >= static_cast<int>(rank())) throw UsageError("generator index out of range");
    w = apply(w, s, Side::Right);
  }
  return w;
}

Element CoxeterSystem::multiply(Element x, Element y) const {
  Element r = x;
  for (int s : word(y)) r = apply(r, s, Side::Right);
  return r;
}

std::vector<int> CoxeterSystem::right_descent_set(Element w) const {
  std::vector<int> out;
  for (int s = 0; s < static_cast<int>(rank()); ++s)
    if (has_right_descent(w, s)) out.push_back(s);
  return out;
}

std::vector<int> CoxeterSystem::left_descent_set(Element w) const {
  std::vector<int> out;
  for (int s = 0; s < static_cast<int>(rank()); ++s)
    if (has_left_descent(w, s)) out.push_back(s);
  return out;
}

std::vector<Element> CoxeterSystem::parabolic_elements(const std::vector<int>& generators) const {
  std::vector<char> seen(size(), 0);
  std::vector<Element> out{identity()};
  seen[0] = 1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int s : generators) {
      if (s < 0 || s >= static_cast<int>(rank())) throw UsageError("generator index out of range");
      const Element x = apply(out[i], s, Side::Right);
      if (!seen[x.id]) {
        seen[x.id] = 1;
        out.push_back(x);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<int> CoxeterSystem::find_class(std::string_view name) const {
  for (std::size_t i = 0; i < class_names_.size(); ++i)
    if (class_names_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> CoxeterSystem::find_generator(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::string CoxeterSystem::format(Element w) const {
  const auto& wd = word(w);
  if (wd.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < wd.size(); ++i) {
    if (i) out += '*';
    out += names_[wd[i]];
  }
  return out;
}

Element CoxeterSystem::parse(std::string_view text) const {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty() || s == "1" || s == "e") return identity();
  Word word;
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] == '*') {
      ++pos;
      continue;
    }
    int best = -1;
    std::size_t best_len = 0;
    for (std::size_t g = 0; g < names_.size(); ++g) {
      const auto& nm = names_[g];
      if (nm.size() > best_len && s.compare(pos, nm.size(), nm) == 0) {
        best = static_cast<int>(g);
        best_len = nm.size();
      }
    }
    if (best < 0)
      throw UsageError("unknown generator at position " + std::to_string(pos) + " in '" + s + "'");
    word.push_back(best);
    pos += best_len;
  }
  return from_word(word);
}

std::string CoxeterSystem::fingerprint() const {
  if (catalog_) return *catalog_;
  std::ostringstream os;
  os << "matrix:";
  for (std::size_t i = 0; i < names_.size(); ++i) os << (i ? "," : "") << names_[i];
  os << ";";
  for (const auto& row : matrix_) {
    for (auto v : row) os << v << ' ';
    os << '|';
  }
  return os.str();
}

}  // namespace klcells
