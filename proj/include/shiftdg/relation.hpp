#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "shiftdg/digraph.hpp"

namespace shiftdg {

/// Boolean matrix on a vertex set, one row mask per vertex.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n) : rows_(n, 0) {}

  static Relation diagonal(std::size_t n, Mask on) {
    Relation r(n);
    for_each_bit(on, [&](Vertex v) { r.rows_[v] = bit(v); });
    return r;
  }

  std::size_t size() const { return rows_.size(); }
  bool contains(Vertex u, Vertex v) const { return (rows_[u] >> v) & 1U; }
  void insert(Vertex u, Vertex v) { rows_[u] |= bit(v); }
  Mask row(Vertex u) const { return rows_[u]; }
  void set_row(Vertex u, Mask m) { rows_[u] = m; }

  Mask column(Vertex v) const {
    Mask c = 0;
    for (Vertex u = 0; u < rows_.size(); ++u)
      if (contains(u, v)) c |= bit(u);
    return c;
  }

  Mask domain() const {
    Mask d = 0;
    for (Vertex u = 0; u < rows_.size(); ++u)
      if (rows_[u]) d |= bit(u);
    return d;
  }

  bool empty() const { return domain() == 0; }

  /// Relational composite: first this, then s.
  Relation then(const Relation& s) const {
    Relation out(size());
    for (Vertex u = 0; u < size(); ++u) {
      Mask acc = 0;
      for_each_bit(rows_[u], [&](Vertex v) { acc |= s.rows_[v]; });
      out.rows_[u] = acc;
    }
    return out;
  }

  Relation operator|(const Relation& o) const {
    Relation out = *this;
    for (Vertex u = 0; u < size(); ++u) out.rows_[u] |= o.rows_[u];
    return out;
  }

  bool subset_of(const Relation& o) const {
    for (Vertex u = 0; u < size(); ++u)
      if (rows_[u] & ~o.rows_[u]) return false;
    return true;
  }

  std::optional<Vertex> reflexive_point() const {
    for (Vertex u = 0; u < size(); ++u)
      if (contains(u, u)) return u;
    return std::nullopt;
  }

  std::vector<std::pair<Vertex, Vertex>> pairs() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (Vertex u = 0; u < size(); ++u) for_each_bit(rows_[u], [&](Vertex v) { out.emplace_back(u, v); });
    return out;
  }

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::vector<Mask> rows_;
};

/// Boolean matrix product R then S.
inline Relation compose(const Relation& r, const Relation& s) { return r.then(s); }

}  // namespace shiftdg
