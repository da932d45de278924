#pragma once

// Congruence closure over ordinal/embedding expressions.  Terms of the
// one-generator algebra participate through their application/composition
// structure, so a fact like T(j_10) = e(j) closes T(j_10(j_11)) with
// e(j)(j_11) as expected.  Used with the premises cited by a single proof
// step; sizes stay small.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lda/expr.hpp"

namespace lda::crit {

class CongruenceClosure {
 public:
  int add(const EmbPtr& e) {
    auto it = emb_ix_.find(e.get());
    if (it != emb_ix_.end()) return it->second;
    int ix;
    if (auto d = decompose_app(e)) {
      int l = add(d->first), r = add(d->second);
      ix = new_node(Sig::App, l, r, "", e, nullptr);
    } else if (auto d2 = decompose_comp(e)) {
      int l = add(d2->first), r = add(d2->second);
      ix = new_node(Sig::Comp, l, r, "", e, nullptr);
    } else {
      ix = new_node(Sig::Atom, -1, -1, atom_key(e), e, nullptr);
    }
    emb_ix_.emplace(e.get(), ix);
    return ix;
  }

  int add(const OrdPtr& o) {
    auto it = ord_ix_.find(o.get());
    if (it != ord_ix_.end()) return it->second;
    int ix;
    switch (o->kind) {
      case OrdKind::Const:
        ix = new_node(Sig::Atom, -1, -1, "c:" + o->name, nullptr, o);
        break;
      case OrdKind::Crit:
        ix = new_node(Sig::Crit, add(o->emb), -1, "", nullptr, o);
        break;
      case OrdKind::AppO:
        ix = new_node(Sig::AppO, add(o->emb), add(o->arg), "", nullptr, o);
        break;
      case OrdKind::SupBelow:
        ix = new_node(Sig::Sup, add(o->emb), add(o->arg), "", nullptr, o);
        break;
      default:
        throw std::logic_error("unreachable");
    }
    ord_ix_.emplace(o.get(), ix);
    return ix;
  }

  void merge(const EmbPtr& a, const EmbPtr& b) { merge_ix(add(a), add(b)); }
  void merge(const OrdPtr& a, const OrdPtr& b) { merge_ix(add(a), add(b)); }

  bool eq(const EmbPtr& a, const EmbPtr& b) {
    return find(add(a)) == find(add(b));
  }
  bool eq(const OrdPtr& a, const OrdPtr& b) {
    return find(add(a)) == find(add(b));
  }

  // Every embedding expression currently known equal to e.
  std::vector<EmbPtr> emb_classmates(const EmbPtr& e) {
    int root = find(add(e));
    std::vector<EmbPtr> out;
    for (int ix : members_[root])
      if (nodes_[ix].emb) out.push_back(nodes_[ix].emb);
    return out;
  }
  std::vector<OrdPtr> ord_classmates(const OrdPtr& o) {
    int root = find(add(o));
    std::vector<OrdPtr> out;
    for (int ix : members_[root])
      if (nodes_[ix].ord) out.push_back(nodes_[ix].ord);
    return out;
  }

 private:
  enum class Sig : std::uint8_t { Atom, App, Comp, Crit, AppO, Sup };

  struct Node {
    Sig sig;
    int c1, c2;
    EmbPtr emb;  // at most one of these is set
    OrdPtr ord;
  };

  static std::string atom_key(const EmbPtr& e) {
    switch (e->kind) {
      case EmbKind::Id:
        return "id";
      case EmbKind::Var:
        return "v:" + e->var;
      case EmbKind::T:
        return "j";  // only the generator survives decomposition
      default:
        throw std::logic_error("atom_key on compound");
    }
  }

  int new_node(Sig sig, int c1, int c2, const std::string& key, EmbPtr e,
               OrdPtr o) {
    int ix = int(nodes_.size());
    nodes_.push_back({sig, c1, c2, std::move(e), std::move(o)});
    parent_.push_back(ix);
    members_.push_back({ix});
    use_.push_back({});
    if (sig == Sig::Atom) {
      auto it = atoms_.find(key);
      if (it != atoms_.end()) {
        // same atom text: identical by construction (interning), but a
        // fresh wrapper node may still appear; merge defensively
        merge_ix(ix, it->second);
      } else {
        atoms_.emplace(key, ix);
      }
      return ix;
    }
    use_[find(c1)].push_back(ix);
    if (c2 >= 0) use_[find(c2)].push_back(ix);
    match_or_insert_sig(ix);
    return ix;
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  std::optional<int> lookup_sig(int ix) {
    const Node& n = nodes_[ix];
    SigKey key{n.sig, find(n.c1), n.c2 >= 0 ? find(n.c2) : -1};
    auto it = sigs_.find(key);
    if (it != sigs_.end() && it->second != ix) return it->second;
    return std::nullopt;
  }

  void match_or_insert_sig(int ix) {
    const Node& n = nodes_[ix];
    SigKey key{n.sig, find(n.c1), n.c2 >= 0 ? find(n.c2) : -1};
    auto it = sigs_.find(key);
    if (it == sigs_.end()) {
      sigs_.emplace(key, ix);
    } else if (find(it->second) != find(ix)) {
      pending_.push_back({ix, it->second});
      flush();
    }
  }

  void merge_ix(int a, int b) {
    pending_.push_back({a, b});
    flush();
  }

  void flush() {
    while (!pending_.empty()) {
      auto [a, b] = pending_.back();
      pending_.pop_back();
      int ra = find(a), rb = find(b);
      if (ra == rb) continue;
      if (members_[ra].size() < members_[rb].size()) std::swap(ra, rb);
      // rb into ra
      parent_[rb] = ra;
      for (int m : members_[rb]) members_[ra].push_back(m);
      members_[rb].clear();
      std::vector<int> uses = std::move(use_[rb]);
      use_[rb].clear();
      for (int u : uses) {
        const Node& n = nodes_[u];
        SigKey key{n.sig, find(n.c1), n.c2 >= 0 ? find(n.c2) : -1};
        auto it = sigs_.find(key);
        if (it == sigs_.end()) {
          sigs_.emplace(key, u);
        } else if (find(it->second) != find(u)) {
          pending_.push_back({u, it->second});
        }
        use_[ra].push_back(u);
      }
    }
  }

  struct SigKey {
    Sig sig;
    int a, b;
    bool operator<(const SigKey& o) const {
      if (sig != o.sig) return sig < o.sig;
      if (a != o.a) return a < o.a;
      return b < o.b;
    }
  };

  std::vector<Node> nodes_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> members_;
  std::vector<std::vector<int>> use_;
  std::map<SigKey, int> sigs_;
  std::unordered_map<std::string, int> atoms_;
  std::unordered_map<const Emb*, int> emb_ix_;
  std::unordered_map<const Ord*, int> ord_ix_;
  std::vector<std::pair<int, int>> pending_;
};

}  // namespace lda::crit
