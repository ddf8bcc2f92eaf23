#include "equip/corpus.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>

namespace equip {

std::vector<NamedCategory> named_fixtures() {
  return {{"1", share(terminal_category())},
          {"[1]", share(ordinal(1))},
          {"[2]", share(ordinal(2))},
          {"Sigma", share(free_span())},
          {"parallel", share(parallel_pair())}};
}

namespace {

// Non-identity morphisms of the candidate category, plus identities first.
struct Skeleton {
  int n = 0;
  std::vector<Arrow> arrows;  // identities 0..n-1, then non-identities
};

Skeleton make_skeleton(int n, const std::vector<int>& counts) {
  Skeleton s;
  s.n = n;
  for (int a = 0; a < n; ++a) s.arrows.push_back({a, a});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int k = 0; k < counts[a * n + b]; ++k) s.arrows.push_back({a, b});
    }
  }
  return s;
}

// Every composition table on the skeleton satisfying the category axioms.
void enumerate_tables(const Skeleton& s, const std::function<void(const std::vector<MorId>&)>& emit) {
  const int n = s.n;
  const int m = static_cast<int>(s.arrows.size());
  std::vector<MorId> table(static_cast<std::size_t>(m) * m, kNone);
  auto at = [&](int g, int f) -> MorId& { return table[static_cast<std::size_t>(g) * m + f]; };
  std::vector<std::pair<int, int>> pairs;
  for (int g = 0; g < m; ++g) {
    for (int f = 0; f < m; ++f) {
      if (s.arrows[f].dst != s.arrows[g].src) continue;
      if (g < n) {
        at(g, f) = f;
      } else if (f < n) {
        at(g, f) = g;
      } else {
        pairs.push_back({g, f});
      }
    }
  }
  std::vector<std::vector<MorId>> candidates(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [g, f] = pairs[i];
    for (int h = 0; h < m; ++h) {
      if (s.arrows[h].src == s.arrows[f].src && s.arrows[h].dst == s.arrows[g].dst) {
        candidates[i].push_back(h);
      }
    }
  }
  // Triples of non-identities; checked once all four products are known.
  struct Triple {
    int h, g, f;
  };
  std::vector<Triple> triples;
  for (int f = n; f < m; ++f) {
    for (int g = n; g < m; ++g) {
      if (s.arrows[f].dst != s.arrows[g].src) continue;
      for (int h = n; h < m; ++h) {
        if (s.arrows[g].dst == s.arrows[h].src) triples.push_back({h, g, f});
      }
    }
  }
  auto consistent = [&]() {
    for (const Triple& t : triples) {
      const MorId gf = at(t.g, t.f);
      const MorId hg = at(t.h, t.g);
      if (gf == kNone || hg == kNone) continue;
      const MorId l = at(t.h, gf);
      const MorId r = at(hg, t.f);
      if (l == kNone || r == kNone) continue;
      if (l != r) return false;
    }
    return true;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == pairs.size()) {
      emit(table);
      return;
    }
    const auto [g, f] = pairs[i];
    for (MorId h : candidates[i]) {
      at(g, f) = h;
      if (consistent()) rec(i + 1);
    }
    at(g, f) = kNone;
  };
  rec(0);
}

FinCategory to_category(const Skeleton& s, const std::vector<MorId>& table) {
  std::vector<std::string> onames;
  for (int a = 0; a < s.n; ++a) onames.push_back(std::string(1, static_cast<char>('a' + a)));
  std::vector<std::string> mnames;
  std::vector<int> counter(s.n * s.n, 0);
  for (std::size_t f = 0; f < s.arrows.size(); ++f) {
    const Arrow& ar = s.arrows[f];
    if (static_cast<int>(f) < s.n) {
      mnames.push_back("id_" + onames[ar.src]);
    } else {
      const int k = counter[ar.src * s.n + ar.dst]++;
      mnames.push_back(onames[ar.src] + onames[ar.dst] + std::to_string(k));
    }
  }
  std::vector<MorId> ids(s.n);
  std::iota(ids.begin(), ids.end(), 0);
  return FinCategory(std::move(onames), std::move(mnames), s.arrows, std::move(ids), table);
}

// Isomorphism-invariant fingerprint used to bucket candidates before the
// exact isomorphism test.
std::vector<int> fingerprint(const FinCategory& c) {
  std::vector<std::vector<int>> rows;
  for (int a = 0; a < c.num_objects(); ++a) {
    std::vector<int> row;
    std::vector<int> out, in;
    for (int b = 0; b < c.num_objects(); ++b) {
      out.push_back(static_cast<int>(c.hom(a, b).size()));
      in.push_back(static_cast<int>(c.hom(b, a).size()));
    }
    std::sort(out.begin(), out.end());
    std::sort(in.begin(), in.end());
    row.push_back(static_cast<int>(c.hom(a, a).size()));
    row.insert(row.end(), out.begin(), out.end());
    row.insert(row.end(), in.begin(), in.end());
    // Endomorphism statistics: idempotents and invertibles.
    int idem = 0, inv = 0;
    for (MorId e : c.hom(a, a)) {
      if (c.compose(e, e) == e) ++idem;
      for (MorId e2 : c.hom(a, a)) {
        if (c.compose(e, e2) == c.id(a) && c.compose(e2, e) == c.id(a)) {
          ++inv;
          break;
        }
      }
    }
    row.push_back(idem);
    row.push_back(inv);
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end());
  std::vector<int> fp{c.num_objects(), c.num_morphisms()};
  for (auto& r : rows) fp.insert(fp.end(), r.begin(), r.end());
  return fp;
}

bool canonical_counts(int n, const std::vector<int>& counts) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> permuted(n * n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) permuted[a * n + b] = counts[perm[a] * n + perm[b]];
    }
    if (permuted < counts) return false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return true;
}

}  // namespace

std::vector<NamedCategory> enumerate_categories(int max_objects, int max_parallel) {
  std::vector<NamedCategory> out;
  for (int n = 0; n <= max_objects; ++n) {
    std::vector<int> counts(n * n, 0);
    std::map<std::vector<int>, std::vector<CatRef>> buckets;
    std::vector<CatRef> found;
    std::function<void(int)> rec = [&](int idx) {
      if (idx == n * n) {
        if (!canonical_counts(n, counts)) return;
        // Composable non-identity pairs need a target hom to land in.
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
              if (counts[a * n + b] > 0 && counts[b * n + c] > 0 && a != c &&
                  counts[a * n + c] == 0) {
                return;
              }
            }
          }
        }
        const Skeleton s = make_skeleton(n, counts);
        enumerate_tables(s, [&](const std::vector<MorId>& table) {
          auto cat = share(to_category(s, table));
          auto& bucket = buckets[fingerprint(*cat)];
          for (const CatRef& other : bucket) {
            if (find_isomorphism(cat, other)) return;
          }
          bucket.push_back(cat);
          found.push_back(cat);
        });
        return;
      }
      for (int k = 0; k <= max_parallel; ++k) {
        counts[idx] = k;
        rec(idx + 1);
      }
      counts[idx] = 0;
    };
    rec(0);
    std::stable_sort(found.begin(), found.end(), [](const CatRef& x, const CatRef& y) {
      return x->num_morphisms() < y->num_morphisms();
    });
    for (auto& c : found) {
      out.push_back({"C" + std::to_string(n) + "_" + std::to_string(out.size()), c});
    }
  }
  return out;
}

const std::vector<NamedCategory>& default_corpus() {
  static std::once_flag once;
  static std::vector<NamedCategory> corpus;
  std::call_once(once, [] {
    corpus = enumerate_categories(2, 2);
    for (auto& c : enumerate_categories(3, 1)) {
      if (c.category->num_objects() == 3) corpus.push_back(c);
    }
  });
  return corpus;
}

std::vector<NamedCategory> restrict_corpus(const std::vector<NamedCategory>& corpus, int max_objects,
                                           int max_morphisms) {
  std::vector<NamedCategory> out;
  for (const auto& c : corpus) {
    if (c.category->num_objects() <= max_objects && c.category->num_morphisms() <= max_morphisms) {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace equip

namespace equip {

std::vector<NamedCategory> small_corpus(int max_morphisms) {
  auto out = restrict_corpus(default_corpus(), 3, max_morphisms);
  for (auto& fx : named_fixtures()) {
    bool present = false;
    for (const auto& c : out) {
      if (find_isomorphism(c.category, fx.category)) {
        present = true;
        break;
      }
    }
    if (!present) out.push_back(fx);
  }
  return out;
}

}  // namespace equip
