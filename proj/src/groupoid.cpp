#include "tla/groupoid.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <sstream>

#include "tla/errors.hpp"

namespace tla {

namespace {

std::string str(int v) { return std::to_string(v); }

}  // namespace

int FiniteGroup::inv(int a) const {
  for (int b = 0; b < order; ++b)
    if (mul(a, b) == 0) return b;
  throw Error(ErrorCode::Groupoid, "element " + str(a) + " of " + name + " has no inverse");
}

std::optional<std::string> FiniteGroup::axiom_counterexample() const {
  if (order < 1 || static_cast<int>(table.size()) != order * order) return "table size does not match order";
  for (int v : table)
    if (v < 0 || v >= order) return "table entry " + str(v) + " out of range";
  for (int a = 0; a < order; ++a)
    if (mul(0, a) != a || mul(a, 0) != a) return "0 is not an identity at " + str(a);
  for (int a = 0; a < order; ++a) {
    bool found = false;
    for (int b = 0; b < order && !found; ++b) found = mul(a, b) == 0 && mul(b, a) == 0;
    if (!found) return "no inverse for " + str(a);
  }
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b)
      for (int c = 0; c < order; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          return "associativity fails at (" + str(a) + "," + str(b) + "," + str(c) + ")";
  return std::nullopt;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "cyclic group order must be positive");
  FiniteGroup g{"Z" + str(n), n, std::vector<int>(static_cast<std::size_t>(n) * n)};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.table[a * n + b] = (a + b) % n;
  return g;
}

FiniteGroup FiniteGroup::symmetric3() {
  // Permutations as images of (0,1,2).
  const std::array<std::array<int, 3>, 6> perms = {{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}}};
  FiniteGroup g{"S3", 6, std::vector<int>(36)};
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> ab{};
      for (int i = 0; i < 3; ++i) ab[i] = perms[a][perms[b][i]];
      g.table[a * 6 + b] = static_cast<int>(std::find(perms.begin(), perms.end(), ab) - perms.begin());
    }
  return g;
}

FiniteGroup FiniteGroup::quaternion8() {
  // Element 2k + s is (-1)^s u_k with u = (1, i, j, k).
  static const int unit_prod[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int unit_sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  FiniteGroup g{"Q8", 8, std::vector<int>(64)};
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int ka = a / 2, kb = b / 2;
      int sign = (a % 2 + b % 2 + unit_sign[ka][kb]) % 2;
      g.table[a * 8 + b] = 2 * unit_prod[ka][kb] + sign;
    }
  return g;
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
  int n = a.order * b.order;
  FiniteGroup g{a.name + "x" + b.name, n, std::vector<int>(static_cast<std::size_t>(n) * n)};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      g.table[x * n + y] = a.mul(x / b.order, y / b.order) * b.order + b.mul(x % b.order, y % b.order);
  return g;
}

std::optional<std::string> groupoid_counterexample(int objects, const std::vector<int>& source,
                                                   const std::vector<int>& target, const std::vector<int>& table) {
  const int n = static_cast<int>(source.size());
  if (objects < 1) return "no objects";
  if (static_cast<int>(target.size()) != n) return "source and target lists differ in length";
  if (static_cast<std::size_t>(n) * n != table.size()) return "composition table has wrong size";
  for (int a = 0; a < n; ++a)
    if (source[a] < 0 || source[a] >= objects || target[a] < 0 || target[a] >= objects)
      return "arrow " + str(a) + " has an endpoint out of range";
  auto comp = [&](int a, int b) { return table[static_cast<std::size_t>(a) * n + b]; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int ab = comp(a, b);
      if (source[a] != target[b]) {
        if (ab != -1) return "non-composable pair (" + str(a) + "," + str(b) + ") has a product";
        continue;
      }
      if (ab < 0 || ab >= n) return "composable pair (" + str(a) + "," + str(b) + ") has no product";
      if (source[ab] != source[b] || target[ab] != target[a])
        return "endpoints of " + str(a) + " o " + str(b) + " are wrong";
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (source[a] != target[b]) continue;
      int ab = comp(a, b);
      for (int c = 0; c < n; ++c)
        if (source[b] == target[c] && comp(ab, c) != comp(a, comp(b, c)))
          return "associativity fails at (" + str(a) + "," + str(b) + "," + str(c) + ")";
    }
  std::vector<int> units(objects, -1);
  for (int x = 0; x < objects; ++x) {
    for (int e = 0; e < n && units[x] < 0; ++e) {
      if (source[e] != x || target[e] != x) continue;
      bool ok = true;
      for (int a = 0; a < n && ok; ++a) {
        if (target[a] == x && comp(e, a) != a) ok = false;
        if (source[a] == x && comp(a, e) != a) ok = false;
      }
      if (ok) units[x] = e;
    }
    if (units[x] < 0) return "object " + str(x) + " has no unit";
  }
  for (int a = 0; a < n; ++a) {
    bool found = false;
    for (int b = 0; b < n && !found; ++b)
      found = source[b] == target[a] && target[b] == source[a] && comp(a, b) == units[target[a]] &&
              comp(b, a) == units[source[a]];
    if (!found) return "arrow " + str(a) + " has no inverse";
  }
  return std::nullopt;
}

FiniteGroupoid::FiniteGroupoid(int objects, std::vector<int> source, std::vector<int> target, std::vector<int> table,
                               std::vector<std::string> labels)
    : objects_(objects), source_(std::move(source)), target_(std::move(target)), table_(std::move(table)),
      labels_(std::move(labels)) {
  if (auto bad = groupoid_counterexample(objects_, source_, target_, table_))
    throw Error(ErrorCode::Groupoid, "groupoid axiom violated: " + *bad);
  const int n = arrows();
  if (labels_.empty())
    for (int a = 0; a < n; ++a) labels_.push_back(str(a));
  if (static_cast<int>(labels_.size()) != n) throw Error(ErrorCode::Groupoid, "label count does not match arrows");
  units_.assign(objects_, -1);
  for (int x = 0; x < objects_; ++x)
    for (int e = 0; e < n && units_[x] < 0; ++e)
      if (source_[e] == x && target_[e] == x && compose(e, e) == e) units_[x] = e;
  inverses_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n && inverses_[a] < 0; ++b)
      if (source_[b] == target_[a] && compose(a, b) == units_[target_[a]]) inverses_[a] = b;
}

std::vector<int> FiniteGroupoid::isotropy(int x) const {
  std::vector<int> out;
  for (int a = 0; a < arrows(); ++a)
    if (source_[a] == x && target_[a] == x) out.push_back(a);
  return out;
}

nlohmann::json FiniteGroupoid::to_json() const {
  return {{"objects", objects_}, {"source", source_}, {"target", target_}, {"table", table_}, {"labels", labels_}};
}

FiniteGroupoid FiniteGroupoid::from_json(const nlohmann::json& j) {
  try {
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return FiniteGroupoid(j.at("objects").get<int>(), j.at("source").get<std::vector<int>>(),
                          j.at("target").get<std::vector<int>>(), j.at("table").get<std::vector<int>>(),
                          std::move(labels));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("malformed groupoid JSON: ") + e.what());
  }
}

FiniteGroupoid pair_groupoid(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "pair groupoid needs at least one object");
  // Arrow y * n + x goes from x to y.
  const int m = n * n;
  std::vector<int> src(m), tgt(m), table(static_cast<std::size_t>(m) * m, -1);
  std::vector<std::string> labels(m);
  for (int a = 0; a < m; ++a) {
    src[a] = a % n;
    tgt[a] = a / n;
    labels[a] = "(" + str(tgt[a]) + "<-" + str(src[a]) + ")";
  }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (src[a] == tgt[b]) table[static_cast<std::size_t>(a) * m + b] = tgt[a] * n + src[b];
  return FiniteGroupoid(n, src, tgt, table, labels);
}

FiniteGroupoid group_groupoid(const FiniteGroup& g) {
  std::vector<std::string> labels(g.order);
  for (int a = 0; a < g.order; ++a) labels[a] = g.name + ":" + str(a);
  return FiniteGroupoid(1, std::vector<int>(g.order, 0), std::vector<int>(g.order, 0), g.table, labels);
}

FiniteGroupoid product_groupoid(const FiniteGroupoid& gamma, const FiniteGroup& g) {
  // Arrow a * |g| + h is (a, h).
  const int k = g.order, m = gamma.arrows() * k;
  std::vector<int> src(m), tgt(m), table(static_cast<std::size_t>(m) * m, -1);
  std::vector<std::string> labels(m);
  for (int x = 0; x < m; ++x) {
    src[x] = gamma.source(x / k);
    tgt[x] = gamma.target(x / k);
    labels[x] = "(" + gamma.label(x / k) + "," + str(x % k) + ")";
  }
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      int ab = gamma.compose(x / k, y / k);
      if (ab >= 0) table[static_cast<std::size_t>(x) * m + y] = ab * k + g.mul(x % k, y % k);
    }
  return FiniteGroupoid(gamma.objects(), src, tgt, table, labels);
}

GroupoidAction GroupoidAction::trivial(FiniteGroupoid gamma, FiniteGroup u) {
  std::vector<int> id(u.order);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> act(gamma.arrows(), id);
  return GroupoidAction{std::move(gamma), std::move(u), std::move(act)};
}

std::optional<std::string> GroupoidAction::counterexample() const {
  if (auto bad = u.axiom_counterexample()) return "fiber group: " + *bad;
  if (static_cast<int>(act.size()) != gamma.arrows()) return "action table has wrong number of arrows";
  for (int g = 0; g < gamma.arrows(); ++g) {
    if (static_cast<int>(act[g].size()) != u.order) return "action row " + str(g) + " has wrong length";
    for (int v : act[g])
      if (v < 0 || v >= u.order) return "action value out of range for arrow " + str(g);
  }
  for (int x = 0; x < gamma.objects(); ++x)
    for (int v = 0; v < u.order; ++v)
      if (act[gamma.unit(x)][v] != v) return "unit of object " + str(x) + " moves " + str(v);
  for (int g = 0; g < gamma.arrows(); ++g)
    for (int a = 0; a < u.order; ++a)
      for (int b = 0; b < u.order; ++b)
        if (act[g][u.mul(a, b)] != u.mul(act[g][a], act[g][b]))
          return "arrow " + str(g) + " is not a homomorphism at (" + str(a) + "," + str(b) + ")";
  for (int g = 0; g < gamma.arrows(); ++g)
    for (int h = 0; h < gamma.arrows(); ++h) {
      int gh = gamma.compose(g, h);
      if (gh < 0) continue;
      for (int v = 0; v < u.order; ++v)
        if (act[gh][v] != act[g][act[h][v]])
          return "action does not respect composition at (" + str(g) + "," + str(h) + "," + str(v) + ")";
    }
  return std::nullopt;
}

SemidirectProduct semidirect(const GroupoidAction& action) {
  if (auto bad = action.counterexample()) throw Error(ErrorCode::Groupoid, "invalid action: " + *bad);
  const FiniteGroupoid& gam = action.gamma;
  const FiniteGroup& u = action.u;
  const int k = u.order, m = gam.arrows() * k;
  SemidirectProduct sd;
  sd.u_order = k;
  std::vector<int> src(m), tgt(m), table(static_cast<std::size_t>(m) * m, -1);
  std::vector<std::string> labels(m);
  for (int x = 0; x < m; ++x) {
    sd.pairs.emplace_back(x / k, x % k);
    src[x] = gam.source(x / k);
    tgt[x] = gam.target(x / k);
    labels[x] = "(" + gam.label(x / k) + "," + str(x % k) + ")";
  }
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      auto [g2, u2] = sd.pairs[x];
      auto [g1, u1] = sd.pairs[y];
      int g = gam.compose(g2, g1);
      if (g < 0) continue;
      int v = u.mul(action.act[gam.inverse(g1)][u2], u1);
      table[static_cast<std::size_t>(x) * m + y] = sd.index(g, v);
    }
  sd.groupoid = FiniteGroupoid(gam.objects(), src, tgt, table, labels);
  return sd;
}

CheckReport check_subbundle(const GroupoidAction& action, const SubbundleMap& l) {
  const FiniteGroupoid& gam = action.gamma;
  const FiniteGroup& u = action.u;
  auto fail = [](std::string cond, std::string ce) { return CheckReport{false, std::move(cond), std::move(ce)}; };
  if (l.arrows.size() != l.f.size()) return fail("shape", "arrow and image lists differ in length");
  std::vector<int> f_of(gam.arrows(), -1);
  for (std::size_t i = 0; i < l.arrows.size(); ++i) {
    int a = l.arrows[i];
    if (a < 0 || a >= gam.arrows()) return fail("shape", "arrow " + str(a) + " out of range");
    if (gam.source(a) != gam.target(a)) return fail("isotropy", "arrow " + str(a) + " is not an isotropy arrow");
    if (l.f[i] < 0 || l.f[i] >= u.order) return fail("shape", "image of " + str(a) + " out of range");
    f_of[a] = l.f[i];
  }
  for (int x = 0; x < gam.objects(); ++x)
    if (f_of[gam.unit(x)] < 0) return fail("subgroup", "unit of object " + str(x) + " missing from L");
  for (int a : l.arrows) {
    if (f_of[gam.inverse(a)] < 0) return fail("subgroup", "inverse of " + str(a) + " missing from L");
    for (int b : l.arrows) {
      int ab = gam.compose(a, b);
      if (ab < 0) continue;
      if (f_of[ab] < 0) return fail("subgroup", str(a) + " o " + str(b) + " missing from L");
      if (f_of[ab] != u.mul(f_of[a], f_of[b]))
        return fail("morphism", "f(" + str(a) + " o " + str(b) + ") != f(" + str(a) + ") f(" + str(b) + ")");
    }
  }
  for (int g = 0; g < gam.arrows(); ++g)
    for (int lam : l.arrows) {
      if (gam.source(g) != gam.target(lam)) continue;
      int conj = gam.compose(gam.compose(g, lam), gam.inverse(g));
      if (f_of[conj] < 0) return fail("normality", "arrow " + str(g) + " conjugates " + str(lam) + " out of L");
    }
  for (int lam : l.arrows) {
    int fl = f_of[lam];
    for (int v = 0; v < u.order; ++v)
      if (action.act[lam][v] != u.mul(u.mul(fl, v), u.inv(fl)))
        return fail("(a)", "lambda=" + gam.label(lam) + " u=" + str(v) + ": lambda.u=" + str(action.act[lam][v]) +
                               " but f(lambda) u f(lambda)^-1=" + str(u.mul(u.mul(fl, v), u.inv(fl))));
  }
  for (int g = 0; g < gam.arrows(); ++g)
    for (int lam : l.arrows) {
      if (gam.source(g) != gam.target(lam)) continue;
      int conj = gam.compose(gam.compose(g, lam), gam.inverse(g));
      if (f_of[conj] != action.act[g][f_of[lam]])
        return fail("(b)", "gamma=" + gam.label(g) + " lambda=" + gam.label(lam));
    }
  return {};
}

std::vector<int> embed_L(const GroupoidAction& action, const SemidirectProduct& sd, const SubbundleMap& l) {
  CheckReport r = check_subbundle(action, l);
  if (!r.ok) throw Error(ErrorCode::Groupoid, "condition " + r.condition + " violated: " + r.counterexample);
  std::vector<int> f_of(action.gamma.arrows(), -1);
  for (std::size_t i = 0; i < l.arrows.size(); ++i) f_of[l.arrows[i]] = l.f[i];
  std::vector<int> out;
  for (int lam : l.arrows) out.push_back(sd.index(lam, f_of[action.gamma.inverse(lam)]));
  return out;
}

CheckReport check_embedding(const GroupoidAction& action, const SemidirectProduct& sd, const SubbundleMap& l) {
  std::vector<int> emb;
  try {
    emb = embed_L(action, sd, l);
  } catch (const Error&) {
    return check_subbundle(action, l);
  }
  const FiniteGroupoid& g = sd.groupoid;
  std::vector<int> pos(g.arrows(), -1);
  for (std::size_t i = 0; i < emb.size(); ++i) {
    if (pos[emb[i]] >= 0) return {false, "injective", "two arrows of L share an image"};
    pos[emb[i]] = static_cast<int>(i);
  }
  const FiniteGroupoid& gam = action.gamma;
  for (std::size_t i = 0; i < emb.size(); ++i)
    for (std::size_t j = 0; j < emb.size(); ++j) {
      int prod = g.compose(emb[i], emb[j]);
      if (prod < 0) continue;
      int lam = gam.compose(l.arrows[i], l.arrows[j]);
      int li = static_cast<int>(std::find(l.arrows.begin(), l.arrows.end(), lam) - l.arrows.begin());
      if (li >= static_cast<int>(l.arrows.size()) || prod != emb[li])
        return {false, "morphism", "embedding fails on (" + gam.label(l.arrows[i]) + "," + gam.label(l.arrows[j]) + ")"};
    }
  for (int e : emb)
    if (pos[g.inverse(e)] < 0) return {false, "closure", "inverse of " + g.label(e) + " leaves the image"};
  for (int a = 0; a < g.arrows(); ++a)
    for (int e : emb) {
      if (g.source(a) != g.target(e)) continue;
      int conj = g.compose(g.compose(a, e), g.inverse(a));
      if (pos[conj] < 0) return {false, "normality", g.label(a) + " conjugates " + g.label(e) + " out of the image"};
    }
  return {};
}

Quotient quotient(const SemidirectProduct& sd, const std::vector<int>& embedded) {
  const FiniteGroupoid& g = sd.groupoid;
  const int n = g.arrows();
  Quotient q;
  q.class_of.assign(n, -1);
  std::vector<int> rep;
  for (int a = 0; a < n; ++a) {
    if (q.class_of[a] >= 0) continue;
    int cls = static_cast<int>(rep.size());
    rep.push_back(a);
    for (int e : embedded) {
      int ae = g.compose(a, e);
      if (ae < 0) continue;
      if (q.class_of[ae] >= 0 && q.class_of[ae] != cls)
        throw Error(ErrorCode::Groupoid, "right cosets overlap at " + g.label(ae));
      q.class_of[ae] = cls;
    }
    if (q.class_of[a] != cls) throw Error(ErrorCode::Groupoid, "embedded L lacks the unit at " + g.label(a));
  }
  const int m = static_cast<int>(rep.size());
  std::vector<int> src(m), tgt(m), table(static_cast<std::size_t>(m) * m, -1);
  std::vector<std::string> labels(m);
  for (int c = 0; c < m; ++c) {
    src[c] = g.source(rep[c]);
    tgt[c] = g.target(rep[c]);
    labels[c] = "[" + g.label(rep[c]) + "]";
  }
  // Every pair of representatives must give the same class.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int ab = g.compose(a, b);
      if (ab < 0) continue;
      auto& slot = table[static_cast<std::size_t>(q.class_of[a]) * m + q.class_of[b]];
      if (slot >= 0 && slot != q.class_of[ab])
        throw Error(ErrorCode::Groupoid, "composition is not well defined on classes of " + g.label(a) + ", " +
                                             g.label(b));
      slot = q.class_of[ab];
    }
  q.groupoid = FiniteGroupoid(g.objects(), src, tgt, table, labels);
  return q;
}

CheckReport check_morphism(const FiniteGroupoid& a, const FiniteGroupoid& b, const std::vector<int>& phi) {
  if (static_cast<int>(phi.size()) != a.arrows()) return {false, "shape", "map has wrong length"};
  for (int x : phi)
    if (x < 0 || x >= b.arrows()) return {false, "shape", "image out of range"};
  for (int x = 0; x < a.arrows(); ++x)
    for (int y = 0; y < a.arrows(); ++y) {
      int xy = a.compose(x, y);
      if (xy < 0) continue;
      if (b.compose(phi[x], phi[y]) != phi[xy])
        return {false, "morphism", "fails on (" + a.label(x) + "," + a.label(y) + ")"};
    }
  return {};
}

namespace {

// Extends phi by closing under composition; false on a contradiction.
bool propagate(const FiniteGroupoid& a, const FiniteGroupoid& b, std::vector<int>& phi, std::vector<int>& used) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int x = 0; x < a.arrows(); ++x) {
      if (phi[x] < 0) continue;
      for (int y = 0; y < a.arrows(); ++y) {
        if (phi[y] < 0) continue;
        int xy = a.compose(x, y);
        int img = b.compose(phi[x], phi[y]);
        if ((xy < 0) != (img < 0)) return false;
        if (xy < 0) continue;
        if (phi[xy] >= 0) {
          if (phi[xy] != img) return false;
        } else {
          if (used[img] >= 0) return false;
          phi[xy] = img;
          used[img] = xy;
          changed = true;
        }
      }
    }
  }
  return true;
}

bool extend(const FiniteGroupoid& a, const FiniteGroupoid& b, const std::vector<int>& objmap, std::vector<int> phi,
            std::vector<int> used, std::vector<int>& out) {
  if (!propagate(a, b, phi, used)) return false;
  int next = static_cast<int>(std::find(phi.begin(), phi.end(), -1) - phi.begin());
  if (next == a.arrows()) {
    out = phi;
    return true;
  }
  for (int y = 0; y < b.arrows(); ++y) {
    if (used[y] >= 0 || b.source(y) != objmap[a.source(next)] || b.target(y) != objmap[a.target(next)]) continue;
    std::vector<int> p2 = phi, u2 = used;
    p2[next] = y;
    u2[y] = next;
    if (extend(a, b, objmap, p2, u2, out)) return true;
  }
  return false;
}

}  // namespace

std::optional<std::vector<int>> find_isomorphism(const FiniteGroupoid& a, const FiniteGroupoid& b, int cap) {
  if (a.arrows() > cap || b.arrows() > cap)
    throw Error(ErrorCode::InvalidArgument, "isomorphism search limited to " + str(cap) + " arrows");
  if (a.arrows() != b.arrows() || a.objects() != b.objects()) return std::nullopt;
  std::vector<int> objmap(a.objects());
  std::iota(objmap.begin(), objmap.end(), 0);
  do {
    std::vector<int> phi(a.arrows(), -1), used(b.arrows(), -1), out;
    for (int x = 0; x < a.objects(); ++x) {
      phi[a.unit(x)] = b.unit(objmap[x]);
      used[b.unit(objmap[x])] = a.unit(x);
    }
    if (extend(a, b, objmap, phi, used, out)) return out;
  } while (std::next_permutation(objmap.begin(), objmap.end()));
  return std::nullopt;
}

namespace {

struct Fixture {
  std::string name;
  GroupoidAction action;
  SubbundleMap l;
  bool expect_valid = true;
  int expect_semidirect = 0;
  int expect_quotient = 0;
  std::optional<FiniteGroupoid> expect_iso_semidirect;
  std::optional<FiniteGroupoid> expect_iso_quotient;
  int expect_isotropy = 0;
};

Fixture make_fixture(std::string name, GroupoidAction action, SubbundleMap l) {
  Fixture f;
  f.name = std::move(name);
  f.action = std::move(action);
  f.l = std::move(l);
  return f;
}

SubbundleMap units_only(const FiniteGroupoid& g) {
  SubbundleMap l;
  for (int x = 0; x < g.objects(); ++x) {
    l.arrows.push_back(g.unit(x));
    l.f.push_back(0);
  }
  return l;
}

std::vector<Fixture> fixtures() {
  std::vector<Fixture> out;
  {
    auto gam = pair_groupoid(2);
    Fixture f = make_fixture("pair2-z2-trivial", GroupoidAction::trivial(gam, FiniteGroup::cyclic(2)), units_only(gam));
    f.expect_semidirect = 8;
    f.expect_quotient = 8;
    f.expect_iso_semidirect = product_groupoid(gam, FiniteGroup::cyclic(2));
    out.push_back(std::move(f));
  }
  {
    auto gam = group_groupoid(FiniteGroup::cyclic(4));
    Fixture f = make_fixture("z4-z2-iso", GroupoidAction::trivial(gam, FiniteGroup::cyclic(2)), {{0, 2}, {0, 1}});
    f.expect_semidirect = 8;
    f.expect_quotient = 4;
    f.expect_iso_semidirect = group_groupoid(FiniteGroup::product(FiniteGroup::cyclic(4), FiniteGroup::cyclic(2)));
    f.expect_iso_quotient = group_groupoid(FiniteGroup::cyclic(4));
    out.push_back(std::move(f));
  }
  {
    auto s3 = FiniteGroup::symmetric3();
    auto gam = group_groupoid(s3);
    auto z3 = FiniteGroup::cyclic(3);
    std::vector<std::vector<int>> act(6);
    for (int g = 0; g < 6; ++g)
      for (int v = 0; v < 3; ++v) act[g].push_back(g < 3 ? v : (3 - v) % 3);
    // Elements 0,1,2 of S3 are the rotations e, r, r^2.
    Fixture f = make_fixture("s3-z3-parity", GroupoidAction{gam, z3, act}, {{0, 1, 2}, {0, 1, 2}});
    f.expect_semidirect = 18;
    f.expect_quotient = 6;
    f.expect_iso_quotient = gam;
    out.push_back(std::move(f));
  }
  {
    auto gam = group_groupoid(FiniteGroup::cyclic(2));
    Fixture f = make_fixture("z2-s3-invalid", GroupoidAction::trivial(gam, FiniteGroup::symmetric3()), {{0, 1}, {0, 3}});
    f.expect_valid = false;
    f.expect_semidirect = 12;
    out.push_back(std::move(f));
  }
  {
    auto gam = product_groupoid(pair_groupoid(3), FiniteGroup::cyclic(2));
    SubbundleMap l;
    for (int x = 0; x < 3; ++x) {
      int base = pair_groupoid(3).unit(x);
      l.arrows.push_back(base * 2);
      l.f.push_back(0);
      l.arrows.push_back(base * 2 + 1);
      l.f.push_back(2);
    }
    Fixture f = make_fixture("pair3xz2-z4", GroupoidAction::trivial(gam, FiniteGroup::cyclic(4)), l);
    f.expect_semidirect = 72;
    f.expect_quotient = 36;
    out.push_back(std::move(f));
  }
  {
    auto gam = product_groupoid(pair_groupoid(2), FiniteGroup::cyclic(4));
    SubbundleMap l;
    for (int x = 0; x < 2; ++x) {
      int base = pair_groupoid(2).unit(x);
      l.arrows.push_back(base * 4);
      l.f.push_back(0);
      l.arrows.push_back(base * 4 + 2);
      l.f.push_back(1);
    }
    Fixture f = make_fixture("pair2xz4-z2", GroupoidAction::trivial(gam, FiniteGroup::cyclic(2)), l);
    f.expect_semidirect = 32;
    f.expect_quotient = 16;
    f.expect_isotropy = 4;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

std::vector<FixtureResult> fixture_suite() {
  std::vector<FixtureResult> results;
  for (auto& fx : fixtures()) {
    FixtureResult r;
    r.name = fx.name;
    r.expect_valid = fx.expect_valid;
    std::ostringstream detail;
    try {
      SemidirectProduct sd = semidirect(fx.action);
      r.semidirect_arrows = sd.groupoid.arrows();
      bool ok = r.semidirect_arrows == fx.expect_semidirect;
      if (!ok) detail << "semidirect has " << r.semidirect_arrows << " arrows; ";
      if (fx.expect_iso_semidirect && !find_isomorphism(sd.groupoid, *fx.expect_iso_semidirect)) {
        ok = false;
        detail << "semidirect not isomorphic to the expected groupoid; ";
      }
      r.report = check_embedding(fx.action, sd, fx.l);
      if (!fx.expect_valid) {
        ok = ok && !r.report.ok && r.report.condition == "(a)";
        detail << "counterexample " << r.report.condition << ": " << r.report.counterexample;
      } else if (!r.report.ok) {
        ok = false;
        detail << "check " << r.report.condition << " failed: " << r.report.counterexample;
      } else {
        Quotient q = quotient(sd, embed_L(fx.action, sd, fx.l));
        r.quotient_arrows = q.groupoid.arrows();
        if (r.quotient_arrows != fx.expect_quotient) {
          ok = false;
          detail << "quotient has " << r.quotient_arrows << " arrows; ";
        }
        CheckReport proj = check_morphism(sd.groupoid, q.groupoid, q.class_of);
        if (!proj.ok) {
          ok = false;
          detail << "projection is not a morphism: " << proj.counterexample << "; ";
        }
        if (fx.expect_iso_quotient && !find_isomorphism(q.groupoid, *fx.expect_iso_quotient)) {
          ok = false;
          detail << "quotient not isomorphic to the expected groupoid; ";
        }
        if (fx.expect_isotropy > 0) {
          for (int x = 0; x < q.groupoid.objects(); ++x)
            if (static_cast<int>(q.groupoid.isotropy(x).size()) != fx.expect_isotropy) {
              ok = false;
              detail << "isotropy at " << x << " has order " << q.groupoid.isotropy(x).size() << "; ";
            }
        }
        if (ok) detail << "semidirect " << r.semidirect_arrows << ", quotient " << r.quotient_arrows;
      }
      r.pass = ok;
    } catch (const Error& e) {
      r.pass = false;
      detail << e.what();
    }
    r.detail = detail.str();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace tla
