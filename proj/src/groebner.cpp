#include "logsparse/groebner.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "logsparse/error.hpp"

namespace logsparse {

MonomialOrder::MonomialOrder(const VarTable& vars) : nvars_(vars.size()) {
  for (std::size_t b = 0; b < vars.block_count(); ++b)
    if (!vars.block_vars(b).empty()) blocks_.push_back(vars.block_vars(b));
}

MonomialOrder MonomialOrder::grevlex(std::size_t nvars) {
  MonomialOrder o;
  o.nvars_ = nvars;
  o.blocks_.emplace_back(nvars);
  std::iota(o.blocks_[0].begin(), o.blocks_[0].end(), 0);
  return o;
}

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const noexcept {
  for (const auto& block : blocks_) {
    unsigned da = 0, db = 0;
    for (auto v : block) {
      da += a.e[v];
      db += b.e[v];
    }
    if (da != db) return da < db ? -1 : 1;
    for (auto it = block.rbegin(); it != block.rend(); ++it)
      if (a.e[*it] != b.e[*it]) return a.e[*it] > b.e[*it] ? -1 : 1;
  }
  return 0;
}

namespace {

// Integer polynomial with terms sorted descending in the active order.
struct IPoly {
  std::vector<Monomial> mono;
  std::vector<Integer> coef;
  unsigned sugar = 0;

  bool empty() const noexcept { return mono.empty(); }
  std::size_t size() const noexcept { return mono.size(); }
  unsigned degree() const noexcept {
    unsigned d = 0;
    for (const auto& m : mono) d = std::max(d, m.degree());
    return d;
  }
};

Integer content(const IPoly& p) {
  Integer g = 0;
  for (const auto& c : p.coef) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

void divide_exact(IPoly& p, const Integer& g) {
  for (auto& c : p.coef) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

// Primitive with positive leading coefficient.
void make_primitive(IPoly& p) {
  if (p.empty()) return;
  Integer g = content(p);
  if (p.coef.front() < 0) g = -g;
  if (g != 1) divide_exact(p, g);
}

IPoly to_ipoly(const RatPoly& f, const MonomialOrder& order) {
  const RatPoly pf = f.primitive();
  std::vector<std::size_t> idx(pf.term_count());
  std::iota(idx.begin(), idx.end(), 0);
  const auto& t = pf.terms();
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return order.compare(t[a].mono, t[b].mono) > 0; });
  IPoly p;
  for (auto i : idx) {
    p.mono.push_back(t[i].mono);
    p.coef.push_back(t[i].coeff.get_num());
  }
  p.sugar = p.degree();
  return p;
}

RatPoly to_ratpoly(const IPoly& p, std::size_t nvars) {
  std::vector<RatPoly::Term> terms;
  terms.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) terms.push_back({p.mono[i], Rational(p.coef[i])});
  return RatPoly::from_terms(nvars, std::move(terms));
}

// out = a * f[fs..] - b * q * g[gs..]
void combine(const IPoly& f, std::size_t fs, const Integer& a, const IPoly& g, std::size_t gs, const Monomial& q,
             const Integer& b, const MonomialOrder& order, IPoly& out) {
  out.mono.clear();
  out.coef.clear();
  out.mono.reserve(f.size() - fs + g.size() - gs);
  out.coef.reserve(f.size() - fs + g.size() - gs);
  const bool a_one = a == 1;
  std::size_t i = fs, j = gs;
  Monomial qg;
  bool have_qg = false;
  Integer tmp;
  while (i < f.size() || j < g.size()) {
    if (j < g.size() && !have_qg) {
      qg = q * g.mono[j];
      have_qg = true;
    }
    const int c = i == f.size() ? -1 : j == g.size() ? 1 : order.compare(f.mono[i], qg);
    if (c > 0) {
      out.mono.push_back(f.mono[i]);
      if (a_one) out.coef.push_back(f.coef[i]);
      else {
        out.coef.emplace_back();
        mpz_mul(out.coef.back().get_mpz_t(), a.get_mpz_t(), f.coef[i].get_mpz_t());
      }
      ++i;
    } else if (c < 0) {
      out.mono.push_back(qg);
      out.coef.emplace_back();
      mpz_mul(out.coef.back().get_mpz_t(), b.get_mpz_t(), g.coef[j].get_mpz_t());
      mpz_neg(out.coef.back().get_mpz_t(), out.coef.back().get_mpz_t());
      ++j;
      have_qg = false;
    } else {
      mpz_mul(tmp.get_mpz_t(), a.get_mpz_t(), f.coef[i].get_mpz_t());
      mpz_submul(tmp.get_mpz_t(), b.get_mpz_t(), g.coef[j].get_mpz_t());
      if (tmp != 0) {
        out.mono.push_back(qg);
        out.coef.push_back(tmp);
      }
      ++i;
      ++j;
      have_qg = false;
    }
  }
  out.sugar = std::max(f.sugar, g.sugar + q.degree());
}

// Reducer set with a contiguous array of leading monomials for fast divisor search.
struct Reducers {
  std::vector<const IPoly*> polys;
  std::vector<Monomial> leads;

  void add(const IPoly* p) {
    polys.push_back(p);
    leads.push_back(p->mono.front());
  }
  const IPoly* find(const Monomial& m) const {
    const std::size_t k = simd::kernels().find_divisor(reinterpret_cast<const std::uint8_t*>(leads.data()),
                                                       leads.size(), m.e.data());
    return k == leads.size() ? nullptr : polys[k];
  }
};

// Full fraction-free reduction. Returns the normal form times `scale`
// (scale is updated to the accumulated rational factor).
IPoly full_reduce(IPoly f, const Reducers& red, const MonomialOrder& order, Rational* scale) {
  IPoly rem;
  rem.sugar = f.sugar;
  IPoly next;
  std::size_t steps = 0;
  Integer g0, a, b;
  while (!f.empty()) {
    const IPoly* g = red.find(f.mono.front());
    if (!g) {
      // Move the irreducible leading term to the remainder.
      rem.mono.push_back(f.mono.front());
      rem.coef.push_back(f.coef.front());
      // Dropping the front is linear, so batch it with the next combine.
      std::size_t k = 1;
      while (k < f.size() && !red.find(f.mono[k])) {
        rem.mono.push_back(f.mono[k]);
        rem.coef.push_back(f.coef[k]);
        ++k;
      }
      if (k == f.size()) break;
      f.mono.erase(f.mono.begin(), f.mono.begin() + static_cast<std::ptrdiff_t>(k));
      f.coef.erase(f.coef.begin(), f.coef.begin() + static_cast<std::ptrdiff_t>(k));
      continue;
    }
    const Monomial q = g->mono.front().quotient_of(f.mono.front());
    mpz_gcd(g0.get_mpz_t(), g->coef.front().get_mpz_t(), f.coef.front().get_mpz_t());
    mpz_divexact(a.get_mpz_t(), g->coef.front().get_mpz_t(), g0.get_mpz_t());
    mpz_divexact(b.get_mpz_t(), f.coef.front().get_mpz_t(), g0.get_mpz_t());
    if (a < 0) {
      a = -a;
      b = -b;
    }
    combine(f, 1, a, *g, 1, q, b, order, next);
    std::swap(f, next);
    if (a != 1) {
      for (auto& c : rem.coef) c *= a;
      if (scale) *scale *= Rational(a);
    }
    rem.sugar = std::max(rem.sugar, f.sugar);
    if (++steps % 8 == 0) {
      Integer c = content(f);
      for (const auto& v : rem.coef) {
        if (c == 1) break;
        mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), v.get_mpz_t());
      }
      if (c > 1) {
        divide_exact(f, c);
        divide_exact(rem, c);
        if (scale) *scale /= Rational(c);
      }
    }
  }
  if (!rem.empty()) {
    Integer c = content(rem);
    if (c > 1) {
      divide_exact(rem, c);
      if (scale) *scale /= Rational(c);
    }
  }
  return rem;
}

struct Pair {
  std::size_t i, j;
  Monomial lcm;
  unsigned sugar;
};

class Engine {
 public:
  Engine(const MonomialOrder& order, const GbCaps& caps, GbStats* stats)
      : order_(order), caps_(caps), stats_(stats), start_(std::chrono::steady_clock::now()) {}

  std::vector<RatPoly> run(const std::vector<RatPoly>& gens) {
    std::vector<IPoly> input;
    for (const auto& g : gens) {
      if (g.nvars() != order_.nvars()) throw Error(ErrorKind::InvalidInput, "buchberger: ring mismatch");
      if (g.is_zero()) continue;
      input.push_back(to_ipoly(g, order_));
    }
    // Feed generators smallest first; each is reduced against the current basis.
    std::sort(input.begin(), input.end(),
              [&](const IPoly& a, const IPoly& b) { return order_.compare(a.mono.front(), b.mono.front()) < 0; });
    for (auto& p : input) {
      IPoly h = full_reduce(std::move(p), reducers(), order_, nullptr);
      if (h.empty()) continue;
      make_primitive(h);
      if (insert(std::move(h))) return unit();
    }
    while (!pairs_.empty()) {
      check_budget();
      const std::size_t k = select();
      const Pair pr = pairs_[k];
      pairs_[k] = pairs_.back();
      pairs_.pop_back();
      if (pr.lcm.degree() > caps_.max_degree)
        throw Error(ErrorKind::CapExceeded, "buchberger: S-polynomial degree " + std::to_string(pr.lcm.degree()) +
                                                " exceeds cap " + std::to_string(caps_.max_degree) + progress());
      if (++reduced_ > caps_.max_pairs)
        throw Error(ErrorKind::CapExceeded, "buchberger: pair cap " + std::to_string(caps_.max_pairs) + " reached" + progress());
      max_deg_ = std::max(max_deg_, pr.lcm.degree());
      IPoly s = spoly(polys_[pr.i], polys_[pr.j], pr.lcm);
      s.sugar = pr.sugar;
      IPoly h = full_reduce(std::move(s), reducers(), order_, nullptr);
      if (h.empty()) {
        ++zero_;
        continue;
      }
      make_primitive(h);
      if (insert(std::move(h))) return unit();
    }
    return finish();
  }

 private:
  const Reducers& reducers() {
    if (!red_valid_) {
      red_ = Reducers{};
      for (auto id : active_) red_.add(&polys_[id]);
      red_valid_ = true;
    }
    return red_;
  }

  IPoly spoly(const IPoly& f, const IPoly& g, const Monomial& lcm) const {
    const Monomial qf = f.mono.front().quotient_of(lcm);
    const Monomial qg = g.mono.front().quotient_of(lcm);
    Integer g0, a, b;
    mpz_gcd(g0.get_mpz_t(), f.coef.front().get_mpz_t(), g.coef.front().get_mpz_t());
    mpz_divexact(a.get_mpz_t(), g.coef.front().get_mpz_t(), g0.get_mpz_t());
    mpz_divexact(b.get_mpz_t(), f.coef.front().get_mpz_t(), g0.get_mpz_t());
    // a * qf * f - b * qg * g, leading terms cancel.
    IPoly lifted;
    lifted.sugar = f.sugar + qf.degree();
    for (std::size_t k = 1; k < f.size(); ++k) {
      lifted.mono.push_back(qf * f.mono[k]);
      lifted.coef.push_back(f.coef[k]);
    }
    IPoly out;
    combine(lifted, 0, a, g, 1, qg, b, order_, out);
    return out;
  }

  std::size_t select() const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < pairs_.size(); ++k) {
      const auto& p = pairs_[k];
      const auto& q = pairs_[best];
      if (p.sugar < q.sugar || (p.sugar == q.sugar && order_.compare(p.lcm, q.lcm) < 0)) best = k;
    }
    return best;
  }

  // Gebauer–Möller update. Returns true if h is a nonzero constant.
  bool insert(IPoly h) {
    if (h.mono.front().degree() == 0) return true;
    const std::size_t hid = polys_.size();
    polys_.push_back(std::move(h));
    const Monomial& lh = polys_[hid].mono.front();

    std::vector<std::pair<std::size_t, Monomial>> c, d;
    for (auto g : active_) c.emplace_back(g, Monomial::lcm(polys_[g].mono.front(), lh));
    for (std::size_t k = 0; k < c.size(); ++k) {
      const auto& [g1, l1] = c[k];
      bool keep = polys_[g1].mono.front().coprime(lh);
      if (!keep) {
        keep = true;
        for (std::size_t r = k + 1; r < c.size() && keep; ++r)
          if (c[r].second.divides(l1)) keep = false;
        for (std::size_t r = 0; r < d.size() && keep; ++r)
          if (d[r].second.divides(l1)) keep = false;
      }
      if (keep) d.push_back(c[k]);
    }
    std::erase_if(pairs_, [&](const Pair& p) {
      return lh.divides(p.lcm) && !(Monomial::lcm(polys_[p.i].mono.front(), lh) == p.lcm) &&
             !(Monomial::lcm(polys_[p.j].mono.front(), lh) == p.lcm);
    });
    for (const auto& [g, l] : d) {
      if (polys_[g].mono.front().coprime(lh)) continue;
      const unsigned sg = polys_[g].sugar - polys_[g].mono.front().degree();
      const unsigned sh = polys_[hid].sugar - lh.degree();
      pairs_.push_back({g, hid, l, std::max(sg, sh) + l.degree()});
      ++considered_;
    }
    std::erase_if(active_, [&](std::size_t g) { return lh.divides(polys_[g].mono.front()); });
    active_.push_back(hid);
    red_valid_ = false;
    return false;
  }

  std::vector<RatPoly> unit() {
    record();
    return {RatPoly::constant(order_.nvars(), Rational(1))};
  }

  std::vector<RatPoly> finish() {
    // Minimal basis: drop elements whose leading monomial another one divides.
    std::vector<std::size_t> minimal;
    for (auto g : active_) {
      bool redundant = false;
      for (auto o : active_)
        if (o != g && polys_[o].mono.front().divides(polys_[g].mono.front()) &&
            (!(polys_[o].mono.front() == polys_[g].mono.front()) || o < g))
          redundant = true;
      if (!redundant) minimal.push_back(g);
    }
    std::vector<IPoly> reduced;
    for (auto g : minimal) {
      Reducers others;
      for (auto o : minimal)
        if (o != g) others.add(&polys_[o]);
      // The leading term is irreducible by construction; this tail-reduces.
      IPoly r = full_reduce(polys_[g], others, order_, nullptr);
      make_primitive(r);
      reduced.push_back(std::move(r));
    }
    std::sort(reduced.begin(), reduced.end(),
              [&](const IPoly& a, const IPoly& b) { return order_.compare(a.mono.front(), b.mono.front()) < 0; });
    std::vector<RatPoly> out;
    for (const auto& r : reduced) out.push_back(to_ratpoly(r, order_.nvars()));
    record();
    if (stats_) stats_->basis_size = out.size();
    return out;
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  void check_budget() const {
    if (elapsed() > caps_.time_budget_seconds)
      throw Error(ErrorKind::CapExceeded, "buchberger: time budget exhausted" + progress());
  }

  std::string progress() const {
    return " (pairs reduced " + std::to_string(reduced_) + ", pending " + std::to_string(pairs_.size()) +
           ", basis " + std::to_string(active_.size()) + ", max degree " + std::to_string(max_deg_) + ")";
  }

  void record() const {
    if (!stats_) return;
    stats_->pairs_considered = considered_;
    stats_->pairs_reduced = reduced_;
    stats_->zero_reductions = zero_;
    stats_->basis_size = active_.size();
    stats_->max_degree_seen = max_deg_;
    stats_->seconds = elapsed();
  }

  const MonomialOrder& order_;
  GbCaps caps_;
  GbStats* stats_;
  std::chrono::steady_clock::time_point start_;
  std::vector<IPoly> polys_;
  std::vector<std::size_t> active_;
  std::vector<Pair> pairs_;
  Reducers red_;
  bool red_valid_ = false;
  std::size_t considered_ = 0, reduced_ = 0, zero_ = 0;
  unsigned max_deg_ = 0;
};

}  // namespace

Monomial leading_monomial(const RatPoly& f, const MonomialOrder& order) {
  if (f.is_zero()) throw Error(ErrorKind::InvalidInput, "leading_monomial of zero");
  const auto& t = f.terms();
  Monomial best = t.front().mono;
  for (const auto& term : t)
    if (order.compare(term.mono, best) > 0) best = term.mono;
  return best;
}

RatPoly reduce(const RatPoly& f, const std::vector<RatPoly>& g, const MonomialOrder& order) {
  if (f.is_zero()) return f;
  std::vector<IPoly> gi;
  gi.reserve(g.size());
  for (const auto& p : g)
    if (!p.is_zero()) gi.push_back(to_ipoly(p, order));
  Reducers red;
  for (const auto& p : gi) red.add(&p);
  // Track the rational factor so the result is a genuine normal form of f.
  const RatPoly pf = f.primitive();
  Rational scale = pf.terms().front().coeff / f.terms().front().coeff;
  IPoly r = full_reduce(to_ipoly(f, order), red, order, &scale);
  RatPoly out = to_ratpoly(r, f.nvars());
  out *= Rational(1) / scale;
  return out;
}

std::vector<RatPoly> buchberger(const std::vector<RatPoly>& gens, const MonomialOrder& order, const GbCaps& caps,
                                GbStats* stats) {
  return Engine(order, caps, stats).run(gens);
}

std::vector<RatPoly> eliminate(const std::vector<RatPoly>& gb, const MonomialOrder& order, std::size_t first_kept_block) {
  std::vector<std::size_t> kept;
  for (std::size_t b = first_kept_block; b < order.blocks().size(); ++b)
    kept.insert(kept.end(), order.blocks()[b].begin(), order.blocks()[b].end());
  std::vector<RatPoly> out;
  for (const auto& g : gb)
    if (g.uses_only(kept)) out.push_back(g);
  return out;
}

std::vector<RatPoly> saturate(const std::vector<RatPoly>& gens, const RatPoly& d, const MonomialOrder& order,
                              const GbCaps& caps, GbStats* stats) {
  if (d.is_zero()) throw Error(ErrorKind::InvalidInput, "saturate: D must be nonzero");
  const std::size_t n = order.nvars();
  if (n + 1 > kMaxVars) throw Error(ErrorKind::CapExceeded, "saturate: no room for the auxiliary variable");
  std::vector<std::string> tblock{"t"};
  std::vector<std::vector<std::string>> blocks{tblock};
  for (const auto& b : order.blocks()) {
    blocks.emplace_back();
    for (auto v : b) blocks.back().push_back("v" + std::to_string(v));
  }
  // Variable index layout: t first, then the original blocks in order.
  std::vector<std::size_t> map(n);
  std::size_t next = 1;
  for (const auto& b : order.blocks())
    for (auto v : b) map[v] = next++;
  const MonomialOrder ext(VarTable{std::move(blocks)});
  std::vector<RatPoly> g;
  for (const auto& f : gens) g.push_back(f.remap(map, n + 1));
  g.push_back(RatPoly::variable(n + 1, 0) * d.remap(map, n + 1) - RatPoly::constant(n + 1, Rational(1)));
  const auto gb = buchberger(g, ext, caps, stats);
  std::vector<std::size_t> back(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) back[map[v]] = v;
  std::vector<RatPoly> out;
  for (const auto& f : eliminate(gb, ext, 1)) {
    // Eliminated elements never contain t, so index 0 maps nowhere.
    std::vector<std::size_t> inv(n + 1);
    for (std::size_t v = 1; v <= n; ++v) inv[v] = back[v];
    inv[0] = 0;
    out.push_back(f.remap(inv, n));
  }
  return out;
}

RatPoly s_polynomial(const RatPoly& f, const RatPoly& g, const MonomialOrder& order) {
  const Monomial lf = leading_monomial(f, order), lg = leading_monomial(g, order);
  const Monomial l = Monomial::lcm(lf, lg);
  const RatPoly mf = RatPoly::monomial(f.nvars(), lf.quotient_of(l), Rational(1) / f.coefficient(lf));
  const RatPoly mg = RatPoly::monomial(g.nvars(), lg.quotient_of(l), Rational(1) / g.coefficient(lg));
  return mf * f - mg * g;
}

}  // namespace logsparse
