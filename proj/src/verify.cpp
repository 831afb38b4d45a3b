#include "klcells/verify.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "klcells/error.hpp"
#include "klcells/exact_lp.hpp"

namespace klcells {
namespace {

std::size_t side_slot(CellSide s) { return static_cast<std::size_t>(s); }

bool same_signs(const PositiveSubset& x, const Arrangement& arr, const Facet& f) {
  return sgn(x, arr.elements()) == f.signs;
}

void add_unique(std::vector<PositiveSubset>& v, PositiveSubset x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(std::move(x));
}

std::string format_weights(const std::vector<std::vector<std::int64_t>>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    s += i ? ";" : "";
    for (std::size_t j = 0; j < w[i].size(); ++j) s += (j ? "," : "") + std::to_string(w[i][j]);
  }
  return s;
}

}  // namespace

CellEngine::CellEngine(std::shared_ptr<const CoxeterSystem> sys, EngineOptions opts)
    : sys_(std::move(sys)), opts_(std::move(opts)) {
  if (!sys_) throw UsageError("engine needs a Coxeter system");
  if (opts_.jobs == 0) throw UsageError("jobs must be at least 1");
  if (opts_.table_slots == 0) opts_.table_slots = 1;
}

std::shared_ptr<const KLTable> CellEngine::table(const HeckeContext& ctx) {
  std::lock_guard<std::mutex> lock(mu_);
  const auto key = ctx.fingerprint();
  for (auto it = tables_.begin(); it != tables_.end(); ++it)
    if (it->first == key) {
      tables_.splice(tables_.begin(), tables_, it);
      return tables_.front().second;
    }
  KLOptions ko{opts_.jobs};
  std::shared_ptr<const KLTable> t;
  if (opts_.cache_dir) {
    bool hit = false;
    t = std::make_shared<const KLTable>(TableCache(*opts_.cache_dir).get(ctx, ko, &hit));
    (hit ? hits_ : built_)++;
  } else {
    t = std::make_shared<const KLTable>(kl_table(ctx, ko));
    ++built_;
  }
  tables_.emplace_front(key, t);
  while (tables_.size() > opts_.table_slots) tables_.pop_back();
  return t;
}

const CellPartition& CellEngine::cells(const HeckeContext& ctx, CellSide side) {
  const auto key = ctx.fingerprint();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto& entry = partitions_[key];
    if (entry.by_side[side_slot(side)]) return *entry.by_side[side_slot(side)];
    if (entry.left) {
      entry.by_side[side_slot(side)] = cells_from_left_edges(*sys_, *entry.left, side);
      return *entry.by_side[side_slot(side)];
    }
  }
  auto t = table(ctx);
  auto graph = left_edges(*t, opts_.jobs);
  std::lock_guard<std::mutex> lock(mu_);
  auto& entry = partitions_[key];
  if (!entry.left) entry.left = std::move(graph);
  if (!entry.by_side[side_slot(side)]) entry.by_side[side_slot(side)] = cells_from_left_edges(*sys_, *entry.left, side);
  return *entry.by_side[side_slot(side)];
}

std::vector<PositiveSubset> facet_witnesses(const Arrangement& arr, const Facet& facet, std::size_t k) {
  std::vector<PositiveSubset> out{facet.representative};
  if (k <= 1 || facet.dimension == 0) return out;
  std::vector<IntVector> zero_rows;
  const auto& es = arr.elements();
  for (std::size_t i = 0; i < es.size(); ++i)
    if (facet.signs.signs[i] == Sign::Zero) zero_rows.push_back(es[i].coeffs);
  const auto span = integer_nullspace(zero_rows, arr.dim());
  const Form& phi = facet.representative_form;

  std::optional<PositiveSubset> refinement;
  if (facet.dimension >= 2)
    for (const auto& n : span) {
      auto x = PositiveSubset::canonicalize(arr.dim(), {phi, n});
      if (x.depth() == 2 && same_signs(x, arr, facet)) {
        refinement = std::move(x);
        break;
      }
    }
  const std::size_t perturbed_target = k - 1 - (refinement ? 1 : 0);
  for (std::int64_t m = 2; m <= 64 && out.size() < 1 + perturbed_target; ++m)
    for (const auto& n : span)
      for (int sign : {1, -1}) {
        if (out.size() >= 1 + perturbed_target) break;
        Form f(phi.size());
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = m * phi[i] + sign * n[i];
        if (std::all_of(f.begin(), f.end(), [](auto c) { return c == 0; })) continue;
        auto x = PositiveSubset::from_form(f);
        if (same_signs(x, arr, facet)) add_unique(out, std::move(x));
      }
  if (refinement) add_unique(out, std::move(*refinement));
  return out;
}

bool check_facet_constancy(CellEngine& engine, const Arrangement& arr, const Facet& facet, std::size_t k,
                           CellSide side, std::vector<PositiveSubset>* witnesses) {
  const auto reps = facet_witnesses(arr, facet, k);
  if (witnesses) *witnesses = reps;
  const auto first = RelationHandle::of(engine.cells(reps.front(), side));
  for (std::size_t i = 1; i < reps.size(); ++i)
    if (RelationHandle::of(engine.cells(reps[i], side)) != first) return false;
  return true;
}

bool check_sup_formula(CellEngine& engine, const Arrangement& arr, const Facet& facet, CellSide side) {
  const auto& sys = engine.system();
  std::vector<RelationHandle> rels;
  rels.push_back(translation_relation(sys, sys.parabolic_elements(arr.parabolic_of_facet(facet, sys)), side));
  for (auto c : arr.adjacent_chambers(facet))
    rels.push_back(RelationHandle::of(engine.cells(arr.facets()[c].representative, side)));
  return sup_relations(rels) == RelationHandle::of(engine.cells(facet.representative, side));
}

std::string outcome_name(BMinusOutcome o) {
  switch (o) {
    case BMinusOutcome::Pass:
      return "pass";
    case BMinusOutcome::AB1Violation:
      return "A(b1)-violation";
    case BMinusOutcome::CharacterMismatch:
      return "character-mismatch";
  }
  return "?";
}

BMinusOutcome check_bminus(CellEngine& engine, const Arrangement& arr, const Facet& facet, const Facet& chamber,
                           CellSide side) {
  if (side == CellSide::TwoSided) throw UsageError("B- is checked for left and right cells only");
  if (!chamber.is_chamber() || !closure_leq(facet, chamber))
    throw UsageError("check_bminus: the chamber does not contain the facet in its closure");
  (void)arr;
  const auto& sys = engine.system();
  const auto ctx_f = engine.context(facet.representative);
  const auto ctx_c = engine.context(chamber.representative);
  const CellPartition cells_f = engine.cells(ctx_f, side);
  const CellPartition cells_c = engine.cells(ctx_c, side);
  const auto label_f = cells_f.block_index(sys.size());

  std::vector<std::vector<std::size_t>> parts(cells_f.blocks.size());
  bool ab1 = false;
  for (std::size_t i = 0; i < cells_c.blocks.size(); ++i) {
    const auto& b = cells_c.blocks[i];
    const auto target = label_f[b.front().id];
    for (auto e : b)
      if (label_f[e.id] != target) ab1 = true;
    parts[target].push_back(i);
  }
  if (ab1) return BMinusOutcome::AB1Violation;

  const auto table_f = engine.table(ctx_f);
  const auto table_c = engine.table(ctx_c);
  for (std::size_t b = 0; b < cells_f.blocks.size(); ++b) {
    const Character chi = character(cell_module(*table_f, cells_f, b), sys);
    Character sum(chi.size(), 0);
    for (auto i : parts[b]) {
      const Character part = character(cell_module(*table_c, cells_c, i), sys);
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += part[k];
    }
    if (sum != chi) return BMinusOutcome::CharacterMismatch;
  }
  return BMinusOutcome::Pass;
}

bool FacetReport::ok() const {
  return std::all_of(sides.begin(), sides.end(), [](const SideResult& s) { return s.constancy_ok && s.sup_ok; });
}

FacetReport verify_facet(CellEngine& engine, const Arrangement& arr, std::size_t facet_index, std::size_t k,
                         const std::vector<CellSide>& sides) {
  const auto start = std::chrono::steady_clock::now();
  const Facet& f = arr.facets().at(facet_index);
  FacetReport rep;
  rep.index = facet_index;
  rep.signs = f.signs;
  rep.dimension = f.dimension;
  for (auto side : sides) {
    FacetReport::SideResult r{side, false, false, 0};
    r.constancy_ok = check_facet_constancy(engine, arr, f, k, side, &rep.witnesses);
    r.sup_ok = check_sup_formula(engine, arr, f, side);
    r.cells = engine.cells(f.representative, side).blocks.size();
    rep.sides.push_back(r);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string Slope::to_string() const {
  if (q == 0) return "inf";
  if (q == 1) return std::to_string(p);
  return std::to_string(p) + "/" + std::to_string(q);
}

std::vector<Slope> slope_grid(std::int64_t max_denominator) {
  if (max_denominator < 1) throw UsageError("max denominator must be at least 1");
  std::vector<Slope> grid{{0, 1}};
  for (std::int64_t q = 1; q <= max_denominator; ++q)
    for (std::int64_t p = 1; p <= max_denominator; ++p)
      if (std::gcd(p, q) == 1) grid.push_back({p, q});
  std::sort(grid.begin() + 1, grid.end(), [](const Slope& a, const Slope& b) { return a.p * b.q < b.p * a.q; });
  grid.push_back({1, 0});
  return grid;
}

WallReport scan_walls_rank2(CellEngine& engine, std::int64_t max_denominator) {
  const auto& sys = engine.system();
  if (sys.num_classes() != 2)
    throw UsageError("wall scan needs exactly two generator classes, this group has " +
                     std::to_string(sys.num_classes()));
  WallReport rep;
  rep.class_names = sys.class_names();
  rep.slopes = slope_grid(max_denominator);
  std::vector<RelationHandle> rels;
  for (const auto& sl : rep.slopes) {
    const auto x = PositiveSubset::from_form({sl.q, sl.p});
    const auto& cells = engine.cells(x, CellSide::Left);
    rep.fingerprints.push_back(partition_fingerprint(sys, cells));
    rep.cell_counts.push_back(cells.blocks.size());
    rels.push_back(RelationHandle::of(cells));
  }
  const auto& fp = rep.fingerprints;
  // A grid point alone in its chamber also differs from both neighbours, but
  // there the neighbours are walls, which are coarser.
  auto wall_at = [&](std::size_t i) {
    return fp[i] != fp[i - 1] && fp[i] != fp[i + 1] && !is_coarsening(rels[i], rels[i - 1]) &&
           !is_coarsening(rels[i], rels[i + 1]);
  };
  std::vector<std::size_t> wall_idx;
  for (std::size_t i = 1; i + 1 < fp.size(); ++i)
    if (wall_at(i)) {
      wall_idx.push_back(i);
      rep.walls.push_back(rep.slopes[i]);
    }
  // Interior slopes between consecutive walls, endpoints excluded.
  std::vector<std::size_t> bounds{0};
  bounds.insert(bounds.end(), wall_idx.begin(), wall_idx.end());
  bounds.push_back(fp.size() - 1);
  for (std::size_t b = 0; b + 1 < bounds.size(); ++b)
    for (std::size_t i = bounds[b] + 2; i < bounds[b + 1]; ++i) {
      if (rels[i] != rels[bounds[b] + 1]) rep.constant_between_walls = false;
      if (fp[i] != fp[bounds[b] + 1]) rep.fingerprints_constant_between_walls = false;
    }
  return rep;
}

bool InvarianceReport::ok() const {
  return std::all_of(items.begin(), items.end(), [](const Item& i) { return i.failures.empty(); });
}

InvarianceReport check_invariances(CellEngine& engine, std::size_t samples, std::uint64_t seed) {
  const auto& sys = engine.system();
  const auto sysp = engine.system_ptr();
  const std::size_t d = sys.num_classes();
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  auto random_weights = [&](bool allow_zero) {
    std::vector<std::vector<std::int64_t>> w(d, std::vector<std::int64_t>(1));
    for (auto& x : w)
      do x[0] = uniform(-4, 4);
      while (!allow_zero && x[0] == 0);
    return w;
  };
  auto random_form = [&] {
    Form f(d);
    for (auto& c : f) c = uniform(-3, 3);
    return f;
  };
  auto left = [&](const HeckeContext& ctx) { return engine.cells(ctx, CellSide::Left); };

  InvarianceReport rep;
  rep.items = {{"scaling", 0, {}}, {"flag-equivalence", 0, {}}, {"sign-flip", 0, {}},
               {"sign-flip-kl", 0, {}}, {"tau", 0, {}},       {"zero-class", 0, {}}};
  auto& scaling = rep.items[0];
  auto& flag_eq = rep.items[1];
  auto& sign_flip = rep.items[2];
  auto& sign_flip_kl = rep.items[3];
  auto& tau = rep.items[4];
  auto& zero_class = rep.items[5];

  for (std::size_t i = 0; i < samples; ++i) {
    // Positive scaling of rank-1 weights.
    const auto w = random_weights(true);
    const auto base = HeckeContext::from_weights(sysp, w);
    auto scaled_w = w;
    const auto k = uniform(2, 5);
    for (auto& x : scaled_w) x[0] *= k;
    ++scaling.checked;
    if (left(base) != left(HeckeContext::from_weights(sysp, scaled_w)))
      scaling.failures.push_back(format_weights(w) + " x" + std::to_string(k));

    // A non-canonical flag against its canonical form.
    const Form phi = random_form(), psi = random_form();
    const auto a = uniform(1, 3), b = uniform(1, 3), c = uniform(-3, 3);
    std::vector<std::vector<std::int64_t>> raw(d);
    for (std::size_t cls = 0; cls < d; ++cls) raw[cls] = {a * phi[cls], b * psi[cls] + c * phi[cls]};
    const auto x = PositiveSubset::canonicalize(d, {phi, psi});
    ++flag_eq.checked;
    if (left(engine.context(x)) != left(HeckeContext::from_weights(sysp, raw)))
      flag_eq.failures.push_back(x.to_string() + " vs raw " + format_weights(raw));

    for (std::size_t cls = 0; cls < d; ++cls) {
      // Negating one class weight.
      auto flipped_w = w;
      flipped_w[cls][0] = -flipped_w[cls][0];
      const auto flipped = HeckeContext::from_weights(sysp, flipped_w);
      ++sign_flip.checked;
      if (left(base) != left(flipped))
        sign_flip.failures.push_back(format_weights(w) + " class " + sys.class_names()[cls]);

      ++sign_flip_kl.checked;
      const auto t = engine.table(base);
      const auto tf = engine.table(flipped);
      bool same = true;
      for (std::size_t id = 0; id < sys.size() && same; ++id) {
        const auto wid = sys.element(id);
        const auto& col = t->column(wid);
        const auto& colf = tf->column(wid);
        if (col.size() != colf.size()) {
          same = false;
          break;
        }
        for (std::size_t e = 0; e < col.size() && same; ++e) {
          const int parity = (sys.length_vector(wid)[cls] + sys.length_vector(Element{col[e].first})[cls]) % 2;
          same = col[e].first == colf[e].first && (parity ? -col[e].second : col[e].second) == colf[e].second;
        }
      }
      if (!same) sign_flip_kl.failures.push_back(format_weights(w) + " class " + sys.class_names()[cls]);

      // tau symmetry on a random flag.
      ++tau.checked;
      if (left(engine.context(x)) != left(engine.context(x.tau_flip(cls))))
        tau.failures.push_back(x.to_string() + " class " + sys.class_names()[cls]);

      // Zero weight on one class: left cells are stable under W_cls on the left.
      auto zw = random_weights(false);
      zw[cls][0] = 0;
      const auto& cells = left(HeckeContext::from_weights(sysp, zw));
      const auto label = cells.block_index(sys.size());
      const auto parabolic = sys.parabolic_elements(sys.classes()[cls]);
      ++zero_class.checked;
      bool stable = true;
      for (std::size_t id = 0; id < sys.size() && stable; ++id)
        for (auto h : parabolic)
          if (label[sys.multiply(h, sys.element(id)).id] != label[id]) stable = false;
      if (!stable) zero_class.failures.push_back(format_weights(zw));
    }
  }
  return rep;
}

}  // namespace klcells
