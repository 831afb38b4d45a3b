#include "klcells/hecke.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "klcells/error.hpp"
#include "parallel.hpp"

namespace klcells {
namespace {

constexpr char kMagic[4] = {'K', 'L', 'C', 'T'};
constexpr std::uint32_t kFormatVersion = 1;

bool longer(const CoxeterSystem& sys, Element a, Element b) { return sys.length(a) > sys.length(b); }

// Dense accumulator over element ids with a record of touched slots.
class Workspace {
 public:
  Workspace(std::size_t n, int rank) : slots_(n, LaurentPoly(rank)), touched_(n, 0) {}

  LaurentPoly& at(std::uint32_t id) {
    if (!touched_[id]) {
      touched_[id] = 1;
      ids_.push_back(id);
    }
    return slots_[id];
  }
  LaurentPoly& raw(std::uint32_t id) { return slots_[id]; }

  // Nonzero entries in increasing id order; resets the workspace.
  Column drain() {
    std::sort(ids_.begin(), ids_.end());
    Column out;
    for (auto id : ids_) {
      if (!slots_[id].is_zero()) out.emplace_back(id, std::move(slots_[id]));
      slots_[id] = LaurentPoly(slots_[id].rank());
      touched_[id] = 0;
    }
    ids_.clear();
    return out;
  }

 private:
  std::vector<LaurentPoly> slots_;
  std::vector<char> touched_;
  std::vector<std::uint32_t> ids_;
};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void i64(std::int64_t v) {
    const auto u = static_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
  }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes.insert(bytes.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t> bytes;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b_[pos_++]) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::int64_t i64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b_[pos_++]) << (8 * i);
    return static_cast<std::int64_t>(v);
  }
  std::string str() {
    const auto n = u32();
    need(n);
    std::string s(b_.begin() + static_cast<std::ptrdiff_t>(pos_), b_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return s;
  }
  bool at_end() const { return pos_ == b_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > b_.size()) throw UsageError("KL table file is truncated");
  }
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

template <class C>
void write_coeff(Writer& w, const C& c) {
  if constexpr (std::is_integral_v<C>) {
    w.i64(c);
  } else {
    w.str(c.str());
  }
}

template <class C>
C read_coeff(Reader& r) {
  if constexpr (std::is_integral_v<C>) {
    return r.i64();
  } else {
    return C(r.str());
  }
}

std::string format_weights(const std::vector<std::vector<std::int64_t>>& w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < w[i].size(); ++j) s += (j ? "," : "") + std::to_string(w[i][j]);
    s += "]";
  }
  return s + "]";
}

}  // namespace

HeckeContext HeckeContext::specialize(std::shared_ptr<const CoxeterSystem> sys, const PositiveSubset& x) {
  if (!sys) throw UsageError("specialize: null Coxeter system");
  if (x.dim() != sys->num_classes())
    throw UsageError("positive subset dimension " + std::to_string(x.dim()) + " does not match " +
                     std::to_string(sys->num_classes()) + " generator classes");
  std::vector<std::vector<std::int64_t>> w;
  for (std::size_t c = 0; c < x.dim(); ++c) w.push_back(x.embed(LatticeElement::basis(x.dim(), c)));
  HeckeContext ctx = from_weights(std::move(sys), std::move(w));
  ctx.x_ = x;
  return ctx;
}

HeckeContext HeckeContext::from_weights(std::shared_ptr<const CoxeterSystem> sys,
                                        std::vector<std::vector<std::int64_t>> class_weights) {
  if (!sys) throw UsageError("from_weights: null Coxeter system");
  if (class_weights.size() != sys->num_classes())
    throw UsageError("expected one weight per generator class (" + std::to_string(sys->num_classes()) + ")");
  const std::size_t r = class_weights.empty() ? 0 : class_weights[0].size();
  for (const auto& w : class_weights)
    if (w.size() != r) throw UsageError("class weights must all have the same length");
  if (r > static_cast<std::size_t>(kMaxRank)) throw ResourceError("weight rank exceeds " + std::to_string(kMaxRank));
  HeckeContext ctx;
  ctx.sys_ = std::move(sys);
  ctx.rank_ = static_cast<int>(r);
  ctx.class_weights_ = std::move(class_weights);
  ctx.finish();
  return ctx;
}

void HeckeContext::finish() {
  gen_weights_.clear();
  q_.clear();
  for (std::size_t s = 0; s < sys_->rank(); ++s) {
    const Exponent e = Exponent::from(class_weights_[sys_->class_of(static_cast<int>(s))]);
    gen_weights_.push_back(e);
    q_.push_back(LaurentPoly::monomial(rank_, e) - LaurentPoly::monomial(rank_, -e));
  }
}

std::string HeckeContext::fingerprint() const {
  return sys_->fingerprint() + ";weights=" + format_weights(class_weights_);
}

LaurentPoly HeckeElement::coefficient(Element w) const {
  auto it = terms_.find(w.id);
  return it == terms_.end() ? LaurentPoly(rank_) : it->second;
}

void HeckeElement::add(Element w, const LaurentPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w.id, rank_);
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

HeckeElement& HeckeElement::operator+=(const HeckeElement& o) {
  for (const auto& [id, c] : o.terms_) add(Element{id}, c);
  return *this;
}

HeckeElement& HeckeElement::operator-=(const HeckeElement& o) {
  for (const auto& [id, c] : o.terms_) add(Element{id}, -c);
  return *this;
}

HeckeElement operator*(const LaurentPoly& c, const HeckeElement& h) {
  HeckeElement r(h.rank_);
  if (c.is_zero()) return r;
  for (const auto& [id, x] : h.terms_) r.add(Element{id}, c * x);
  return r;
}

std::string HeckeElement::to_string(const CoxeterSystem& sys) const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!s.empty()) s += " + ";
    s += "(" + it->second.to_string() + ") T[" + sys.format(Element{it->first}) + "]";
  }
  return s;
}

HeckeElement t_multiply(const HeckeContext& ctx, int s, const HeckeElement& h, Side side) {
  const auto& sys = ctx.system();
  if (s < 0 || static_cast<std::size_t>(s) >= sys.rank()) throw UsageError("generator index out of range");
  HeckeElement out(ctx.rank());
  for (const auto& [id, c] : h.terms()) {
    const Element w{id};
    const Element sw = sys.apply(w, s, side);
    out.add(sw, c);
    if (!longer(sys, sw, w)) out.add(w, ctx.q(s) * c);
  }
  return out;
}

HeckeElement t_multiply(const HeckeContext& ctx, Element w, const HeckeElement& h, Side side) {
  const auto& word = ctx.system().word(w);
  HeckeElement out = h;
  if (side == Side::Left) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) out = t_multiply(ctx, *it, out, side);
  } else {
    for (int s : word) out = t_multiply(ctx, s, out, side);
  }
  return out;
}

namespace {

// Columns of the bar table: bar(T_w) = sum_x R_{x,w} T_x, sorted by x.
std::vector<Column> bar_columns(const HeckeContext& ctx) {
  const auto& sys = ctx.system();
  const std::size_t n = sys.size();
  std::vector<Column> cols(n);
  cols[0] = {{0, ctx.one()}};
  Workspace ws(n, ctx.rank());
  for (std::size_t id = 1; id < n; ++id) {
    const Element w{static_cast<std::uint32_t>(id)};
    const int s = sys.word(w).front();
    const Element tail = sys.apply(w, s, Side::Left);
    // T_s^{-1} T_x = T_{sx} - [sx > x] q_s T_x.
    for (const auto& [x, c] : cols[tail.id]) {
      const Element sx = sys.apply(Element{x}, s, Side::Left);
      ws.at(sx.id) += c;
      if (longer(sys, sx, Element{x})) ws.at(x) -= ctx.q(s) * c;
    }
    cols[id] = ws.drain();
  }
  return cols;
}

}  // namespace

std::vector<HeckeElement> bar_expand(const HeckeContext& ctx) {
  std::vector<HeckeElement> out;
  for (const auto& col : bar_columns(ctx)) {
    HeckeElement h(ctx.rank());
    for (const auto& [x, c] : col) h.add(Element{x}, c);
    out.push_back(std::move(h));
  }
  return out;
}

HeckeElement bar(const HeckeContext& ctx, const std::vector<HeckeElement>& r_table, const HeckeElement& h) {
  HeckeElement out(ctx.rank());
  for (const auto& [id, c] : h.terms()) out += c.bar() * r_table.at(id);
  return out;
}

KLTable::KLTable(HeckeContext ctx, std::vector<Column> columns) : ctx_(std::move(ctx)), columns_(std::move(columns)) {
  if (columns_.size() != ctx_.system().size()) throw UsageError("KL table size does not match the group");
}

LaurentPoly KLTable::p(Element y, Element w) const {
  const auto& col = columns_[w.id];
  auto it = std::lower_bound(col.begin(), col.end(), y.id, [](const auto& e, std::uint32_t v) { return e.first < v; });
  return (it != col.end() && it->first == y.id) ? it->second : ctx_.zero();
}

HeckeElement KLTable::c_element(Element w) const {
  HeckeElement h(rank());
  for (const auto& [y, c] : columns_[w.id]) h.add(Element{y}, c);
  return h;
}

Column KLTable::reduce_to_c_basis(std::vector<LaurentPoly>& work) const {
  Column out;
  for (std::size_t z = work.size(); z-- > 0;) {
    if (work[z].is_zero()) continue;
    const LaurentPoly c = std::move(work[z]);
    work[z] = ctx_.zero();
    for (const auto& [y, p] : columns_[z])
      if (y != z) work[y] -= c * p;
    out.emplace_back(static_cast<std::uint32_t>(z), c);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Column KLTable::expand_in_c_basis(const HeckeElement& h) const {
  if (h.rank() != rank()) throw UsageError("Hecke element rank does not match the table");
  std::vector<LaurentPoly> work(system().size(), ctx_.zero());
  for (const auto& [id, c] : h.terms()) work.at(id) = c;
  return reduce_to_c_basis(work);
}

Column KLTable::t_times_c(int s, Element y) const {
  const auto& sys = system();
  std::vector<LaurentPoly> work(sys.size(), ctx_.zero());
  for (const auto& [x, p] : columns_[y.id]) {
    const Element sx = sys.apply(Element{x}, s, Side::Left);
    work[sx.id] += p;
    if (!longer(sys, sx, Element{x})) work[x] += ctx_.q(s) * p;
  }
  return reduce_to_c_basis(work);
}

std::vector<std::uint8_t> KLTable::serialize() const {
  Writer w;
  w.bytes.insert(w.bytes.end(), kMagic, kMagic + 4);
  w.u32(kFormatVersion);
  w.u32(std::is_integral_v<Coeff> ? 0 : 1);
  w.str(ctx_.fingerprint());
  w.u32(static_cast<std::uint32_t>(rank()));
  w.u32(static_cast<std::uint32_t>(columns_.size()));
  for (const auto& col : columns_) {
    w.u32(static_cast<std::uint32_t>(col.size()));
    for (const auto& [y, p] : col) {
      w.u32(y);
      w.u32(static_cast<std::uint32_t>(p.size()));
      for (const auto& t : p.terms()) {
        for (int i = 0; i < rank(); ++i) w.i32(t.exp.v[i]);
        write_coeff(w, t.coeff);
      }
    }
  }
  return std::move(w.bytes);
}

KLTable KLTable::deserialize(const HeckeContext& ctx, const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw UsageError("not a KL table file");
  Reader r(bytes);
  r.u32();
  if (r.u32() != kFormatVersion) throw UsageError("unsupported KL table format version");
  if (r.u32() != (std::is_integral_v<Coeff> ? 0u : 1u)) throw UsageError("KL table coefficient width mismatch");
  if (r.str() != ctx.fingerprint()) throw UsageError("KL table belongs to a different context");
  const auto rank = static_cast<int>(r.u32());
  if (rank != ctx.rank()) throw UsageError("KL table rank mismatch");
  const auto n = r.u32();
  if (n != ctx.system().size()) throw UsageError("KL table size mismatch");
  std::vector<Column> cols(n);
  for (auto& col : cols) {
    const auto entries = r.u32();
    for (std::uint32_t k = 0; k < entries; ++k) {
      const auto y = r.u32();
      if (y >= n) throw UsageError("KL table entry out of range");
      const auto nterms = r.u32();
      std::vector<LaurentPoly::Term> terms;
      for (std::uint32_t t = 0; t < nterms; ++t) {
        Exponent e;
        for (int i = 0; i < rank; ++i) e.v[i] = r.i32();
        terms.push_back({e, read_coeff<Coeff>(r)});
      }
      col.emplace_back(y, LaurentPoly::from_terms(rank, std::move(terms)));
    }
  }
  if (!r.at_end()) throw UsageError("trailing bytes in KL table file");
  return KLTable(ctx, std::move(cols));
}

KLTable kl_table(const HeckeContext& ctx, const KLOptions& opts) {
  const auto& sys = ctx.system();
  const std::size_t n = sys.size();
  const auto rcols = bar_columns(ctx);
  std::vector<Column> cols(n);

  parallel_for(n, opts.jobs, [&](std::size_t begin, std::size_t end, auto next) {
    std::vector<LaurentPoly> alpha(n, ctx.zero());
    for (std::size_t id = begin; id < end; id = next()) {
      // p_{x,w} - bar(p_{x,w}) = sum_{x<y<=w} R_{x,y} bar(p_{y,w}); contributions
      // are pushed down from each finished y.
      Column col{{static_cast<std::uint32_t>(id), ctx.one()}};
      for (const auto& [x, r] : rcols[id])
        if (x != id) alpha[x] += r;
      for (std::size_t x = id; x-- > 0;) {
        if (alpha[x].is_zero()) continue;
        LaurentPoly a = std::move(alpha[x]);
        alpha[x] = ctx.zero();
        if (!(a.bar() == -a))
          throw InternalError("KL solve: non-skew right-hand side at (" + sys.format(Element{static_cast<std::uint32_t>(x)}) +
                              ", " + sys.format(Element{static_cast<std::uint32_t>(id)}) + ")");
        LaurentPoly px = a.sign_split().negative;
        if (px.is_zero()) continue;
        const LaurentPoly pb = px.bar();
        for (const auto& [z, r] : rcols[x])
          if (z != x) alpha[z] += r * pb;
        col.emplace_back(static_cast<std::uint32_t>(x), std::move(px));
      }
      std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      cols[id] = std::move(col);
    }
  });
  return KLTable(ctx, std::move(cols));
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw ResourceError("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::filesystem::path TableCache::path_for(const HeckeContext& ctx) const {
  return dir_ / (sha256_hex(ctx.fingerprint()) + ".klt");
}

std::optional<KLTable> TableCache::load(const HeckeContext& ctx) const {
  const auto path = path_for(ctx);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return KLTable::deserialize(ctx, bytes);
  } catch (const UsageError&) {
    // Stale or foreign file under this key: recompute.
    return std::nullopt;
  }
}

void TableCache::store(const KLTable& table) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ResourceError("cannot create cache directory " + dir_.string() + ": " + ec.message());
  const auto path = path_for(table.context());
  auto tmp = path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  const auto bytes = table.serialize();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write cache file " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ResourceError("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ResourceError("cannot move cache file into place: " + ec.message());
}

KLTable TableCache::get(const HeckeContext& ctx, const KLOptions& opts, bool* hit) const {
  if (auto t = load(ctx)) {
    if (hit) *hit = true;
    return std::move(*t);
  }
  if (hit) *hit = false;
  KLTable t = kl_table(ctx, opts);
  store(t);
  return t;
}

std::vector<TableCache::Entry> TableCache::list() const {
  std::vector<Entry> out;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir_, ec)) return out;
  for (const auto& de : std::filesystem::directory_iterator(dir_)) {
    if (de.path().extension() != ".klt") continue;
    std::ifstream in(de.path(), std::ios::binary);
    std::vector<std::uint8_t> head(4096);
    in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
    head.resize(static_cast<std::size_t>(in.gcount()));
    std::string fp = "?";
    try {
      Reader r(head);
      r.u32();
      r.u32();
      r.u32();
      fp = r.str();
    } catch (const UsageError&) {
    }
    out.push_back({de.path().filename().string(), fp, de.file_size()});
  }
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.file < b.file; });
  return out;
}

std::size_t TableCache::clear() const {
  std::size_t removed = 0;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir_, ec)) return 0;
  std::vector<std::filesystem::path> victims;
  for (const auto& de : std::filesystem::directory_iterator(dir_))
    if (de.path().extension() == ".klt") victims.push_back(de.path());
  for (const auto& p : victims) removed += std::filesystem::remove(p) ? 1 : 0;
  return removed;
}

}  // namespace klcells
