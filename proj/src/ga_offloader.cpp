#include "satcc/ga_offloader.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_set>

namespace satcc {

void validate(const GaParams& p) {
  auto bad = [](const char* what) {
    throw std::invalid_argument(std::string("ga params: ") + what);
  };
  if (!(p.theta1 >= 0.0)) bad("theta1 must be >= 0");
  if (!(p.theta2 >= 0.0)) bad("theta2 must be >= 0");
  if (!(p.theta3 >= 0.0)) bad("theta3 must be >= 0");
  if (p.n_ini < 1) bad("n_ini must be >= 1");
  if (p.n_iter < 1) bad("n_iter must be >= 1");
  if (p.n_k < 1) bad("n_k must be >= 1");
  if (p.n_summ < 0) bad("n_summ must be >= 0");
  if (!(p.epsilon >= 0.0)) bad("epsilon must be >= 0");
}

namespace {

constexpr int kMax = kMaxChromosomeSegments;
using Genes = std::array<std::uint16_t, kMax>;  // (orbit << 8) | slot, 0-padded
using u128 = unsigned __int128;

inline std::uint16_t pack_sat(SatId s) {
  return static_cast<std::uint16_t>((s.orbit << 8) | s.slot);
}
inline SatId unpack_sat(std::uint16_t g) { return {g >> 8, g & 0xff}; }

inline u128 key_of(const Genes& g) {
  u128 k = 0;
  for (int i = kMax - 1; i >= 0; --i) k = (k << 16) | g[i];
  return k;
}

struct KeyHash {
  std::size_t operator()(u128 k) const {
    std::uint64_t z = static_cast<std::uint64_t>(k) ^
                      (static_cast<std::uint64_t>(k >> 64) * 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};

// One-bit-per-gene-value signature; disjoint signatures = no shared gene.
inline std::uint64_t signature(const Genes& g, int len) {
  std::uint64_t sig = 0;
  for (int i = 0; i < len; ++i)
    sig |= 1ULL << ((g[i] * 0x9e3779b97f4a7c15ULL) >> 58);
  return sig;
}

struct Indiv {
  Genes g{};
  double def = 0.0;
  std::uint64_t sig = 0;
  int rej = 0;  // 0 = feasible; else 1-based first infeasible segment
};

inline bool lex_less(const Genes& a, const Genes& b) { return a < b; }

struct EvalCtx {
  int n_orbits = 0, sats_per_orbit = 0;
  bool wrap = true;
  bool homogeneous = true;
  double inv_capacity = 0.0;    // homogeneous fast path
  std::int64_t max_workload = 0;
  const Constellation* con = nullptr;
  const std::int64_t* queued = nullptr;
  const std::int64_t* w = nullptr;  // segment workloads
  int nz = 0;                       // non-empty (leading) segments
  double t1 = 0, t2 = 0, t3 = 0;
};

inline int ctx_hops(const EvalCtx& cx, std::uint16_t a, std::uint16_t b) {
  int d1 = std::abs((a >> 8) - (b >> 8));
  int d2 = std::abs((a & 0xff) - (b & 0xff));
  if (cx.wrap) {
    d1 = std::min(d1, cx.n_orbits - d1);
    d2 = std::min(d2, cx.sats_per_orbit - d2);
  }
  return d1 + d2;
}

inline int ctx_flat(const EvalCtx& cx, std::uint16_t g) {
  return (g >> 8) * cx.sats_per_orbit + (g & 0xff);
}

// reject_idx (optional): 0 if the placement fits the snapshot, else the
// 1-based index of the first segment the walk rejects.
double eval_deficit(const Genes& g, const EvalCtx& cx,
                    int* reject_idx = nullptr) {
  double comp = 0.0, tran = 0.0;
  bool rejected = false;
  if (reject_idx) *reject_idx = 0;
  // workload already claimed on repeated genes during the feasibility walk
  std::uint16_t seen_sat[kMax];
  std::int64_t claimed[kMax];
  int nseen = 0;
  for (int k = 0; k < cx.nz; ++k) {
    const std::int64_t q = cx.w[k];
    const int flat = ctx_flat(cx, g[k]);
    if (cx.homogeneous) {
      comp += static_cast<double>(q) * cx.inv_capacity;
    } else {
      comp += static_cast<double>(q) / cx.con->capacity_of(flat);
    }
    if (k + 1 < cx.nz) tran += static_cast<double>(q) * ctx_hops(cx, g[k], g[k + 1]);
    if (!rejected) {
      std::int64_t mine = 0;
      int idx = -1;
      for (int t = 0; t < nseen; ++t) {
        if (seen_sat[t] == g[k]) {
          idx = t;
          mine = claimed[t];
          break;
        }
      }
      const std::int64_t bound =
          cx.homogeneous ? cx.max_workload : cx.con->max_workload_of(flat);
      if (q >= bound - cx.queued[flat] - mine) {
        rejected = true;  // first rejected segment decides; walk stops claiming
        if (reject_idx) *reject_idx = k + 1;
      } else if (idx >= 0) {
        claimed[idx] += q;
      } else {
        seen_sat[nseen] = g[k];
        claimed[nseen] = q;
        ++nseen;
      }
    }
  }
  return cx.t1 * comp + cx.t2 * tran + (rejected ? cx.t3 : 0.0);
}

EvalCtx make_ctx(const SegmentedBlock& block, const CapacityView& capacity,
                 double t1, double t2, double t3, const char* who) {
  const Constellation& con = *capacity.con;
  if (capacity.queued.size() != static_cast<std::size_t>(con.size()))
    throw std::invalid_argument(std::string(who) +
                                ": capacity snapshot does not cover the grid");
  if (con.n_orbits() > 256 || con.sats_per_orbit() > 256)
    throw std::invalid_argument(
        std::string(who) + ": grids beyond 256x256 are not supported here");
  EvalCtx cx;
  cx.n_orbits = con.n_orbits();
  cx.sats_per_orbit = con.sats_per_orbit();
  cx.wrap = con.wrap();
  cx.homogeneous = con.homogeneous();
  cx.inv_capacity = 1.0 / con.capacity();
  cx.max_workload = con.max_workload();
  cx.con = &con;
  cx.queued = capacity.queued.data();
  cx.w = block.segment_workloads.data();
  cx.t1 = t1;
  cx.t2 = t2;
  cx.t3 = t3;
  // Padding segments must be trailing; find the non-empty prefix.
  int nz = 0;
  const int len = block.segments();
  while (nz < len && block.segment_workloads[nz] > 0) ++nz;
  for (int k = nz; k < len; ++k)
    if (block.segment_workloads[k] != 0)
      throw std::invalid_argument(std::string(who) +
                                  ": empty segments must be trailing");
  cx.nz = nz;
  return cx;
}

// Children of the anchored splice at 0-based (i0 <= j0), a[i0] == b[j0].
inline void splice_children(const Genes& a, const Genes& b, int len, int i0,
                            int j0, Genes& c1, Genes& c2) {
  c1.fill(0);
  c2.fill(0);
  int n = 0;
  for (int t = 0; t <= j0; ++t) c1[n++] = b[t];
  for (int t = i0 + 1; t < i0 + len - j0; ++t) c1[n++] = a[t];
  n = 0;
  for (int t = j0 - i0; t <= j0 - 1; ++t) c2[n++] = b[t];
  for (int t = i0; t < len; ++t) c2[n++] = a[t];
}

struct Scratch {
  std::vector<Indiv> pop;
  std::vector<Indiv> merged;
  std::unordered_set<u128, KeyHash> seen;
};

}  // namespace

double deficit(const Chromosome& ch, const SegmentedBlock& block,
               const CapacityView& capacity, const GaParams& params) {
  if (!capacity.con) throw std::invalid_argument("deficit: missing grid");
  if (ch.genes.size() != static_cast<std::size_t>(block.segments()))
    throw std::invalid_argument(
        "deficit: gene count does not match segment count");
  if (block.segments() > kMax)
    throw std::invalid_argument("deficit: more segments than supported");
  Genes g{};
  for (std::size_t i = 0; i < ch.genes.size(); ++i) {
    if (!capacity.con->contains(ch.genes[i]))
      throw std::invalid_argument("deficit: gene outside the grid");
    g[i] = pack_sat(ch.genes[i]);
  }
  const EvalCtx cx =
      make_ctx(block, capacity, params.theta1, params.theta2, params.theta3,
               "deficit");
  return eval_deficit(g, cx);
}

std::vector<Chromosome> crossover(const Chromosome& a, const Chromosome& b) {
  if (a.genes.size() != b.genes.size())
    throw std::invalid_argument("crossover: parents differ in length");
  const int len = static_cast<int>(a.genes.size());
  if (len < 1 || len > kMax)
    throw std::invalid_argument("crossover: unsupported chromosome length");
  Genes pa{}, pb{};
  for (int i = 0; i < len; ++i) {
    pa[i] = pack_sat(a.genes[i]);
    pb[i] = pack_sat(b.genes[i]);
  }
  std::vector<Genes> out;
  std::unordered_set<u128, KeyHash> dedup;
  Genes c1, c2;
  for (int i0 = 0; i0 < len; ++i0) {
    for (int j0 = i0; j0 < len; ++j0) {
      if (pa[i0] != pb[j0]) continue;
      splice_children(pa, pb, len, i0, j0, c1, c2);
      if (dedup.insert(key_of(c1)).second) out.push_back(c1);
      if (dedup.insert(key_of(c2)).second) out.push_back(c2);
    }
  }
  std::vector<Chromosome> result;
  result.reserve(out.size());
  for (const auto& g : out) {
    Chromosome ch;
    ch.genes.reserve(len);
    for (int i = 0; i < len; ++i) ch.genes.push_back(unpack_sat(g[i]));
    result.push_back(std::move(ch));
  }
  return result;
}

Chromosome evolve(const SegmentedBlock& block, std::span<const SatId> avail,
                  const CapacityView& capacity, const GaParams& params,
                  Rng& rng) {
  validate(params);
  if (!capacity.con) throw std::invalid_argument("evolve: missing grid");
  if (avail.empty())
    throw std::invalid_argument("evolve: empty candidate satellite set");
  const int len = block.segments();
  if (len < 1 || len > kMax)
    throw std::invalid_argument("evolve: unsupported segment count");

  const EvalCtx cx = make_ctx(block, capacity, params.theta1, params.theta2,
                              params.theta3, "evolve");

  std::vector<std::uint16_t> pool;
  pool.reserve(avail.size());
  for (SatId s : avail) {
    if (!capacity.con->contains(s))
      throw std::invalid_argument("evolve: candidate satellite outside the grid");
    pool.push_back(pack_sat(s));
  }

  thread_local Scratch scratch;
  auto& pop = scratch.pop;
  auto& merged = scratch.merged;
  auto& seen = scratch.seen;
  pop.clear();
  seen.clear();

  // Global best: lowest deficit ever seen, with two refinements among exact
  // deficit ties. Infeasible ties prefer the placement whose first infeasible
  // segment comes earliest — if the task is going to drop anyway, dropping
  // before anything commits wastes the least queue space. Feasible ties
  // prefer the placement whose fullest destination queue ends up smallest
  // (under uniform capacity the compute term cannot separate placements, so
  // equally-cheap choices are frequent; water-filling them keeps the load
  // spread instead of piling onto whichever satellite was examined first).
  // Note a feasible tie fixes the hop sum — otherwise the deficits would
  // differ — so this choice never trades delay for balance. Remaining ties
  // keep the first one found.
  auto balance_key = [&](const Genes& g) -> std::int64_t {
    std::uint16_t sat[kMax];
    std::int64_t load[kMax];
    int n = 0;
    for (int k = 0; k < cx.nz; ++k) {
      int j = 0;
      while (j < n && sat[j] != g[k]) ++j;
      if (j == n) {
        sat[n] = g[k];
        load[n] = cx.queued[ctx_flat(cx, g[k])];
        ++n;
      }
      load[j] += cx.w[k];
    }
    std::int64_t worst = 0;
    for (int j = 0; j < n; ++j) worst = std::max(worst, load[j]);
    return worst;
  };
  Genes best_g{};
  double best_def = 0.0;
  int best_rej = 0;
  std::int64_t best_bal = -1;  // lazy cache of balance_key(best_g)
  bool have_best = false;
  auto consider = [&](const Indiv& ind) {
    if (!have_best || ind.def < best_def ||
        (ind.def == best_def && ind.rej < best_rej)) {
      have_best = true;
      best_def = ind.def;
      best_rej = ind.rej;
      best_g = ind.g;
      best_bal = -1;
      return;
    }
    if (ind.def == best_def && ind.rej == best_rej && best_rej == 0) {
      if (best_bal < 0) best_bal = balance_key(best_g);
      const std::int64_t bal = balance_key(ind.g);
      if (bal < best_bal) {
        best_g = ind.g;
        best_bal = bal;
      }
    }
  };

  auto draw = [&]() {
    Indiv ind;
    for (int k = 0; k < len; ++k)
      ind.g[k] = pool[rng.next_below(pool.size())];
    ind.def = eval_deficit(ind.g, cx, &ind.rej);
    ind.sig = signature(ind.g, len);
    return ind;
  };

  for (int i = 0; i < params.n_ini; ++i) {
    Indiv ind = draw();
    if (seen.insert(key_of(ind.g)).second) {
      pop.push_back(ind);
      consider(ind);
    }
  }

  const auto by_rank = [](const Indiv& x, const Indiv& y) {
    if (x.def != y.def) return x.def < y.def;
    return lex_less(x.g, y.g);
  };

  double prev_best = 0.0;
  for (int iter = 1; iter <= params.n_iter; ++iter) {
    double cur_best = pop.front().def;
    for (const auto& ind : pop) cur_best = std::min(cur_best, ind.def);
    if (iter > 1 && std::abs(cur_best - prev_best) <= params.epsilon) break;
    prev_best = cur_best;

    // Bound the pairing cost: trim to the survivor + newcomer budget first.
    const std::size_t cap =
        static_cast<std::size_t>(params.n_k) + static_cast<std::size_t>(params.n_summ);
    if (pop.size() > cap) {
      std::partial_sort(pop.begin(), pop.begin() + cap, pop.end(), by_rank);
      pop.resize(cap);
    }

    // Reproduction: every unordered pair of (distinct) population members.
    merged = pop;
    seen.clear();
    for (const auto& ind : pop) seen.insert(key_of(ind.g));
    Genes c1, c2;
    for (std::size_t p = 0; p + 1 < pop.size(); ++p) {
      for (std::size_t q = p + 1; q < pop.size(); ++q) {
        if ((pop[p].sig & pop[q].sig) == 0) continue;  // no shared gene
        const Genes& a = pop[p].g;
        const Genes& b = pop[q].g;
        for (int i0 = 0; i0 < len; ++i0) {
          for (int j0 = i0; j0 < len; ++j0) {
            if (a[i0] != b[j0]) continue;
            splice_children(a, b, len, i0, j0, c1, c2);
            for (const Genes* child : {&c1, &c2}) {
              if (!seen.insert(key_of(*child)).second) continue;
              Indiv ind;
              ind.g = *child;
              ind.def = eval_deficit(*child, cx, &ind.rej);
              ind.sig = signature(*child, len);
              merged.push_back(ind);
              consider(ind);
            }
          }
        }
      }
    }

    // Elimination: keep the n_k lowest deficits (ties by gene order).
    if (merged.size() > static_cast<std::size_t>(params.n_k)) {
      std::partial_sort(merged.begin(), merged.begin() + params.n_k,
                        merged.end(), by_rank);
      merged.resize(params.n_k);
    } else {
      std::sort(merged.begin(), merged.end(), by_rank);
    }
    pop = merged;

    // Augmentation: fresh random chromosomes.
    seen.clear();
    for (const auto& ind : pop) seen.insert(key_of(ind.g));
    for (int i = 0; i < params.n_summ; ++i) {
      Indiv ind = draw();
      if (seen.insert(key_of(ind.g)).second) {
        pop.push_back(ind);
        consider(ind);
      }
    }
  }

  Chromosome out;
  out.genes.reserve(len);
  for (int i = 0; i < len; ++i) out.genes.push_back(unpack_sat(best_g[i]));
  return out;
}

}  // namespace satcc
