#include "dsr/enumerator.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace dsr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative slack for pruning so that rounding in the bound never discards a
// plan that ties with the incumbent.
double prune_slack(double best) { return 1e-9 * std::max(1.0, std::abs(best)); }

struct Edge {
  std::size_t sw, parent, child;
};

// A forest together with an A/M choice per edge: the unit of parallel work.
struct Branch {
  std::vector<Edge> edges;
  std::vector<bool> automatic;      // per edge
  std::vector<std::size_t> order;   // cells, parents first
  std::vector<int> parent_edge;     // per cell, index into edges or -1
};

struct Best {
  bool found = false;
  double obj = kInf;
  std::string enc;
  ResolvedPlan rp;
};

void merge(Best& into, Best&& other) {
  if (!other.found) return;
  if (!into.found || other.obj < into.obj || (other.obj == into.obj && other.enc < into.enc)) into = std::move(other);
}

// Ordered split of `sites` among `k` crews, every permutation and every
// placement of the k-1 cut points.
void ordered_partitions(const std::vector<std::size_t>& sites, std::size_t k,
                        std::vector<std::vector<std::vector<std::size_t>>>& out) {
  std::vector<std::size_t> perm = sites;
  std::sort(perm.begin(), perm.end());
  const std::size_t n = perm.size();
  do {
    std::vector<std::size_t> cuts(k > 0 ? k - 1 : 0, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t from) {
      if (i == cuts.size()) {
        std::vector<std::vector<std::size_t>> split(k);
        std::size_t pos = 0;
        for (std::size_t c = 0; c < k; ++c) {
          std::size_t end = c + 1 < k ? cuts[c] : n;
          split[c].assign(perm.begin() + static_cast<long>(pos), perm.begin() + static_cast<long>(end));
          pos = end;
        }
        out.push_back(std::move(split));
        return;
      }
      for (std::size_t p = from; p <= n; ++p) {
        cuts[i] = p;
        rec(i + 1, p);
      }
    };
    if (k == 0) {
      if (n == 0) out.push_back({});
      return;
    }
    rec(0, 0);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

class Enumerator {
 public:
  Enumerator(const Instance& in, const EnumOptions& opt) : in_(in), opt_(opt) {}

  EnumResult run() {
    check_budget(in_, opt_.budget);
    build_branches();
    std::vector<Best> bests(branches_.size());
    std::atomic<std::size_t> evaluated{0}, pruned{0};
    const long nb = static_cast<long>(branches_.size());
    if (opt_.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
      for (long b = 0; b < nb; ++b) search(branches_[static_cast<std::size_t>(b)], bests[static_cast<std::size_t>(b)], evaluated, pruned);
    } else {
      for (long b = 0; b < nb; ++b) search(branches_[static_cast<std::size_t>(b)], bests[static_cast<std::size_t>(b)], evaluated, pruned);
    }
    Best best;
    for (auto& b : bests) merge(best, std::move(b));
    if (!best.found) throw std::runtime_error("no feasible plan exists for this instance");
    EnumResult r;
    r.resolved = best.rp;
    r.plan = to_plan(best.rp, in_);
    r.timeline = evaluate(best.rp, in_);
    r.report = objectives(best.rp, r.timeline, in_, opt_.objective);
    r.evaluated = evaluated;
    r.pruned = pruned;
    return r;
  }

 private:
  bool required(const SwitchInfo& sw) const { return sw.intact || (sw.faulted && sw.repair > 0); }

  // Candidate governing sites of a remote closing.
  std::vector<std::size_t> gov_candidates(std::size_t s) const {
    const SwitchInfo& sw = in_.switches[s];
    if (in_.n_ecvs() == 0) return {};
    if (!opt_.fixed_ca) return sw.gov_sites;
    std::vector<std::size_t> out;
    for (std::size_t k : sw.gov_sites)
      for (const auto& route : *opt_.fixed_ca)
        if (std::find(route.begin(), route.end(), k) != route.end()) out.push_back(k);
    std::sort(out.begin(), out.end());
    return out;
  }

  void build_branches() {
    const std::size_t nc = in_.n_cells(), ns = in_.switches.size();
    std::size_t nsrc = 0;
    for (const auto& c : in_.cells.cells) nsrc += c.is_source ? 1 : 0;
    if (nsrc == 0 || nsrc > nc) return;
    const std::size_t need = nc - nsrc;
    for (std::uint32_t mask = 0; mask < (1u << ns); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != need) continue;
      bool ok = true;
      for (std::size_t s = 0; s < ns && ok; ++s)
        if (required(in_.switches[s]) && !(mask & (1u << s))) ok = false;
      if (!ok) continue;
      // Union-find: acyclic and never joins two sources.
      std::vector<std::size_t> uf(nc);
      std::iota(uf.begin(), uf.end(), 0);
      std::vector<int> srcs(nc, 0);
      for (std::size_t c = 0; c < nc; ++c) srcs[c] = in_.cells.cells[c].is_source ? 1 : 0;
      std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
      for (std::size_t s = 0; s < ns && ok; ++s) {
        if (!(mask & (1u << s))) continue;
        std::size_t ra = find(in_.switches[s].a), rb = find(in_.switches[s].b);
        if (ra == rb || srcs[ra] + srcs[rb] > 1) ok = false;
        else {
          uf[ra] = rb;
          srcs[rb] += srcs[ra];
        }
      }
      if (!ok) continue;
      // Orient away from the sources.
      Branch br;
      br.parent_edge.assign(nc, -1);
      std::vector<bool> seen(nc, false);
      for (std::size_t c = 0; c < nc; ++c)
        if (in_.cells.cells[c].is_source) {
          seen[c] = true;
          br.order.push_back(c);
        }
      for (std::size_t head = 0; head < br.order.size(); ++head) {
        std::size_t cur = br.order[head];
        for (std::size_t s = 0; s < ns; ++s) {
          if (!(mask & (1u << s))) continue;
          const SwitchInfo& sw = in_.switches[s];
          if (sw.a != cur && sw.b != cur) continue;
          std::size_t nxt = sw.other(cur);
          if (seen[nxt]) continue;
          seen[nxt] = true;
          br.parent_edge[nxt] = static_cast<int>(br.edges.size());
          br.edges.push_back({s, cur, nxt});
          br.order.push_back(nxt);
        }
      }
      if (br.order.size() != nc) continue;
      // A/M kinds.
      const std::size_t ne = br.edges.size();
      std::vector<std::vector<bool>> kinds{{}};
      for (std::size_t e = 0; e < ne; ++e) {
        const SwitchInfo& sw = in_.switches[br.edges[e].sw];
        const bool can_a = sw.remote && (sw.intact || !gov_candidates(br.edges[e].sw).empty());
        const bool can_m = sw.site.has_value() && !sw.intact;
        std::vector<std::vector<bool>> next;
        for (const auto& k : kinds) {
          if (can_m) {
            next.push_back(k);
            next.back().push_back(false);
          }
          if (can_a) {
            next.push_back(k);
            next.back().push_back(true);
          }
        }
        kinds = std::move(next);
      }
      for (auto& k : kinds) {
        Branch b = br;
        b.automatic = std::move(k);
        branches_.push_back(std::move(b));
      }
    }
  }

  // Crew route sets for the given visit set, per depot cluster, with routes
  // of crews sharing a depot kept in non-decreasing canonical order.
  std::vector<std::vector<std::vector<std::size_t>>> crew_routes(const std::vector<std::size_t>& visit) const {
    const std::size_t nd = in_.crew_depots.size(), nk = in_.n_crews();
    std::vector<std::vector<std::vector<std::vector<std::size_t>>>> per_depot(nd);
    for (std::size_t d = 0; d < nd; ++d) {
      std::vector<std::size_t> sites, crews;
      for (std::size_t k : visit)
        if (in_.ra_sites[k].cluster == d) sites.push_back(k);
      for (std::size_t c = 0; c < nk; ++c)
        if (in_.crew_depot[c] == d) crews.push_back(c);
      if (crews.empty()) {
        if (!sites.empty()) return {};
        per_depot[d].push_back({});
        continue;
      }
      std::vector<std::vector<std::vector<std::size_t>>> splits;
      ordered_partitions(sites, crews.size(), splits);
      for (auto& split : splits) {
        bool canonical = true;
        for (std::size_t i = 1; i < split.size() && canonical; ++i)
          if (route_key(split[i]) < route_key(split[i - 1])) canonical = false;
        if (canonical) per_depot[d].push_back(std::move(split));
      }
    }
    std::vector<std::vector<std::vector<std::size_t>>> out;
    std::vector<std::size_t> pick(nd, 0);
    for (;;) {
      std::vector<std::vector<std::size_t>> routes(nk);
      for (std::size_t d = 0; d < nd; ++d) {
        const auto& split = per_depot[d][pick[d]];
        std::size_t i = 0;
        for (std::size_t c = 0; c < nk; ++c)
          if (in_.crew_depot[c] == d) routes[c] = split[i++];
      }
      out.push_back(std::move(routes));
      std::size_t d = 0;
      while (d < nd && ++pick[d] == per_depot[d].size()) pick[d++] = 0;
      if (d == nd) break;
    }
    return out;
  }

  std::string route_key(const std::vector<std::size_t>& r) const {
    nlohmann::json ids = nlohmann::json::array();
    for (std::size_t k : r) ids.push_back(in_.ra_sites[k].id);
    return ids.dump();
  }

  // ECV route candidates that visit every site of `used`.
  std::vector<std::vector<std::vector<std::size_t>>> ecv_routes(const std::vector<std::size_t>& used) const {
    if (opt_.fixed_ca) return {*opt_.fixed_ca};
    const std::size_t nv = in_.n_ecvs();
    if (nv == 0) return {std::vector<std::vector<std::size_t>>{}};
    std::vector<std::vector<std::vector<std::size_t>>> out;
    std::vector<std::size_t> pool = used;
    if (!in_.ca_travel_metric()) {
      // Detours through unused sites can only pay off without the triangle
      // inequality.
      for (std::size_t k = 0; k < in_.ca_sites.size(); ++k)
        if (std::find(used.begin(), used.end(), k) == used.end()) pool.push_back(k);
    }
    std::sort(pool.begin(), pool.end());
    const std::size_t extra = pool.size() - used.size();
    std::vector<std::size_t> extras;
    for (std::size_t k : pool)
      if (std::find(used.begin(), used.end(), k) == used.end()) extras.push_back(k);
    for (std::uint32_t m = 0; m < (1u << extra); ++m) {
      std::vector<std::size_t> set = used;
      for (std::size_t i = 0; i < extra; ++i)
        if (m & (1u << i)) set.push_back(extras[i]);
      std::sort(set.begin(), set.end());
      do {
        std::vector<std::vector<std::size_t>> routes(nv);
        routes[0] = set;  // budget keeps a single ECV
        out.push_back(std::move(routes));
      } while (std::next_permutation(set.begin(), set.end()));
    }
    return out;
  }

  double lower_bound(const Branch& br, const std::vector<std::vector<std::size_t>>& ra) const {
    const Scenario& sc = *in_.scenario;
    const WeightSet& w = sc.weights;
    std::vector<double> tR(in_.ra_sites.size(), in_.tmax);
    double travel = 0, work = 0, literal = 0;
    for (std::size_t c = 0; c < ra.size(); ++c) {
      std::size_t loc = in_.crew_depot[c];
      double t = in_.t0;
      for (std::size_t k : ra[c]) {
        std::size_t next = in_.ra_site_loc(k);
        const double leg = in_.ra_leg(loc, next);
        t += leg;
        tR[k] = t;
        if (t > in_.tmax + 1e-9) return kInf;
        travel += leg;
        work += in_.ra_sites[k].dwell;
        literal += t + in_.ra_sites[k].manual_op;
        t += in_.ra_sites[k].dwell;
        loc = next;
      }
    }
    double lb = 0;
    if (in_.n_crews() > 0)
      lb += w.beta_ra * (w.omega_ra1 * travel + w.omega_ra2 * (opt_.objective.ra_literal ? literal : work)) /
            (static_cast<double>(in_.n_crews()) * in_.tmax);

    const std::size_t nc = in_.n_cells();
    std::vector<double> t(nc, in_.t0);
    for (std::size_t c = 0; c < nc; ++c)
      if (in_.cells.cells[c].is_source) t[c] = std::max(t[c], in_.cells.cells[c].available_at);
    for (const auto& f : in_.faults) t[f.cell] = std::max(t[f.cell], tR[f.site] + f.repair);
    for (const auto& sw : in_.switches)
      if (sw.faulted && sw.site) {
        t[sw.a] = std::max(t[sw.a], tR[*sw.site] + sw.repair);
        t[sw.b] = std::max(t[sw.b], tR[*sw.site] + sw.repair);
      }
    for (std::size_t e = 0; e < br.edges.size(); ++e) {
      const SwitchInfo& sw = in_.switches[br.edges[e].sw];
      double done = br.automatic[e] ? in_.t0 + sw.auto_op : tR[*sw.site] + sw.dwell();
      t[br.edges[e].child] = std::max(t[br.edges[e].child], done);
    }
    for (std::size_t c : br.order)
      if (br.parent_edge[c] >= 0) t[c] = std::max(t[c], t[br.edges[static_cast<std::size_t>(br.parent_edge[c])].parent]);
    for (double x : t)
      if (x > in_.tmax + 1e-9) return kInf;
    if (in_.load_weight_total > 0) {
      double weighted = 0;
      for (std::size_t c : in_.load_cells) weighted += in_.cells.cells[c].weight * t[c];
      lb += w.beta_ea * weighted / (in_.load_weight_total * in_.tmax);
    }

    if (in_.variant == Variant::WCA && in_.n_ecvs() > 0) {
      double ca = 0;
      if (opt_.fixed_ca) {
        for (std::size_t v = 0; v < opt_.fixed_ca->size(); ++v) {
          std::size_t loc = in_.ecv_depot[v];
          for (std::size_t k : (*opt_.fixed_ca)[v]) {
            ca += w.omega_ca1 * in_.ca_leg(loc, in_.ca_site_loc(k)) + w.omega_ca2 * in_.ca_min_stay[k];
            loc = in_.ca_site_loc(k);
          }
        }
      } else {
        double best = kInf;
        bool any = false;
        for (std::size_t e = 0; e < br.edges.size(); ++e) {
          const SwitchInfo& sw = in_.switches[br.edges[e].sw];
          if (!br.automatic[e] || sw.intact) continue;
          any = true;
          for (std::size_t k : gov_candidates(br.edges[e].sw))
            for (std::size_t v = 0; v < in_.n_ecvs(); ++v)
              best = std::min(best, w.omega_ca1 * in_.ca_leg(in_.ecv_depot[v], in_.ca_site_loc(k)) +
                                        w.omega_ca2 * in_.ca_min_stay[k]);
        }
        if (any) ca = best;
      }
      lb += w.beta_ca * ca / (static_cast<double>(in_.n_ecvs()) * in_.tmax);
    }
    return lb;
  }

  void offer(Best& best, std::atomic<double>& shared, double obj, const ResolvedPlan& rp) const {
    if (best.found && obj > best.obj) return;
    std::string enc = plan_encoding(to_plan(rp, in_));
    if (!best.found || obj < best.obj || enc < best.enc) {
      best.found = true;
      best.obj = obj;
      best.enc = std::move(enc);
      best.rp = rp;
    }
    double cur = shared.load();
    while (obj < cur && !shared.compare_exchange_weak(cur, obj)) {
    }
  }

  void search(const Branch& br, Best& best, std::atomic<std::size_t>& evaluated, std::atomic<std::size_t>& pruned) {
    const std::size_t ne = br.edges.size();
    ResolvedPlan rp;
    rp.ops.assign(in_.switches.size(), SwitchOp{});
    std::vector<std::size_t> remote_edges;  // edges that need governance
    std::vector<std::size_t> visit;
    for (std::size_t e = 0; e < ne; ++e) {
      const Edge& ed = br.edges[e];
      SwitchOp& op = rp.ops[ed.sw];
      op.used = true;
      op.parent = ed.parent;
      op.child = ed.child;
      op.automatic = br.automatic[e];
      const SwitchInfo& sw = in_.switches[ed.sw];
      if (op.automatic && !sw.intact) remote_edges.push_back(e);
      if (!op.automatic) visit.push_back(*sw.site);
    }
    std::vector<std::size_t> optional_faults;
    for (const auto& f : in_.faults) {
      if (f.repair > 0) visit.push_back(f.site);
      else optional_faults.push_back(f.site);
    }
    std::vector<std::vector<std::size_t>> gov(remote_edges.size());
    for (std::size_t i = 0; i < remote_edges.size(); ++i) gov[i] = gov_candidates(br.edges[remote_edges[i]].sw);

    for (std::uint32_t fm = 0; fm < (1u << optional_faults.size()); ++fm) {
      std::vector<std::size_t> v = visit;
      for (std::size_t i = 0; i < optional_faults.size(); ++i)
        if (fm & (1u << i)) v.push_back(optional_faults[i]);
      for (auto& ra : crew_routes(v)) {
        const double lb = lower_bound(br, ra);
        const double inc = shared_best_.load();
        if (lb == kInf || lb > inc + prune_slack(inc)) {
          ++pruned;
          continue;
        }
        rp.ra = ra;
        // Governance choices, then ECV routes through the chosen sites.
        std::vector<std::size_t> pick(gov.size(), 0);
        for (;;) {
          std::vector<std::size_t> used;
          for (std::size_t i = 0; i < gov.size(); ++i) {
            std::size_t k = gov[i][pick[i]];
            rp.ops[br.edges[remote_edges[i]].sw].gov = k;
            if (std::find(used.begin(), used.end(), k) == used.end()) used.push_back(k);
          }
          for (auto& ca : ecv_routes(used)) {
            rp.ca = ca;
            for (std::uint32_t mm = 0; mm < (1u << ne); ++mm) {
              for (std::size_t e = 0; e < ne; ++e) rp.ops[br.edges[e].sw].energized = (mm >> e) & 1u;
              Timeline tl = evaluate(rp, in_);
              ++evaluated;
              if (!tl.feasible) continue;
              const double obj = objectives(rp, tl, in_, opt_.objective).obj_sum;
              offer(best, shared_best_, obj, rp);
            }
          }
          std::size_t i = 0;
          while (i < gov.size() && ++pick[i] == gov[i].size()) pick[i++] = 0;
          if (i == gov.size()) break;
        }
      }
    }
  }

  const Instance& in_;
  const EnumOptions& opt_;
  std::vector<Branch> branches_;
  std::atomic<double> shared_best_{kInf};
};

}  // namespace

void check_budget(const Instance& in, const EnumBudget& b) {
  std::size_t faults = in.faults.size();
  for (const auto& sw : in.switches) faults += sw.line_faulted ? 1 : 0;
  auto over = [](const char* what, std::size_t have, std::size_t cap) {
    if (have > cap)
      throw BudgetExceeded(std::string("instance exceeds the enumeration budget: ") + std::to_string(have) + " " + what +
                           " (limit " + std::to_string(cap) + ")");
  };
  over("crews", in.n_crews(), b.crews);
  over("ECVs", in.n_ecvs(), b.ecvs);
  over("cells", in.n_cells(), b.cells);
  over("switches", in.switches.size(), b.switches);
  over("faulted lines", faults, b.faults);
  if (in.switches.size() > 31) throw BudgetExceeded("too many switches to enumerate");
}

EnumResult enumerate_optimal(const Instance& inst, const EnumOptions& opt) {
  Enumerator e(inst, opt);
  return e.run();
}

}  // namespace dsr
