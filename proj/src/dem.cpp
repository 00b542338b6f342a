#include "qsurge/dem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>

#include <json.hpp>

#include "qsurge/tableau.hpp"

namespace qsurge {

namespace {

double or_combine(double a, double b) { return a * (1 - b) + b * (1 - a); }

std::string site_label(const NoiseSite& s, uint8_t code) {
  std::string out = s.op == Op::Depolarize2   ? "DEPOLARIZE2"
                    : s.op == Op::Depolarize1 ? "DEPOLARIZE1"
                    : s.op == Op::XError      ? "X_ERROR"
                    : s.op == Op::ZError      ? "Z_ERROR"
                                              : "Y_ERROR";
  out += " on " + std::to_string(s.q0);
  if (s.op == Op::Depolarize2) out += "," + std::to_string(s.q1);
  out += " (instruction " + std::to_string(s.instruction) + ", pauli " + std::to_string(code) + ")";
  return out;
}

}  // namespace

void verify_deterministic_readout(const Circuit& c) {
  SymbolicTableau t(c.num_qubits());
  t.run(c);
  uint32_t det = 0;
  std::map<uint32_t, BitExpr> obs;
  for (const Instruction& ins : c.instructions) {
    if (ins.op == Op::Detector) {
      BitExpr e;
      for (uint32_t r : ins.targets) e.xor_with(t.record(r));
      if (!e.is_constant() || e.constant)
        throw std::runtime_error("detector " + std::to_string(det) +
                                 " is not a deterministic zero in the noiseless circuit");
      ++det;
    } else if (ins.op == Op::ObservableInclude) {
      for (uint32_t r : ins.targets)
        obs[static_cast<uint32_t>(ins.args.at(0))].xor_with(t.record(r));
    }
  }
  for (const auto& [k, e] : obs)
    if (!e.is_constant() || e.constant)
      throw std::runtime_error("observable " + std::to_string(k) +
                               " is not a deterministic zero in the noiseless circuit");
}

DetectorErrorModel extract_dem(const Circuit& c, int threads, bool verify_determinism) {
  if (verify_determinism) verify_deterministic_readout(c);
  const FrameSampler fs(c);

  DetectorErrorModel dem;
  dem.detectors.reserve(fs.n_detectors());
  for (uint32_t i = 0; i < fs.n_detectors(); ++i) {
    const auto& a = fs.detector_coords(i);
    dem.detectors.push_back(
        {a.size() > 0 ? a[0] : 0, a.size() > 1 ? a[1] : 0, a.size() > 2 ? a[2] : 0,
         a.size() > 3 ? a[3] : 0});
  }

  const std::vector<FaultSymptom> syms = fs.all_symptoms(threads);
  std::map<std::pair<std::vector<uint32_t>, uint64_t>, size_t> merged;
  std::vector<FaultMechanism> mechs;
  size_t f = 0;
  for (uint32_t s = 0; s < fs.n_sites(); ++s) {
    const NoiseSite& site = fs.site(s);
    const int n = site.n_codes();
    const double pc = site.p / n;
    for (int k = 1; k <= n; ++k) {
      const FaultSymptom& sym = syms[f++];
      const uint8_t used =
          site.op == Op::XError ? 1 : site.op == Op::ZError ? 2 : site.op == Op::YError ? 3
                                                                : static_cast<uint8_t>(k);
      if (sym.detectors.empty() && sym.observables)
        throw std::runtime_error("distance-zero fault: " + site_label(site, used) +
                                 " flips an observable but no detector");
      auto [it, fresh] = merged.try_emplace({sym.detectors, sym.observables}, mechs.size());
      if (fresh) {
        mechs.push_back({pc, sym.detectors, sym.observables, {{s, used}}});
      } else {
        FaultMechanism& m = mechs[it->second];
        m.p = or_combine(m.p, pc);
        m.sources.emplace_back(s, used);
      }
    }
  }
  dem.mechanisms.reserve(mechs.size());
  for (const auto& [key, idx] : merged) dem.mechanisms.push_back(std::move(mechs[idx]));
  return dem;
}

void DetectorErrorModel::to_json(std::ostream& os) const {
  nlohmann::json j;
  j["detectors"] = nlohmann::json::array();
  for (const DemDetector& d : detectors) j["detectors"].push_back({d.x, d.y, d.t, d.sector});
  j["mechanisms"] = nlohmann::json::array();
  for (const FaultMechanism& m : mechanisms) {
    nlohmann::json e;
    e["p"] = m.p;
    e["detectors"] = m.detectors;
    std::vector<uint32_t> ob;
    for (uint32_t k = 0; k < 64; ++k)
      if ((m.observables >> k) & 1) ob.push_back(k);
    e["observables"] = ob;
    e["sources"] = nlohmann::json::array();
    for (const auto& [site, code] : m.sources) e["sources"].push_back({site, code});
    j["mechanisms"].push_back(std::move(e));
  }
  os << j.dump();
}

// ---- matching graphs ------------------------------------------------------

std::vector<uint32_t> MatchingGraph::degrees() const {
  std::vector<uint32_t> deg(det_ids.size(), 0);
  for (const GraphEdge& e : edges) {
    deg[e.u]++;
    if (e.v != kBoundary) deg[e.v]++;
  }
  return deg;
}

void MatchingGraph::to_edge_list(std::ostream& os) const {
  os.precision(17);
  os << "g " << (sector == Sector::Primal ? "primal" : "dual") << ' ' << det_ids.size() << ' '
     << edges.size() << '\n';
  for (size_t i = 0; i < det_ids.size(); ++i)
    os << "v " << i << ' ' << coords[i].x << ' ' << coords[i].y << ' ' << coords[i].t << ' '
       << coords[i].sector << '\n';
  for (const GraphEdge& e : edges) {
    os << "e " << e.u << ' ';
    if (e.v == kBoundary)
      os << -1;
    else
      os << e.v;
    os << ' ' << e.p << ' ' << e.weight << ' ' << e.obs << '\n';
  }
}

namespace {

using EdgeKey = std::tuple<uint32_t, uint32_t, uint64_t>;  // (u, v|kBoundary, obs)

struct SectorBuild {
  MatchingGraph* g;
  std::map<EdgeKey, size_t> index;

  void add(uint32_t u, uint32_t v, uint64_t obs, double p) {
    if (v != MatchingGraph::kBoundary && v < u) std::swap(u, v);
    auto [it, fresh] = index.try_emplace({u, v, obs}, g->edges.size());
    if (fresh)
      g->edges.push_back({u, v, p, 0, obs});
    else
      g->edges[it->second].p = or_combine(g->edges[it->second].p, p);
  }

  // Exact-cover search over already-present edges for a >2-detector part.
  bool cover(std::vector<uint32_t> need, uint64_t need_obs, std::vector<size_t>& picked) {
    if (need.empty()) return need_obs == 0;
    const uint32_t a = need.front();
    const auto options = [&](uint32_t b) {
      std::vector<size_t> out;
      for (auto it = index.lower_bound({a, b, 0}); it != index.end(); ++it) {
        const auto& [u, v, o] = it->first;
        if (u != a || v != b) break;
        out.push_back(it->second);
      }
      return out;
    };
    for (size_t i = 1; i < need.size(); ++i) {
      for (size_t ei : options(need[i])) {
        std::vector<uint32_t> rest;
        for (size_t j = 1; j < need.size(); ++j)
          if (j != i) rest.push_back(need[j]);
        picked.push_back(ei);
        if (cover(std::move(rest), need_obs ^ g->edges[ei].obs, picked)) return true;
        picked.pop_back();
      }
    }
    for (size_t ei : options(MatchingGraph::kBoundary)) {
      picked.push_back(ei);
      if (cover({need.begin() + 1, need.end()}, need_obs ^ g->edges[ei].obs, picked)) return true;
      picked.pop_back();
    }
    return false;
  }
};

}  // namespace

SplitGraphs split_graphlike(const DetectorErrorModel& dem) {
  SplitGraphs out;
  out.primal.sector = Sector::Primal;
  out.dual.sector = Sector::Dual;

  std::vector<uint32_t> local(dem.detectors.size());
  std::vector<uint8_t> side(dem.detectors.size());
  for (size_t i = 0; i < dem.detectors.size(); ++i) {
    MatchingGraph& g = dem.detectors[i].sector == 0 ? out.primal : out.dual;
    side[i] = dem.detectors[i].sector == 0 ? 0 : 1;
    local[i] = static_cast<uint32_t>(g.det_ids.size());
    g.det_ids.push_back(static_cast<uint32_t>(i));
    g.coords.push_back(dem.detectors[i]);
  }

  // Which observables belong to which sector: learned from the mechanisms
  // whose detectors sit in a single sector.
  uint64_t primal_obs = 0, dual_obs = 0;
  for (const FaultMechanism& m : dem.mechanisms) {
    if (!m.observables || m.detectors.empty()) continue;
    bool has_p = false, has_d = false;
    for (uint32_t d : m.detectors) (side[d] ? has_d : has_p) = true;
    if (has_p && !has_d) primal_obs |= m.observables;
    if (has_d && !has_p) dual_obs |= m.observables;
  }
  if (primal_obs & dual_obs)
    throw std::runtime_error("an observable is flipped from both sectors; graphs undefined");

  struct Part {
    const FaultMechanism* m;
    uint8_t sec;
    std::vector<uint32_t> dets;  // local ids
    uint64_t obs;
  };
  std::vector<Part> deferred;

  SectorBuild build[2] = {{&out.primal, {}}, {&out.dual, {}}};
  for (const FaultMechanism& m : dem.mechanisms) {
    if (m.p <= 0) continue;
    if (m.detectors.empty()) continue;  // undetectable, flips nothing
    std::vector<uint32_t> dets[2];
    for (uint32_t d : m.detectors) dets[side[d]].push_back(local[d]);
    const uint64_t obs[2] = {m.observables & primal_obs, m.observables & dual_obs};
    if (m.observables & ~(primal_obs | dual_obs)) {
      out.suppressed.push_back(m);  // unattributable observable flip
      continue;
    }
    for (int s = 0; s < 2; ++s) {
      if (dets[s].empty() && obs[s])
        throw std::runtime_error("distance-zero mechanism: observable flip with no " +
                                 std::string(s ? "dual" : "primal") + "-sector detectors");
      if (dets[s].empty()) continue;
      if (dets[s].size() == 1)
        build[s].add(dets[s][0], MatchingGraph::kBoundary, obs[s], m.p);
      else if (dets[s].size() == 2)
        build[s].add(dets[s][0], dets[s][1], obs[s], m.p);
      else
        deferred.push_back({&m, static_cast<uint8_t>(s), dets[s], obs[s]});
    }
  }

  for (Part& part : deferred) {
    std::vector<size_t> picked;
    std::sort(part.dets.begin(), part.dets.end());
    if (build[part.sec].cover(part.dets, part.obs, picked)) {
      for (size_t ei : picked) {
        GraphEdge& e = build[part.sec].g->edges[ei];
        e.p = or_combine(e.p, part.m->p);
      }
    } else {
      out.suppressed.push_back(*part.m);
    }
  }

  for (MatchingGraph* g : {&out.primal, &out.dual})
    for (GraphEdge& e : g->edges) e.weight = -std::log(e.p / (1 - e.p));
  return out;
}

bool graph_symmetry_check(const MatchingGraph& g, double interface_x) {
  // Vertices are identified by coordinates rather than ids: the two facing
  // weight-2 checks share a plaquette center, so one coordinate can legally
  // hold two detectors and the reflection has to be compared as a multiset of
  // coordinate-keyed edges. Edges with an endpoint whose reflection falls
  // outside the vertex set are out of scope (vacuously symmetric).
  using VK = std::tuple<long long, long long, long long, long long>;
  const auto vkey = [](double x, double y, double t, double s) {
    return VK{std::llround(2 * x), std::llround(2 * y), std::llround(2 * t), std::llround(s)};
  };
  std::set<VK> verts;
  for (const DemDetector& c : g.coords) verts.insert(vkey(c.x, c.y, c.t, c.sector));

  const VK bound{std::numeric_limits<long long>::min(), 0, 0, 0};
  using EK = std::tuple<VK, VK, uint64_t>;
  const auto ekey = [](VK a, VK b, uint64_t obs) {
    if (b < a) std::swap(a, b);
    return EK{a, b, obs};
  };
  std::map<EK, std::vector<double>> orig, refl;
  for (const GraphEdge& e : g.edges) {
    const DemDetector& u = g.coords[e.u];
    const VK ku = vkey(u.x, u.y, u.t, u.sector);
    const VK rku = vkey(2 * interface_x - u.x, u.y, u.t, u.sector);
    if (!verts.count(rku)) continue;
    VK kv = bound, rkv = bound;
    if (e.v != MatchingGraph::kBoundary) {
      const DemDetector& v = g.coords[e.v];
      kv = vkey(v.x, v.y, v.t, v.sector);
      rkv = vkey(2 * interface_x - v.x, v.y, v.t, v.sector);
      if (!verts.count(rkv)) continue;
    }
    orig[ekey(ku, kv, e.obs)].push_back(e.p);
    refl[ekey(rku, rkv, e.obs)].push_back(e.p);
  }
  if (orig.size() != refl.size()) return false;
  for (auto io = orig.begin(), ir = refl.begin(); io != orig.end(); ++io, ++ir) {
    if (io->first != ir->first || io->second.size() != ir->second.size()) return false;
    std::sort(io->second.begin(), io->second.end());
    std::sort(ir->second.begin(), ir->second.end());
    for (size_t i = 0; i < io->second.size(); ++i)
      if (std::abs(io->second[i] - ir->second[i]) > 1e-9 * (std::abs(io->second[i]) + 1e-300))
        return false;
  }
  return true;
}

DiagonalPattern diagonal_pattern(const MatchingGraph& g) {
  std::map<long long, int> layer;  // llround(2 * min t) -> orientation
  bool any = false;
  for (const GraphEdge& e : g.edges) {
    if (e.v == MatchingGraph::kBoundary) continue;
    const DemDetector &a = g.coords[e.u], &b = g.coords[e.v];
    const double dy = b.y - a.y, dt = b.t - a.t;
    if (std::abs(dy) < 1e-9 || std::abs(dt) < 1e-9) continue;
    any = true;
    const int sign = dy * dt > 0 ? 1 : -1;
    const long long k = std::llround(2 * std::min(a.t, b.t));
    const auto it = layer.find(k);
    if (it == layer.end())
      layer[k] = sign;
    else if (it->second != sign)
      return DiagonalPattern::Mixed;
  }
  if (!any) return DiagonalPattern::None;
  bool parallel = true, zigzag = true;
  const auto& [k0, s0] = *layer.begin();
  for (const auto& [k, s] : layer) {
    if (s != s0) parallel = false;
    const bool flip = ((k - k0) / 2) & 1;
    if (s != (flip ? -s0 : s0)) zigzag = false;
  }
  if (parallel) return DiagonalPattern::Parallel;
  return zigzag ? DiagonalPattern::ZigZag : DiagonalPattern::Mixed;
}

}  // namespace qsurge
