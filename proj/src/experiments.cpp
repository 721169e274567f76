#include "spherecx/experiments.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "spherecx/arc_oracle.hpp"
#include "spherecx/enumerate.hpp"
#include "spherecx/error.hpp"
#include "spherecx/projection.hpp"
#include "spherecx/complement.hpp"

namespace spherecx {

// ---- config

const std::vector<std::string>& acceptance_checks() {
  static const std::vector<std::string> names{
      "strict_decrease",  "descendant_monotonicity", "step_distance", "coarse_retraction",
      "diameter_bound",   "complexity_monotonicity", "combing",       "contraction",
      "masur_minsky",     "projection_exactness",    "arc_double",    "structural_constants"};
  return names;
}

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig c;
  c.checks = acceptance_checks();
  return c;
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

template <class T>
T get(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string(key) + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) invalid("config must be an object");
  static const std::set<std::string> known{"n",      "corpus_ranks", "scaffold", "weight",
                                           "corpus_weight", "exact_weight", "instances",
                                           "seed",   "policy",       "checks",   "out", "C1"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) invalid("unknown key " + it.key());
  auto c = defaults();
  if (j.contains("n")) c.n = get<int>(j, "n");
  if (j.contains("corpus_ranks")) c.corpus_ranks = get<std::vector<int>>(j, "corpus_ranks");
  if (j.contains("scaffold")) c.scaffold = get<std::string>(j, "scaffold");
  if (j.contains("weight")) c.weight = get<int>(j, "weight");
  if (j.contains("corpus_weight")) c.corpus_weight = get<int>(j, "corpus_weight");
  if (j.contains("exact_weight")) c.exact_weight = get<int>(j, "exact_weight");
  if (j.contains("instances")) c.instances = get<int>(j, "instances");
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("policy")) c.policy = get<std::string>(j, "policy");
  if (j.contains("checks")) c.checks = get<std::vector<std::string>>(j, "checks");
  if (j.contains("out")) c.out = get<std::string>(j, "out");
  if (j.contains("C1") && !j["C1"].is_null()) c.C1 = get<long>(j, "C1");

  if (c.n < 2 || c.n > 4) invalid("n must be 2..4");
  for (int r : c.corpus_ranks)
    if (r < 2 || r > 4) invalid("corpus ranks must be 2..4");
  for (int w : {c.weight, c.corpus_weight, c.exact_weight})
    if (w < 0 || w > 8) invalid("weights must be 0..8");
  if (c.instances < 0) invalid("instances must be >= 0");
  if (c.policy != "lex" && c.policy != "seeded" && c.policy != "min-result")
    invalid("policy must be lex, seeded or min-result");
  for (const auto& name : c.checks)
    if (std::find(acceptance_checks().begin(), acceptance_checks().end(), name) ==
        acceptance_checks().end())
      invalid("unknown check " + name);
  if (c.C1 && *c.C1 < 0) invalid("C1 must be >= 0");
  select_scaffolds(c.n, c.scaffold);  // validates the selector
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j{{"n", n},           {"corpus_ranks", corpus_ranks},
                   {"scaffold", scaffold}, {"weight", weight},
                   {"corpus_weight", corpus_weight}, {"exact_weight", exact_weight},
                   {"instances", instances}, {"seed", seed},
                   {"policy", policy},  {"checks", checks},
                   {"out", out}};
  j["C1"] = C1 ? nlohmann::json(*C1) : nlohmann::json(nullptr);
  return j;
}

std::vector<ScaffoldPtr> select_scaffolds(int n, const std::string& selector) {
  auto wrap = [](Scaffold s) { return std::make_shared<const Scaffold>(std::move(s)); };
  if (selector == "theta" || selector == "dumbbell") {
    if (n != 2) invalid(selector + " is a rank 2 scaffold");
    return {wrap(selector == "theta" ? theta_scaffold() : dumbbell_scaffold())};
  }
  if (selector == "all" && n == 2) return {wrap(theta_scaffold()), wrap(dumbbell_scaffold())};
  auto all = enumerate_scaffolds(n);
  if (selector == "all") {
    std::vector<ScaffoldPtr> out;
    for (auto& s : all) out.push_back(wrap(std::move(s)));
    return out;
  }
  int idx = -1;
  try {
    size_t used = 0;
    idx = std::stoi(selector, &used);
    if (used != selector.size()) idx = -1;
  } catch (const std::exception&) {
  }
  if (idx < 0 || idx >= static_cast<int>(all.size())) invalid("unknown scaffold " + selector);
  return {wrap(all[idx])};
}

Policy make_policy(const std::string& name, std::mt19937_64& rng) {
  if (name == "lex") return Policy::lex();
  if (name == "min-result") return Policy::min_result();
  return Policy::seeded(rng());
}

std::set<int> random_target(const Scaffold& sc, std::mt19937_64& rng) {
  int m = sc.sphere_count();
  std::uint64_t mask = std::uniform_int_distribution<std::uint64_t>(1, (1ull << m) - 1)(rng);
  std::set<int> t;
  for (int e = 0; e < m; ++e)
    if (mask >> e & 1) t.insert(e);
  return t;
}

// ---- instances

namespace {

const Surface* preset_for(const ScaffoldPtr& sc) {
  for (auto gs : {std::pair{0, 3}, std::pair{1, 1}, std::pair{0, 4}, std::pair{1, 2}}) {
    const auto& S = surface_preset(gs.first, gs.second);
    if (S.scaffold == sc) return &S;
  }
  return nullptr;
}

}  // namespace

std::vector<Instance> generate_instances(const ScaffoldPtr& sc, int W, int closure_count,
                                         std::mt19937_64& rng) {
  std::vector<Instance> out;
  std::set<std::string> seen;
  auto add = [&](const char* src, const NormalSystem& s) {
    if (seen.insert(s.signature()).second) out.push_back({src, s});
  };
  for (const auto& s : enumerate_systems(sc, W)) add("enumeration", s);
  if (const Surface* S = preset_for(sc))
    for (int i = 0; i < closure_count; ++i) {
      auto a = random_arc_system(*S, rng, 4, 1 + i % S->arcs());
      if (!a.arcs.empty()) add("arcs", double_to_spheres(a));
    }
  size_t base = out.size();
  for (int i = 0; i < closure_count && base > 0; ++i) {
    auto start = out[rng() % base].system;
    auto target = random_target(*sc, rng);
    auto e = initial_entry(start);
    int steps = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < steps; ++k) {
      auto next = all_single_steps(e, target);
      if (next.empty()) break;
      e = next[rng() % next.size()];
      add("closure", e.system);
    }
  }
  return out;
}


// ---- corpus

namespace {

struct ScaffoldCorpus {
  int rank = 0;
  ScaffoldPtr sc;
  std::vector<Instance> instances;
  std::vector<SurgeryPath> paths;
};

struct Corpus {
  std::vector<ScaffoldCorpus> parts;
  int steps() const {
    int n = 0;
    for (const auto& p : parts)
      for (const auto& g : p.paths)
        for (const auto& e : g.entries) n += e.step && !e.wait && !e.terminal;
    return n;
  }
};

std::vector<ScaffoldPtr> preset_scaffolds(int rank) {
  std::vector<ScaffoldPtr> out;
  for (auto gs : {std::pair{0, 3}, std::pair{1, 1}, std::pair{0, 4}, std::pair{1, 2}}) {
    const auto& S = surface_preset(gs.first, gs.second);
    if (S.scaffold->rank() == rank) out.push_back(S.scaffold);
  }
  return out;
}

Corpus build_corpus(const ExperimentConfig& cfg, std::mt19937_64& rng) {
  Corpus c;
  for (int r : cfg.corpus_ranks) {
    auto scs = select_scaffolds(r, r == cfg.n ? cfg.scaffold : "all");
    for (auto& p : preset_scaffolds(r)) scs.push_back(p);
    int W = r == cfg.n ? cfg.weight : cfg.corpus_weight;
    int per = std::max(1, cfg.instances);
    for (auto& sc : scs) {
      ScaffoldCorpus part;
      part.rank = r;
      part.sc = sc;
      part.instances = generate_instances(sc, W, per / 4, rng);
      // a sample of starts, each with its own target and policy
      std::vector<std::pair<NormalSystem, std::pair<std::set<int>, Policy>>> jobs;
      for (int i = 0; i < per; ++i) {
        const auto& s = part.instances[rng() % part.instances.size()].system;
        auto t = random_target(*sc, rng);
        jobs.push_back({s, {t, make_policy(cfg.policy, rng)}});
      }
      part.paths.resize(jobs.size());
#pragma omp parallel for schedule(dynamic)
      for (int i = 0; i < static_cast<int>(jobs.size()); ++i)
        part.paths[i] = surgery_path(jobs[i].first, jobs[i].second.first, jobs[i].second.second);
      c.parts.push_back(std::move(part));
    }
  }
  return c;
}

int sphere_intersection(const Scaffold& sc, const Sphere& s, const std::set<int>& target) {
  int n = 0;
  for (int e : target) n += s.circles_over(sc, e);
  return n;
}

std::string rank_key(int r) { return "n=" + std::to_string(r); }

CriterionResult strict_decrease(const Corpus& c) {
  CriterionResult r{1, "strict_decrease"};
  std::map<std::string, int> steps;
  int violations = 0;
  for (const auto& part : c.parts)
    for (const auto& g : part.paths)
      for (int t = 1; t <= g.K(); ++t) {
        const auto& e = g.entries[t];
        if (e.wait || e.terminal) continue;
        ++steps[rank_key(part.rank)];
        if (intersection_number(e.system, g.target) >= intersection_number(g.at(t - 1), g.target))
          ++violations;
      }
  int total = 0;
  for (auto& [k, v] : steps) total += v;
  r.pass = violations == 0 && total >= 1000;
  r.detail = {{"steps", steps}, {"total_steps", total}, {"violations", violations}};
  r.summary = std::to_string(total) + " steps, " + std::to_string(violations) + " violations";
  return r;
}

CriterionResult descendant_monotonicity(const Corpus& c) {
  CriterionResult r{2, "descendant_monotonicity"};
  long checked = 0, strict = 0;
  int violations = 0;
  for (const auto& part : c.parts)
    for (const auto& g : part.paths) {
      const auto& sc = *part.sc;
      std::vector<int> start_i;
      for (const auto& s : g.start().spheres()) start_i.push_back(sphere_intersection(sc, s, g.target));
      for (int t = 1; t <= g.K(); ++t) {
        const auto& e = g.entries[t];
        if (e.terminal) continue;
        for (int i = 0; i < e.system.size(); ++i) {
          const auto& x = e.system.sphere(i);
          int ix = sphere_intersection(sc, x, g.target);
          for (int a : e.prov[i].ancestors) {
            ++checked;
            bool surgered = x.key() != g.start().sphere(a).key();
            strict += surgered;
            if (surgered ? ix >= start_i[a] : ix > start_i[a]) ++violations;
          }
        }
      }
    }
  r.pass = violations == 0 && checked > 0;
  r.detail = {{"descendants", checked}, {"after_surgery", strict}, {"violations", violations}};
  r.summary = std::to_string(checked) + " descendant pairs, " + std::to_string(violations) +
              " violations";
  return r;
}

CriterionResult step_distance(const Corpus& c) {
  CriterionResult r{3, "step_distance"};
  long pairs = 0;
  int violations = 0;
  for (const auto& part : c.parts)
    for (const auto& g : part.paths)
      for (int t = 1; t <= g.K(); ++t) {
        ++pairs;
        if (!try_disjoint_union(g.at(t - 1), g.at(t))) ++violations;
      }
  r.pass = violations == 0 && pairs > 0;
  r.detail = {{"pairs", pairs}, {"violations", violations}};
  r.summary = std::to_string(pairs) + " consecutive pairs, " + std::to_string(violations) +
              " without a disjoint union";
  return r;
}

// proper nonempty subsets: all of them for small systems, a sample otherwise
std::vector<std::vector<int>> subsets_of(int size, std::mt19937_64& rng) {
  std::vector<std::vector<int>> out;
  if (size < 2) return out;
  auto from_mask = [&](std::uint64_t m) {
    std::vector<int> v;
    for (int i = 0; i < size; ++i)
      if (m >> i & 1) v.push_back(i);
    return v;
  };
  std::uint64_t full = (1ull << size) - 1;
  if (size <= 3) {
    for (std::uint64_t m = 1; m < full; ++m) out.push_back(from_mask(m));
  } else {
    for (int k = 0; k < 4; ++k)
      out.push_back(from_mask(std::uniform_int_distribution<std::uint64_t>(1, full - 1)(rng)));
  }
  return out;
}

struct ComplexityStats {
  long probes = 0, common_child = 0, strict = 0, equal = 0;
  int decreases = 0, misclassified = 0, inconsistent = 0, errors = 0;
  int c_min = 1 << 30, c_max = -1;
  int range_violations = 0;
  std::map<std::string, int> tags;
};

CriterionResult complexity_monotonicity(const Corpus& c, std::mt19937_64& rng,
                                        ComplexityStats& st) {
  CriterionResult r{6, "complexity_monotonicity"};
  struct Job {
    const SurgeryPath* g;
    int t;
    std::vector<int> s1;
    int rank;
  };
  std::vector<Job> jobs;
  for (const auto& part : c.parts)
    for (const auto& g : part.paths)
      for (int t = 1; t <= g.K(); ++t) {
        if (g.entries[t].wait || g.entries[t].terminal) continue;
        for (auto& s1 : subsets_of(g.at(t - 1).size(), rng)) jobs.push_back({&g, t, s1, part.rank});
      }
  std::vector<PhiReport> reps(jobs.size());
  std::vector<char> err(jobs.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(jobs.size()); ++i) {
    try {
      reps[i] = phi_map(jobs[i].g->entries[jobs[i].t - 1], jobs[i].g->entries[jobs[i].t], jobs[i].s1);
    } catch (const std::exception&) {
      err[i] = 1;
    }
  }
  for (size_t i = 0; i < jobs.size(); ++i) {
    ++st.probes;
    if (err[i]) {
      ++st.errors;
      continue;
    }
    const auto& p = reps[i];
    int cap = 3 * jobs[i].rank - 2;
    for (int v : {p.C_before, p.C_after}) {
      if (p.common_child && v == p.C_after) continue;
      st.c_min = std::min(st.c_min, v);
      st.c_max = std::max(st.c_max, v);
      if (v < 0 || v > cap) ++st.range_violations;
    }
    if (p.common_child) {
      ++st.common_child;
      continue;
    }
    ++st.tags[to_string(p.tag)];
    if (!p.consistent) ++st.inconsistent;
    if (p.C_after < p.C_before) ++st.decreases;
    bool strict_case = p.tag == StepCase::StrictIncrease;
    if (p.C_after > p.C_before) ++st.strict;
    if (p.C_after == p.C_before) ++st.equal;
    if (strict_case != (p.C_after > p.C_before)) ++st.misclassified;
  }
  r.pass = st.decreases == 0 && st.misclassified == 0 && st.inconsistent == 0 && st.errors == 0 &&
           st.probes > st.common_child;
  r.detail = {{"probes", st.probes},           {"common_child", st.common_child},
              {"strict_increase", st.strict},  {"equal", st.equal},
              {"decreases", st.decreases},     {"misclassified", st.misclassified},
              {"inconsistent", st.inconsistent}, {"errors", st.errors},
              {"tags", st.tags}};
  r.summary = std::to_string(st.probes - st.common_child) + " steps without common child, " +
              std::to_string(st.decreases) + " decreases, " + std::to_string(st.misclassified) +
              " misclassified";
  return r;
}

CriterionResult structural_constants(const Corpus& c, const ComplexityStats& st) {
  CriterionResult r{12, "structural_constants"};
  long systems = 0;
  int too_many_spheres = 0, too_many_components = 0, max_size = 0, max_components = 0;
  for (const auto& part : c.parts)
    for (const auto& inst : part.instances) {
      ++systems;
      const auto& s = inst.system;
      max_size = std::max(max_size, s.size());
      if (s.size() > 3 * part.rank - 3) ++too_many_spheres;
      std::vector<int> all(s.size());
      for (int i = 0; i < s.size(); ++i) all[i] = i;
      int comps = static_cast<int>(region_graph(s, all).components.size());
      max_components = std::max(max_components, comps);
      if (comps > 2 * part.rank - 2) ++too_many_components;
    }
  r.pass = too_many_spheres == 0 && too_many_components == 0 && st.range_violations == 0 &&
           systems > 0;
  r.detail = {{"systems", systems},
              {"max_spheres", max_size},
              {"sphere_violations", too_many_spheres},
              {"max_components", max_components},
              {"component_violations", too_many_components},
              {"complexity_min", st.c_min},
              {"complexity_max", st.c_max},
              {"complexity_violations", st.range_violations}};
  r.summary = std::to_string(systems) + " systems; max " + std::to_string(max_size) +
              " spheres, " + std::to_string(max_components) + " components; C in [" +
              std::to_string(st.c_min) + "," + std::to_string(st.c_max) + "]";
  return r;
}


std::vector<const ScaffoldCorpus*> parts_of_rank(const Corpus& c, int rank) {
  std::vector<const ScaffoldCorpus*> out;
  for (const auto& p : c.parts)
    if (p.rank == rank) out.push_back(&p);
  return out;
}

CriterionResult coarse_retraction(const Corpus& c, int n) {
  CriterionResult r{4, "coarse_retraction"};
  int probes = 0, fails = 0;
  for (const auto* part : parts_of_rank(c, n))
    for (const auto& g : part->paths) {
      std::vector<int> ts(g.K() + 1);
      for (int t = 0; t <= g.K(); ++t) ts[t] = t;
      auto rep = check_coarse_retraction(g, ts);
      probes += static_cast<int>(rep.probes.size());
      fails += rep.count(ProbeStatus::Fail) + rep.count(ProbeStatus::Uncertified);
    }
  r.pass = fails == 0 && probes >= 500;
  r.detail = {{"probes", probes}, {"failures", fails}};
  r.summary = std::to_string(probes) + " (path, t) probes, " + std::to_string(fails) + " failures";
  return r;
}

CriterionResult diameter_bound(const Corpus& c, int n, std::mt19937_64& rng) {
  CriterionResult r{5, "diameter_bound"};
  int probes = 0, fails = 0, max_blocks = 0, max_block = 0, max_total = 0;
  for (const auto* part : parts_of_rank(c, n))
    for (const auto& g : part->paths) {
      int m = g.start().size();
      if (m < 2) continue;
      std::set<int> s1, s2;
      std::uint64_t mask = std::uniform_int_distribution<std::uint64_t>(1, (1ull << m) - 2)(rng);
      for (int i = 0; i < m; ++i) (mask >> i & 1 ? s1 : s2).insert(i);
      auto ia = interval_analysis(g, s1, s2);
      ++probes;
      if (!ia.ok()) ++fails;
      max_blocks = std::max(max_blocks, static_cast<int>(ia.blocks.size()));
      for (int b : ia.block_bounds) max_block = std::max(max_block, b);
      max_total = std::max(max_total, ia.total.bound);
    }
  r.pass = fails == 0 && probes > 0;
  r.detail = {{"probes", probes},         {"failures", fails},
              {"max_blocks", max_blocks}, {"block_limit", 6 * n - 3},
              {"max_block_bound", max_block}, {"max_total", max_total},
              {"total_limit", 24 * n - 12}};
  r.summary = std::to_string(probes) + " probes, max " + std::to_string(max_blocks) +
              " blocks, max total " + std::to_string(max_total) + " (limit " +
              std::to_string(24 * n - 12) + ")";
  return r;
}

std::vector<NormalSystem> enumerated(const ScaffoldCorpus& part) {
  std::vector<NormalSystem> out;
  for (const auto& i : part.instances)
    if (i.source == std::string("enumeration")) out.push_back(i.system);
  return out;
}

// A random column S0 ⊇ S1 ⊆ S2 ⊇ S3 ⊆ S4 inside the pool.
std::vector<NormalSystem> random_column(const std::vector<NormalSystem>& pool, const NormalSystem& a,
                                        std::mt19937_64& rng) {
  std::vector<NormalSystem> col{a};
  for (int j = 1; j <= 4; ++j) {
    std::vector<const NormalSystem*> c;
    for (const auto& s : pool)
      if (j % 2 ? is_subsystem(s, col.back()) : is_subsystem(col.back(), s)) c.push_back(&s);
    col.push_back(*c[rng() % c.size()]);
  }
  return col;
}

CriterionResult combing(const Corpus& c, int n, int count, std::mt19937_64& rng) {
  CriterionResult r{7, "combing"};
  struct Job {
    std::vector<NormalSystem> col;
    SurgeryPath base;
  };
  std::vector<Job> jobs;
  auto parts = parts_of_rank(c, n);
  for (int i = 0; i < count; ++i) {
    const auto& part = *parts[i % parts.size()];
    auto pool = enumerated(part);
    const auto& g = part.paths[rng() % part.paths.size()];
    if (g.start().size() == 0) continue;
    jobs.push_back({random_column(pool, g.start().identified(), rng), g});
  }
  std::vector<int> status(jobs.size(), 0);  // 0 ok, 1 checker, 2 round trip, 3 error
  std::vector<int> refined(jobs.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(jobs.size()); ++i) {
    try {
      const auto& col = jobs[i].col;
      auto d = build_combing_diagram(col, jobs[i].base);
      if (!check_diagram(d, col).ok) {
        status[i] = 1;
        continue;
      }
      auto ex = comb_by_expansion(d.rows[1], col[2]);
      refined[i] = ex.refined;
      auto back = comb_by_collapse(ex.path, col[1]);
      bool same = back.K() == ex.adjusted.K();
      for (int t = 0; same && t <= back.K(); ++t)
        same = back.at(t).identified() == ex.adjusted.at(t).identified();
      if (!same) status[i] = 2;
    } catch (const std::exception&) {
      status[i] = 3;
    }
  }
  int bad = 0, rt = 0, err = 0, ref = 0;
  for (size_t i = 0; i < jobs.size(); ++i) {
    bad += status[i] == 1;
    rt += status[i] == 2;
    err += status[i] == 3;
    ref += refined[i];
  }
  int total = static_cast<int>(jobs.size());
  r.pass = bad == 0 && rt == 0 && err == 0 && total >= 200;
  r.detail = {{"diagrams", total},      {"checker_failures", bad}, {"round_trip_failures", rt},
              {"errors", err},          {"refined_expansion_steps", ref}};
  r.summary = std::to_string(total) + " diagrams, " + std::to_string(bad + rt + err) + " failures";
  return r;
}

CriterionResult contraction(const Corpus& c, int n, int count, const MMConstants& mm,
                            std::mt19937_64& rng) {
  CriterionResult r{8, "contraction"};
  struct Job {
    NormalSystem a, b;
    SurgeryPath base;
  };
  std::vector<Job> jobs;
  auto parts = parts_of_rank(c, n);
  for (int i = 0; i < count; ++i) {
    const auto& part = *parts[i % parts.size()];
    auto pool = enumerated(part);
    const auto& g = part.paths[rng() % part.paths.size()];
    jobs.push_back({g.start().identified(), pool[rng() % pool.size()], g});
  }
  std::vector<int> w_ok(jobs.size(), -1), z_ok(jobs.size(), -1), zk(jobs.size(), 0);
  std::vector<long> zpre(jobs.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(jobs.size()); ++i) {
    try {
      auto z = zigzag_between(jobs[i].a, jobs[i].b, 8);
      auto d = build_combing_diagram(z.entries, jobs[i].base);
      w_ok[i] = contract_w_path(d, static_cast<int>(mm.C2)).ok;
      auto zc = contract_zigzag(d, static_cast<int>(mm.C2));
      z_ok[i] = zc.ok;
      zk[i] = zc.k;
      zpre[i] = zc.prefix.bound;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoPathFoundWithinBudget) w_ok[i] = z_ok[i] = 0;
    }
  }
  int wt = 0, wp = 0, zt = 0, zp = 0, skipped = 0, kmax = 0;
  long premax = 0;
  for (size_t i = 0; i < jobs.size(); ++i) {
    if (w_ok[i] < 0) {
      ++skipped;
      continue;
    }
    ++wt, ++zt;
    wp += w_ok[i];
    zp += z_ok[i];
    kmax = std::max(kmax, zk[i]);
    premax = std::max(premax, zpre[i]);
  }
  r.pass = wp == wt && zp == zt && wt >= 200 && zt >= 200;
  r.detail = {{"w_paths", wt},       {"w_certified", wp},  {"zigzags", zt},
              {"z_certified", zp},   {"no_chain_found", skipped}, {"max_k", kmax},
              {"max_prefix_bound", premax}, {"C2", mm.C2}};
  r.summary = "W-paths " + std::to_string(wp) + "/" + std::to_string(wt) + ", zig-zags " +
              std::to_string(zp) + "/" + std::to_string(zt) + " (C2 = " + std::to_string(mm.C2) + ")";
  return r;
}

CriterionResult masur_minsky(const Corpus& c, int n, int count, const MMConstants& mm,
                             std::mt19937_64& rng) {
  CriterionResult r{9, "masur_minsky"};
  struct Job {
    const SurgeryPath* g;
    NormalSystem v, w;
  };
  std::vector<Job> jobs;
  auto parts = parts_of_rank(c, n);
  for (int i = 0; i < count; ++i) {
    const auto& part = *parts[i % parts.size()];
    auto pool = enumerated(part);
    const auto& v = pool[rng() % pool.size()];
    std::vector<const NormalSystem*> adj;
    for (const auto& s : pool)
      if (!(s == v) && (is_subsystem(s, v) || is_subsystem(v, s))) adj.push_back(&s);
    if (adj.empty()) continue;
    jobs.push_back({&part.paths[rng() % part.paths.size()], v, *adj[rng() % adj.size()]});
  }
  std::vector<ProbeStatus> lip(jobs.size()), strong(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(jobs.size()); ++i) {
    lip[i] = check_coarse_lipschitz(*jobs[i].g, {{jobs[i].v, jobs[i].w}}, mm).probes.at(0).status;
    strong[i] = check_strong_contraction(*jobs[i].g, {{jobs[i].v, jobs[i].w}}, mm).probes.at(0).status;
  }
  // v = w always meets the hypothesis; run separately so the certified branch is
  // exercised without counting toward the attempts
  int degenerate = std::min<int>(50, static_cast<int>(jobs.size())), degenerate_pass = 0;
  for (int i = 0; i < degenerate; ++i)
    degenerate_pass += check_strong_contraction(*jobs[i].g, {{jobs[i].v, jobs[i].v}}, mm).passed();
  auto count_of = [](const std::vector<ProbeStatus>& v, ProbeStatus s) {
    return static_cast<int>(std::count(v.begin(), v.end(), s));
  };
  int lp = count_of(lip, ProbeStatus::Pass), lf = count_of(lip, ProbeStatus::Fail);
  int sp = count_of(strong, ProbeStatus::Pass), sf = count_of(strong, ProbeStatus::Fail);
  int su = count_of(strong, ProbeStatus::Uncertified);
  int attempts = static_cast<int>(jobs.size());
  bool uncertified_ok = attempts > 0 && 5 * su < attempts;
  r.pass = lp >= 300 && lf == 0 && sf == 0 && uncertified_ok;
  r.detail = {{"lipschitz_probes", attempts}, {"lipschitz_pass", lp},   {"lipschitz_fail", lf},
              {"contraction_pass", sp},       {"contraction_fail", sf}, {"uncertified", su},
              {"uncertified_fraction", attempts ? static_cast<double>(su) / attempts : 0.0},
              {"degenerate_probes", degenerate}, {"degenerate_pass", degenerate_pass},
              {"B", std::to_string(mm.B_num) + "/" + std::to_string(mm.B_den)}, {"C3", mm.C3}};
  r.summary = "lipschitz " + std::to_string(lp) + "/" + std::to_string(attempts) +
              ", contraction " + std::to_string(sp) + " pass, " + std::to_string(sf) +
              " fail, " + std::to_string(su) + " uncertified of " + std::to_string(attempts);
  return r;
}

CriterionResult projection_exactness(int W) {
  CriterionResult r{10, "projection_exactness"};
  struct Job {
    const SurgeryPath* g;
    const NormalSystem* s;
  };
  long pairs = 0;
  int disagree = 0, fell_back = 0, bad_cert = 0, paths = 0;
  for (auto& sc : select_scaffolds(2, "all")) {
    auto systems = enumerate_systems(sc, W);
    std::vector<SurgeryPath> gammas;
    for (const auto& s : systems)
      for (std::uint64_t m = 1; m < (1ull << sc->sphere_count()); ++m) {
        std::set<int> t;
        for (int e = 0; e < sc->sphere_count(); ++e)
          if (m >> e & 1) t.insert(e);
        gammas.push_back(surgery_path(s, t));
      }
    paths += static_cast<int>(gammas.size());
    std::vector<Job> jobs;
    for (const auto& g : gammas)
      for (const auto& s : systems) jobs.push_back({&g, &s});
    std::vector<int> st(jobs.size(), 0);
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < static_cast<int>(jobs.size()); ++i) {
      auto ex = project(*jobs[i].s, *jobs[i].g, ProjectionMode::Exact);
      auto up = project(*jobs[i].s, *jobs[i].g, ProjectionMode::CertifiedUpper);
      int v = 0;
      if (ex.fell_back) v |= 1;
      if (ex.k != up.k) v |= 2;
      for (const auto& sp : ex.spheres)
        if (!verify(sp, *jobs[i].g)) v |= 4;
      st[i] = v;
    }
    pairs += static_cast<long>(jobs.size());
    for (int v : st) {
      fell_back += (v & 1) != 0;
      disagree += (v & 2) != 0;
      bad_cert += (v & 4) != 0;
    }
  }
  r.pass = disagree == 0 && fell_back == 0 && bad_cert == 0 && pairs > 0;
  r.detail = {{"weight", W},           {"paths", paths},     {"projections", pairs},
              {"disagreements", disagree}, {"budget_fallbacks", fell_back},
              {"unverified_certificates", bad_cert}};
  r.summary = std::to_string(pairs) + " projections onto " + std::to_string(paths) + " paths, " +
              std::to_string(disagree) + " disagreements";
  return r;
}

CriterionResult arc_double(int count, std::mt19937_64& rng) {
  CriterionResult r{11, "arc_double"};
  nlohmann::json per = nlohmann::json::object();
  bool pass = true;
  for (auto gs : {std::pair{0, 4}, std::pair{1, 1}}) {
    const auto& S = surface_preset(gs.first, gs.second);
    std::vector<std::pair<ArcSystem, std::set<int>>> jobs;
    for (int i = 0; i < count; ++i) {
      auto a = random_arc_system(S, rng, 4, 1 + i % S.arcs());
      if (a.arcs.empty()) continue;
      jobs.push_back({a, random_target(*S.scaffold, rng)});
    }
    std::vector<DoublingReport> reps(jobs.size());
    std::vector<char> valid(jobs.size(), 0);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(jobs.size()); ++i) {
      try {
        valid[i] = is_valid_system(double_to_spheres(jobs[i].first));
        reps[i] = check_doubling_commutes(jobs[i].first, jobs[i].second);
      } catch (const std::exception& e) {
        reps[i].ok = false;
        reps[i].why = e.what();
      }
    }
    int ok = 0, invalid_doubles = 0, steps = 0;
    for (size_t i = 0; i < jobs.size(); ++i) {
      ok += reps[i].ok;
      invalid_doubles += !valid[i];
      steps += reps[i].arc_length;
    }
    // closure of the doubled subcomplex
    std::set<std::string> doubled;
    for (const auto& w : all_arcs(S, 4)) doubled.insert(double_arc(S, w).key());
    auto pred = [&](const NormalSystem& s) {
      for (const auto& sp : s.spheres())
        if (!doubled.count(sp.key())) return false;
      return true;
    };
    std::vector<NormalSystem> samples;
    for (size_t i = 0; i < jobs.size() && samples.size() < 60; ++i)
      samples.push_back(double_to_spheres(jobs[i].first));
    auto cl = check_subcomplex_closure(pred, samples);
    bool p = ok == static_cast<int>(jobs.size()) && jobs.size() >= 200 && invalid_doubles == 0 &&
             cl.closed();
    pass = pass && p;
    std::string name = "(" + std::to_string(gs.first) + "," + std::to_string(gs.second) + ")";
    per[name] = {{"instances", jobs.size()},      {"commuting", ok},
                 {"surgery_steps", steps},         {"invalid_doubles", invalid_doubles},
                 {"closure_paths", cl.paths},      {"closure_entries", cl.entries_checked},
                 {"closure_path_violations", cl.path_violations},
                 {"closure_joins", cl.joins},      {"closure_join_violations", cl.join_violations}};
  }
  r.pass = pass;
  r.detail = per;
  r.summary = "(0,4): " + per["(0,4)"]["commuting"].dump() + "/" + per["(0,4)"]["instances"].dump() +
              ", (1,1): " + per["(1,1)"]["commuting"].dump() + "/" +
              per["(1,1)"]["instances"].dump() + " commuting";
  return r;
}

}  // namespace

// ---- runner

bool AcceptanceReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

nlohmann::json AcceptanceReport::to_json() const {
  nlohmann::json j;
  j["config"] = config.to_json();
  j["constants"] = (config.C1 ? MMConstants::with_C1(config.n, *config.C1)
                              : MMConstants::for_rank(config.n))
                       .to_json();
  j["results"] = nlohmann::json::array();
  for (const auto& r : results)
    j["results"].push_back(
        {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary}, {"detail", r.detail}});
  j["passed"] = passed();
  return j;
}

std::string AcceptanceReport::to_csv() const {
  std::ostringstream o;
  o << "id,name,pass,summary\n";
  for (const auto& r : results) {
    std::string s = r.summary;
    std::replace(s.begin(), s.end(), '"', '\'');
    o << r.id << "," << r.name << "," << (r.pass ? "PASS" : "FAIL") << ",\"" << s << "\"\n";
  }
  return o.str();
}

AcceptanceReport run_acceptance(const ExperimentConfig& cfg) {
  AcceptanceReport rep;
  rep.config = cfg;
  if (cfg.checks.empty()) return rep;
  auto want = [&](const char* name) {
    return std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end();
  };
  auto mm = cfg.C1 ? MMConstants::with_C1(cfg.n, *cfg.C1) : MMConstants::for_rank(cfg.n);
  std::mt19937_64 master(cfg.seed);
  // one stream per criterion, drawn in a fixed order
  std::vector<std::uint64_t> seeds(13);
  for (auto& s : seeds) s = master();
  auto stream = [&](int id) { return std::mt19937_64(seeds[id]); };

  bool need_corpus = false;
  for (const auto& name : cfg.checks)
    need_corpus = need_corpus || (name != "projection_exactness" && name != "arc_double");
  Corpus corpus;
  if (need_corpus) {
    auto rng = stream(0);
    auto c2 = cfg;
    if (std::find(c2.corpus_ranks.begin(), c2.corpus_ranks.end(), cfg.n) == c2.corpus_ranks.end())
      c2.corpus_ranks.push_back(cfg.n);
    corpus = build_corpus(c2, rng);
  }
  ComplexityStats st;
  std::vector<CriterionResult> out;
  if (want("strict_decrease")) out.push_back(strict_decrease(corpus));
  if (want("descendant_monotonicity")) out.push_back(descendant_monotonicity(corpus));
  if (want("step_distance")) out.push_back(step_distance(corpus));
  if (want("coarse_retraction")) out.push_back(coarse_retraction(corpus, cfg.n));
  if (want("diameter_bound")) {
    auto rng = stream(5);
    out.push_back(diameter_bound(corpus, cfg.n, rng));
  }
  if (want("complexity_monotonicity") || want("structural_constants")) {
    auto rng = stream(6);
    auto r = complexity_monotonicity(corpus, rng, st);
    if (want("complexity_monotonicity")) out.push_back(r);
  }
  if (want("combing")) {
    auto rng = stream(7);
    out.push_back(combing(corpus, cfg.n, std::max(cfg.instances, 200), rng));
  }
  if (want("contraction")) {
    auto rng = stream(8);
    out.push_back(contraction(corpus, cfg.n, std::max(cfg.instances, 220), mm, rng));
  }
  if (want("masur_minsky")) {
    auto rng = stream(9);
    out.push_back(masur_minsky(corpus, cfg.n, std::max(cfg.instances, 320), mm, rng));
  }
  if (want("projection_exactness")) out.push_back(projection_exactness(cfg.exact_weight));
  if (want("arc_double")) {
    auto rng = stream(11);
    out.push_back(arc_double(std::max(cfg.instances, 200), rng));
  }
  if (want("structural_constants")) out.push_back(structural_constants(corpus, st));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  rep.results = std::move(out);
  return rep;
}

int write_reports(const AcceptanceReport& r) {
  if (!r.config.out.empty()) {
    std::filesystem::create_directories(r.config.out);
    std::ofstream(std::filesystem::path(r.config.out) / "report.json") << r.to_json().dump(2) << "\n";
    std::ofstream(std::filesystem::path(r.config.out) / "report.csv") << r.to_csv();
  }
  return r.passed() ? 0 : 1;
}

}  // namespace spherecx
