#include "isgqd/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "isgqd/error.hpp"
#include "isgqd/green.hpp"
#include "isgqd/operators.hpp"
#include "isgqd/spectrum.hpp"
#include "isgqd/traces.hpp"

namespace isgqd {

namespace {

using nlohmann::json;

// Exhaustive listings and dense solves above these sizes are skipped.
constexpr std::size_t kListLimit = 500;
constexpr std::size_t kTraceLimit = 400;
constexpr std::size_t kIsolationLimit = 600;

json labels_of(const InverseSemigroup& s, const std::vector<Index>& ids) {
  json out = json::array();
  for (Index x : ids) out.push_back(s.label(x));
  return out;
}

json spec_header(const LoadedSpec& spec, const std::string& command) {
  return {{"format_version", 1}, {"command", command}, {"name", spec.name}, {"type", spec.type}};
}

json semigroup_section(const InverseSemigroup& s) {
  json j = {{"size", s.size()},
            {"idempotents", s.idempotents().size()},
            {"zero", s.label(s.zero())},
            {"unit", s.unit() ? json(s.label(*s.unit())) : json(nullptr)},
            {"windowed", s.windowed()}};
  if (s.size() <= kListLimit) {
    j["elements"] = s.labels();
    j["idempotent_labels"] = labels_of(s, s.idempotents());
  }
  return j;
}

json green_section(const InverseSemigroup& s, const GreenClasses& g) {
  json classes = json::array();
  for (std::uint32_t d = 0; d < g.num_d; ++d) {
    const auto& sub = g.subgroup_at(g.d_idempotents[d].front());
    classes.push_back({{"size", g.d_members[d].size()},
                       {"idempotents", g.d_idempotents[d].size()},
                       {"base_idempotent", s.label(g.d_idempotents[d].front())},
                       {"subgroup_order", sub.table.windowed() ? json("infinite (window)") : json(sub.table.size())},
                       {"subgroup_amenable", sub.table.amenable()}});
  }
  const auto hmult = check_hclass_multiplication(s, g);
  const auto order = order_equality_on_dclasses(s, g);
  return {{"l_classes", g.num_l},
          {"r_classes", g.num_r},
          {"h_classes", g.num_h},
          {"d_classes", g.num_d},
          {"d_class_details", classes},
          {"zero_bisimple", is_0_bisimple(s, g)},
          {"order_equality", order.holds},
          {"hclass_multiplication", hmult ? json(*hmult) : json("ok")}};
}

json spectrum_section(const InverseSemigroup& s) {
  const auto filters = enumerate_spectrum(s);
  json certs = json::array();
  for (const auto& f : filters) {
    const auto c = isolated_certificate(s, f.principal_at);
    json cj = {{"idempotent", s.label(c.e)}, {"cover", labels_of(s, c.cover)}, {"isolated", c.valid}};
    if (c.limit_level_has_finite_cover) cj["limit_level_has_finite_cover"] = *c.limit_level_has_finite_cover;
    certs.push_back(cj);
  }
  json j = {{"filters", filters.size()}, {"isolation_certificates", certs}};
  if (filters.size() <= kListLimit) {
    json fs = json::array();
    for (const auto& f : filters) fs.push_back({{"principal_at", s.label(f.principal_at)}, {"size", f.members.size()}});
    j["filter_list"] = fs;
  }
  return j;
}

json groupoid_section(const InverseSemigroup& s) {
  const auto gt = enumerate_groupoid(s);
  const auto orbits = unit_orbits(gt);
  return {{"germs", gt.size()}, {"units", gt.units.size()}, {"orbits", orbits.size()}, {"minimal", is_minimal(s)}};
}

/// Subgroup projections at every idempotent, for small finite semigroups.
json isolated_section(const InverseSemigroup& s, const GreenClasses& g, std::uint64_t seed, bool& all_exact) {
  json out = json::array();
  all_exact = true;
  for (Index e : s.idempotents()) {
    if (e == s.zero()) continue;
    const auto ip = isolated_subgroup_projection(s, g, e, seed);
    const bool exact = ip.max_subgroup_commutator == 0.0 && ip.range_is_r_class;
    all_exact = all_exact && exact;
    out.push_back({{"idempotent", s.label(e)},
                   {"cover", labels_of(s, ip.cover)},
                   {"max_subgroup_commutator", ip.max_subgroup_commutator},
                   {"range_is_r_class", ip.range_is_r_class},
                   {"representation_ratio", ip.representation_ratio},
                   {"samples", ip.samples}});
  }
  return out;
}

bool qd_verified(const QDReport& r, double tol) {
  if (r.steps.empty() || !r.schedule_achievable) return false;
  const auto& last = r.steps.back();
  return last.max_commutator <= 1.0 / last.n + tol;
}

std::string rational_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

json functional_json(const InverseSemigroup& s, const TraceFunctional& tau, double tol) {
  json j = {{"tracial", is_tracial(s, tau, tol)}};
  j["state"] = is_state(s, tau, tol);
  const auto f = is_faithful(s, tau, tol);
  j["faithful"] = f.faithful;
  j["margin"] = f.margin;
  return j;
}

std::optional<std::size_t> brandt_k(const InverseSemigroup& s) {
  if (s.brandt_layout()) return s.brandt_layout()->k;
  return std::nullopt;
}

json traces_section(const LoadedSpec& spec, const GreenClasses& g, const CommandOptions& options, bool& ok) {
  const InverseSemigroup& s = spec.semi();
  ok = true;
  if (s.windowed()) return {{"skipped", "window of an infinite semigroup"}};
  if (s.size() > kTraceLimit) return {{"skipped", "more than " + std::to_string(kTraceLimit) + " elements"}};
  json j = {{"algebra_dimension", algebra_dim(s, options.tol)}};
  if (!unit_expansion(s, options.tol)) {
    j["unital"] = false;
  } else {
    j["unital"] = true;
    const auto space = trace_space(s, options.tol);
    j["trace_space_dimension"] = space.dimension();
  }
  bool brandt = false;
  try {
    brandt = grpdmin_check(s, g).brandt;
  } catch (const Error&) {
    brandt = false;
  }
  if (brandt && s.size() > 1) {
    const auto tau = grpdmin_trace(s, g, GrpdminFormula::kTracial);
    json t = functional_json(s, tau, options.tol);
    const std::size_t k = s.idempotents().size() - 1;
    Index diag = s.zero();
    for (Index e : s.idempotents()) {
      if (e != s.zero()) {
        diag = e;
        break;
      }
    }
    t["delta_minus_rho"] = tau.coeffs[diag] - tau.coeffs[s.zero()];
    t["expected_delta_minus_rho"] = 1.0 / (2.0 * static_cast<double>(k));
    ok = t["tracial"] && t["state"] && t["faithful"];
    j["grpdmin_trace"] = t;
    const auto printed = grpdmin_trace(s, g, GrpdminFormula::kAsPrinted);
    j["grpdmin_trace_as_printed"] = {{"tracial", is_tracial(s, printed, options.tol)}};
  }
  if (spec.type == "qdnotr" && s.unit()) {
    const std::size_t k = s.idempotents().size() - 2;
    const auto ch = qdnotr_character_trace(k);
    j["character_trace"] = functional_json(s, ch, options.tol);
    if (options.margin) {
      const auto m = qdnotr_trace_margin(k);
      json cons = json::array();
      for (const auto& c : m.constraints) {
        cons.push_back({rational_string(c[0]), rational_string(c[1]), rational_string(c[2])});
      }
      const bool exact = m.value == Rational(1, static_cast<long long>(k));
      j["margin"] = {{"value", rational_string(m.value)},
                     {"rho", rational_string(m.rho)},
                     {"delta", rational_string(m.delta)},
                     {"constraints_rho_delta_constant", cons},
                     {"optimizer_is_state", m.optimizer_is_state},
                     {"optimizer_is_tracial", m.optimizer_is_tracial},
                     {"equals_one_over_k", exact}};
      ok = ok && exact && m.optimizer_is_state && m.optimizer_is_tracial;
    }
  }
  return j;
}

/// Runs the minimal-groupoid projection on Brandt semigroups with the same
/// group witness and compares it with the D-class construction.
json minimal_section(const InverseSemigroup& s, const GreenClasses& g, const QDWitness& w, int index,
                     const SparseOp& global_q) {
  if (!brandt_k(s)) return nullptr;
  const auto& layout = *s.brandt_layout();
  if (layout.group.windowed() && w.strategy == WitnessStrategy::kBergZ) {
    index = std::min<int>(index, static_cast<int>(*layout.group.z_radius() / 2));
  }
  const SparseOp p = group_qd_witness(layout.group, w, index);
  std::vector<Index> f_set;
  for (Index e : s.idempotents()) {
    if (e != s.zero()) f_set.push_back(e);
  }
  const LinOp q = minimal_qd_projection(s, g, f_set, p);
  return {{"witness_index", index},
          {"projection", q.projection},
          {"rank", static_cast<std::size_t>(std::lround(SparseOp(q.matrix).diagonal().sum()))},
          {"agrees_with_dclass_construction", max_abs_entry(SparseOp(q.matrix - global_q)) <= 1e-12}};
}

}  // namespace

QDWitness witness_for(const InverseSemigroup& s, const CommandOptions& options) {
  const std::string& st = options.strategy;
  if (st.empty()) return s.windowed() ? QDWitness::berg() : QDWitness::full();
  if (st == "full") return QDWitness::full();
  if (st == "berg") return QDWitness::berg();
  if (st.rfind("user:", 0) == 0) return QDWitness::from_file(st.substr(5));
  throw Error(ErrorCode::kSpecInvalid, "unknown strategy \"" + st + "\"");
}

CommandResult run_analyze(const LoadedSpec& spec, const CommandOptions& options) {
  const InverseSemigroup& s = spec.semi();
  const GreenClasses g = green_partition(s);
  CommandResult res;
  json& j = res.report;
  j = spec_header(spec, "analyze");
  j["semigroup"] = semigroup_section(s);
  j["green"] = green_section(s, g);
  j["spectrum"] = spectrum_section(s);
  j["groupoid"] = groupoid_section(s);
  const StructureReport st = grpdmin_check(s, g);
  j["structure"] = structure_to_json(st);

  QDOptions qo;
  qo.witness = witness_for(s, options);
  qo.n_max = options.n_max;
  qo.tol = options.tol;
  const GlobalQD qd = global_qd_projection(s, g, qo);
  const bool verified = qd_verified(qd.report, options.tol);
  json qj = {{"hypotheses",
              {{"subgroups_amenable", qd.report.subgroups_amenable},
               {"finitely_many_idempotents_per_d_class", true},
               {"max_idempotents_per_d_class", qd.report.max_idempotents_per_class}}},
             {"theorem_applies", qd.report.subgroups_amenable},
             {"witness", to_string(qd.report.strategy)},
             {"n_max", options.n_max},
             {"schedule_achievable", qd.report.schedule_achievable},
             {"final_max_commutator", qd.report.steps.back().max_commutator},
             {"final_rank", qd.report.steps.back().rank},
             {"verified", verified}};
  bool isolated_exact = true;
  if (!s.windowed() && s.size() <= kIsolationLimit) {
    qj["isolated_subgroups"] = isolated_section(s, g, options.seed, isolated_exact);
  }
  j["qd"] = qj;

  bool traces_ok = true;
  j["traces"] = traces_section(spec, g, options, traces_ok);

  json nonamenable = json::array();
  for (Index e : s.idempotents()) {
    if (e == s.zero()) continue;
    if (isolated_certificate(s, e).valid && !g.subgroup_at(e).table.amenable()) nonamenable.push_back(s.label(e));
  }
  j["consistency"] = {{"rule", "a verified QD report excludes non-amenable isolated subgroups"},
                      {"qd_verified", verified},
                      {"nonamenable_isolated_subgroups", nonamenable},
                      {"violation", verified && !nonamenable.empty()}};
  res.exit_code = (verified && isolated_exact && traces_ok && nonamenable.empty()) ? 0 : 2;
  return res;
}

CommandResult run_qd(const LoadedSpec& spec, const CommandOptions& options) {
  const InverseSemigroup& s = spec.semi();
  const GreenClasses g = green_partition(s);
  QDOptions qo;
  qo.witness = witness_for(s, options);
  qo.n_max = options.n_max;
  qo.tol = options.tol;
  const GlobalQD qd = global_qd_projection(s, g, qo);
  CommandResult res;
  res.report = spec_header(spec, "qd");
  res.report["qd"] = qd.report.to_json();
  const bool verified = qd_verified(qd.report, options.tol);
  res.report["minimal_groupoid_projection"] = minimal_section(s, g, qo.witness, qd.report.steps.back().witness_index, qd.q);
  const auto& last = qd.report.steps.back();
  std::ostringstream verdict;
  verdict << (verified ? "PASS" : "SOFT-FAIL") << ": n=" << last.n << " max commutator " << last.max_commutator
          << (qd.report.schedule_achievable ? " meets" : " misses") << " the 1/n schedule";
  res.report["verdict"] = verdict.str();
  res.csv = qd.report.to_csv();
  res.exit_code = verified ? 0 : 2;
  return res;
}

CommandResult run_nonfl(const LoadedSpec& spec, const CommandOptions& options) {
  if (!spec.tower) throw Error(ErrorCode::kSpecInvalid, "nonfl needs a tower spec");
  const std::size_t m = options.m.value_or(spec.tower->levels.size() - 1);
  const NonflWeights w = options.weights == "as_printed" ? NonflWeights::kAsPrinted : NonflWeights::kCorrected;
  if (options.weights != "as_printed" && options.weights != "corrected") {
    throw Error(ErrorCode::kSpecInvalid, "weights must be corrected or as_printed");
  }
  const NonflReport r = qd_nonfl_projection(*spec.tower, options.n, m, options.r, w);
  CommandResult res;
  res.report = spec_header(spec, "nonfl");
  res.report["nonfl"] = r.to_json();
  std::ostringstream csv;
  csv.precision(17);
  csv << "generator,commutator,bound\n";
  const char* names[] = {"a", "a^-1", "b", "b^-1"};
  for (std::size_t i = 0; i < r.commutators.size(); ++i) csv << names[i] << ',' << r.commutators[i] << ',' << r.bound << '\n';
  res.csv = csv.str();
  res.exit_code = r.passes ? 0 : 2;
  return res;
}

CommandResult run_trace(const LoadedSpec& spec, const CommandOptions& options) {
  const InverseSemigroup& s = spec.semi();
  if (s.windowed()) throw Error(ErrorCode::kUnsupported, "traces on a window of an infinite semigroup");
  if (!unit_expansion(s, options.tol)) throw Error(ErrorCode::kNotUnital, "the identity is not in span{v_s}");
  const GreenClasses g = green_partition(s);
  CommandResult res;
  res.report = spec_header(spec, "trace");
  bool ok = true;
  json t = traces_section(spec, g, options, ok);
  if (s.size() <= kTraceLimit) {
    const auto space = trace_space(s, options.tol);
    t["particular_solution"] = std::vector<double>(space.particular.data(), space.particular.data() + space.particular.size());
  }
  res.report["traces"] = t;
  res.exit_code = ok ? 0 : 2;
  return res;
}

CommandResult run_groupoid(const LoadedSpec& spec, const CommandOptions&) {
  const InverseSemigroup& s = spec.semi();
  CommandResult res;
  res.report = spec_header(spec, "groupoid");
  const auto gt = enumerate_groupoid(s);
  res.report["groupoid"] = groupoid_to_json(s, gt);
  json orbits = json::array();
  for (const auto& o : unit_orbits(gt)) orbits.push_back(o);
  res.report["orbits"] = orbits;
  res.report["minimal"] = is_minimal(s);
  return res;
}

}  // namespace isgqd
