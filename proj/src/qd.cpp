#include "isgqd/qd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "isgqd/error.hpp"
#include "isgqd/spectrum.hpp"

namespace isgqd {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kExact = 1e-12;

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseOp square(std::size_t n, const Triplets& t) {
  SparseOp m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseOp identity_op(std::size_t n) {
  SparseOp m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setIdentity();
  return m;
}

double trace(const SparseOp& a) {
  double t = 0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseOp::InnerIterator it(a, k); it; ++it) {
      if (it.row() == it.col()) t += it.value();
    }
  }
  return t;
}

/// Column norms of q - 1 at the given basis vectors.
std::vector<double> residuals(const SparseOp& q, const std::vector<Index>& probes) {
  std::vector<double> out;
  for (Index x : probes) {
    double sq = 0;
    bool diag = false;
    for (SparseOp::InnerIterator it(q, static_cast<Eigen::Index>(x)); it; ++it) {
      const double v = it.row() == static_cast<Eigen::Index>(x) ? (diag = true, it.value() - 1.0) : it.value();
      sq += v * v;
    }
    if (!diag) sq += 1.0;
    out.push_back(std::sqrt(sq));
  }
  return out;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::max(a, b)); }

/// Elements of a windowed Brandt semigroup whose group part lies in
/// [-radius, radius].
std::vector<Index> brandt_elements_near_unit(const InverseSemigroup& s, long radius, bool with_zero) {
  std::vector<Index> out;
  if (with_zero) out.push_back(s.zero());
  const auto& layout = *s.brandt_layout();
  for (std::size_t f = 0; f < layout.k; ++f) {
    for (long h = -radius; h <= radius; ++h) {
      const Index gh = layout.group.windowed() ? layout.group.index_of_integer(h) : static_cast<Index>(h);
      if (gh == kUndefined || gh >= layout.group.size()) continue;
      for (std::size_t e = 0; e < layout.k; ++e) out.push_back(layout.index(f, gh, e));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::string to_string(WitnessStrategy s) {
  switch (s) {
    case WitnessStrategy::kFull: return "full";
    case WitnessStrategy::kBergZ: return "berg";
    case WitnessStrategy::kUser: return "user";
  }
  return "?";
}

QDWitness QDWitness::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kSpecInvalid, "cannot open witness file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kSpecInvalid, path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("projections") || !j["projections"].is_object()) {
    throw Error(ErrorCode::kSpecInvalid, path + ": expected an object with \"projections\"");
  }
  QDWitness w{WitnessStrategy::kUser, {}};
  for (const auto& [key, rows] : j["projections"].items()) {
    const int n = std::stoi(key);
    const auto dim = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (rows[static_cast<std::size_t>(i)].size() != rows.size()) {
        throw Error(ErrorCode::kSpecInvalid, path + ": projection " + key + " is not square");
      }
      for (Eigen::Index c = 0; c < dim; ++c) m(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    }
    w.user[n] = std::move(m);
  }
  if (w.user.empty()) throw Error(ErrorCode::kSpecInvalid, path + ": no projections");
  return w;
}

double berg_bound(int n) { return 2.0 * std::sin(kPi / (2.0 * (n + 1))); }
double berg_commutator_exact(int n) { return std::sin(kPi / (2.0 * (n + 1))); }

SparseOp group_qd_witness(const GroupTable& group, const QDWitness& witness, int n) {
  if (n < 1) throw Error(ErrorCode::kUnsupportedWitness, "witness index must be >= 1");
  switch (witness.strategy) {
    case WitnessStrategy::kFull:
      if (group.windowed()) {
        throw Error(ErrorCode::kInfiniteGroupWithFull, "the identity witness needs a finite group");
      }
      return identity_op(group.size());
    case WitnessStrategy::kBergZ: {
      if (!group.windowed()) throw Error(ErrorCode::kUnsupportedWitness, "the rotation witness needs a window of Z");
      const long radius = *group.z_radius();
      if (radius < 2L * n) {
        throw Error(ErrorCode::kWindowTooSmall,
                    "window radius " + std::to_string(radius) + " < 2n = " + std::to_string(2 * n));
      }
      const long m = n, rank = 2 * m + 1, c = m / 2;
      Triplets t;
      for (long i = 0; i < rank; ++i) {
        const double phi = i <= m ? 0.0 : static_cast<double>(i - m) * kPi / (2.0 * static_cast<double>(m + 1));
        const Index a = group.index_of_integer(i - c);
        const Index b = group.index_of_integer(i - rank - c);
        const double ca = std::cos(phi), sb = std::sin(phi);
        t.emplace_back(a, a, ca * ca);
        if (i > m) {
          t.emplace_back(b, b, sb * sb);
          t.emplace_back(a, b, ca * sb);
          t.emplace_back(b, a, ca * sb);
        }
      }
      return square(group.size(), t);
    }
    case WitnessStrategy::kUser: {
      auto it = witness.user.upper_bound(n);
      if (it == witness.user.begin()) {
        throw Error(ErrorCode::kUnsupportedWitness, "no user projection at or below index " + std::to_string(n));
      }
      --it;
      const Eigen::MatrixXd& m = it->second;
      if (static_cast<std::size_t>(m.rows()) != group.size()) {
        throw Error(ErrorCode::kUnsupportedWitness, "user projection has dimension " + std::to_string(m.rows()) +
                                                        ", group has order " + std::to_string(group.size()));
      }
      SparseOp p = m.sparseView(1.0, 0.0);
      if (!is_projection(p)) throw Error(ErrorCode::kUnsupportedWitness, "user witness is not a projection");
      return p;
    }
  }
  throw Error(ErrorCode::kUnsupportedWitness, "unknown strategy");
}

SparseOp group_translation(const GroupTable& group, Index h) {
  Triplets t;
  for (Index x = 0; x < group.size(); ++x) {
    const Index y = group.mul(h, x);
    if (y != kUndefined) t.emplace_back(y, x, 1.0);
  }
  return square(group.size(), t);
}

SparseOp embed_at_subgroup(const InverseSemigroup& s, const MaximalSubgroup& sub, const SparseOp& p) {
  if (static_cast<std::size_t>(p.rows()) != sub.elements.size()) {
    throw Error(ErrorCode::kUnsupportedWitness, "witness dimension does not match the subgroup at " +
                                                    s.label(sub.idempotent));
  }
  Triplets t;
  for (int k = 0; k < p.outerSize(); ++k) {
    for (SparseOp::InnerIterator it(p, k); it; ++it) {
      t.emplace_back(sub.elements[static_cast<std::size_t>(it.row())], sub.elements[static_cast<std::size_t>(it.col())],
                     it.value());
    }
  }
  return square(s.size(), t);
}

LinOp conjugated_projection(const InverseSemigroup& s, const GreenClasses& g, const HClassBijection& bij, Index e,
                            Index f, const SparseOp& p_embedded) {
  for (Index x : {e, f}) {
    if (x >= s.size() || !s.is_idempotent(x) || g.d_class[x] != bij.d_class) {
      throw Error(ErrorCode::kBadIdempotent, "not an idempotent of the D-class of " + s.label(bij.e0));
    }
  }
  const Index e0 = bij.e0;
  for (int k = 0; k < p_embedded.outerSize(); ++k) {
    for (SparseOp::InnerIterator it(p_embedded, k); it; ++it) {
      const auto x = static_cast<Index>(it.row()), y = static_cast<Index>(it.col());
      if (it.value() != 0.0 && (s.source(x) != e0 || s.range(x) != e0 || s.source(y) != e0 || s.range(y) != e0)) {
        throw Error(ErrorCode::kUnsupportedWitness, "witness is not supported on the subgroup at " + s.label(e0));
      }
    }
  }
  if (!is_projection(p_embedded)) throw Error(ErrorCode::kUnsupportedWitness, "witness is not a projection");

  const SparseOp vf = left_regular(s, bij.connector[f]).matrix;
  const SparseOp we = right_regular(s, bij.connector[e]).matrix;
  const SparseOp vft = vf.transpose(), wet = we.transpose();
  const SparseOp p0f = vf * p_embedded * vft;
  const SparseOp pef = we * p0f * wet;

  if (!is_projection(pef)) throw Error(ErrorCode::kSelfCheckFailed, "conjugated witness is not a projection");
  for (int k = 0; k < pef.outerSize(); ++k) {
    for (SparseOp::InnerIterator it(pef, k); it; ++it) {
      const auto x = static_cast<Index>(it.row());
      if (std::abs(it.value()) > kExact && (s.source(x) != e || s.range(x) != f)) {
        throw Error(ErrorCode::kSelfCheckFailed, "conjugated witness leaves its H-class");
      }
    }
  }
  const SparseOp lhs1 = vf * p_embedded, rhs1 = p0f * vf;
  const SparseOp lhs2 = we * p0f, rhs2 = pef * we;
  if (max_abs_entry(lhs1 - rhs1) > kExact || max_abs_entry(lhs2 - rhs2) > kExact) {
    throw Error(ErrorCode::kSelfCheckFailed, "connecting elements do not intertwine the witness");
  }
  return LinOp{pef, true, true};
}

DClassQD dclass_qd_projection(const InverseSemigroup& s, const GreenClasses& g, std::uint32_t d,
                              const SparseOp& p_group) {
  if (d >= g.num_d) throw Error(ErrorCode::kBadIdempotent, "no such D-class");
  DClassQD out;
  out.d = d;
  out.e0 = g.d_idempotents[d].front();
  out.bijection = hclass_bijection(s, g, out.e0);
  const SparseOp p = embed_at_subgroup(s, g.subgroup_at(out.e0), p_group);
  out.q = SparseOp(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(s.size()));
  for (Index e : g.d_idempotents[d]) {
    for (Index f : g.d_idempotents[d]) {
      SparseOp piece = conjugated_projection(s, g, out.bijection, e, f, p).matrix;
      out.q += piece;
      out.pieces.emplace(std::make_pair(e, f), std::move(piece));
    }
  }
  if (!is_projection(out.q)) throw Error(ErrorCode::kSelfCheckFailed, "D-class projection is not a projection");
  out.rank = static_cast<std::size_t>(std::llround(trace(out.q)));
  return out;
}

double decomposed_commutator(const InverseSemigroup& s, const DClassQD& dq, Index elem) {
  const SparseOp v = left_regular(s, elem).matrix;
  const Index src = s.source(elem);
  double best = 0;
  for (const auto& [key, piece] : dq.pieces) {
    const auto [e, f] = key;
    if (s.mul(f, src) != f) continue;
    const Index moved = s.mul(elem, f, s.star(elem));
    if (moved == kUndefined) continue;
    auto it = dq.pieces.find({e, moved});
    if (it == dq.pieces.end()) throw Error(ErrorCode::kSelfCheckFailed, "s f s* left the D-class");
    const SparseOp diff = SparseOp(v * piece) - SparseOp(it->second * v);
    best = std::max(best, opnorm(diff));
  }
  return best;
}

GlobalQD global_qd_projection(const InverseSemigroup& s, const GreenClasses& g, const QDOptions& options) {
  if (options.n_max < 1) throw Error(ErrorCode::kUnsupportedWitness, "n-max must be >= 1");
  const bool brandt_window = s.windowed() && s.brandt_layout();
  if (s.windowed() && !brandt_window) throw Error(ErrorCode::kUnsupported, "windowed semigroup without layout");
  std::vector<Index> elements = options.elements;
  if (elements.empty()) {
    if (brandt_window) {
      elements = brandt_elements_near_unit(s, 1, true);
    } else {
      for (Index x = 0; x < s.size(); ++x) elements.push_back(x);
    }
  }
  std::vector<Index> probes = options.probes;
  if (probes.empty()) {
    if (brandt_window) {
      probes = brandt_elements_near_unit(s, 2, true);
    } else {
      for (Index x = 0; x < s.size(); ++x) probes.push_back(x);
    }
  }

  GlobalQD out;
  QDReport& rep = out.report;
  rep.strategy = options.witness.strategy;
  rep.d_classes = g.num_d;
  for (const auto& ids : g.d_idempotents) rep.max_idempotents_per_class = std::max(rep.max_idempotents_per_class, ids.size());
  for (const auto& m : g.max_subgroups) rep.subgroups_amenable = rep.subgroups_amenable && m.table.amenable();
  for (Index x : elements) rep.element_labels.push_back(s.label(x));

  // Witness per D-class: the requested one on windows of Z, a user matrix
  // where its dimension fits, the identity otherwise.
  struct ClassWitness {
    const GroupTable* group;
    QDWitness witness;
    int cap;
  };
  std::vector<ClassWitness> cw;
  int cap_max = options.n_max;
  for (std::uint32_t d = 0; d < g.num_d; ++d) {
    const GroupTable& grp = g.subgroup_at(g.d_idempotents[d].front()).table;
    ClassWitness c{&grp, QDWitness::full(), options.n_max};
    if (grp.windowed()) {
      c.witness = options.witness;
      if (options.witness.strategy == WitnessStrategy::kBergZ) c.cap = static_cast<int>(*grp.z_radius() / 2);
    } else if (options.witness.strategy == WitnessStrategy::kUser && !options.witness.user.empty() &&
               static_cast<std::size_t>(options.witness.user.begin()->second.rows()) == grp.size()) {
      c.witness = options.witness;
      c.cap = std::max(options.n_max, options.witness.user.rbegin()->first);
    }
    cap_max = std::max(cap_max, c.cap);
    cw.push_back(std::move(c));
  }

  std::map<std::pair<std::uint32_t, int>, DClassQD> cache;
  auto class_projection = [&](std::uint32_t d, int index) -> const DClassQD& {
    const int eff = std::min(index, cw[d].cap);
    const auto key = std::make_pair(d, cw[d].witness.strategy == WitnessStrategy::kFull ? 0 : eff);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, dclass_qd_projection(s, g, d, group_qd_witness(*cw[d].group, cw[d].witness, eff))).first;
    }
    return it->second;
  };
  std::vector<SparseOp> vs;
  for (Index x : elements) vs.push_back(left_regular(s, x).matrix);

  std::size_t last_rank = 0;
  for (int n = 1; n <= options.n_max; ++n) {
    const double target = 1.0 / n;
    QDStep step;
    step.n = n;
    SparseOp q;
    for (int index = n;; ++index) {
      q = SparseOp(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(s.size()));
      for (std::uint32_t d = 0; d < g.num_d; ++d) q += class_projection(d, index).q;
      step.commutators.clear();
      for (const auto& v : vs) step.commutators.push_back(opnorm(commutator(v, q)));
      step.max_commutator =
          step.commutators.empty() ? 0.0 : *std::max_element(step.commutators.begin(), step.commutators.end());
      step.witness_index = index;
      step.schedule_met = step.max_commutator <= target + options.tol;
      if (!options.enforce_schedule || step.schedule_met || index >= cap_max) break;
    }
    // Per-class norms and their decomposition over idempotent pairs.
    step.class_max_commutator = 0;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      double class_max = 0;
      for (std::uint32_t d = 0; d < g.num_d; ++d) {
        const DClassQD& dq = class_projection(d, step.witness_index);
        const double whole = opnorm(commutator(vs[i], dq.q));
        const double parts = decomposed_commutator(s, dq, elements[i]);
        if (!close(whole, parts, options.tol)) {
          throw Error(ErrorCode::kSelfCheckFailed, "commutator of " + s.label(elements[i]) +
                                                       " does not match its decomposition over idempotent pairs");
        }
        class_max = std::max(class_max, whole);
      }
      if (!close(class_max, step.commutators[i], options.tol)) {
        throw Error(ErrorCode::kSelfCheckFailed,
                    "global commutator of " + s.label(elements[i]) + " differs from the per-class maximum");
      }
      step.class_max_commutator = std::max(step.class_max_commutator, class_max);
    }
    if (!is_projection(q)) throw Error(ErrorCode::kSelfCheckFailed, "q_n is not a projection");
    step.rank = static_cast<std::size_t>(std::llround(trace(q)));
    for (Index x : elements) step.defect = std::max(step.defect, window_defect(s, x, q));
    step.identity = !s.windowed() && max_abs_entry(SparseOp(q - identity_op(s.size()))) <= kExact;
    const auto res = residuals(q, probes);
    step.probes_fixed = static_cast<std::size_t>(std::count_if(res.begin(), res.end(), [](double r) { return r <= kExact; }));
    step.probe_residual = res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
    if (step.rank < last_rank) throw Error(ErrorCode::kSelfCheckFailed, "witness ranks decreased");
    last_rank = step.rank;
    if (!step.schedule_met) {
      rep.schedule_achievable = false;
      rep.best_bound = std::max(rep.best_bound, step.max_commutator);
    }
    rep.steps.push_back(std::move(step));
    if (n == options.n_max) out.q = q;
  }
  return out;
}

nlohmann::json QDReport::to_json() const {
  nlohmann::json steps_json = nlohmann::json::array();
  for (const auto& st : steps) {
    nlohmann::json per = nlohmann::json::object();
    for (std::size_t i = 0; i < element_labels.size(); ++i) per[element_labels[i]] = st.commutators[i];
    steps_json.push_back({{"n", st.n},
                          {"witness_index", st.witness_index},
                          {"rank", st.rank},
                          {"max_commutator", st.max_commutator},
                          {"class_max_commutator", st.class_max_commutator},
                          {"target", 1.0 / st.n},
                          {"schedule_met", st.schedule_met},
                          {"defect", st.defect},
                          {"identity", st.identity},
                          {"probes_fixed", st.probes_fixed},
                          {"probe_residual", st.probe_residual},
                          {"commutators", per}});
  }
  return {{"format_version", 1},
          {"strategy", to_string(strategy)},
          {"steps", steps_json},
          {"schedule_achievable", schedule_achievable},
          {"best_bound", best_bound},
          {"hypotheses",
           {{"subgroups_amenable", subgroups_amenable},
            {"max_idempotents_per_d_class", max_idempotents_per_class},
            {"d_classes", d_classes},
            {"finitely_many_idempotents_per_d_class", true}}}};
}

std::string QDReport::to_csv() const {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  };
  std::ostringstream os;
  os.precision(17);
  os << "n,witness_index,rank,max_commutator,defect,schedule_met";
  for (const auto& l : element_labels) os << ',' << quote("comm " + l);
  os << '\n';
  for (const auto& st : steps) {
    os << st.n << ',' << st.witness_index << ',' << st.rank << ',' << st.max_commutator << ',' << st.defect << ','
       << (st.schedule_met ? 1 : 0);
    for (double c : st.commutators) os << ',' << c;
    os << '\n';
  }
  return os.str();
}

IsolatedProjection isolated_subgroup_projection(const InverseSemigroup& s, const GreenClasses& g, Index e,
                                                std::uint64_t seed, int samples) {
  const IsolationCertificate cert = isolated_certificate(s, e);
  IsolatedProjection out;
  out.cover = cert.cover;
  const std::size_t n = s.size();
  out.p = SparseOp(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Index f : cert.cover) {
    const SparseOp v = left_regular(s, f).matrix;
    SparseOp pv = out.p * v;
    out.p = SparseOp(out.p + v) - pv;
    out.p.prune(0.0);
  }
  out.q = SparseOp(left_regular(s, e).matrix - out.p);
  out.q.prune(0.0);
  if (!is_projection(out.p) || !is_projection(out.q)) {
    throw Error(ErrorCode::kSelfCheckFailed, "isolation recursion did not give projections");
  }
  std::vector<Index> r_class;
  for (Index x = 0; x < n; ++x) {
    if (s.range(x) == e) r_class.push_back(x);
  }
  out.range_is_r_class = max_abs_entry(SparseOp(out.q - diagonal_projection(n, r_class))) == 0.0;

  const MaximalSubgroup& sub = g.subgroup_at(e);
  std::vector<SparseOp> vh;
  for (Index h : sub.elements) {
    vh.push_back(left_regular(s, h).matrix);
    out.max_subgroup_commutator = std::max(out.max_subgroup_commutator, opnorm(commutator(out.q, vh.back())));
  }
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    SparseOp a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    SparseOp lambda(static_cast<Eigen::Index>(sub.table.size()), static_cast<Eigen::Index>(sub.table.size()));
    for (Index h = 0; h < sub.elements.size(); ++h) {
      const double c = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
      a += c * vh[h];
      lambda += c * group_translation(sub.table, h);
    }
    const double lhs = opnorm(SparseOp(a * out.q));
    const double rhs = opnorm(lambda);
    if (rhs > 0) out.representation_ratio = std::max(out.representation_ratio, lhs / rhs);
    ++out.samples;
  }
  return out;
}

LinOp minimal_qd_projection(const InverseSemigroup& s, const GreenClasses& g, const std::vector<Index>& f_set,
                            const SparseOp& p_group) {
  bool brandt = s.brandt_layout().has_value();
  if (!brandt) {
    try {
      brandt = grpdmin_check(s, g).brandt;
    } catch (const Error&) {
      brandt = false;
    }
  }
  if (!brandt) throw Error(ErrorCode::kNotBrandt, "minimal projections need a Brandt semigroup");
  std::vector<Index> ids;
  for (Index e : s.idempotents()) {
    if (e != s.zero()) ids.push_back(e);
  }
  if (ids.empty()) throw Error(ErrorCode::kNotBrandt, "no non-zero idempotent");
  const Index e0 = ids.front();
  const MaximalSubgroup& sub = g.subgroup_at(e0);
  const HClassBijection bij = hclass_bijection(s, g, e0);
  // (f, 1, e0): the element of H_{e0}^f sent to the unit by the bijection.
  auto connector = [&](Index f) -> Index {
    if (const auto& layout = s.brandt_layout()) {
      const std::size_t pf = (f - 1) % layout->k, p0 = (e0 - 1) % layout->k;
      return layout->index(pf, layout->group.unit(), p0);
    }
    return bij.connector[f];
  };
  HClassBijection unit_connectors = bij;
  for (Index f : ids) unit_connectors.connector[f] = connector(f);

  const SparseOp p = embed_at_subgroup(s, sub, p_group);
  SparseOp q = left_regular(s, s.zero()).matrix;
  for (Index e : f_set) {
    for (Index f : f_set) q += conjugated_projection(s, g, unit_connectors, e, f, p).matrix;
  }
  if (!is_projection(q)) throw Error(ErrorCode::kSelfCheckFailed, "minimal projection is not a projection");
  return LinOp{q, true, true};
}

NonflReport qd_nonfl_projection(const QuotientTower& tower, int n, std::size_t m, int r, NonflWeights weights) {
  if (n < 1 || r < 1) throw Error(ErrorCode::kWindowTooSmall, "n and r must be positive");
  if (m == 0 || m >= tower.levels.size()) throw Error(ErrorCode::kDegenerateLevel, "level m must be in 1..top");
  const int need = n + std::max(r, 2);
  if (need > tower.ball.radius()) {
    throw Error(ErrorCode::kWindowTooSmall, "ball radius " + std::to_string(tower.ball.radius()) + " < " +
                                                std::to_string(need));
  }
  if (!verify_ball_injectivity(tower, m, need)) {
    throw Error(ErrorCode::kInjectivityUnverified,
                "level " + std::to_string(m) + " is not injective on the ball of radius " + std::to_string(need));
  }
  NonflReport rep;
  rep.n = n;
  rep.m = static_cast<int>(m);
  rep.r = r;
  rep.weights = weights;
  rep.injectivity_radius = injectivity_radius(tower, m);

  // Basis: lower levels, then (delta_x, delta_{q_m(x)}) for x in B_{n+2}.
  std::vector<std::unordered_map<std::string, Index>> lower_index(m);
  std::vector<std::size_t> offset(m + 1, 0);
  auto key = [](const Perm& p) { return std::string(reinterpret_cast<const char*>(p.data()), p.size() * sizeof(p[0])); };
  for (std::size_t k = 0; k < m; ++k) {
    const auto& lv = tower.levels[k];
    if (!lv.elements) throw Error(ErrorCode::kTooLarge, "level " + std::to_string(k) + " is too large to list");
    for (Index i = 0; i < lv.elements->size(); ++i) lower_index[k][key((*lv.elements)[i])] = i;
    offset[k + 1] = offset[k] + lv.elements->size();
  }
  const std::size_t lower = offset[m];
  const std::size_t ball = tower.ball.ball_size(n + 2);
  const std::size_t dim = lower + 2 * ball;
  rep.ball_size = ball;
  rep.window_dimension = dim;
  auto free_at = [&](Index x) { return static_cast<Index>(lower + 2 * x); };
  auto quot_at = [&](Index x) { return static_cast<Index>(lower + 2 * x + 1); };

  auto weight_pair = [&](int len) {
    const double a = std::sqrt(static_cast<double>(n - len) / n), b = std::sqrt(static_cast<double>(len) / n);
    // (coefficient on delta_x, coefficient on delta_{q_m(x)})
    return weights == NonflWeights::kCorrected ? std::make_pair(a, b) : std::make_pair(b, a);
  };

  Triplets pt, wt;
  for (std::size_t i = 0; i < lower; ++i) pt.emplace_back(i, i, 1.0);
  for (Index x = 0; x < ball; ++x) {
    const int len = tower.ball.length(x);
    if (len <= n) {
      const auto [a, b] = weight_pair(len);
      pt.emplace_back(free_at(x), free_at(x), a * a);
      pt.emplace_back(quot_at(x), quot_at(x), b * b);
      pt.emplace_back(free_at(x), quot_at(x), a * b);
      pt.emplace_back(quot_at(x), free_at(x), a * b);
      if (a != 0.0) wt.emplace_back(free_at(x), x, a);
      if (b != 0.0) wt.emplace_back(quot_at(x), x, b);
    } else {
      pt.emplace_back(quot_at(x), quot_at(x), 1.0);
      wt.emplace_back(quot_at(x), x, 1.0);
    }
  }
  const SparseOp p = square(dim, pt);
  SparseOp w(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(ball));
  w.setFromTriplets(wt.begin(), wt.end());
  const SparseOp wtw = SparseOp(w.transpose()) * w;
  rep.orthogonality_deviation = max_abs_entry(SparseOp(wtw - identity_op(ball)));
  if (rep.orthogonality_deviation > kExact) throw Error(ErrorCode::kSelfCheckFailed, "w-vectors are not orthonormal");
  if (!is_projection(p)) throw Error(ErrorCode::kSelfCheckFailed, "window projection is not a projection");
  rep.rank = static_cast<std::size_t>(std::llround(trace(p)));

  for (std::uint8_t l = 0; l < 4; ++l) {
    Triplets vt;
    for (std::size_t k = 0; k < m; ++k) {
      const Perm g = tower.letter(k, l);
      const auto& el = *tower.levels[k].elements;
      for (Index i = 0; i < el.size(); ++i) {
        vt.emplace_back(offset[k] + lower_index[k].at(key(compose(g, el[i]))), offset[k] + i, 1.0);
      }
    }
    for (Index x = 0; x < ball; ++x) {
      const Index y = tower.ball.left_multiply(l, x);
      if (y == kUndefined || y >= ball) continue;
      vt.emplace_back(free_at(y), free_at(x), 1.0);
      vt.emplace_back(quot_at(y), quot_at(x), 1.0);
    }
    const SparseOp v = square(dim, vt);
    rep.commutators.push_back(opnorm(commutator(v, p)));

    // The vector form |v_s w_x - w_{sx}| inside the window.
    for (Index x = 0; x < ball; ++x) {
      const Index y = tower.ball.left_multiply(l, x);
      if (y == kUndefined || y >= ball) continue;
      const Eigen::VectorXd moved = v * Eigen::VectorXd(w.col(x));
      const Eigen::VectorXd target = Eigen::VectorXd(w.col(y));
      rep.vector_defect = std::max(rep.vector_defect, (moved - target).norm());
    }
  }
  rep.max_commutator = *std::max_element(rep.commutators.begin(), rep.commutators.end());
  rep.bound = static_cast<double>(r) / n;
  rep.passes = rep.max_commutator <= rep.bound + 1e-9;
  return rep;
}

nlohmann::json NonflReport::to_json() const {
  return {{"format_version", 1},
          {"n", n},
          {"m", m},
          {"r", r},
          {"weights", weights == NonflWeights::kCorrected ? "corrected" : "as_printed"},
          {"ball_size", ball_size},
          {"window_dimension", window_dimension},
          {"rank", rank},
          {"orthogonality_deviation", orthogonality_deviation},
          {"commutators", {{"a", commutators[0]}, {"a^-1", commutators[1]}, {"b", commutators[2]}, {"b^-1", commutators[3]}}},
          {"max_commutator", max_commutator},
          {"vector_defect", vector_defect},
          {"bound", bound},
          {"passes", passes},
          {"injectivity_radius", injectivity_radius}};
}

}  // namespace isgqd
