#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "isgqd/constructions.hpp"
#include "isgqd/green.hpp"
#include "isgqd/operators.hpp"

namespace isgqd {

enum class WitnessStrategy { kFull, kBergZ, kUser };
std::string to_string(WitnessStrategy s);

/// Finite-rank projections on l2 of a group (or of a window of Z), indexed by
/// n = 1, 2, ...
struct QDWitness {
  WitnessStrategy strategy = WitnessStrategy::kFull;
  /// kUser: projection per index on the group basis. An index without an
  /// entry uses the largest listed index below it.
  std::map<int, Eigen::MatrixXd> user;

  static QDWitness full() { return {}; }
  static QDWitness berg() { return {WitnessStrategy::kBergZ, {}}; }
  /// {"format_version": 1, "projections": {"1": [[...], ...], ...}}
  static QDWitness from_file(const std::string& path);
};

/// kFull: identity. kBergZ: rank 2n+1, built from basis vectors of the
/// window rotated across a collar of length n in steps of pi/(2(n+1));
/// needs a Z window of radius >= 2n. kUser: the supplied matrix, which must
/// be a projection.
SparseOp group_qd_witness(const GroupTable& group, const QDWitness& witness, int n);
/// The guaranteed bound 2 sin(pi/(2(n+1))) and the exact commutator of the
/// rotation witness with the shift, sin(pi/(2(n+1))).
double berg_bound(int n);
double berg_commutator_exact(int n);
/// Left translation by group element h on the group basis, clipped at a
/// window edge.
SparseOp group_translation(const GroupTable& group, Index h);

/// A group-basis operator placed on l2(H) for the subgroup H at e0.
SparseOp embed_at_subgroup(const InverseSemigroup& s, const MaximalSubgroup& sub, const SparseOp& p);

/// p^{e,f} = w_{r_e} v_{r_f} p v_{r_f}* w_{r_e}*, with r the connectors of
/// `bij` and p already embedded at e0. Checks the result is a projection
/// onto a subspace of l2(H_e^f) and that v_{r_f} p = p^{e0,f} v_{r_f},
/// w_{r_e} p^{e0,f} = p^{e,f} w_{r_e}.
LinOp conjugated_projection(const InverseSemigroup& s, const GreenClasses& g, const HClassBijection& bij, Index e,
                            Index f, const SparseOp& p_embedded);

struct DClassQD {
  std::uint32_t d = 0;
  Index e0 = 0;
  HClassBijection bijection;
  std::map<std::pair<Index, Index>, SparseOp> pieces;  // (e, f) -> p^{e,f}
  SparseOp q;
  std::size_t rank = 0;
};
/// q^D = sum over idempotent pairs of D of p^{e,f}; `p_group` lives on the
/// group basis of the subgroup at the smallest idempotent of D.
DClassQD dclass_qd_projection(const InverseSemigroup& s, const GreenClasses& g, std::uint32_t d,
                              const SparseOp& p_group);
/// max over e in E_D and f <= s*s in E_D of |v_s p^{e,f} - p^{e,sfs*} v_s|.
double decomposed_commutator(const InverseSemigroup& s, const DClassQD& dq, Index elem);

struct QDOptions {
  QDWitness witness;
  int n_max = 4;
  /// Advance each witness index until the 1/n bound holds.
  bool enforce_schedule = true;
  /// Elements whose commutators are measured. Empty: all of S, or on a
  /// windowed Brandt semigroup the elements with group part in {0, 1, -1}.
  std::vector<Index> elements;
  /// Window vectors whose strong convergence is tracked. Empty: all of S,
  /// or on a windowed Brandt semigroup those with group part in [-2, 2].
  std::vector<Index> probes;
  double tol = 1e-9;
};

struct QDStep {
  int n = 0;
  int witness_index = 0;
  std::size_t rank = 0;
  double max_commutator = 0;
  double class_max_commutator = 0;
  double defect = 0;
  bool schedule_met = false;
  bool identity = false;
  std::size_t probes_fixed = 0;
  double probe_residual = 0;
  std::vector<double> commutators;  // per measured element
};

struct QDReport {
  WitnessStrategy strategy = WitnessStrategy::kFull;
  std::vector<std::string> element_labels;
  std::vector<QDStep> steps;
  bool schedule_achievable = true;
  double best_bound = 0;
  /// Finite-scale checks of the hypotheses: amenable subgroups, finitely many idempotents per D-class.
  bool subgroups_amenable = true;
  std::size_t max_idempotents_per_class = 0;
  std::size_t d_classes = 0;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct GlobalQD {
  SparseOp q;
  QDReport report;
};

/// q_n = sum of q^D over all D-classes, for n = 1..n_max; the returned
/// projection is the one for n_max. Checks for every n and measured s that
/// |[v_s, q_n]| equals the maximum of the per-class norms and that each of
/// those equals its decomposed form. Schedule failures are reported, not
/// thrown.
GlobalQD global_qd_projection(const InverseSemigroup& s, const GreenClasses& g, const QDOptions& options);

struct IsolatedProjection {
  std::vector<Index> cover;
  SparseOp p, q;
  bool range_is_r_class = false;
  double max_subgroup_commutator = 0;
  /// Largest ratio |(sum a_h v_h) q| / |sum a_h lambda_h| over samples.
  double representation_ratio = 0;
  int samples = 0;
};
/// p joins v_f over the cover of e, q = v_e - p.
IsolatedProjection isolated_subgroup_projection(const InverseSemigroup& s, const GreenClasses& g, Index e,
                                                std::uint64_t seed = 1, int samples = 16);

/// q_n = v_0 + sum_{e,f in F} w_{(e,1,e0)} v_{(f,1,e0)} p v*_{(f,1,e0)} w*_{(e,1,e0)}
/// for a Brandt semigroup, e0 the smallest non-zero idempotent and F given
/// as idempotent indices. Throws kNotBrandt otherwise.
LinOp minimal_qd_projection(const InverseSemigroup& s, const GreenClasses& g, const std::vector<Index>& f_set,
                            const SparseOp& p_group);

enum class NonflWeights { kCorrected, kAsPrinted };

struct NonflReport {
  int n = 0, m = 0, r = 0;
  NonflWeights weights = NonflWeights::kCorrected;
  std::size_t ball_size = 0;
  std::size_t window_dimension = 0;
  std::size_t rank = 0;
  double orthogonality_deviation = 0;
  std::vector<double> commutators;  // a, a^-1, b, b^-1
  double max_commutator = 0;
  double vector_defect = 0;
  double bound = 0;
  bool passes = false;
  int injectivity_radius = 0;

  nlohmann::json to_json() const;
};

/// Requires q_m injective on B_{n+r} (kInjectivityUnverified) and a ball of
/// radius >= n+r, n+2 (kWindowTooSmall). The commutators are exact: outside
/// the window of B_{n+2} the projection is the one onto the quotient basis
/// vectors, which the generators permute.
NonflReport qd_nonfl_projection(const QuotientTower& tower, int n, std::size_t m, int r,
                                NonflWeights weights = NonflWeights::kCorrected);

}  // namespace isgqd
