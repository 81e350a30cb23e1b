#include "isgqd/semigroup.hpp"

#include <algorithm>
#include <random>

#include "isgqd/error.hpp"
#include "isgqd/parallel.hpp"

namespace isgqd {

namespace {

constexpr std::size_t kSampledTriples = 3'000'000;

}  // namespace

InverseSemigroup::InverseSemigroup(std::vector<std::string> labels, std::vector<Index> table, Index zero,
                                   Validation validation, bool windowed)
    : labels_(std::move(labels)), table_(std::move(table)), zero_(zero), windowed_(windowed) {
  validate(validation);
}

InverseSemigroup InverseSemigroup::from_table(std::vector<std::string> labels,
                                              const std::vector<std::vector<Index>>& mul, Index zero) {
  const std::size_t n = labels.size();
  if (mul.size() != n) throw Error(ErrorCode::kBadTable, "table has " + std::to_string(mul.size()) +
                                                            " rows for " + std::to_string(n) + " elements");
  std::vector<Index> flat;
  flat.reserve(n * n);
  for (const auto& row : mul) {
    if (row.size() != n) throw Error(ErrorCode::kBadTable, "table is not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return InverseSemigroup(std::move(labels), std::move(flat), zero);
}

Index InverseSemigroup::mul(Index a, Index b, Index c) const {
  const Index ab = mul(a, b);
  return ab == kUndefined ? kUndefined : mul(ab, c);
}

std::optional<Index> InverseSemigroup::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Index>(it - labels_.begin());
}

void InverseSemigroup::validate(Validation validation) {
  const std::size_t n = labels_.size();
  if (n == 0) throw Error(ErrorCode::kBadTable, "empty table");
  if (table_.size() != n * n) throw Error(ErrorCode::kBadTable, "table is not square");
  for (Index v : table_) {
    if (v == kUndefined) {
      if (!windowed_) throw Error(ErrorCode::kBadTable, "undefined product in a finite table");
    } else if (v >= n) {
      throw Error(ErrorCode::kBadTable, "table entry " + std::to_string(v) + " out of range");
    }
  }
  if (zero_ >= n) throw Error(ErrorCode::kBadZero, "zero index " + std::to_string(zero_) + " out of range");
  for (Index s = 0; s < n; ++s) {
    if (mul(zero_, s) != zero_ || mul(s, zero_) != zero_) {
      throw Error(ErrorCode::kBadZero, labels_[zero_] + " does not absorb " + labels_[s]);
    }
  }

  // Associativity: first failing triple in index order, so the message is
  // deterministic regardless of thread count.
  auto check_triple = [&](Index a, Index b, Index c) {
    const Index l = mul(a, b, c);
    const Index bc = mul(b, c);
    const Index r = bc == kUndefined ? kUndefined : mul(a, bc);
    return l == kUndefined || r == kUndefined || l == r;
  };
  auto fail_triple = [&](Index a, Index b, Index c) {
    throw Error(ErrorCode::kNotAssociative,
                "(" + labels_[a] + "," + labels_[b] + "," + labels_[c] + ")");
  };
  if (validation == Validation::kFull || n * n * n <= kSampledTriples) {
    std::vector<std::optional<std::pair<Index, Index>>> first_bad(n);
    parallel_for(n, [&](std::size_t i) {
      const auto a = static_cast<Index>(i);
      for (Index b = 0; b < n && !first_bad[a]; ++b) {
        for (Index c = 0; c < n; ++c) {
          if (!check_triple(a, b, c)) {
            first_bad[a] = std::make_pair(b, c);
            break;
          }
        }
      }
    });
    for (Index a = 0; a < n; ++a) {
      if (first_bad[a]) fail_triple(a, first_bad[a]->first, first_bad[a]->second);
    }
  } else {
    std::mt19937_64 rng(0x5eedf00dULL);
    std::uniform_int_distribution<Index> pick(0, static_cast<Index>(n - 1));
    for (std::size_t i = 0; i < kSampledTriples; ++i) {
      const Index a = pick(rng), b = pick(rng), c = pick(rng);
      if (!check_triple(a, b, c)) fail_triple(a, b, c);
    }
  }

  // Unique inverses.
  star_.assign(n, kUndefined);
  for (Index s = 0; s < n; ++s) {
    for (Index t = 0; t < n; ++t) {
      if (mul(s, t, s) == s && mul(t, s, t) == t) {
        if (star_[s] != kUndefined) {
          throw Error(ErrorCode::kNoUniqueInverse,
                      labels_[s] + " has inverses " + labels_[star_[s]] + " and " + labels_[t]);
        }
        star_[s] = t;
      }
    }
    if (star_[s] == kUndefined) throw Error(ErrorCode::kNoUniqueInverse, labels_[s] + " has no inverse");
  }
  for (Index s = 0; s < n; ++s) {
    if (source(s) == kUndefined || range(s) == kUndefined) {
      throw Error(ErrorCode::kBadTable, "s*s or ss* of " + labels_[s] + " leaves the window");
    }
  }

  is_idempotent_.assign(n, false);
  for (Index s = 0; s < n; ++s) {
    if (mul(s, s) == s) {
      is_idempotent_[s] = true;
      idempotents_.push_back(s);
    }
  }
  for (Index e : idempotents_) {
    for (Index f : idempotents_) {
      if (mul(e, f) == kUndefined || mul(e, f) != mul(f, e)) {
        throw Error(ErrorCode::kIdempotentsDontCommute, labels_[e] + " and " + labels_[f]);
      }
    }
  }

  for (Index u = 0; u < n && !unit_; ++u) {
    bool ok = true;
    for (Index s = 0; s < n && ok; ++s) ok = mul(u, s) == s && mul(s, u) == s;
    if (ok) unit_ = u;
  }
}

}  // namespace isgqd
