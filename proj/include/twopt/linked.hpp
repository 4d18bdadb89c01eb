#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "twopt/tour.hpp"

namespace twopt {

/// Linkage of two 2-changes. With the first change replacing {1,2},{3,4} by
/// {1,3},{2,4} and the second removing {1,3} together with a second edge f:
/// Type0 when f is disjoint from {2,4}; Type1a/Type1b when f = {2,5} and the
/// second change adds {1,5},{2,3} / {1,2},{3,5}; Type2 when f = {2,4} (only
/// four vertices involved).
enum class LinkedPairType { type0, type1a, type1b, type2, not_linked };

std::string_view linked_pair_type_name(LinkedPairType t);

/// Classifies an unordered pair of changes. The shared edge may be added by
/// either change and removed by the other; edges are compared undirected.
LinkedPairType classify_linked_pair(const TwoChange& c1, const TwoChange& c2);

constexpr bool is_type01(LinkedPairType t) {
  return t == LinkedPairType::type0 || t == LinkedPairType::type1a || t == LinkedPairType::type1b;
}

/// ceil(t/7 - 3n/28), floored at zero.
std::size_t linked_pair_bound(std::size_t t, std::size_t n);

struct LinkedPair {
  std::size_t first = 0;   ///< index into the change sequence
  std::size_t second = 0;  ///< index into the change sequence, first < second
  LinkedPairType type = LinkedPairType::not_linked;
};

/// A certificate: type-0/1 linked pairs, no change used twice.
struct DisjointLinkedPairs {
  std::vector<LinkedPair> pairs;
  bool used_matching = false;  ///< true when the maximum-matching fallback ran

  std::size_t count() const noexcept { return pairs.size(); }
};

/// Disjoint type-0/1 pairs in a change sequence. The default is a greedy
/// matcher over the sequence (each unmatched change takes the earliest later
/// unmatched partner). When `n` is given and greedy falls short of
/// linked_pair_bound(t, n), a maximum-cardinality matching over the linkage
/// graph replaces it for sequences of up to `matching_limit` changes.
DisjointLinkedPairs count_disjoint_linked_pairs(std::span<const TwoChange> changes,
                                                std::size_t n = 0,
                                                std::size_t matching_limit = SIZE_MAX);

/// Greedy and exact matchers exposed separately for tests and diagnostics.
DisjointLinkedPairs greedy_linked_pairs(std::span<const TwoChange> changes);
DisjointLinkedPairs max_linked_pairs(std::span<const TwoChange> changes);

/// True iff the certificate only uses type-0/1 pairs and never repeats a change.
bool is_valid_certificate(std::span<const TwoChange> changes, const DisjointLinkedPairs& cert);

}  // namespace twopt
