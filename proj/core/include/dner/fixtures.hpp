#ifndef DNER_FIXTURES_HPP
#define DNER_FIXTURES_HPP

#include <cstdint>
#include <map>

#include "dner/corpus.hpp"

namespace dner {

// Synthetic corpus generator over a closed 40-word vocabulary with
// category-typed location/feeling words, so models with plain token features
// can learn the shapes. Each sentence targets one structural category:
//
//   ContinuousIsolated   disjoint continuous mentions only
//   ContinuousOverlap    continuous mentions sharing a token (nested/crossing)
//   NoOverlap            one discontinuous mention, nothing shared
//   LeftOverlap          mentions sharing their first component
//   RightOverlap         mentions sharing their last component
//   MultiOverlap         four mentions in a crossing composition
//
// Every discontinuous mention in a generated sentence classifies to the
// sentence's target category; overlap targets additionally carry the
// continuous partner mentions that make the sharing real.
struct FixtureSpec {
  std::map<OverlapCategory, double> proportions;  // must sum to 1
  std::size_t sentences = 0;
  std::uint64_t seed = 1;
  std::string doc_id = "fix";
};

Corpus generate_fixtures(const FixtureSpec& spec);

// Convenience: `count` sentences of a single category.
Corpus generate_category(OverlapCategory category, std::size_t count, std::uint64_t seed);

}  // namespace dner

#endif
