// -*- mode: c++ -*-
//
// Discontinuous spans, precedence arrays and precedence array vectors,
// with the four span operators (+  ~relativize  -  reverse-relativize),
// the join operator and the PAV normal form.

#ifndef SEMPARSE_DSPAN_HPP
#define SEMPARSE_DSPAN_HPP

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace semparse {

// Raised when a span operator is applied outside its domain
// (overlapping intervals, subtrahend not covered, bad indexes).
struct UndefinedOperation : std::runtime_error {
  explicit UndefinedOperation(const std::string& what) : std::runtime_error(what) {}
};

// One interval between word boundaries.  Boundary 0 sits to the left of
// the first word, boundary n to the right of the n-th.
struct Interval {
  int begin = 0;
  int end = 0;
  auto operator<=>(const Interval&) const = default;
};

// A list of non-overlapping intervals in one dimension.  The empty
// d-span () marks an inactive dimension.  Proper d-spans have non-zero
// width intervals and real gaps between them; touching or zero-width
// intervals are legal in the type but never appear in parse items.
class DSpan {
 public:
  DSpan() = default;
  explicit DSpan(std::vector<Interval> intervals);

  static DSpan single(int begin, int end) { return DSpan({{begin, end}}); }
  static DSpan parse(const std::string& text);

  const std::vector<Interval>& intervals() const { return iv_; }
  bool is_empty() const { return iv_.empty(); }
  bool proper() const;
  int fan_out() const { return static_cast<int>(iv_.size()); }
  int width() const;
  int leftmost() const;  // begin of first interval; undefined on empty
  bool overlaps(const DSpan& other) const;
  bool covers(const DSpan& other) const;  // other's intervals lie inside this one's

  std::string str() const;  // "(1,3;7,9)", "()"
  auto operator<=>(const DSpan&) const = default;

 private:
  std::vector<Interval> iv_;
};

// Relative order and contiguity of RHS links in one dimension.  Stored
// as runs of link indexes; consecutive runs are separated by a gap.
// Example: [1;2,1] = {{1},{2,1}}.  Empty = inactive dimension.
class PrecedenceArray {
 public:
  PrecedenceArray() = default;
  explicit PrecedenceArray(std::vector<std::vector<int>> runs);

  static PrecedenceArray parse(const std::string& text);

  const std::vector<std::vector<int>>& runs() const { return runs_; }
  bool is_empty() const { return runs_.empty(); }
  int fan_out() const { return static_cast<int>(runs_.size()); }
  std::vector<int> flat() const;            // indexes in order, gaps dropped
  int count_of(int index) const;            // occurrences of a link index
  bool references(int index) const { return count_of(index) > 0; }
  PrecedenceArray relabeled(const std::vector<int>& old_to_new) const;

  std::string str() const;  // "[1;2,1]", "[]"
  auto operator<=>(const PrecedenceArray&) const = default;

 private:
  std::vector<std::vector<int>> runs_;
};

// One precedence array per dimension.
struct Pav {
  std::vector<PrecedenceArray> arrays;

  Pav() = default;
  explicit Pav(std::vector<PrecedenceArray> a) : arrays(std::move(a)) {}

  int dims() const { return static_cast<int>(arrays.size()); }
  int fan_out() const;  // sum of per-array fan-outs
  std::string str() const;  // "[[1,2]|[2,1]]"; inactive dimension serializes empty
  static Pav parse(const std::string& text);
  auto operator<=>(const Pav&) const = default;
};

// --- span operators -------------------------------------------------
//
// concat        a + b     union of intervals, touching intervals merged
// relativize    a ~ b     precedence array of a's and b's intervals (1 = a, 2 = b)
// subtract      nu - tau  sigma such that sigma + tau = nu
// rev_relativize nu / tau (nu - tau) ~ tau
//
// All four throw UndefinedOperation outside their domain.  The try_*
// forms return false instead; the parser uses them on the hot path.

DSpan concat(const DSpan& a, const DSpan& b);
PrecedenceArray relativize(const DSpan& a, const DSpan& b);
DSpan subtract(const DSpan& nu, const DSpan& tau);
PrecedenceArray rev_relativize(const DSpan& nu, const DSpan& tau);

bool try_concat(const DSpan& a, const DSpan& b, DSpan* out);
bool try_relativize(const DSpan& a, const DSpan& b, PrecedenceArray* out);
bool try_subtract(const DSpan& nu, const DSpan& tau, DSpan* out);

// Componentwise vector forms.
std::vector<DSpan> concat(const std::vector<DSpan>& a, const std::vector<DSpan>& b);
Pav relativize(const std::vector<DSpan>& a, const std::vector<DSpan>& b);
std::vector<DSpan> subtract(const std::vector<DSpan>& nu, const std::vector<DSpan>& tau);

// --- join and normal form --------------------------------------------

// Link vector as a matrix [dimension][column]; "" marks an inactive
// link component.  Columns are 1-based when referenced from arrays.
using LinkMatrix = std::vector<std::vector<std::string>>;

struct JoinedSymbol {
  std::string symbol;
  int column = 0;  // 1-based link index
  auto operator<=>(const JoinedSymbol&) const = default;
};

struct MalformedProduction : std::runtime_error {
  explicit MalformedProduction(const std::string& what) : std::runtime_error(what) {}
};

// Rearranges each dimension's link components by its precedence array.
// Output: per dimension, one list of symbols per contiguous run.
std::vector<std::vector<std::vector<JoinedSymbol>>> join(const Pav& pav, const LinkMatrix& links);

// Canonical column order: relabel so that, scanning the concatenated
// arrays, link index i first appears before index j whenever i < j.
// Idempotent; join output is unchanged.
struct NormalizedPav {
  Pav pav;
  LinkMatrix links;
  std::vector<int> old_to_new;  // 1-based column map
};
NormalizedPav normalize_pav(const Pav& pav, const LinkMatrix& links);

}  // namespace semparse

#endif
