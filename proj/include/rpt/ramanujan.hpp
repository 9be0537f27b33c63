#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace rpt {

using Index = Eigen::Index;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Number of integers in [1, p] coprime to p. Throws std::invalid_argument for p < 1.
std::int64_t euler_totient(std::int64_t p);

/// Sorted positive divisors of n.
std::vector<int> divisors(int n);

/// Least common multiple; throws std::invalid_argument on non-positive input.
std::int64_t lcm(std::int64_t a, std::int64_t b);

/// One period c_q(0), ..., c_q(q-1) of the Ramanujan sum of order q.
struct RamanujanSequence {
  int q = 1;
  std::vector<std::int64_t> values;

  std::int64_t operator()(std::int64_t n) const;  // periodic access, any integer n
};

/// Evaluates the sum of e^{j 2 pi k n / q} over k coprime to q. The real part is
/// rounded to the nearest integer after checking that the imaginary residue and
/// the rounding residue are both below 1e-9.
RamanujanSequence ramanujan_sum(int q);

/// The L x phi(q) block whose column j is the j-fold circular downshift of c_q,
/// extended periodically to L rows: entry (i, j) = c_q((i - j) mod q).
struct PeriodicSubmatrix {
  int q = 1;
  int length = 1;
  IntMatrix columns;
};

PeriodicSubmatrix build_submatrix(int q, int length);

struct ColumnRange {
  Index begin = 0;
  Index width = 0;
  Index end() const { return begin + width; }
};

/// Concatenation of the periodic submatrices for periods 1..P_max.
///
/// Entries are generated as exact integers and stored as doubles for the
/// downstream linear algebra. The object is immutable after construction and
/// safe to share between threads.
class DictionaryMatrix {
 public:
  DictionaryMatrix(int max_period, int length);

  int max_period() const { return max_period_; }
  int length() const { return length_; }
  Index cols() const { return matrix_.cols(); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  /// Column range of the block belonging to period p (1 <= p <= P_max).
  ColumnRange range(int p) const;

 private:
  int max_period_;
  int length_;
  Eigen::MatrixXd matrix_;
  std::vector<ColumnRange> ranges_;  // ranges_[p - 1]
};

DictionaryMatrix build_dictionary(int max_period, int length);

/// Dictionary columns spanning period T and all of its divisors.
struct SupportSet {
  int period = 1;
  std::vector<Index> indices;  // sorted
  std::vector<int> divisors;   // sorted
};

/// Throws std::invalid_argument when T > P_max or T < 1.
SupportSet support_set(const DictionaryMatrix& dict, int period);

/// L x |S| matrix of the selected dictionary columns, in index order.
Eigen::MatrixXd restrict(const DictionaryMatrix& dict, const SupportSet& support);
Eigen::MatrixXd restrict(const DictionaryMatrix& dict, std::span<const Index> indices);

/// Indices of `a` that are not in `b`.
std::vector<Index> difference_support(const SupportSet& a, const SupportSet& b);

/// Plain-text dump: a header line "P_max L", then one row per sample with
/// whitespace-separated integer entries.
void write_dictionary(std::ostream& out, const DictionaryMatrix& dict);

}  // namespace rpt
