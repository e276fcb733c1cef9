#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "psn/matrix.hpp"

namespace psn {

enum class SamplingKind { nice, list, parallel_nice, parallel_list, non_overlapping };

std::string_view to_string(SamplingKind kind);

/// A random set-valued map over subsets of {0..n-1}. Serial kinds always have c == 1.
struct SamplingScheme {
  SamplingKind kind = SamplingKind::nice;
  std::size_t n = 0;
  std::size_t tau = 1;
  std::size_t c = 1;

  SamplingScheme() = default;
  SamplingScheme(SamplingKind kind, std::size_t n, std::size_t tau, std::size_t c = 1);

  /// Parses "nice:tau=2", "list:tau=3", "parallel-nice:tau=3,c=4", "non-overlapping:tau=2,c=3".
  static SamplingScheme parse(std::string_view text, std::size_t n);

  void validate() const;
  std::string to_string() const;

  bool parallel() const noexcept;
  bool list_based() const noexcept;
  /// The serial sampling each worker's set follows.
  SamplingScheme constituent() const;
  /// Same family with c workers; serial kinds are promoted to their parallel variant.
  SamplingScheme with_workers(std::size_t workers) const;
  /// Whether the c sets of a draw are mutually independent (false for non-overlapping).
  bool independent_sets() const noexcept;

  friend bool operator==(const SamplingScheme&, const SamplingScheme&) = default;
};

/// Deterministic source of 64-bit seeds (splitmix64). Each drawn set gets its own engine
/// seeded from the next value, so draws depend only on the master seed and the draw order.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  std::mt19937_64 engine() { return std::mt19937_64(next()); }

 private:
  std::uint64_t state_;
};

struct SampleDraw {
  std::vector<IndexSet> sets;

  /// Union of all sets in the draw.
  IndexSet support() const;
};

SampleDraw draw(const SamplingScheme& scheme, SeedStream& stream);

/// Uniform tau-subset of {0..n-1}.
IndexSet draw_nice(std::size_t n, std::size_t tau, std::mt19937_64& engine);
/// Cyclic window {s, ..., s+tau-1 mod n}.
IndexSet list_window(std::size_t n, std::size_t tau, std::size_t start);

struct ProbabilityMatrix {
  Matrix joint;  ///< P_ij = Pr(i and j both sampled)

  Vector marginals() const { return joint.diagonal(); }
  /// Every coordinate has positive inclusion probability.
  bool proper() const { return marginals().minCoeff() > 0.0; }
};

/// For parallel kinds this is the matrix of one constituent set.
ProbabilityMatrix probability_matrix(const SamplingScheme& scheme);

inline constexpr std::uint64_t kEnumerationLimit = 1'000'000;

/// Number of equiprobable sets of the constituent sampling (C(n,tau) or n windows);
/// saturates at UINT64_MAX.
std::uint64_t support_size(const SamplingScheme& scheme);
/// All sets of the constituent sampling, lexicographically. Refuses above kEnumerationLimit.
std::vector<IndexSet> enumerate_sets(const SamplingScheme& scheme);

struct Enumerate {};
struct MonteCarlo {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
};
using ExpectationMode = std::variant<Enumerate, MonteCarlo>;

struct ExpectedInverse {
  SymmetricMatrix mean;
  std::optional<Matrix> standard_error;  ///< entry-wise, Monte-Carlo only
  std::size_t samples = 0;
  bool exact = false;
};

/// E[(M_S)^{-1}] over one constituent set of the scheme.
ExpectedInverse expected_lifted_inverse(const SymmetricMatrix& m, const SamplingScheme& scheme,
                                        const ExpectationMode& mode = Enumerate{});

}  // namespace psn
