#include "psn/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "psn/kernels.hpp"

namespace psn {

namespace {

constexpr std::size_t kBatch = 4096;

std::size_t parse_count(std::string_view value, std::string_view key) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw DomainError("sampling: bad value for " + std::string(key) + ": '" + std::string(value) + "'");
  }
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral at every step
    const std::uint64_t num = n - k + i;
    if (r > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    r = r * num / i;
  }
  return r;
}

// Advances a lexicographic tau-combination of {0..n-1}; false after the last one.
bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
  const std::size_t k = comb.size();
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Calls sink(batch) on consecutive batches of the constituent's equiprobable sets.
template <class Sink>
void for_each_batch(const SamplingScheme& constituent, Sink&& sink) {
  std::vector<IndexSet> batch;
  batch.reserve(kBatch);
  auto flush = [&] {
    if (!batch.empty()) sink(std::span<const IndexSet>(batch));
    batch.clear();
  };
  if (constituent.kind == SamplingKind::list) {
    const std::size_t windows = constituent.tau == constituent.n ? 1 : constituent.n;
    for (std::size_t s = 0; s < windows; ++s) {
      batch.push_back(list_window(constituent.n, constituent.tau, s));
      if (batch.size() == kBatch) flush();
    }
  } else {
    std::vector<std::size_t> comb(constituent.tau);
    for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = i;
    do {
      batch.emplace_back(comb);
      if (batch.size() == kBatch) flush();
    } while (next_combination(comb, constituent.n));
  }
  flush();
}

}  // namespace

std::string_view to_string(SamplingKind kind) {
  switch (kind) {
    case SamplingKind::nice: return "nice";
    case SamplingKind::list: return "list";
    case SamplingKind::parallel_nice: return "parallel-nice";
    case SamplingKind::parallel_list: return "parallel-list";
    case SamplingKind::non_overlapping: return "non-overlapping";
  }
  return "?";
}

// ---------------------------------------------------------------- SamplingScheme

SamplingScheme::SamplingScheme(SamplingKind kind_, std::size_t n_, std::size_t tau_, std::size_t c_)
    : kind(kind_), n(n_), tau(tau_), c(c_) {
  validate();
}

void SamplingScheme::validate() const {
  if (n == 0) throw DomainError("sampling: n must be positive");
  if (tau < 1 || tau > n) throw DomainError("sampling: tau must lie in [1, n]");
  if (c < 1) throw DomainError("sampling: c must be at least 1");
  if (!parallel() && c != 1) throw DomainError("sampling: serial schemes have c = 1");
  if (kind == SamplingKind::non_overlapping && c * tau > n) {
    throw DomainError("sampling: non-overlapping sampling needs c * tau <= n");
  }
}

SamplingScheme SamplingScheme::parse(std::string_view text, std::size_t n) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  SamplingKind kind;
  if (name == "nice") kind = SamplingKind::nice;
  else if (name == "list") kind = SamplingKind::list;
  else if (name == "parallel-nice") kind = SamplingKind::parallel_nice;
  else if (name == "parallel-list") kind = SamplingKind::parallel_list;
  else if (name == "non-overlapping") kind = SamplingKind::non_overlapping;
  else throw DomainError("sampling: unknown kind '" + std::string(name) + "'");

  std::optional<std::size_t> tau;
  std::size_t c = 1;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw DomainError("sampling: expected key=value, got '" + std::string(item) + "'");
      const std::string_view key = item.substr(0, eq);
      const std::string_view value = item.substr(eq + 1);
      if (key == "tau") tau = parse_count(value, key);
      else if (key == "c") c = parse_count(value, key);
      else throw DomainError("sampling: unknown parameter '" + std::string(key) + "'");
    }
  }
  if (!tau) throw DomainError("sampling: missing tau in '" + std::string(text) + "'");
  return SamplingScheme(kind, n, *tau, c);
}

std::string SamplingScheme::to_string() const {
  std::string s(psn::to_string(kind));
  s += ":tau=" + std::to_string(tau);
  if (parallel()) s += ",c=" + std::to_string(c);
  return s;
}

bool SamplingScheme::parallel() const noexcept {
  return kind == SamplingKind::parallel_nice || kind == SamplingKind::parallel_list ||
         kind == SamplingKind::non_overlapping;
}

bool SamplingScheme::list_based() const noexcept {
  return kind == SamplingKind::list || kind == SamplingKind::parallel_list;
}

SamplingScheme SamplingScheme::constituent() const {
  // A uniformly random part of a uniform partition of a uniform (c*tau)-subset is a
  // uniform tau-subset.
  return SamplingScheme(list_based() ? SamplingKind::list : SamplingKind::nice, n, tau, 1);
}

SamplingScheme SamplingScheme::with_workers(std::size_t workers) const {
  SamplingKind k = kind;
  if (k == SamplingKind::nice) k = SamplingKind::parallel_nice;
  if (k == SamplingKind::list) k = SamplingKind::parallel_list;
  return SamplingScheme(k, n, tau, workers);
}

bool SamplingScheme::independent_sets() const noexcept { return kind != SamplingKind::non_overlapping; }

// ---------------------------------------------------------------- drawing

std::uint64_t SeedStream::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

IndexSet SampleDraw::support() const {
  std::vector<std::size_t> all;
  for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return IndexSet(std::move(all));
}

IndexSet draw_nice(std::size_t n, std::size_t tau, std::mt19937_64& engine) {
  if (tau == n) return IndexSet::full(n);
  // Floyd's algorithm: exactly tau engine calls, uniform over all tau-subsets.
  std::vector<std::size_t> chosen;
  chosen.reserve(tau);
  std::vector<char> mark;
  const bool use_mark = tau > 32;
  if (use_mark) mark.assign(n, 0);
  auto has = [&](std::size_t v) {
    return use_mark ? mark[v] != 0 : std::find(chosen.begin(), chosen.end(), v) != chosen.end();
  };
  for (std::size_t j = n - tau; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    std::size_t t = pick(engine);
    if (has(t)) t = j;
    chosen.push_back(t);
    if (use_mark) mark[t] = 1;
  }
  return IndexSet(std::move(chosen));
}

IndexSet list_window(std::size_t n, std::size_t tau, std::size_t start) {
  std::vector<std::size_t> w(tau);
  for (std::size_t k = 0; k < tau; ++k) w[k] = (start + k) % n;
  return IndexSet(std::move(w));
}

SampleDraw draw(const SamplingScheme& scheme, SeedStream& stream) {
  scheme.validate();
  SampleDraw out;
  out.sets.reserve(scheme.c);
  switch (scheme.kind) {
    case SamplingKind::nice:
    case SamplingKind::parallel_nice:
      for (std::size_t i = 0; i < scheme.c; ++i) {
        auto engine = stream.engine();
        out.sets.push_back(draw_nice(scheme.n, scheme.tau, engine));
      }
      break;
    case SamplingKind::list:
    case SamplingKind::parallel_list:
      for (std::size_t i = 0; i < scheme.c; ++i) {
        auto engine = stream.engine();
        std::uniform_int_distribution<std::size_t> start(0, scheme.n - 1);
        out.sets.push_back(list_window(scheme.n, scheme.tau, start(engine)));
      }
      break;
    case SamplingKind::non_overlapping: {
      auto engine = stream.engine();
      const IndexSet pool = draw_nice(scheme.n, scheme.c * scheme.tau, engine);
      std::vector<std::size_t> order(pool.begin(), pool.end());
      std::shuffle(order.begin(), order.end(), engine);
      for (std::size_t i = 0; i < scheme.c; ++i) {
        out.sets.emplace_back(std::vector<std::size_t>(order.begin() + static_cast<long>(i * scheme.tau),
                                                       order.begin() + static_cast<long>((i + 1) * scheme.tau)));
      }
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------- probabilities

ProbabilityMatrix probability_matrix(const SamplingScheme& scheme) {
  const SamplingScheme one = scheme.constituent();
  const auto n = static_cast<Eigen::Index>(one.n);
  const double dn = static_cast<double>(one.n);
  const double dt = static_cast<double>(one.tau);
  ProbabilityMatrix out;
  if (one.kind == SamplingKind::nice) {
    const double off = one.n > 1 ? dt * (dt - 1.0) / (dn * (dn - 1.0)) : 0.0;
    out.joint = Matrix::Constant(n, n, off);
    out.joint.diagonal().setConstant(dt / dn);
    return out;
  }
  // Count, over the n equiprobable windows, how many contain both i and j.
  Matrix counts = Matrix::Zero(n, n);
  if (one.tau == one.n) {
    counts.setConstant(dn);
  } else {
    for (std::size_t s = 0; s < one.n; ++s) {
      const IndexSet w = list_window(one.n, one.tau, s);
      for (std::size_t a : w) {
        for (std::size_t b : w) counts(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += 1.0;
      }
    }
  }
  out.joint = counts / dn;
  return out;
}

// ---------------------------------------------------------------- expectations

std::uint64_t support_size(const SamplingScheme& scheme) {
  const SamplingScheme one = scheme.constituent();
  if (one.kind == SamplingKind::list) return one.tau == one.n ? 1 : one.n;
  return binomial(one.n, one.tau);
}

std::vector<IndexSet> enumerate_sets(const SamplingScheme& scheme) {
  const auto count = support_size(scheme);
  if (count > kEnumerationLimit) {
    throw DomainError("sampling: " + std::to_string(count) + " sets exceed the enumeration limit; use Monte-Carlo");
  }
  std::vector<IndexSet> out;
  out.reserve(count);
  for_each_batch(scheme.constituent(), [&](std::span<const IndexSet> batch) {
    out.insert(out.end(), batch.begin(), batch.end());
  });
  return out;
}

ExpectedInverse expected_lifted_inverse(const SymmetricMatrix& m, const SamplingScheme& scheme,
                                        const ExpectationMode& mode) {
  if (m.dim() != scheme.n) throw DomainError("expected_lifted_inverse: matrix and sampling dimensions differ");
  const auto n = static_cast<Eigen::Index>(m.dim());
  const SamplingScheme one = scheme.constituent();
  Matrix sum = Matrix::Zero(n, n);
  ExpectedInverse out;

  if (std::holds_alternative<Enumerate>(mode)) {
    const auto count = support_size(one);
    if (count > kEnumerationLimit) {
      throw DomainError("expected_lifted_inverse: " + std::to_string(count) +
                        " sets exceed the enumeration limit; use Monte-Carlo mode");
    }
    for_each_batch(one, [&](std::span<const IndexSet> batch) {
      kernels::omp::accumulate_lifted_inverses(m, batch, sum);
    });
    out.mean = SymmetricMatrix(Matrix(sum / static_cast<double>(count)));
    out.samples = count;
    out.exact = true;
    return out;
  }

  const auto& mc = std::get<MonteCarlo>(mode);
  if (mc.samples < 2) throw DomainError("expected_lifted_inverse: Monte-Carlo needs at least 2 samples");
  Matrix sum_sq = Matrix::Zero(n, n);
  SeedStream stream(mc.seed);
  std::vector<IndexSet> batch;
  batch.reserve(kBatch);
  for (std::size_t done = 0; done < mc.samples;) {
    batch.clear();
    const std::size_t take = std::min(kBatch, mc.samples - done);
    for (std::size_t i = 0; i < take; ++i) batch.push_back(std::move(draw(one, stream).sets.front()));
    kernels::omp::accumulate_lifted_inverses(m, batch, sum, &sum_sq);
    done += take;
  }
  const double count = static_cast<double>(mc.samples);
  const Matrix mean = sum / count;
  const Matrix var = ((sum_sq - count * mean.cwiseProduct(mean)) / (count - 1.0)).cwiseMax(0.0);
  out.mean = SymmetricMatrix(mean);
  out.standard_error = (var / count).cwiseSqrt();
  out.samples = mc.samples;
  out.exact = false;
  return out;
}

}  // namespace psn
