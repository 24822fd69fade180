#ifndef XTPATH_EVAL_HPP_
#define XTPATH_EVAL_HPP_

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xtpath/corpus.hpp"
#include "xtpath/entropy.hpp"
#include "xtpath/error.hpp"
#include "xtpath/model.hpp"
#include "xtpath/parallel.hpp"
#include "xtpath/random.hpp"
#include "xtpath/recursive_search.hpp"
#include "xtpath/synthetic.hpp"

namespace xtpath {

inline constexpr std::array<Method, 3> kAllMethods{Method::xpath, Method::treepath, Method::xtpath};

inline std::size_t method_index(Method m) { return static_cast<std::size_t>(m); }

// ---------------------------------------------------------------------------
// Metrics.

enum class Outcome { tp, fp, fn };

struct MetricCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  MetricCounts& operator+=(const MetricCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend MetricCounts operator+(MetricCounts a, const MetricCounts& b) { return a += b; }
  friend bool operator==(const MetricCounts&, const MetricCounts&) = default;

  void add(Outcome o) {
    switch (o) {
      case Outcome::tp: ++tp; break;
      case Outcome::fp: ++fp; break;
      case Outcome::fn: ++fn; break;
    }
  }
  std::size_t total() const { return tp + fp + fn; }
};

struct Metrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

/// Zero-denominator ratios are 0.
inline Metrics compute_metrics(const MetricCounts& c) {
  auto ratio = [](double num, double den) { return den == 0 ? 0.0 : num / den; };
  Metrics m;
  m.precision = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
  m.recall = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
  m.f1 = ratio(2 * m.precision * m.recall, m.precision + m.recall);
  return m;
}

/// Found with the expected (whitespace-normalized) text is a tp, other text
/// a fp, not found a fn.
inline Outcome score_extraction(const ExtractionResult& result, std::string_view expected) {
  if (!result.found()) return Outcome::fn;
  return normalize_space(result.text) == normalize_space(expected) ? Outcome::tp : Outcome::fp;
}

// ---------------------------------------------------------------------------
// Splitting.

template <class T>
struct Split {
  std::vector<T> train;
  std::vector<T> test;
};

inline std::size_t train_size(std::size_t n, double fraction) {
  auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  return std::max<std::size_t>(k, 1);
}

/// Seeded shuffle, then ceil(f*N) (at least 1) items to train and the rest to test.
template <class T>
Split<T> split_corpus(std::span<const T> items, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0 && train_fraction < 1)) throw InputError("train fraction must be in (0, 1)");
  if (items.size() < 2) throw InputError("split_corpus needs at least two pages");
  const std::size_t k = train_size(items.size(), train_fraction);
  if (k >= items.size()) throw InputError("split leaves no test pages");
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  Split<T> s;
  for (std::size_t i = 0; i < order.size(); ++i) (i < k ? s.train : s.test).push_back(items[order[i]]);
  return s;
}

template <class T>
Split<T> split_corpus(const std::vector<T>& items, double train_fraction, std::uint64_t seed) {
  return split_corpus(std::span<const T>(items), train_fraction, seed);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  };
  return splitmix(splitmix(splitmix(seed) ^ a) ^ b);
}

// ---------------------------------------------------------------------------
// Learning and per-page scoring.

/// Learns from pages whose labels resolve; pages with no resolvable label are skipped.
inline std::vector<AttributeModel> learn_models(const std::string& domain, std::span<const Page* const> pages) {
  ModelBuilder builder;
  for (const Page* p : pages) builder.add_page(domain, *p->doc, resolve_labels(*p));
  return builder.build();
}

using MethodCounts = std::array<MetricCounts, 3>;

/// Scores every ground-truth attribute of `page` under each method.
inline MethodCounts score_page(const Page& page, const std::string& domain, std::span<const AttributeModel> models) {
  MethodCounts out{};
  for (const auto& [attr, gt] : page.truth) {
    const AttributeModel* m = find_model(models, domain, attr);
    for (Method method : kAllMethods) {
      ExtractionResult r = m ? extract(method, *m, *page.doc) : ExtractionResult{};
      out[method_index(method)].add(score_extraction(r, gt.expected));
    }
  }
  return out;
}

/// Per-test-page counts for one domain at one training fraction.
struct DomainTrial {
  std::size_t domain = 0;
  std::vector<MethodCounts> pages;

  MethodCounts total() const {
    MethodCounts t{};
    for (const auto& p : pages)
      for (std::size_t m = 0; m < t.size(); ++m) t[m] += p[m];
    return t;
  }
};

struct EvalOptions {
  std::vector<double> fractions{0.1, 0.3, 0.5, 0.7, 0.9};
  std::size_t sample_size = 25;
  std::size_t iterations = 500;
  std::uint64_t seed = 1;
  /// Sample test pages per domain (true) or from one pool across domains.
  bool per_domain_sampling = true;
  /// Fraction of each domain's test pages that receive simulated shifts.
  double inject_shift_rate = 0.0;
  std::size_t shifts_per_page = 1;
  std::size_t threads = worker_count();
};

inline DomainTrial run_domain_trial(const Corpus& corpus, std::size_t domain_index, double fraction,
                                    const EvalOptions& opt) {
  const DomainData& d = corpus.domains.at(domain_index);
  std::vector<const Page*> pages;
  for (const auto& p : d.pages) pages.push_back(&p);
  auto split = split_corpus(pages, fraction, mix_seed(opt.seed, domain_index + 1, std::bit_cast<std::uint64_t>(fraction)));
  auto models = learn_models(d.name, split.train);

  std::vector<Page> shifted;
  std::vector<const Page*> test = split.test;
  if (opt.inject_shift_rate > 0) {
    Rng rng(mix_seed(opt.seed ^ 0x5348494654ull, domain_index + 1, std::bit_cast<std::uint64_t>(fraction)));
    std::vector<std::size_t> order(test.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const auto n = static_cast<std::size_t>(std::llround(opt.inject_shift_rate * static_cast<double>(test.size())));
    shifted.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      shifted.push_back(inject_shifts(*test[order[i]], rng, opt.shifts_per_page));
      test[order[i]] = &shifted.back();
    }
  }

  DomainTrial trial{domain_index, std::vector<MethodCounts>(test.size())};
  parallel_for(
      test.size(), [&](std::size_t i) { trial.pages[i] = score_page(*test[i], d.name, models); }, opt.threads);
  return trial;
}

inline std::vector<DomainTrial> run_trials(const Corpus& corpus, double fraction, const EvalOptions& opt) {
  std::vector<DomainTrial> trials;
  for (std::size_t d = 0; d < corpus.domains.size(); ++d) trials.push_back(run_domain_trial(corpus, d, fraction, opt));
  return trials;
}

// ---------------------------------------------------------------------------
// Aggregation.

struct Aggregate {
  Metrics mean;
  /// Standard deviation of the per-iteration F1 (the bootstrap standard error).
  double stderr_f1 = 0;
};

using MethodAggregates = std::array<Aggregate, 3>;

/// Pooled counts over all test pages.
inline std::array<Metrics, 3> direct_evaluate(std::span<const DomainTrial> trials) {
  MethodCounts total{};
  for (const auto& t : trials) {
    auto c = t.total();
    for (std::size_t m = 0; m < 3; ++m) total[m] += c[m];
  }
  std::array<Metrics, 3> out;
  for (std::size_t m = 0; m < 3; ++m) out[m] = compute_metrics(total[m]);
  return out;
}

/// Each iteration draws up to `sample_size` test pages without replacement
/// (per domain or from the pooled set), sums their counts and computes the
/// metrics. All methods are scored on the same draw.
inline MethodAggregates bootstrap_evaluate(std::span<const DomainTrial> trials, std::size_t sample_size,
                                           std::size_t iterations, std::uint64_t seed, bool per_domain = true) {
  if (iterations == 0) throw InputError("bootstrap needs at least one iteration");
  if (sample_size == 0) throw InputError("bootstrap sample size must be positive");
  std::vector<std::vector<const MethodCounts*>> pools;
  if (per_domain) {
    for (const auto& t : trials) {
      pools.emplace_back();
      for (const auto& p : t.pages) pools.back().push_back(&p);
    }
  } else {
    pools.emplace_back();
    for (const auto& t : trials)
      for (const auto& p : t.pages) pools.back().push_back(&p);
  }
  std::erase_if(pools, [](const auto& p) { return p.empty(); });
  if (pools.empty()) throw InputError("bootstrap: no test pages to sample");

  Rng rng(seed);
  std::array<std::vector<Metrics>, 3> samples;
  for (std::size_t it = 0; it < iterations; ++it) {
    MethodCounts sum{};
    for (auto& pool : pools) {
      const std::size_t k = std::min(sample_size, pool.size());
      for (std::size_t i = 0; i < k; ++i) {
        std::swap(pool[i], pool[i + rng.uniform(pool.size() - i)]);
        for (std::size_t m = 0; m < 3; ++m) sum[m] += (*pool[i])[m];
      }
    }
    for (std::size_t m = 0; m < 3; ++m) samples[m].push_back(compute_metrics(sum[m]));
  }

  MethodAggregates out;
  const double n = static_cast<double>(iterations);
  for (std::size_t m = 0; m < 3; ++m) {
    Metrics mean;
    for (const auto& s : samples[m]) {
      mean.precision += s.precision;
      mean.recall += s.recall;
      mean.f1 += s.f1;
    }
    mean.precision /= n;
    mean.recall /= n;
    mean.f1 /= n;
    double var = 0;
    for (const auto& s : samples[m]) var += (s.f1 - mean.f1) * (s.f1 - mean.f1);
    out[m].mean = mean;
    out[m].stderr_f1 = iterations > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  }
  return out;
}

/// Convenience form: split, learn, score and bootstrap one method at one fraction.
inline Aggregate bootstrap_evaluate(const Corpus& corpus, Method method, double train_fraction, std::size_t sample_size,
                                    std::size_t iterations, std::uint64_t seed) {
  EvalOptions opt;
  opt.seed = seed;
  auto trials = run_trials(corpus, train_fraction, opt);
  return bootstrap_evaluate(trials, sample_size, iterations, mix_seed(seed, 0xB007)).at(method_index(method));
}

struct CurveRow {
  Method method;
  double fraction;
  Aggregate aggregate;
};

inline std::vector<CurveRow> sweep_training_fraction(const Corpus& corpus, const EvalOptions& opt) {
  std::vector<CurveRow> rows;
  for (std::size_t fi = 0; fi < opt.fractions.size(); ++fi) {
    const double f = opt.fractions[fi];
    auto trials = run_trials(corpus, f, opt);
    auto agg = bootstrap_evaluate(trials, opt.sample_size, opt.iterations, mix_seed(opt.seed, 0xB007, fi),
                                  opt.per_domain_sampling);
    for (Method m : kAllMethods) rows.push_back({m, f, agg[method_index(m)]});
  }
  return rows;
}

struct VerticalRow {
  std::string vertical;
  Method method;
  double mean_f1;
};

struct DomainF1 {
  std::string vertical;
  std::string domain;
  MethodF1 f1;
};

/// Directly evaluated F1 per domain at one training fraction.
inline std::vector<DomainF1> per_domain_f1(const Corpus& corpus, double fraction, const EvalOptions& opt) {
  std::vector<DomainF1> out;
  for (const auto& t : run_trials(corpus, fraction, opt)) {
    auto c = t.total();
    const auto& d = corpus.domains[t.domain];
    out.push_back({d.vertical, d.name,
                   {compute_metrics(c[0]).f1, compute_metrics(c[1]).f1, compute_metrics(c[2]).f1}});
  }
  return out;
}

/// Mean of domain F1s per vertical, verticals in corpus order.
inline std::vector<VerticalRow> per_vertical_report(std::span<const DomainF1> domains) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<MethodF1>> grouped;
  for (const auto& d : domains) {
    if (!grouped.count(d.vertical)) order.push_back(d.vertical);
    grouped[d.vertical].push_back(d.f1);
  }
  std::vector<VerticalRow> rows;
  for (const auto& v : order) {
    const auto& list = grouped[v];
    MethodF1 sum;
    for (const auto& f : list) {
      sum.xpath += f.xpath;
      sum.treepath += f.treepath;
      sum.xtpath += f.xtpath;
    }
    const double n = static_cast<double>(list.size());
    rows.push_back({v, Method::xpath, sum.xpath / n});
    rows.push_back({v, Method::treepath, sum.treepath / n});
    rows.push_back({v, Method::xtpath, sum.xtpath / n});
  }
  return rows;
}

inline std::vector<VerticalRow> per_vertical_report(const Corpus& corpus, double fraction, const EvalOptions& opt) {
  auto d = per_domain_f1(corpus, fraction, opt);
  return per_vertical_report(d);
}

}  // namespace xtpath

#endif  // XTPATH_EVAL_HPP_
