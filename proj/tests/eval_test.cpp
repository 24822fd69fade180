#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "xtpath/eval.hpp"
#include "xtpath/reports.hpp"
#include "xtpath/synthetic.hpp"

using namespace xtpath;

namespace {

Corpus small_corpus(double shift_rate = 0.0, std::uint64_t seed = 5) {
  return generate_corpus({.verticals = {"books", "autos", "jobs"}, .domains_per_vertical = 1, .pages_per_domain = 30,
                          .templates_per_domain = 2, .shift_rate = shift_rate, .seed = seed});
}

EvalOptions quick(double inject = 0.0) {
  EvalOptions o;
  o.fractions = {0.1, 0.5, 0.9};
  o.sample_size = 10;
  o.iterations = 50;
  o.inject_shift_rate = inject;
  o.seed = 3;
  return o;
}

}  // namespace

TEST(ComputeMetrics, Examples) {
  auto m = compute_metrics({8, 1, 1});
  EXPECT_EQ(fixed(m.precision), "0.889");
  EXPECT_EQ(fixed(m.recall), "0.889");
  EXPECT_EQ(fixed(m.f1), "0.889");
  auto z = compute_metrics({0, 0, 0});
  EXPECT_EQ(z.precision, 0);
  EXPECT_EQ(z.recall, 0);
  EXPECT_EQ(z.f1, 0);
  auto h = compute_metrics({5, 0, 5});
  EXPECT_DOUBLE_EQ(h.precision, 1.0);
  EXPECT_DOUBLE_EQ(h.recall, 0.5);
  EXPECT_NEAR(h.f1, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(compute_metrics({0, 4, 0}).f1, 0);
}

TEST(ComputeMetrics, CountsAreAdditive) {
  MetricCounts a{1, 2, 3}, b{4, 5, 6};
  EXPECT_EQ(a + b, (MetricCounts{5, 7, 9}));
  a += b;
  EXPECT_EQ(a.total(), 21u);
}

TEST(ScoreExtraction, Outcomes) {
  auto doc = parse_document("<html><span>Name</span><b>Sale!</b><i> Name  </i></html>");
  EXPECT_EQ(score_extraction(ExtractionResult::found_at(*doc.root().children[0], Route::xpath), "Name"), Outcome::tp);
  EXPECT_EQ(score_extraction(ExtractionResult::found_at(*doc.root().children[1], Route::xpath), "Name"), Outcome::fp);
  EXPECT_EQ(score_extraction(ExtractionResult::found_at(*doc.root().children[2], Route::treepath), "Name "),
            Outcome::tp);
  EXPECT_EQ(score_extraction(ExtractionResult{}, "Name"), Outcome::fn);
}

TEST(SplitCorpus, SizesAndDeterminism) {
  std::vector<int> ten(10);
  std::iota(ten.begin(), ten.end(), 0);
  auto s = split_corpus(ten, 0.1, 1);
  EXPECT_EQ(s.train.size(), 1u);
  EXPECT_EQ(s.test.size(), 9u);
  std::set<int> all(s.train.begin(), s.train.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 10u);

  std::vector<int> four{0, 1, 2, 3};
  auto h = split_corpus(four, 0.5, 9);
  EXPECT_EQ(h.train.size(), 2u);
  EXPECT_EQ(h.test.size(), 2u);

  auto a = split_corpus(ten, 0.3, 42);
  auto b = split_corpus(ten, 0.3, 42);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_EQ(a.train.size(), 3u);
  EXPECT_EQ(split_corpus(ten, 0.7, 1).train.size(), 7u);
  EXPECT_EQ(split_corpus(ten, 0.01, 1).train.size(), 1u);
}

TEST(SplitCorpus, Errors) {
  std::vector<int> one{1}, two{1, 2};
  EXPECT_THROW(split_corpus(one, 0.5, 1), InputError);
  EXPECT_THROW(split_corpus(two, 0.0, 1), InputError);
  EXPECT_THROW(split_corpus(two, 1.0, 1), InputError);
  EXPECT_THROW(split_corpus(two, 0.9, 1), InputError);
}

TEST(Bootstrap, OneIterationOverWholeTestSetEqualsDirect) {
  Corpus c = small_corpus();
  EvalOptions o = quick();
  auto trials = run_trials(c, 0.5, o);
  auto direct = direct_evaluate(trials);
  auto pooled = bootstrap_evaluate(trials, 1000, 1, 7, false);
  auto per_domain = bootstrap_evaluate(trials, 1000, 1, 7, true);
  for (std::size_t m = 0; m < 3; ++m) {
    EXPECT_DOUBLE_EQ(pooled[m].mean.f1, direct[m].f1);
    EXPECT_DOUBLE_EQ(pooled[m].mean.precision, direct[m].precision);
    EXPECT_DOUBLE_EQ(per_domain[m].mean.recall, direct[m].recall);
    EXPECT_EQ(pooled[m].stderr_f1, 0.0);
  }
}

TEST(Bootstrap, SameSeedSameAggregates) {
  Corpus c = small_corpus(0.5);
  auto t1 = run_trials(c, 0.3, quick(0.5));
  auto t2 = run_trials(c, 0.3, quick(0.5));
  auto a = bootstrap_evaluate(t1, 10, 100, 11);
  auto b = bootstrap_evaluate(t2, 10, 100, 11);
  for (std::size_t m = 0; m < 3; ++m) {
    EXPECT_EQ(a[m].mean.f1, b[m].mean.f1);
    EXPECT_EQ(a[m].stderr_f1, b[m].stderr_f1);
  }
}

TEST(Bootstrap, MeanWithinTwoStandardErrorsOfDirect) {
  Corpus c = small_corpus(0.6, 8);
  auto trials = run_trials(c, 0.3, quick(0.5));
  auto direct = direct_evaluate(trials);
  auto boot = bootstrap_evaluate(trials, 10, 200, 21);
  for (std::size_t m = 0; m < 3; ++m) {
    EXPECT_LE(std::abs(boot[m].mean.f1 - direct[m].f1), 2 * boot[m].stderr_f1 + 1e-12) << m;
  }
}

TEST(Bootstrap, Errors) {
  std::vector<DomainTrial> none;
  EXPECT_THROW(bootstrap_evaluate(none, 5, 5, 1), InputError);
  std::vector<DomainTrial> empty{{0, {}}};
  EXPECT_THROW(bootstrap_evaluate(empty, 5, 5, 1), InputError);
  std::vector<DomainTrial> one{{0, {MethodCounts{}}}};
  EXPECT_THROW(bootstrap_evaluate(one, 5, 0, 1), InputError);
  EXPECT_THROW(bootstrap_evaluate(one, 0, 5, 1), InputError);
}

TEST(Trials, CountsMatchScoredPairs) {
  Corpus c = generate_corpus({.verticals = {"books"}, .domains_per_vertical = 2, .pages_per_domain = 20,
                              .missing_attribute_rate = 0.3, .seed = 4});
  auto trials = run_trials(c, 0.5, quick(0.5));
  for (const auto& t : trials) {
    const auto& d = c.domains[t.domain];
    std::size_t test_pages = d.pages.size() - train_size(d.pages.size(), 0.5);
    ASSERT_EQ(t.pages.size(), test_pages);
    std::size_t pairs = 0;
    for (const auto& p : t.pages) {
      EXPECT_EQ(p[0].total(), p[1].total());
      EXPECT_EQ(p[1].total(), p[2].total());
      pairs += p[0].total();
    }
    EXPECT_GT(pairs, 0u);
  }
}

TEST(Trials, FallbackDominanceOnEveryPage) {
  Corpus c = small_corpus(0.0, 12);
  auto trials = run_trials(c, 0.3, quick(1.0));
  for (const auto& t : trials)
    for (const auto& p : t.pages) {
      EXPECT_GE(p[method_index(Method::xtpath)].tp, p[method_index(Method::xpath)].tp);
      EXPECT_LE(p[method_index(Method::xtpath)].fn, p[method_index(Method::xpath)].fn);
    }
}

TEST(Sweep, ShiftFreeCorpusIsPerfect) {
  // One template per domain, so every training XPath fits every test page.
  Corpus c = generate_corpus({.verticals = {"books", "autos", "jobs"}, .pages_per_domain = 30, .seed = 5});
  auto rows = sweep_training_fraction(c, quick());
  ASSERT_EQ(rows.size(), 9u);
  for (const auto& r : rows) {
    EXPECT_DOUBLE_EQ(r.aggregate.mean.f1, 1.0) << to_string(r.method) << " " << r.fraction;
    EXPECT_EQ(r.aggregate.stderr_f1, 0.0);
  }
}

TEST(Sweep, ShiftInjectedRecallDominance) {
  Corpus c = small_corpus(0.0, 13);
  auto rows = sweep_training_fraction(c, quick(0.5));
  for (std::size_t i = 0; i < rows.size(); i += 3) {
    const auto& xp = rows[i + method_index(Method::xpath)];
    const auto& xt = rows[i + method_index(Method::xtpath)];
    EXPECT_EQ(xp.fraction, xt.fraction);
    EXPECT_GE(xt.aggregate.mean.recall, xp.aggregate.mean.recall);
    EXPECT_GE(xt.aggregate.mean.f1, xp.aggregate.mean.f1);
  }
}

TEST(Sweep, SingleFraction) {
  EvalOptions o = quick();
  o.fractions = {0.5};
  auto rows = sweep_training_fraction(small_corpus(), o);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(curves_csv(rows).substr(0, 42), "method,fraction,precision,recall,f1,stderr");
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  Corpus c = small_corpus(0.3, 2);
  EvalOptions a = quick(0.5), b = quick(0.5);
  a.threads = 1;
  b.threads = 4;
  EXPECT_EQ(curves_csv(sweep_training_fraction(c, a)), curves_csv(sweep_training_fraction(c, b)));
}

TEST(PerVertical, OneDomainIsItsOwnMean) {
  std::vector<DomainF1> d{{"books", "b1", {0.5, 0.25, 0.75}}};
  auto rows = per_vertical_report(d);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].mean_f1, 0.5);
  EXPECT_EQ(rows[1].mean_f1, 0.25);
  EXPECT_EQ(rows[2].mean_f1, 0.75);
}

TEST(PerVertical, IdenticalDomainsSameMean) {
  std::vector<DomainF1> d{{"books", "b1", {0.5, 0.25, 0.75}}, {"books", "b2", {0.5, 0.25, 0.75}},
                          {"jobs", "j1", {1, 1, 1}}};
  auto rows = per_vertical_report(d);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[2].mean_f1, 0.75);
  EXPECT_EQ(rows[3].vertical, "jobs");
  EXPECT_EQ(per_vertical_csv(rows).substr(0, 18), "vertical,method,f1");
}

TEST(PerVertical, ShiftedVerticalShowsGap) {
  Corpus stable = generate_corpus({.verticals = {"books"}, .domains_per_vertical = 2, .pages_per_domain = 30, .seed = 1});
  Corpus shifted = generate_corpus(
      {.verticals = {"autos"}, .domains_per_vertical = 2, .pages_per_domain = 30, .shift_rate = 0.6, .seed = 2});
  Corpus c;
  for (auto& d : stable.domains) c.domains.push_back(std::move(d));
  for (auto& d : shifted.domains) c.domains.push_back(std::move(d));
  auto rows = per_vertical_report(c, 0.5, quick());
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].vertical, "books");
  EXPECT_DOUBLE_EQ(rows[2].mean_f1 - rows[0].mean_f1, 0.0);
  EXPECT_EQ(rows[3].vertical, "autos");
  EXPECT_GT(rows[5].mean_f1 - rows[3].mean_f1, 0.0);
}
