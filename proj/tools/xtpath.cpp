// xtpath: learn / extract / evaluate / entropy / shift / generate.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xtpath/model_io.hpp"
#include "xtpath/reports.hpp"
#include "xtpath/xtpath.hpp"

namespace fs = std::filesystem;
using namespace xtpath;

namespace {

struct Options {
  std::string corpus;
  std::string model;
  std::string method = "xtpath";
  std::string out;
  std::string page;
  std::string domain;
  std::string script;
  std::string kinds = "vertical,horizontal";
  std::string counts;
  std::string f1_file;
  std::vector<double> fractions{0.1, 0.3, 0.5, 0.7, 0.9};
  double fraction = 1.0;
  double report_fraction = 0.5;
  std::size_t sample_size = 25;
  std::size_t iterations = 500;
  std::size_t count = 1;
  std::uint64_t seed = 1;
  double inject_shift_rate = 0.0;
  std::size_t shifts_per_page = 1;
  bool pooled = false;
  bool trace = false;
  SyntheticOptions synth;
  std::string verticals = "books,autos,jobs";
};

Method method_or_throw(const std::string& s) {
  auto m = parse_method(s);
  if (!m) throw InputError("unknown method '" + s + "' (expected xpath, treepath or xtpath)");
  return *m;
}

EvalOptions eval_options(const Options& o) {
  EvalOptions e;
  e.fractions = o.fractions;
  e.sample_size = o.sample_size;
  e.iterations = o.iterations;
  e.seed = o.seed;
  e.per_domain_sampling = !o.pooled;
  e.inject_shift_rate = o.inject_shift_rate;
  e.shifts_per_page = o.shifts_per_page;
  return e;
}

int cmd_learn(const Options& o) {
  Corpus corpus = load_corpus(o.corpus);
  if (corpus.page_count() == 0) throw InputError("corpus " + o.corpus + " has no pages");
  if (!(o.fraction > 0 && o.fraction <= 1)) throw InputError("--fraction must be in (0, 1]");
  std::vector<AttributeModel> models;
  for (std::size_t di = 0; di < corpus.domains.size(); ++di) {
    const auto& d = corpus.domains[di];
    std::vector<const Page*> pages;
    for (const auto& p : d.pages) pages.push_back(&p);
    if (o.fraction < 1 && pages.size() >= 2) pages = split_corpus(pages, o.fraction, mix_seed(o.seed, di + 1)).train;
    for (const Page* p : pages)
      for (const auto& [attr, node] : resolve_labels(*p))
        if (!node) std::cerr << "warning: " << d.name << "/" << p->id << ": label for '" << attr << "' not found\n";
    auto learned = learn_models(d.name, pages);
    models.insert(models.end(), learned.begin(), learned.end());
  }
  if (models.empty()) throw InputError("nothing learned: no page had a resolvable label");
  write_file_atomic(o.model, model_to_string(models));
  std::cerr << "learned " << models.size() << " attribute models from " << corpus.domains.size() << " domains\n";
  return 0;
}

int cmd_extract(const Options& o) {
  const Method method = method_or_throw(o.method);
  auto models = model_from_string(read_file(o.model));
  Document doc = parse_document(read_file(o.page), o.page);

  std::string domain = o.domain;
  if (domain.empty()) {
    for (const auto& m : models) {
      if (domain.empty()) domain = m.domain;
      if (m.domain != domain) throw InputError("model holds several domains; pick one with --domain");
    }
  }
  std::ostringstream out, traces;
  std::size_t shown = 0;
  for (const auto& m : models) {
    if (m.domain != domain) continue;
    ++shown;
    ExtractionResult r = extract(method, m, doc, o.trace);
    out << m.attribute << '\t' << (r.found() ? to_string(r.route) : "not-found") << '\t' << r.text << '\n';
    if (o.trace && r.trace) {
      traces << "# trace " << m.attribute << '\n';
      r.trace->dump(traces);
    }
  }
  if (!shown) throw InputError("model has no records for domain '" + domain + "'");
  std::cout << out.str() << traces.str();
  return 0;
}

int cmd_evaluate(const Options& o) {
  Corpus corpus = load_corpus(o.corpus);
  if (corpus.page_count() == 0) throw InputError("corpus " + o.corpus + " has no pages");
  const EvalOptions opt = eval_options(o);
  auto curves = sweep_training_fraction(corpus, opt);
  auto domains = per_domain_f1(corpus, o.report_fraction, opt);
  auto verticals = per_vertical_report(domains);

  std::string per_domain = "vertical,domain,f1_xpath,f1_treepath,f1_xtpath\n";
  for (const auto& d : domains)
    per_domain += csv_line({d.vertical, d.domain, fixed(d.f1.xpath), fixed(d.f1.treepath), fixed(d.f1.xtpath)});

  const fs::path dir = o.out;
  write_file_atomic(dir / "curves.csv", curves_csv(curves));
  write_file_atomic(dir / "per_vertical.csv", per_vertical_csv(verticals));
  write_file_atomic(dir / "per_domain_f1.csv", per_domain);
  std::cout << curves_csv(curves);
  return 0;
}

std::map<std::string, MethodF1> read_f1_file(const std::string& path) {
  std::map<std::string, MethodF1> out;
  auto rows = parse_csv(read_file(path));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i == 0 && !r.empty() && r[0] == "vertical") continue;
    if (r.size() < 5) throw InputError(path + ": row " + std::to_string(i + 1) + " needs vertical,domain,f1_xpath,f1_treepath,f1_xtpath");
    out[r[1]] = MethodF1{std::stod(r[2]), std::stod(r[3]), std::stod(r[4])};
  }
  return out;
}

int cmd_entropy(const Options& o) {
  if (o.corpus.empty() == o.counts.empty()) throw InputError("entropy needs exactly one of --corpus or --counts");
  CompatibilityTable table;
  std::optional<std::map<std::string, MethodF1>> f1;
  const fs::path dir = o.out;
  if (!o.counts.empty()) {
    table = parse_compatibility_csv(read_file(o.counts));
  } else {
    Corpus corpus = load_corpus(o.corpus);
    if (corpus.page_count() == 0) throw InputError("corpus " + o.corpus + " has no pages");
    table = compatibility_table(corpus);
    write_file_atomic(dir / "compatibility.csv", compatibility_csv(table));
    if (o.f1_file.empty()) {
      f1.emplace();
      for (const auto& d : per_domain_f1(corpus, o.report_fraction, eval_options(o))) (*f1)[d.domain] = d.f1;
    }
  }
  if (!o.f1_file.empty()) f1 = read_f1_file(o.f1_file);

  write_file_atomic(dir / "entropy_by_attribute.csv", entropy_by_attribute_csv(table));
  write_file_atomic(dir / "entropy_by_domain.csv", entropy_by_domain_csv(table));
  if (f1) {
    auto report = entropy_f1_report(table, *f1);
    write_file_atomic(dir / "entropy_vs_f1.csv", entropy_vs_f1_csv(report));
    write_file_atomic(dir / "entropy_trendlines.csv", trendlines_csv(report));
  }
  std::cout << entropy_by_attribute_csv(table);
  return 0;
}

int cmd_shift(const Options& o) {
  Document doc = parse_document(read_file(o.page), o.page);
  std::vector<ShiftEdit> edits;
  Document result;
  if (!o.script.empty()) {
    edits = parse_shift_script(read_file(o.script));
    result = apply_shifts(doc, edits);
  } else {
    auto variants = parse_shift_kinds(o.kinds);
    if (variants.empty()) throw InputError("--kinds lists no shift kinds");
    auto [shifted, applied] = random_shifts(doc, o.seed, o.count, variants);
    result = std::move(shifted);
    edits = std::move(applied);
  }
  write_file_atomic(o.out, serialize(result) + "\n");
  for (const auto& e : edits) std::cout << format_shift(e) << '\n';
  return 0;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) out.push_back(tok);
  return out;
}

int cmd_generate(Options o) {
  o.synth.verticals = split_list(o.verticals);
  o.synth.seed = o.seed;
  if (o.synth.verticals.empty()) throw InputError("--verticals lists nothing");
  Corpus c = generate_corpus(o.synth);
  save_corpus(c, o.out);
  std::cerr << "wrote " << c.page_count() << " pages in " << c.domains.size() << " domains to " << o.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wrapper repair with absolute XPaths and tree paths"};
  app.require_subcommand(1);
  Options o;

  auto* learn = app.add_subcommand("learn", "Learn XPaths and tree paths from a labeled corpus");
  learn->add_option("--corpus", o.corpus, "Corpus root directory")->required()->check(CLI::ExistingDirectory);
  learn->add_option("--model", o.model, "Model file to write")->required();
  learn->add_option("--fraction", o.fraction, "Fraction of each domain's pages to train on")->capture_default_str();
  learn->add_option("--seed", o.seed, "Split seed")->capture_default_str();

  auto* ext = app.add_subcommand("extract", "Extract attribute values from one page");
  ext->add_option("--model", o.model, "Model file")->required()->check(CLI::ExistingFile);
  ext->add_option("--page", o.page, "XHTML page")->required()->check(CLI::ExistingFile);
  ext->add_option("--method", o.method, "xpath, treepath or xtpath")->capture_default_str();
  ext->add_option("--domain", o.domain, "Domain to use when the model holds several");
  ext->add_flag("--trace", o.trace, "Append the tree-matching search trace");

  auto add_eval_flags = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Seed for splits, shifts and sampling")->capture_default_str();
    c->add_option("--inject-shift-rate", o.inject_shift_rate, "Fraction of test pages to shift")->capture_default_str();
    c->add_option("--shifts-per-page", o.shifts_per_page, "Shifts applied to each shifted page")->capture_default_str();
    c->add_option("--report-fraction", o.report_fraction, "Training fraction for per-domain reports")->capture_default_str();
    c->add_option("--sample-size", o.sample_size, "Pages per bootstrap sample")->capture_default_str();
    c->add_option("--iterations", o.iterations, "Bootstrap iterations")->capture_default_str();
    c->add_flag("--pooled", o.pooled, "Sample from all domains' test pages at once");
  };

  auto* eval = app.add_subcommand("evaluate", "Training-fraction sweep with bootstrap sampling");
  eval->add_option("--corpus", o.corpus, "Corpus root directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--out", o.out, "Output directory")->required();
  eval->add_option("--fractions", o.fractions, "Training fractions")->delimiter(',')->capture_default_str();
  add_eval_flags(eval);

  auto* ent = app.add_subcommand("entropy", "Attribute and domain entropy reports");
  ent->add_option("--corpus", o.corpus, "Corpus root directory")->check(CLI::ExistingDirectory);
  ent->add_option("--counts", o.counts, "CSV of domain,attribute,xpath,count")->check(CLI::ExistingFile);
  ent->add_option("--f1", o.f1_file, "per_domain_f1.csv from evaluate")->check(CLI::ExistingFile);
  ent->add_option("--out", o.out, "Output directory")->required();
  add_eval_flags(ent);

  auto* sh = app.add_subcommand("shift", "Apply scripted or random shifts to a page");
  sh->add_option("--page", o.page, "XHTML page")->required()->check(CLI::ExistingFile);
  sh->add_option("--out", o.out, "Shifted page to write")->required();
  auto* script = sh->add_option("--script", o.script, "Shift script")->check(CLI::ExistingFile);
  sh->add_option("--count", o.count, "Random shifts to apply")->capture_default_str()->excludes(script);
  sh->add_option("--kinds", o.kinds, "Comma list of shift kinds for random mode")->capture_default_str()->excludes(script);
  sh->add_option("--seed", o.seed, "Random seed")->capture_default_str();

  auto* gen = app.add_subcommand("generate", "Write a synthetic labeled corpus");
  gen->add_option("--out", o.out, "Corpus root to write")->required();
  gen->add_option("--verticals", o.verticals, "Comma list of verticals")->capture_default_str();
  gen->add_option("--domains-per-vertical", o.synth.domains_per_vertical)->capture_default_str();
  gen->add_option("--pages-per-domain", o.synth.pages_per_domain)->capture_default_str();
  gen->add_option("--templates", o.synth.templates_per_domain, "Templates per domain (1-3)")->capture_default_str();
  gen->add_option("--shift-rate", o.synth.shift_rate, "Fraction of pages generated with shifts")->capture_default_str();
  gen->add_option("--missing-rate", o.synth.missing_attribute_rate)->capture_default_str();
  gen->add_option("--seed", o.seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (learn->parsed()) return cmd_learn(o);
    if (ext->parsed()) return cmd_extract(o);
    if (eval->parsed()) return cmd_evaluate(o);
    if (ent->parsed()) return cmd_entropy(o);
    if (sh->parsed()) return cmd_shift(o);
    if (gen->parsed()) return cmd_generate(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
