#include "corpaudit/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "corpaudit/csv.hpp"

namespace corpaudit {

namespace fs = std::filesystem;

namespace {

constexpr StatKey kReportKeys[] = {StatKey::C,  StatKey::CC, StatKey::CS, StatKey::CB, StatKey::X,
                                   StatKey::WL, StatKey::NL, StatKey::porn};

std::string fixed(double v, int decimals) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(decimals) << v;
  return out.str();
}

std::string cell(const LabelPercentages& pct, StatKey key) {
  auto it = pct.find(key);
  return it == pct.end() ? std::string() : format_fixed(it->second);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<CorpusStats> sized_rows(const StatsTable& table, const ReportInputs& inputs) {
  auto rows = table.rows;
  auto it = inputs.sizes.find(dataset_key(table.dataset));
  if (it == inputs.sizes.end()) return rows;
  for (auto& r : rows) {
    auto s = it->second.find(r.lang);
    r.total_sentences = s == it->second.end() ? std::nullopt
                                              : std::optional<std::uint64_t>(s->second);
  }
  return rows;
}

}  // namespace

std::vector<double> default_cdf_thresholds() {
  std::vector<double> out;
  for (int t = 0; t <= 100; t += 10) out.push_back(t);
  return out;
}

DatasetSummary summarize(const StatsTable& table, const ReportInputs& inputs) {
  DatasetSummary s;
  s.dataset = table.dataset;
  s.kind = table.kind;
  const auto rows = sized_rows(table, inputs);
  s.languages = rows.size();
  s.macro = macro_average(rows);
  try {
    s.micro = micro_average(rows);
  } catch (const StatsError&) {
    s.micro.reset();
  }
  s.thresholds = threshold_summary(rows);
  s.cdf = quality_cdf(rows, inputs.cdf_thresholds.empty() ? default_cdf_thresholds()
                                                          : inputs.cdf_thresholds);
  try {
    s.size_correlation = quality_size_correlation(rows);
  } catch (const StatsError&) {
    s.size_correlation.reset();
  }
  if (!inputs.downstream.empty()) {
    try {
      s.downstream = downstream_correlation(rows, inputs.downstream);
    } catch (const StatsError&) {
      s.downstream.reset();
    }
  }
  return s;
}

std::vector<fs::path> write_report(const fs::path& out_dir, const ReportInputs& inputs) {
  fs::create_directories(out_dir);
  std::vector<DatasetSummary> summaries;
  for (const auto& t : inputs.tables) summaries.push_back(summarize(t, inputs));
  std::vector<fs::path> written;

  {
    const auto path = out_dir / "per_language.csv";
    auto out = open_out(path);
    csv::write_row(out, {"dataset", "lang", "C", "CC", "CS", "CB", "X", "WL", "NL", "porn",
                         "sentences", "avg_length", "n_annotated"});
    for (const auto& t : inputs.tables) {
      for (const auto& r : sized_rows(t, inputs)) {
        std::vector<std::string> f{t.dataset, r.lang};
        for (StatKey key : kReportKeys) f.push_back(cell(r.pct, key));
        f.push_back(r.total_sentences ? std::to_string(*r.total_sentences) : "N/A");
        f.push_back(r.avg_length ? format_fixed(*r.avg_length) : std::string());
        f.push_back(r.n_annotated ? std::to_string(r.n_annotated) : std::string());
        csv::write_row(out, f);
      }
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "aggregate.csv";
    auto out = open_out(path);
    csv::write_row(out, {"dataset", "average", "C", "CC", "CS", "CB", "X", "WL", "NL", "porn",
                         "languages", "excluded"});
    for (const auto& s : summaries) {
      std::vector<std::string> f{s.dataset, "macro"};
      for (StatKey key : kReportKeys) f.push_back(cell(s.macro, key));
      f.push_back(std::to_string(s.languages));
      f.push_back("0");
      csv::write_row(out, f);
      if (s.micro) {
        std::vector<std::string> g{s.dataset, "micro"};
        for (StatKey key : kReportKeys) g.push_back(cell(s.micro->pct, key));
        g.push_back(std::to_string(s.languages - s.micro->excluded.size()));
        g.push_back(std::to_string(s.micro->excluded.size()));
        csv::write_row(out, g);
      }
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "thresholds.csv";
    auto out = open_out(path);
    csv::write_row(out, {"dataset", "zero_C", "under50_C", "over50_NL", "over50_WL"});
    for (const auto& s : summaries) {
      const auto& t = s.thresholds;
      csv::write_row(out, {s.dataset, std::to_string(t.zero_c), std::to_string(t.under50_c),
                           std::to_string(t.over50_nl), std::to_string(t.over50_wl)});
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "cdf.csv";
    auto out = open_out(path);
    csv::write_row(out, {"dataset", "threshold", "fraction_below"});
    for (const auto& s : summaries) {
      for (const auto& p : s.cdf) {
        csv::write_row(out, {s.dataset, fixed(p.threshold, 2), fixed(p.fraction, 4)});
      }
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "correlation.csv";
    auto out = open_out(path);
    csv::write_row(out, {"dataset", "x", "y", "n", "rho", "p_value"});
    auto row = [&](const std::string& ds, const char* x, const char* y, const CorrelationResult& c) {
      std::ostringstream p;
      p << std::setprecision(4) << c.p_value;
      csv::write_row(out, {ds, x, y, std::to_string(c.n), fixed(c.rho, 4), p.str()});
    };
    for (const auto& s : summaries) {
      if (s.size_correlation) row(s.dataset, "C", "sentences", *s.size_correlation);
      if (s.downstream) {
        row(s.dataset, "C", "spbleu", s.downstream->quality);
        if (s.downstream->size) row(s.dataset, "sentences", "spbleu", *s.downstream->size);
        if (s.downstream->product) row(s.dataset, "C*sentences", "spbleu", *s.downstream->product);
      }
    }
    written.push_back(path);
  }
  if (!inputs.lints.empty()) {
    const auto csv_path = out_dir / "lint.csv";
    const auto md_path = out_dir / "lint.md";
    auto out = open_out(csv_path);
    auto md = open_out(md_path);
    for (std::size_t i = 0; i < inputs.lints.size(); ++i) {
      std::ostringstream one;
      write_lint_csv(one, inputs.lints[i]);
      auto text = one.str();
      if (i > 0) text = text.substr(text.find('\n') + 1);  // header once
      out << text;
      write_lint_markdown(md, inputs.lints[i]);
      md << '\n';
    }
    written.push_back(csv_path);
    written.push_back(md_path);
  }
  {
    const auto path = out_dir / "summary.md";
    auto out = open_out(path);
    out << "# Audit summary\n\n";
    out << "| dataset | kind | langs | macro C | micro C | C=0 | C<50 | NL>50 | WL>50 | rho(C, size) |\n";
    out << "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& s : summaries) {
      const auto& t = s.thresholds;
      out << "| " << s.dataset << " | " << to_string(s.kind) << " | " << s.languages << " | "
          << cell(s.macro, StatKey::C) << " | " << (s.micro ? cell(s.micro->pct, StatKey::C) : "-")
          << " | " << t.zero_c << " | " << t.under50_c << " | " << t.over50_nl << " | "
          << t.over50_wl << " | "
          << (s.size_correlation ? fixed(s.size_correlation->rho, 2) : std::string("-")) << " |\n";
    }
    for (const auto& s : summaries) {
      if (s.micro && !s.micro->excluded.empty()) {
        out << "\n" << s.dataset << ": micro average excludes " << s.micro->excluded.size()
            << " language(s) without a size:";
        for (const auto& l : s.micro->excluded) out << ' ' << l;
        out << '\n';
      }
    }
    for (const auto& l : inputs.lints) {
      out << "\n" << l.dataset << " codes: " << l.codes.size() << " checked, "
          << l.nonstandard_codes() << " with non-superset findings, "
          << l.count(IssueCategory::SUPERSET_AMBIGUOUS) << " superset conflicts\n";
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace corpaudit
