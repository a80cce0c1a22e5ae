#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "voxbetti/error.hpp"
#include "voxbetti/eval.hpp"

namespace voxbetti {

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string percent(double v) { return fixed(100.0 * v, 2); }

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string lpad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

}  // namespace

void write_report_text(std::ostream& out, const EvalReport& r) {
  out << "feature set  " << (r.feature_set.empty() ? "-" : r.feature_set) << '\n'
      << "split        " << r.protocol << ", seed " << r.split_seed << '\n'
      << "samples      " << r.total() << '\n'
      << "accuracy     " << fixed(r.accuracy) << '\n'
      << "precision    " << fixed(r.precision) << "  (support-weighted)\n"
      << "recall       " << fixed(r.recall) << "  (support-weighted)\n"
      << "f1           " << fixed(r.f1) << "  (support-weighted)\n"
      << "auc          " << (r.auc ? fixed(*r.auc) : std::string("undefined")) << "\n\n"
      << "class  precision  recall  support\n";
  for (std::size_t c = 0; c < 2; ++c) {
    out << pad(std::string(label_name(static_cast<Label>(c))), 7)
        << lpad(fixed(r.class_precision[c]), 9) << lpad(fixed(r.class_recall[c]), 8)
        << lpad(std::to_string(r.support[c]), 9) << '\n';
  }
  out << "\nconfusion (rows true, columns predicted)\n"
      << "        LGG     HGG\n";
  for (std::size_t t = 0; t < 2; ++t) {
    out << pad(std::string(label_name(static_cast<Label>(t))), 4)
        << lpad(std::to_string(r.confusion[t][0]), 7) << lpad(std::to_string(r.confusion[t][1]), 8)
        << '\n';
  }
}

void write_report_kv(std::ostream& out, const EvalReport& r) {
  out << "feature_set=" << r.feature_set << '\n'
      << "split=" << r.protocol << '\n'
      << "split_seed=" << r.split_seed << '\n'
      << "samples=" << r.total() << '\n'
      << "accuracy=" << shortest(r.accuracy) << '\n'
      << "precision=" << shortest(r.precision) << '\n'
      << "recall=" << shortest(r.recall) << '\n'
      << "f1=" << shortest(r.f1) << '\n'
      << "auc=" << (r.auc ? shortest(*r.auc) : std::string("undefined")) << '\n';
  for (std::size_t c = 0; c < 2; ++c) {
    const std::string name(label_name(static_cast<Label>(c)));
    out << "precision_" << name << '=' << shortest(r.class_precision[c]) << '\n'
        << "recall_" << name << '=' << shortest(r.class_recall[c]) << '\n'
        << "support_" << name << '=' << r.support[c] << '\n';
  }
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t p = 0; p < 2; ++p) {
      out << "confusion_" << t << '_' << p << '=' << r.confusion[t][p] << '\n';
    }
  }
}

void write_confusion_csv(std::ostream& out, const EvalReport& r) {
  out << "true\\predicted,LGG,HGG\n";
  for (std::size_t t = 0; t < 2; ++t) {
    out << label_name(static_cast<Label>(t)) << ',' << r.confusion[t][0] << ',' << r.confusion[t][1]
        << '\n';
  }
}

void write_report_files(const std::filesystem::path& dir, const std::string& stem,
                        const EvalReport& r) {
  auto text = open_out(dir / (stem + ".txt"));
  write_report_text(text, r);
  auto kv = open_out(dir / (stem + ".kv"));
  write_report_kv(kv, r);
  auto csv = open_out(dir / (stem + ".confusion.csv"));
  write_confusion_csv(csv, r);
}

void write_summary_text(std::ostream& out, std::span<const SummaryRow> rows) {
  out << pad("Model", 14) << pad("Feature set", 14) << pad("Selection", 11) << lpad("#Features", 9)
      << lpad("Accuracy", 10) << lpad("Precision", 11) << lpad("Recall", 8) << lpad("F1", 8)
      << lpad("AUC", 8) << '\n';
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << pad(row.model, 14) << pad(row.feature_set, 14)
        << pad(row.selected ? "with" : "without", 11) << lpad(std::to_string(row.features), 9)
        << lpad(percent(r.accuracy), 10) << lpad(percent(r.precision), 11)
        << lpad(percent(r.recall), 8) << lpad(percent(r.f1), 8)
        << lpad(r.auc ? percent(*r.auc) : std::string("n/a"), 8) << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "model,feature_set,selection,features,tau,accuracy,precision,recall,f1,auc\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << row.model << ',' << row.feature_set << ',' << (row.selected ? "with" : "without") << ','
        << row.features << ',' << shortest(row.tau) << ',' << shortest(r.accuracy) << ','
        << shortest(r.precision) << ',' << shortest(r.recall) << ',' << shortest(r.f1) << ','
        << (r.auc ? shortest(*r.auc) : std::string()) << '\n';
  }
}

}  // namespace voxbetti
