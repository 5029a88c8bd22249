#include "ibts/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace ibts {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

bool parse_time(const std::string& s, Time& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

bool is_valid_token(std::string_view tok) {
  if (tok.empty()) return false;
  if (tok.front() == ' ' || tok.back() == ' ') return false;
  for (char c : tok) {
    switch (c) {
      case ',': case '#': case '"': case '\r': case '\n': case '\t':
        return false;
      default:
        break;
    }
  }
  return true;
}

// Yields trimmed-of-CR, non-comment, non-blank lines with their 1-based
// numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line, std::size_t& number) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::string t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      number = line_no_;
      return true;
    }
    return false;
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

bool equals_ignore_case(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

}  // namespace

Dataset::Dataset(std::vector<ESequence> sequences,
                 std::vector<std::string> classes)
    : sequences_(std::move(sequences)), classes_(std::move(classes)) {
  if (sequences_.empty()) {
    throw ValidationError("dataset has no sequences");
  }
  if (sequences_.size() != classes_.size()) {
    throw ConsistencyError("sequence/class count mismatch: " +
                           std::to_string(sequences_.size()) + " vs " +
                           std::to_string(classes_.size()));
  }
  for (const auto& c : classes_) {
    if (!is_valid_token(c)) {
      throw ValidationError("invalid class label '" + c + "'");
    }
  }
  // Canonical dataset order: sequences sorted by id.
  std::vector<std::size_t> order(sequences_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sequences_[a].id() < sequences_[b].id();
  });
  std::vector<ESequence> seqs;
  std::vector<std::string> cls;
  seqs.reserve(sequences_.size());
  cls.reserve(classes_.size());
  for (std::size_t i : order) {
    seqs.push_back(std::move(sequences_[i]));
    cls.push_back(std::move(classes_[i]));
  }
  sequences_ = std::move(seqs);
  classes_ = std::move(cls);

  for (std::size_t i = 1; i < sequences_.size(); ++i) {
    if (sequences_[i].id() == sequences_[i - 1].id()) {
      throw ConsistencyError("duplicate sequence id '" + sequences_[i].id() +
                             "'");
    }
  }

  std::set<std::string> labels;
  for (const auto& s : sequences_) {
    for (const auto& e : s.intervals()) labels.insert(e.label());
  }
  alphabet_.assign(labels.begin(), labels.end());
}

std::size_t Dataset::distinct_class_count() const {
  std::set<std::string> distinct(classes_.begin(), classes_.end());
  return distinct.size();
}

void FeatureMatrix::validate() const {
  if (column_kinds.size() != feature_names.size()) {
    throw ValidationError("feature matrix: name/kind count mismatch");
  }
  std::unordered_set<std::string> names(feature_names.begin(),
                                        feature_names.end());
  if (names.size() != feature_names.size()) {
    throw ValidationError("feature matrix: duplicate feature name");
  }
  std::unordered_set<std::string> ids;
  for (const auto& row : rows) {
    if (!ids.insert(row.id).second) {
      throw ValidationError("feature matrix: duplicate row id '" + row.id +
                            "'");
    }
    if (row.values.size() != feature_names.size()) {
      throw ValidationError("feature matrix: row '" + row.id + "' has " +
                            std::to_string(row.values.size()) +
                            " values, expected " +
                            std::to_string(feature_names.size()));
    }
    for (std::size_t c = 0; c < row.values.size(); ++c) {
      const bool is_numeric = column_kinds[c] == ColumnKind::numeric;
      if (is_numeric != std::holds_alternative<double>(row.values[c])) {
        throw ValidationError("feature matrix: cell kind mismatch in column '" +
                              feature_names[c] + "', row '" + row.id + "'");
      }
      if (is_numeric) {
        const double v = std::get<double>(row.values[c]);
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
          throw ValidationError(
              "feature matrix: numeric cell out of [0,1] in column '" +
              feature_names[c] + "', row '" + row.id + "'");
        }
      }
    }
  }
}

Dataset parse_dataset(std::istream& events_source,
                      std::istream& classes_source) {
  // Events file.
  std::map<std::string, std::vector<EventInterval>> by_id;
  {
    LineReader reader(events_source);
    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;
    std::set<std::tuple<std::string, std::string, Time, Time>> seen;
    while (reader.next(line, line_no)) {
      auto fields = split_fields(line);
      if (fields.size() != 4) {
        throw ParseError("expected 4 fields (sequence_id,label,begin,finish), got " +
                             std::to_string(fields.size()),
                         line_no);
      }
      Time begin = 0, finish = 0;
      if (!parse_time(fields[2], begin)) {
        if (first_data_line) {
          // Header row: the begin field is not numeric.
          first_data_line = false;
          continue;
        }
        throw ParseError("begin time '" + fields[2] + "' is not an integer",
                         line_no);
      }
      first_data_line = false;
      if (!parse_time(fields[3], finish)) {
        throw ParseError("finish time '" + fields[3] + "' is not an integer",
                         line_no);
      }
      if (!is_valid_token(fields[0])) {
        throw ParseError("invalid sequence id '" + fields[0] + "'", line_no);
      }
      if (!seen.insert({fields[0], fields[1], begin, finish}).second) {
        throw ParseError("duplicate event row '" + line + "'", line_no);
      }
      try {
        by_id[fields[0]].emplace_back(fields[1], begin, finish);
      } catch (const ValidationError& e) {
        throw ParseError(std::string(e.what()), line_no);
      }
    }
  }
  if (by_id.empty()) {
    throw ParseError("events source contains no event rows");
  }

  // Classes file.
  std::map<std::string, std::string> class_of;
  {
    LineReader reader(classes_source);
    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;
    while (reader.next(line, line_no)) {
      auto fields = split_fields(line);
      if (fields.size() != 2) {
        throw ParseError("expected 2 fields (sequence_id,class), got " +
                             std::to_string(fields.size()),
                         line_no);
      }
      if (first_data_line && equals_ignore_case(fields[0], "sequence_id") &&
          equals_ignore_case(fields[1], "class")) {
        first_data_line = false;
        continue;
      }
      first_data_line = false;
      if (!is_valid_token(fields[0]) || !is_valid_token(fields[1])) {
        throw ParseError("invalid class row '" + line + "'", line_no);
      }
      if (!class_of.emplace(fields[0], fields[1]).second) {
        throw ConsistencyError("sequence id '" + fields[0] +
                               "' has more than one class row");
      }
    }
  }

  for (const auto& [id, cls] : class_of) {
    if (!by_id.count(id)) {
      throw ConsistencyError("class row references unknown sequence id '" +
                             id + "'");
    }
    (void)cls;
  }

  std::vector<ESequence> sequences;
  std::vector<std::string> classes;
  sequences.reserve(by_id.size());
  for (auto& [id, intervals] : by_id) {
    auto it = class_of.find(id);
    if (it == class_of.end()) {
      throw ConsistencyError("sequence id '" + id + "' has no class row");
    }
    sequences.emplace_back(id, std::move(intervals));
    classes.push_back(it->second);
  }
  return Dataset(std::move(sequences), std::move(classes));
}

void write_dataset(const Dataset& d, std::ostream& events_sink,
                   std::ostream& classes_sink) {
  events_sink << "sequence_id,label,begin,finish\n";
  for (const auto& s : d.sequences()) {
    for (const auto& e : s.intervals()) {
      events_sink << s.id() << ',' << e.label() << ',' << e.begin() << ','
                  << e.finish() << '\n';
    }
  }
  if (!events_sink) throw IoError("failed writing events");
  classes_sink << "sequence_id,class\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    classes_sink << d.sequences()[i].id() << ',' << d.classes()[i] << '\n';
  }
  if (!classes_sink) throw IoError("failed writing classes");
}

void write_feature_matrix(const FeatureMatrix& m, std::ostream& sink) {
  sink << "id";
  for (const auto& name : m.feature_names) sink << ',' << name;
  sink << ",class\n";
  for (const auto& row : m.rows) {
    sink << row.id;
    for (const auto& cell : row.values) {
      sink << ',';
      if (std::holds_alternative<double>(cell)) {
        sink << format_double(std::get<double>(cell));
      } else {
        sink << relation_token(std::get<Relation>(cell));
      }
    }
    sink << ',' << row.class_label << '\n';
  }
  if (!sink) throw IoError("failed writing feature matrix");
}

FeatureMatrix read_feature_matrix(std::istream& source) {
  LineReader reader(source);
  std::string line;
  std::size_t line_no = 0;

  if (!reader.next(line, line_no)) {
    throw ParseError("feature matrix source is empty");
  }
  auto header = split_fields(line);
  if (header.size() < 2 || header.front() != "id" || header.back() != "class") {
    throw ParseError("expected header 'id,<features...>,class'", line_no);
  }
  const std::size_t n_features = header.size() - 2;

  FeatureMatrix m;
  m.feature_names.assign(header.begin() + 1, header.end() - 1);

  std::vector<std::vector<std::string>> raw_cells(n_features);
  std::vector<std::size_t> row_lines;
  while (reader.next(line, line_no)) {
    auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError("row has " + std::to_string(fields.size()) +
                           " fields, header has " +
                           std::to_string(header.size()),
                       line_no);
    }
    FeatureMatrix::Row row;
    row.id = fields.front();
    row.class_label = fields.back();
    m.rows.push_back(std::move(row));
    for (std::size_t c = 0; c < n_features; ++c) {
      raw_cells[c].push_back(fields[c + 1]);
    }
    row_lines.push_back(line_no);
  }

  // Kind inference: numeric iff every value parses as a number.
  m.column_kinds.assign(n_features, ColumnKind::numeric);
  for (std::size_t c = 0; c < n_features; ++c) {
    bool all_numeric = true;
    for (const auto& v : raw_cells[c]) {
      double unused;
      if (!parse_double(v, unused)) {
        all_numeric = false;
        break;
      }
    }
    m.column_kinds[c] = all_numeric ? ColumnKind::numeric : ColumnKind::relation;
  }

  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    auto& row = m.rows[r];
    row.values.reserve(n_features);
    for (std::size_t c = 0; c < n_features; ++c) {
      const std::string& v = raw_cells[c][r];
      if (m.column_kinds[c] == ColumnKind::numeric) {
        double d = 0;
        parse_double(v, d);
        row.values.emplace_back(d);
      } else {
        auto rel = relation_from_token(v);
        if (!rel) {
          throw ParseError("unknown relation token '" + v + "' in column '" +
                               m.feature_names[c] + "'",
                           row_lines[r]);
        }
        row.values.emplace_back(*rel);
      }
    }
  }

  try {
    m.validate();
  } catch (const ValidationError& e) {
    throw ParseError(std::string(e.what()));
  }
  return m;
}

}  // namespace ibts
