#include "rpt/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "rpt/errors.hpp"

namespace rpt {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Eigen::MatrixXd parse_trial(std::istream& in, const std::string& name) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::string_view rest(line);
    std::size_t col = 0;
    while (true) {
      ++col;
      const auto comma = rest.find(',');
      const auto cell = trim(rest.substr(0, comma));
      double v = 0.0;
      const auto* end = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
      if (cell.empty() || ec != std::errc() || ptr != end)
        throw ParseError(name, line_no, col, "not a number: '" + std::string(cell) + "'");
      if (!std::isfinite(v)) throw ParseError(name, line_no, col, "non-finite value");
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows.empty()) width = row.size();
    if (row.size() != width)
      throw ParseError(name, line_no, 0,
                       "ragged row: " + std::to_string(row.size()) + " columns, expected " + std::to_string(width));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(name, line_no, 0, "no data rows");
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return out;
}

Eigen::MatrixXd load_trial(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open file");
  return parse_trial(in, path.string());
}

void write_trial(const std::filesystem::path& path, const Eigen::MatrixXd& trial) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trial: cannot open " + path.string());
  char buf[32];
  for (Index i = 0; i < trial.rows(); ++i) {
    for (Index j = 0; j < trial.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", trial(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_trial: write failed for " + path.string());
}

Eigen::MatrixXd window_trial(const Eigen::MatrixXd& trial, double fs, double wait, double window) {
  if (!(fs > 0.0)) throw std::invalid_argument("window_trial: fs must be positive");
  if (!(wait >= 0.0)) throw std::invalid_argument("window_trial: wait must be >= 0");
  if (!(window > 0.0)) throw std::invalid_argument("window_trial: window must be > 0");
  const auto start = static_cast<Index>(std::llround(wait * fs));
  const auto count = static_cast<Index>(std::llround(window * fs));
  if (count < 1) throw std::invalid_argument("window_trial: window is shorter than one sample");
  if (start + count > trial.rows())
    throw std::invalid_argument("window_trial: rows [" + std::to_string(start) + ", " + std::to_string(start + count) +
                                ") exceed the trial's " + std::to_string(trial.rows()) + " rows");
  return trial.middleRows(start, count);
}

PeriodRounding period_from_frequency(double frequency, double fs) {
  if (!(frequency > 0.0 && frequency < fs))
    throw std::invalid_argument("period_from_frequency: need 0 < f < fs");
  const int t = static_cast<int>(std::floor(fs / frequency + 0.5));
  return {t, fs / t - frequency};
}

Index DatasetManifest::class_index(const std::string& label) const {
  for (std::size_t m = 0; m < classes.size(); ++m)
    if (classes[m].label == label) return static_cast<Index>(m);
  throw std::invalid_argument("manifest: unknown class label '" + label + "'");
}

namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open manifest");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ParseError(path.string(), line, col, "invalid JSON");
  }

  const auto base = path.parent_path();
  auto resolve = [&base](const std::string& f) {
    std::filesystem::path p(f);
    return p.is_absolute() ? p : base / p;
  };

  DatasetManifest m;
  try {
    m.fs = j.at("fs").get<double>();
    m.channels = j.at("channels").get<Index>();
    for (const auto& c : j.at("classes")) m.classes.push_back({c.at("label").get<std::string>(), c.at("frequency").get<double>()});
    for (const auto& t : j.at("trials"))
      m.trials.push_back({resolve(t.at("file").get<std::string>()), t.at("label").get<std::string>(),
                          t.value("subject", std::string{})});
    if (j.contains("prestim"))
      for (const auto& p : j.at("prestim"))
        m.prestim.push_back({resolve(p.at("file").get<std::string>()), p.value("subject", std::string{})});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, 0, std::string("manifest field error: ") + e.what());
  }

  if (!(m.fs > 0.0)) throw std::invalid_argument("manifest: fs must be positive");
  if (m.channels < 1) throw std::invalid_argument("manifest: channels must be >= 1");
  if (m.classes.size() < 2) throw std::invalid_argument("manifest: need at least two classes");
  std::set<std::string> labels;
  for (const auto& c : m.classes) {
    if (!(c.frequency > 0.0)) throw std::invalid_argument("manifest: class frequencies must be positive");
    if (!labels.insert(c.label).second) throw std::invalid_argument("manifest: duplicate class label '" + c.label + "'");
  }
  for (const auto& t : m.trials) m.class_index(t.label);
  return m;
}

}  // namespace rpt
