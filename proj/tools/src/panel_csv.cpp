#include "matfact/cli/panel_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>
#include <vector>

namespace matfact::cli {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<std::size_t> parse_index(std::string_view field) {
  std::size_t value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) return std::nullopt;
  return value;
}

bool is_missing_token(std::string_view field) {
  return field.empty() || field == "NA" || field == "na" || field == "NaN" || field == "nan" ||
         field == "NAN";
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what, line_no);
}

struct Dims {
  std::optional<std::size_t> p1, p2, t;
};

// Reads "# p1=10 p2=10 T=672"; unrelated comments leave dims untouched.
void read_metadata(std::string_view body, Dims& dims, std::size_t line_no) {
  std::istringstream tokens{std::string(body)};
  std::string token;
  while (tokens >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq);
    std::optional<std::size_t>* slot = key == "p1" ? &dims.p1 : key == "p2" ? &dims.p2
                                     : key == "T"  ? &dims.t  : nullptr;
    if (!slot) continue;
    const auto value = parse_index(std::string_view(token).substr(eq + 1));
    if (!value || *value == 0) parse_fail(line_no, "invalid metadata value '" + token + "'");
    *slot = value;
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

MatrixSeries read_panel_csv(std::istream& in) {
  Dims dims;
  bool header_seen = false;
  std::vector<Matrix> data;
  std::vector<std::vector<char>> seen;
  std::string raw;
  std::size_t line_no = 0;
  const auto p1 = [&] { return static_cast<Eigen::Index>(*dims.p1); };
  const auto p2 = [&] { return static_cast<Eigen::Index>(*dims.p2); };

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (header_seen) parse_fail(line_no, "comment after the header");
      read_metadata(line.substr(1), dims, line_no);
      continue;
    }
    if (!header_seen) {
      if (!dims.p1 || !dims.p2 || !dims.t) {
        parse_fail(line_no, "missing metadata line '# p1=<int> p2=<int> T=<int>' before header");
      }
      const auto cols = split_commas(line);
      if (cols.size() != 4 || trim(cols[0]) != "t" || trim(cols[1]) != "i" ||
          trim(cols[2]) != "j" || trim(cols[3]) != "value") {
        parse_fail(line_no, "expected header 't,i,j,value'");
      }
      header_seen = true;
      data.assign(*dims.t, Matrix::Zero(p1(), p2()));
      seen.assign(*dims.t, std::vector<char>(*dims.p1 * *dims.p2, 0));
      continue;
    }

    const auto fields = split_commas(line);
    if (fields.size() != 4) {
      parse_fail(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    const auto t = parse_index(trim(fields[0]));
    const auto i = parse_index(trim(fields[1]));
    const auto j = parse_index(trim(fields[2]));
    if (!t || !i || !j) parse_fail(line_no, "indices must be nonnegative integers");
    if (*t >= *dims.t || *i >= *dims.p1 || *j >= *dims.p2) {
      parse_fail(line_no, "index out of range for declared dimensions");
    }
    const std::string_view value_field = trim(fields[3]);
    if (is_missing_token(value_field)) {
      throw Error(ErrorCode::MissingValue,
                  "line " + std::to_string(line_no) + ": missing value (imputation is not supported)",
                  line_no);
    }
    double value = 0.0;
    const auto* end = value_field.data() + value_field.size();
    const auto [ptr, ec] = std::from_chars(value_field.data(), end, value);
    if (ec != std::errc() || ptr != end) {
      parse_fail(line_no, "cannot parse value '" + std::string(value_field) + "'");
    }
    char& flag = seen[*t][*j * *dims.p1 + *i];
    if (flag) parse_fail(line_no, "duplicate cell");
    flag = 1;
    data[*t](static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j)) = value;
  }
  if (!header_seen) parse_fail(line_no + 1, "no header line 't,i,j,value' found");

  for (std::size_t t = 0; t < seen.size(); ++t) {
    for (std::size_t idx = 0; idx < seen[t].size(); ++idx) {
      if (!seen[t][idx]) {
        const std::size_t i = idx % *dims.p1;
        const std::size_t j = idx / *dims.p1;
        throw Error(ErrorCode::MissingValue,
                    "cell (t=" + std::to_string(t) + ", i=" + std::to_string(i) +
                        ", j=" + std::to_string(j) + ") is absent",
                    EntryIndex{t, i, j});
      }
    }
  }
  return MatrixSeries(std::move(data));
}

MatrixSeries read_panel_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  return read_panel_csv(in);
}

void write_panel_csv(std::ostream& out, const MatrixSeries& s) {
  out << "# p1=" << s.n_rows() << " p2=" << s.n_cols() << " T=" << s.t_len() << '\n';
  out << "t,i,j,value\n";
  for (std::size_t t = 0; t < s.t_len(); ++t) {
    for (Eigen::Index i = 0; i < s.n_rows(); ++i) {
      for (Eigen::Index j = 0; j < s.n_cols(); ++j) {
        out << t << ',' << i << ',' << j << ',' << format_double(s[t](i, j)) << '\n';
      }
    }
  }
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace matfact::cli
