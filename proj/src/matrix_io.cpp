#include "geninv/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace geninv {

namespace {

constexpr long kMaxExponent = 400;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// [+-]digits[.digits][(e|E)[+-]digits], or [+-]p/q.
mpq_class parse_real_component(const std::string& text) {
  const std::string bad = "malformed number '" + text + "'";
  if (text.find('/') != std::string::npos) {
    const auto slash = text.find('/');
    std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    std::string digits = num;
    if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) digits.erase(0, 1);
    if (!all_digits(digits) || !all_digits(den)) throw DomainError(bad);
    return RationalScalar::parse_real(text).re();
  }

  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) negative = text[pos++] == '-';
  std::string mantissa;
  long scale = 0;
  bool seen_digit = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    mantissa += text[pos++];
    seen_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      mantissa += text[pos++];
      --scale;
      seen_digit = true;
    }
  }
  if (!seen_digit) throw DomainError(bad);
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    const std::string exp_text = text.substr(pos);
    std::string exp_digits = exp_text;
    if (!exp_digits.empty() && (exp_digits[0] == '+' || exp_digits[0] == '-')) exp_digits.erase(0, 1);
    if (!all_digits(exp_digits) || exp_digits.size() > 4) throw DomainError(bad);
    scale += std::stol(exp_text);
    pos = text.size();
  }
  if (pos != text.size()) throw DomainError(bad);
  if (scale > kMaxExponent || scale < -kMaxExponent - 100) throw DomainError("exponent out of range in '" + text + "'");

  mpz_class value(mantissa, 10);
  mpz_class ten_power;
  mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  mpq_class out = scale < 0 ? mpq_class(value, ten_power) : mpq_class(value * ten_power);
  out.canonicalize();
  return negative ? mpq_class(-out) : out;
}

// Where the imaginary part starts: the last sign that is neither leading nor
// part of an exponent.
std::size_t split_point(const std::string& s) {
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') return i;
  }
  return std::string::npos;
}

mpq_class parse_imaginary_coefficient(const std::string& text) {
  if (text.empty() || text == "+") return 1;
  if (text == "-") return -1;
  return parse_real_component(text);
}

// Line/column of a byte offset (both 1-based).
std::pair<std::size_t, std::size_t> locate(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

RationalMatrix parse_csv(const std::string& text) {
  std::vector<std::vector<RationalScalar>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    std::vector<RationalScalar> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string field = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      const std::size_t lead = field.find_first_not_of(" \t");
      const std::size_t column = start + (lead == std::string::npos ? 0 : lead) + 1;
      try {
        row.push_back(parse_scalar(field));
      } catch (const DomainError& e) {
        throw ParseError(e.what(), line_no, column);
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(rows.front().size()),
                       line_no, 1);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no matrix rows", line_no == 0 ? 1 : line_no, 1);

  RationalMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(Index(i), Index(j)) = rows[i][j];
  return out;
}

// Shortest decimal that reads back to the same double, so "0.1" in a JSON
// file means 1/10 on the exact path.
mpq_class exact_of_json_number(const nlohmann::json& v) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? mpq_class(std::to_string(v.get<std::uint64_t>()))
                                  : mpq_class(std::to_string(v.get<std::int64_t>()));
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw DomainError("non-finite number");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, d);
  return parse_real_component(std::string(buf, res.ptr));
}

mpq_class json_component(const nlohmann::json& v) {
  if (v.is_number()) return exact_of_json_number(v);
  if (v.is_string()) return parse_real_component(trim(v.get<std::string>()));
  throw DomainError("expected a number or a fraction string");
}

RationalScalar json_entry(const nlohmann::json& v) {
  if (v.is_number()) return {exact_of_json_number(v), 0};
  if (v.is_string()) return parse_scalar(v.get<std::string>());
  if (v.is_array() && v.size() == 2) return {json_component(v[0]), json_component(v[1])};
  throw DomainError("entry must be a number, a string or [re, im]");
}

RationalMatrix parse_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    const auto [line, column] = locate(text, offset);
    std::string msg = e.what();
    if (const auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(msg, line, column);
  }
  if (!doc.is_object()) throw ParseError("expected a JSON object with rows, cols, data", 1, 1);
  for (const char* key : {"rows", "cols", "data"})
    if (!doc.contains(key)) throw ParseError(std::string("missing key '") + key + "'", 0, 0);
  if (!doc["rows"].is_number_unsigned() || !doc["cols"].is_number_unsigned())
    throw ParseError("rows and cols must be nonnegative integers", 0, 0);
  const auto rows = doc["rows"].get<std::uint64_t>();
  const auto cols = doc["cols"].get<std::uint64_t>();
  const nlohmann::json& data = doc["data"];
  if (!data.is_array() || data.size() != rows)
    throw ParseError("data must be an array of " + std::to_string(rows) + " rows", 0, 0);

  RationalMatrix out(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string where = "data[" + std::to_string(i) + "]";
    if (!data[i].is_array() || data[i].size() != cols)
      throw ParseError(where + " must be an array of " + std::to_string(cols) + " entries", 0, 0);
    for (std::size_t j = 0; j < cols; ++j) {
      try {
        out(Index(i), Index(j)) = json_entry(data[i][j]);
      } catch (const DomainError& e) {
        throw ParseError(where + "[" + std::to_string(j) + "]: " + e.what(), 0, 0);
      }
    }
  }
  return out;
}

std::string join_csv(const std::vector<std::vector<std::string>>& cells) {
  std::string out;
  for (const auto& row : cells) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += row[j];
    }
    out += '\n';
  }
  return out;
}

std::string complex_text(double re, double im) {
  if (im == 0.0) return format_double(re);
  const std::string imag = format_double(std::abs(im)) + "i";
  if (re == 0.0) return (im < 0 ? "-" : "") + imag;
  return format_double(re) + (std::signbit(im) ? "-" : "+") + imag;
}

nlohmann::json rational_json(const mpq_class& x) {
  if (x.get_den() == 1 && x.get_num().fits_slong_p()) return x.get_num().get_si();
  return x.get_str();
}

std::string json_matrix(Index rows, Index cols, const nlohmann::json& data) {
  nlohmann::json doc = {{"rows", rows}, {"cols", cols}, {"data", data}};
  return doc.dump() + "\n";
}

}  // namespace

MatrixFormat format_from_path(const std::string& path) {
  std::string ext = path.size() >= 5 ? path.substr(path.size() - 5) : "";
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".json" ? MatrixFormat::kJson : MatrixFormat::kCsv;
}

RationalScalar parse_scalar(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw DomainError("empty entry");
  if (s.back() != 'i') return {parse_real_component(s), 0};
  const std::string body = s.substr(0, s.size() - 1);
  const std::size_t split = split_point(body);
  if (split == std::string::npos) return {0, parse_imaginary_coefficient(body)};
  const std::string re = body.substr(0, split);
  if (re.empty()) throw DomainError("malformed complex entry '" + s + "'");
  return {parse_real_component(re), parse_imaginary_coefficient(body.substr(split))};
}

RationalMatrix parse_matrix(const std::string& text, MatrixFormat format) {
  return format == MatrixFormat::kJson ? parse_json(text) : parse_csv(text);
}

RationalMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'", 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str(), format_from_path(path));
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_matrix(const ComplexMatrix& a, MatrixFormat format) {
  if (format == MatrixFormat::kCsv) {
    std::vector<std::vector<std::string>> cells(static_cast<std::size_t>(a.rows()));
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) cells[i].push_back(complex_text(a(i, j).real(), a(i, j).imag()));
    return join_csv(cells);
  }
  nlohmann::json data = nlohmann::json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < a.cols(); ++j) {
      const Complex z = a(i, j);
      if (z.imag() == 0.0) {
        row.push_back(z.real());
      } else {
        row.push_back({z.real(), z.imag()});
      }
    }
    data.push_back(row);
  }
  return json_matrix(a.rows(), a.cols(), data);
}

std::string format_matrix(const RationalMatrix& a, MatrixFormat format) {
  if (format == MatrixFormat::kCsv) {
    std::vector<std::vector<std::string>> cells(static_cast<std::size_t>(a.rows()));
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) cells[i].push_back(a(i, j).to_string());
    return join_csv(cells);
  }
  nlohmann::json data = nlohmann::json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < a.cols(); ++j) {
      const RationalScalar& z = a(i, j);
      if (z.is_real()) {
        row.push_back(rational_json(z.re()));
      } else {
        row.push_back({rational_json(z.re()), rational_json(z.im())});
      }
    }
    data.push_back(row);
  }
  return json_matrix(a.rows(), a.cols(), data);
}

}  // namespace geninv
