#include "rqrcp_tools/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace rqrcp::tools {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path.string());
  out << bytes;
  if (!out) throw FileError("write failed for " + path.string());
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::ranges::transform(out, out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool blank(std::string_view line) {
  return std::ranges::all_of(line, [](unsigned char c) { return std::isspace(c) != 0; });
}

template <class T>
bool parse_number(std::string_view tok, T& value) {
  if (tok.size() > 1 && tok.front() == '+') tok.remove_prefix(1);
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  return ec == std::errc() && ptr == end;
}

// Line-at-a-time reader that remembers the current 1-based line number.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    line = text_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++number_;
    return true;
  }
  // Next line that is neither blank nor a % comment.
  bool next_data(std::string_view& line) {
    while (next(line))
      if (!blank(line) && line.front() != '%') return true;
    return false;
  }
  std::size_t number() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& message)
    : Error(line > 0 ? source + ":" + std::to_string(line) + ": " + message : source + ": " + message),
      line_(line) {}

DenseMatrix parse_matrix_market(const std::string& text, const std::string& source) {
  LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw ParseError(source, 1, "empty file");
  const auto banner = split_ws(line);
  if (banner.size() != 5 || lower(banner[0]) != "%%matrixmarket")
    throw ParseError(source, 1, "missing %%MatrixMarket banner");
  const std::string object = lower(banner[1]), format = lower(banner[2]);
  const std::string field = lower(banner[3]), symmetry = lower(banner[4]);
  if (object != "matrix") throw UnsupportedFormatError(source + ": object '" + object + "' is not supported");
  if (format != "array" && format != "coordinate")
    throw ParseError(source, 1, "unknown format '" + format + "'");
  if (field == "complex" || field == "pattern")
    throw UnsupportedFormatError(source + ": " + field + " matrices are not supported");
  if (field != "real" && field != "double" && field != "integer")
    throw ParseError(source, 1, "unknown field '" + field + "'");
  if (symmetry == "hermitian")
    throw UnsupportedFormatError(source + ": hermitian storage is not supported");
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric")
    throw ParseError(source, 1, "unknown symmetry '" + symmetry + "'");
  const bool coordinate = format == "coordinate";
  const bool general = symmetry == "general";
  const double mirror = symmetry == "skew-symmetric" ? -1.0 : 1.0;

  if (!reader.next_data(line)) throw ParseError(source, reader.number(), "missing size line");
  const auto size = split_ws(line);
  std::size_t m = 0, n = 0, count = 0;
  if (size.size() != (coordinate ? 3u : 2u) || !parse_number(size[0], m) || !parse_number(size[1], n) ||
      (coordinate && !parse_number(size[2], count)))
    throw ParseError(source, reader.number(), "malformed size line");
  if (!general && m != n) throw ParseError(source, reader.number(), "symmetric storage needs a square matrix");

  DenseMatrix a(m, n);
  auto read_value = [&](std::string_view tok) {
    double v = 0.0;
    if (!parse_number(tok, v)) throw ParseError(source, reader.number(), "bad value '" + std::string(tok) + "'");
    return v;
  };

  if (coordinate) {
    for (std::size_t e = 0; e < count; ++e) {
      if (!reader.next_data(line))
        throw ParseError(source, reader.number() + 1, "expected " + std::to_string(count) + " entries, got " + std::to_string(e));
      const auto tok = split_ws(line);
      std::size_t i = 0, j = 0;
      if (tok.size() != 3 || !parse_number(tok[0], i) || !parse_number(tok[1], j))
        throw ParseError(source, reader.number(), "malformed entry");
      if (i < 1 || i > m || j < 1 || j > n) throw ParseError(source, reader.number(), "index out of range");
      if (!general && i < j) throw ParseError(source, reader.number(), "entry above the diagonal in symmetric storage");
      const double v = read_value(tok[2]);
      a(i - 1, j - 1) = v;
      if (!general && i != j) a(j - 1, i - 1) = mirror * v;
    }
  } else {
    // Column-major; symmetric storage lists the lower triangle (strict for skew-symmetric).
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t first = general ? 0 : (mirror < 0 ? j + 1 : j);
      for (std::size_t i = first; i < m; ++i) {
        if (!reader.next_data(line)) throw ParseError(source, reader.number() + 1, "too few values");
        const auto tok = split_ws(line);
        if (tok.size() != 1) throw ParseError(source, reader.number(), "expected one value per line");
        const double v = read_value(tok[0]);
        a(i, j) = v;
        if (!general && i != j) a(j, i) = mirror * v;
      }
    }
  }
  if (reader.next_data(line)) throw ParseError(source, reader.number(), "unexpected trailing data");
  return a;
}

DenseMatrix load_matrix_market(const std::filesystem::path& path) {
  return parse_matrix_market(read_file(path), path.string());
}

std::string format_matrix_market(ConstMatrixView a, MatrixMarketLayout layout) {
  std::string out;
  char buf[96];
  const bool coord = layout == MatrixMarketLayout::kCoordinate;
  out += coord ? "%%MatrixMarket matrix coordinate real general\n" : "%%MatrixMarket matrix array real general\n";
  if (coord) {
    std::size_t nnz = 0;
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t i = 0; i < a.rows(); ++i) nnz += a(i, j) != 0.0;
    std::snprintf(buf, sizeof buf, "%zu %zu %zu\n", a.rows(), a.cols(), nnz);
    out += buf;
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t i = 0; i < a.rows(); ++i)
        if (a(i, j) != 0.0) {
          std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i + 1, j + 1, a(i, j));
          out += buf;
        }
  } else {
    std::snprintf(buf, sizeof buf, "%zu %zu\n", a.rows(), a.cols());
    out += buf;
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t i = 0; i < a.rows(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g\n", a(i, j));
        out += buf;
      }
  }
  return out;
}

void save_matrix_market(ConstMatrixView a, const std::filesystem::path& path, MatrixMarketLayout layout) {
  write_file(path, format_matrix_market(a, layout));
}

DenseMatrix parse_pgm(const std::string& bytes, const std::string& source) {
  std::size_t pos = 0;
  std::size_t line = 1;
  // Header tokens are separated by whitespace; '#' starts a comment running to end of line.
  auto token = [&]() -> std::string {
    for (;;) {
      while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        if (bytes[pos] == '\n') ++line;
        ++pos;
      }
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) && bytes[pos] != '#') ++pos;
    return bytes.substr(start, pos - start);
  };
  auto number = [&](const char* what) {
    const std::string tok = token();
    unsigned long v = 0;
    if (tok.empty() || !parse_number(std::string_view(tok), v))
      throw ParseError(source, line, std::string("bad ") + what + (tok.empty() ? "" : " '" + tok + "'"));
    return v;
  };

  const std::string magic = token();
  if (magic != "P2" && magic != "P5") throw ParseError(source, line, "not a PGM file (magic '" + magic + "')");
  const unsigned long width = number("width");
  const unsigned long height = number("height");
  const unsigned long maxval = number("maxval");
  if (width == 0 || height == 0) throw ParseError(source, line, "empty image");
  if (maxval == 0 || maxval > 65535) throw ParseError(source, line, "maxval must lie in 1..65535");
  DenseMatrix a(height, width);
  const double scale = 1.0 / static_cast<double>(maxval);

  if (magic == "P2") {
    for (std::size_t i = 0; i < height; ++i)
      for (std::size_t j = 0; j < width; ++j) {
        const unsigned long v = number("pixel");
        if (v > maxval) throw ParseError(source, line, "pixel exceeds maxval");
        a(i, j) = static_cast<double>(v) * scale;
      }
    if (!token().empty()) throw ParseError(source, line, "unexpected trailing data");
    return a;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
    throw ParseError(source, line, "missing raster");
  ++pos;
  const std::size_t sample = maxval > 255 ? 2 : 1;
  if (bytes.size() - pos < height * width * sample)
    throw ParseError(source, line, "raster is shorter than width * height");
  const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
  for (std::size_t i = 0; i < height; ++i)
    for (std::size_t j = 0; j < width; ++j) {
      const std::size_t at = (i * width + j) * sample;
      const unsigned v = sample == 2 ? (raw[at] << 8u) | raw[at + 1] : raw[at];
      if (v > maxval) throw ParseError(source, line, "pixel exceeds maxval");
      a(i, j) = static_cast<double>(v) * scale;
    }
  return a;
}

DenseMatrix load_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path), path.string()); }

std::string format_pgm(ConstMatrixView a, unsigned maxval, bool binary) {
  if (maxval == 0 || maxval > 65535) throw PreconditionError("save_pgm: maxval must lie in 1..65535");
  if (a.empty()) throw PreconditionError("save_pgm: empty image");
  auto quantize = [&](double v) {
    const double c = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    return static_cast<unsigned>(std::lround(c * maxval));
  };
  std::string out = (binary ? "P5\n" : "P2\n") + std::to_string(a.cols()) + " " + std::to_string(a.rows()) +
                    "\n" + std::to_string(maxval) + "\n";
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const unsigned q = quantize(a(i, j));
      if (!binary) {
        out += std::to_string(q);
        out += j + 1 == a.cols() ? '\n' : ' ';
      } else if (maxval > 255) {
        out += static_cast<char>(q >> 8u);
        out += static_cast<char>(q & 0xffu);
      } else {
        out += static_cast<char>(q);
      }
    }
  }
  return out;
}

void save_pgm(ConstMatrixView a, const std::filesystem::path& path, unsigned maxval, bool binary) {
  write_file(path, format_pgm(a, maxval, binary));
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".mtx") return load_matrix_market(path);
  if (ext == ".pgm") return load_pgm(path);
  throw UnsupportedFormatError(path.string() + ": unknown extension (expected .mtx or .pgm)");
}

void save_matrix(ConstMatrixView a, const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".mtx") return save_matrix_market(a, path);
  if (ext == ".pgm") return save_pgm(a, path);
  throw UnsupportedFormatError(path.string() + ": unknown extension (expected .mtx or .pgm)");
}

}  // namespace rqrcp::tools
