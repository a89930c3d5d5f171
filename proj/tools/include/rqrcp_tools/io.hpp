#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "rqrcp/errors.hpp"
#include "rqrcp/matrix.hpp"

namespace rqrcp::tools {

// Malformed input. line() is 1-based, 0 when the problem is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input in a variant we do not read (complex or pattern MatrixMarket fields...).
class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

// Missing or unreadable files.
class FileError : public Error {
 public:
  using Error::Error;
};

enum class MatrixMarketLayout { kArray, kCoordinate };

// Real MatrixMarket in array or coordinate format, general / symmetric / skew-symmetric storage.
// Integer fields are accepted and converted. Unlisted coordinate entries are zero.
DenseMatrix load_matrix_market(const std::filesystem::path& path);
DenseMatrix parse_matrix_market(const std::string& text, const std::string& source = "<input>");

// Writes a general real matrix with 17 significant digits, so reading it back is exact.
void save_matrix_market(ConstMatrixView a, const std::filesystem::path& path,
                        MatrixMarketLayout layout = MatrixMarketLayout::kArray);
std::string format_matrix_market(ConstMatrixView a,
                                 MatrixMarketLayout layout = MatrixMarketLayout::kArray);

// P2 (ASCII) or P5 (binary, big-endian 16-bit samples when maxval > 255), maxval <= 65535.
// Pixel values are scaled to [0, 1]; rows of the matrix are image rows.
DenseMatrix load_pgm(const std::filesystem::path& path);
DenseMatrix parse_pgm(const std::string& bytes, const std::string& source = "<input>");

// Clamps to [0, 1] and quantizes to round(v * maxval).
void save_pgm(ConstMatrixView a, const std::filesystem::path& path, unsigned maxval = 255,
              bool binary = true);
std::string format_pgm(ConstMatrixView a, unsigned maxval = 255, bool binary = true);

// Dispatches on the extension: .mtx -> MatrixMarket, .pgm -> PGM.
DenseMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(ConstMatrixView a, const std::filesystem::path& path);

}  // namespace rqrcp::tools
