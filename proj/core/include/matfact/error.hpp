#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace matfact {

enum class ErrorCode {
  ShapeMismatch,
  NonFinite,
  RankDeficient,
  NotSymmetric,
  DimError,
  DegenerateTau,
  ZeroMatrix,
  CovNotPD,
  InsufficientData,
  ParseError,
  MissingValue,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// (t, i, j) position of an entry inside a matrix series.
struct EntryIndex {
  std::size_t t = 0;
  std::size_t i = 0;
  std::size_t j = 0;

  friend bool operator==(const EntryIndex&, const EntryIndex&) = default;
};

/// Single exception type for every failure raised by the library. The code
/// identifies the failure class; the optional fields carry the location when
/// one is meaningful (offending entry for NonFinite, input line for parse
/// failures).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  Error(ErrorCode code, const std::string& message, EntryIndex entry);
  Error(ErrorCode code, const std::string& message, std::size_t line);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<EntryIndex>& entry() const noexcept { return entry_; }
  const std::optional<std::size_t>& line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<EntryIndex> entry_;
  std::optional<std::size_t> line_;
};

}  // namespace matfact
