#pragma once

#include <stdexcept>
#include <string>

namespace sshmt {

enum class Errc {
  BadMagic,
  DimsMismatch,
  UnknownDtype,
  Io,
  Format,
  InvalidArgument,
  EmptyInput,
  InconsistentZ,
  InconsistentY,
  LeafClique,
  EmptySegments,
  DimMismatch,
  MissingPrediction,
  NoSupervisedData,
};

const char* to_string(Errc code) noexcept;

/// All library failures surface as this exception; `code()` identifies the
/// contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sshmt
