#include "sshmt/error.hpp"

namespace sshmt {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::BadMagic: return "BadMagic";
    case Errc::DimsMismatch: return "DimsMismatch";
    case Errc::UnknownDtype: return "UnknownDtype";
    case Errc::Io: return "Io";
    case Errc::Format: return "Format";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::InconsistentZ: return "InconsistentZ";
    case Errc::InconsistentY: return "InconsistentY";
    case Errc::LeafClique: return "LeafClique";
    case Errc::EmptySegments: return "EmptySegments";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::MissingPrediction: return "MissingPrediction";
    case Errc::NoSupervisedData: return "NoSupervisedData";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace sshmt
