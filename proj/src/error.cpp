#include "gsa/error.hpp"

namespace gsa {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::domain: return "E_DOMAIN";
    case Errc::parameter: return "E_PARAMETER";
    case Errc::size: return "E_SIZE";
    case Errc::parse: return "E_PARSE";
    case Errc::range: return "E_RANGE";
    case Errc::dimension: return "E_DIMENSION";
    case Errc::not_positive_definite: return "E_NOT_PD";
    case Errc::collinear: return "E_COLLINEAR";
    case Errc::unsupported: return "E_UNSUPPORTED";
    case Errc::evaluation: return "E_EVAL";
    case Errc::external: return "E_EXTERNAL";
    case Errc::io: return "E_IO";
    case Errc::config: return "E_CONFIG";
    case Errc::mismatch: return "E_MISMATCH";
  }
  return "E_UNKNOWN";
}

}  // namespace gsa
