#include "autoconv/error.hpp"

namespace autoconv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BadRank: return "BadRank";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotInPolytope: return "NotInPolytope";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Singleton: return "Singleton";
    case ErrorKind::EmptyIntersection: return "EmptyIntersection";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::Unsorted: return "Unsorted";
    case ErrorKind::NotMajorized: return "NotMajorized";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DegeneratePinch: return "DegeneratePinch";
    case ErrorKind::NotInQk: return "NotInQk";
    case ErrorKind::NotInK: return "NotInK";
    case ErrorKind::MissingWitness: return "MissingWitness";
    case ErrorKind::TooManyAtoms: return "TooManyAtoms";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::BadInput: return "BadInput";
  }
  return "Unknown";
}

}  // namespace autoconv
