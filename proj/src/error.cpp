#include "uwsynth/error.hpp"

namespace uwsynth {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::usage: return "usage";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::load: return "load";
    case ErrorCategory::domain: return "domain";
    case ErrorCategory::numerical: return "numerical";
    case ErrorCategory::contract: return "contract";
    case ErrorCategory::config: return "config";
    case ErrorCategory::capacity: return "capacity";
    case ErrorCategory::ingest: return "ingest";
    case ErrorCategory::io: return "io";
    case ErrorCategory::lookup: return "lookup";
    case ErrorCategory::validation: return "validation";
  }
  return "unknown";
}

}  // namespace uwsynth
