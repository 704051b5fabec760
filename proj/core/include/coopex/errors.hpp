#pragma once

#include <stdexcept>
#include <string>

namespace coopex {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// task_graph
struct CyclicGraph : Error { using Error::Error; };
struct DanglingEdge : Error { using Error::Error; };
struct UnknownGraph : Error { using Error::Error; };

// maze_world
struct SizeOutOfRange : Error { using Error::Error; };

// scheduler
struct NotAssigned : Error { using Error::Error; };
struct NoIdleAgent : Error { using Error::Error; };

// oracle_budget
struct BudgetExhausted : Error { using Error::Error; };
struct SharesMismatch : Error { using Error::Error; };

// configuration / harness
struct ParseError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct ConfigInvalid : Error { using Error::Error; };
struct UnknownPreset : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace coopex
