#pragma once

#include <stdexcept>
#include <string>

namespace frfx {

/// Base class for every error this library raises on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// fda_core
struct InvalidGrid : Error { using Error::Error; };
struct InvalidBasisConfig : Error { using Error::Error; };
struct SingularFit : Error { using Error::Error; };
struct RankError : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct NonpositiveWeight : Error { using Error::Error; };
struct DegenerateModel : Error { using Error::Error; };

// frf
struct EmptyNode : Error { using Error::Error; };
struct SingleClassData : Error { using Error::Error; };
struct NoBootstrapInfo : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };

// explain
struct EmptyData : Error { using Error::Error; };
struct DegenerateScores : Error { using Error::Error; };
struct DegenerateGroups : Error { using Error::Error; };

// cli_io
struct RaggedRows : Error { using Error::Error; };
struct UnparseableField : Error { using Error::Error; };
struct UnknownLabelArity : Error { using Error::Error; };
struct SchemaVersionMismatch : Error { using Error::Error; };
struct CorruptModel : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };

}  // namespace frfx
