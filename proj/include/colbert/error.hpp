#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace colbert {

enum class ErrorCode {
    missing_file,
    bad_csv,
    not_enough_rows,
    empty_input,
    length_mismatch,
    invalid_argument,
    not_in_store,
    bad_magic,
    version_mismatch,
    dim_mismatch,
    id_not_found,
    truncated_file,
    shape_mismatch,
    empty_training_set,
    io_error,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::missing_file: return "MissingFile";
    case ErrorCode::bad_csv: return "BadCsv";
    case ErrorCode::not_enough_rows: return "NotEnoughRows";
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::not_in_store: return "NotInStore";
    case ErrorCode::bad_magic: return "BadMagic";
    case ErrorCode::version_mismatch: return "VersionMismatch";
    case ErrorCode::dim_mismatch: return "DimMismatch";
    case ErrorCode::id_not_found: return "IdNotFound";
    case ErrorCode::truncated_file: return "TruncatedFile";
    case ErrorCode::shape_mismatch: return "ShapeMismatch";
    case ErrorCode::empty_training_set: return "EmptyTrainingSet";
    case ErrorCode::io_error: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// command-line front end can map it to an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace colbert
