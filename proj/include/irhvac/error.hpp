#pragma once

#include <stdexcept>
#include <string>

namespace irhvac {

// Every failure raised by the library derives from Error. The CLI maps each
// concrete type onto a process exit code (see exit_code_for).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define IRHVAC_DECLARE_ERROR(Name)              \
    class Name : public Error {                 \
    public:                                     \
        using Error::Error;                     \
    }

IRHVAC_DECLARE_ERROR(DomainError);
IRHVAC_DECLARE_ERROR(FormatError);
IRHVAC_DECLARE_ERROR(EmptyInputError);
IRHVAC_DECLARE_ERROR(EmptyRoiError);
IRHVAC_DECLARE_ERROR(DimensionMismatchError);
IRHVAC_DECLARE_ERROR(GridMismatchError);
IRHVAC_DECLARE_ERROR(DegenerateError);
IRHVAC_DECLARE_ERROR(TooShortError);
IRHVAC_DECLARE_ERROR(TooGappyError);
IRHVAC_DECLARE_ERROR(PeriodOutOfRangeError);
IRHVAC_DECLARE_ERROR(BandOutOfRangeError);
IRHVAC_DECLARE_ERROR(SpecError);
IRHVAC_DECLARE_ERROR(LayoutError);
IRHVAC_DECLARE_ERROR(ConfigError);
IRHVAC_DECLARE_ERROR(InsufficientDataError);
IRHVAC_DECLARE_ERROR(IoError);

#undef IRHVAC_DECLARE_ERROR

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int empty_input = 2;
inline constexpr int format = 3;
inline constexpr int insufficient_data = 4;
inline constexpr int domain = 5;
inline constexpr int io = 6;
}  // namespace exit_code

int exit_code_for(const Error& e) noexcept;

}  // namespace irhvac
