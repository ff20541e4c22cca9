#include "irhvac/error.hpp"

namespace irhvac {

int exit_code_for(const Error& e) noexcept {
    if (dynamic_cast<const EmptyInputError*>(&e) || dynamic_cast<const EmptyRoiError*>(&e))
        return exit_code::empty_input;
    if (dynamic_cast<const FormatError*>(&e) || dynamic_cast<const ConfigError*>(&e) ||
        dynamic_cast<const SpecError*>(&e) || dynamic_cast<const LayoutError*>(&e))
        return exit_code::format;
    if (dynamic_cast<const InsufficientDataError*>(&e) || dynamic_cast<const DegenerateError*>(&e) ||
        dynamic_cast<const TooShortError*>(&e) || dynamic_cast<const TooGappyError*>(&e))
        return exit_code::insufficient_data;
    if (dynamic_cast<const IoError*>(&e)) return exit_code::io;
    return exit_code::domain;
}

}  // namespace irhvac
