#include "chordv/errors.hpp"

namespace chordv {

int exit_code_for(const std::exception& e) noexcept
{
    if (dynamic_cast<const ValidationError*>(&e)) return 1;
    if (dynamic_cast<const NumericalError*>(&e)) return 2;
    if (dynamic_cast<const IoError*>(&e)) return 3;
    return 1;
}

} // namespace chordv
