#include "normkam/errors.hpp"

#include <sstream>

namespace normkam {

SmallDivisor::SmallDivisor(std::vector<int> mode, double divisor, double bound)
    : DomainError([&] {
          std::ostringstream os;
          os << "small divisor " << divisor << " < " << bound << " at mode (";
          for (std::size_t i = 0; i < mode.size(); ++i) {
              os << (i ? ", " : "") << mode[i];
          }
          os << ")";
          return os.str();
      }()),
      mode_(std::move(mode)),
      divisor_(divisor),
      bound_(bound)
{
}

ObstructionDetected::ObstructionDetected(int order, double value, double radial_value)
    : DomainError("obstruction: nonzero theta-mean " + std::to_string(value) + " at order " + std::to_string(order)),
      order_(order),
      value_(value),
      radial_value_(radial_value)
{
}

}  // namespace normkam
