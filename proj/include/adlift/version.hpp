#ifndef ADLIFT_VERSION_HPP
#define ADLIFT_VERSION_HPP

namespace adlift {

inline constexpr const char* kVersion = "0.1.0";

} // namespace adlift

#endif
