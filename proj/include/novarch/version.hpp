#ifndef NOVARCH_VERSION_HPP
#define NOVARCH_VERSION_HPP

namespace novarch {

inline constexpr const char* kVersion = "0.1.0";

} // namespace novarch

#endif
