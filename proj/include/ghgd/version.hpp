#ifndef GHGD_VERSION_HPP
#define GHGD_VERSION_HPP

#include <string_view>

namespace ghgd {

inline constexpr std::string_view version = "0.1.0";

}  // namespace ghgd

#endif  // GHGD_VERSION_HPP
