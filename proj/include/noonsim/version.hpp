#ifndef NOONSIM_VERSION_HPP
#define NOONSIM_VERSION_HPP

namespace noonsim {

inline constexpr const char* version_string = "0.1.0";

}

#endif
