#pragma once

#include <cstdint>

namespace nre {

using UserId = std::uint32_t;
using NewsId = std::uint32_t;
using CreatorId = std::uint32_t;
using Round = std::uint32_t;

}  // namespace nre
