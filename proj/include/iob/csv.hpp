#pragma once

#include <string>
#include <string_view>

namespace iob {

// RFC 4180 field: quoted only when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

}  // namespace iob
