#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cpsfuzz/strategy.hpp"

namespace cpsfuzz {

/// Line-oriented strategy format:
///
///   # comment
///   strategy null
///   variables X
///   capabilities [MV101,open] [MV101,close] [LIT101,800]
///   initial a
///   states a b c
///   a -> b : LIT101 < 1000 |- [MV101,open] in _ and X == _
///
/// Either side of `|-` may be empty, meaning `true`. States are also
/// declared implicitly by transitions. Throws ParseError with the line and
/// column of the offending token.
Strategy parse_strategy(std::string_view text);
std::string print_strategy(const Strategy& strategy);

Strategy load_strategy(const std::filesystem::path& path);
void save_strategy(const Strategy& strategy, const std::filesystem::path& path);

}  // namespace cpsfuzz
