#pragma once

#include <string_view>

// Copies of the files under data/, compiled into the library.
namespace sc2apx::embedded {

std::string_view units_json();
std::string_view matchups_json();
std::string_view table1_tsv();

}  // namespace sc2apx::embedded
