#pragma once

#include <string>
#include <vector>

#include "quasiwork/model.hpp"
#include "quasiwork/types.hpp"

namespace quasiwork {

// CSV with '.' decimal, '\n' line endings, mandatory header row.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

std::string format_double(double x);

uint64_t fnv1a64(const void* data, size_t bytes);
uint64_t checksum_complex(const std::vector<cplx>& values);

std::string spec_to_json_string(const QuenchSpec& spec);

}  // namespace quasiwork
