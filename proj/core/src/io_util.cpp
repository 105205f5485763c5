#include "quasiwork/io_util.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace quasiwork {

std::string format_double(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << x;
  return os.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size())
    throw ContractError("write_csv: header/column count mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericalError("write_csv: cannot open " + path);
  for (size_t c = 0; c < header.size(); ++c)
    out << header[c] << (c + 1 < header.size() ? "," : "\n");
  const size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns)
    if (col.size() != rows) throw ContractError("write_csv: ragged columns");
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < columns.size(); ++c)
      out << format_double(columns[c][r]) << (c + 1 < columns.size() ? "," : "\n");
}

uint64_t fnv1a64(const void* data, size_t bytes) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  uint64_t h = 14695981039346656037ull;
  for (size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t checksum_complex(const std::vector<cplx>& values) {
  return fnv1a64(values.data(), values.size() * sizeof(cplx));
}

namespace {

std::string phases_to_json(const PhaseProfile& p) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  switch (p.kind) {
    case PhaseProfile::Kind::Constant:
      os << "{\"kind\":\"constant\",\"phi\":" << p.phi << "}";
      break;
    case PhaseProfile::Kind::Alternating:
      os << "{\"kind\":\"alternating\",\"phi_odd\":" << p.phi_odd
         << ",\"phi_even\":" << p.phi_even << "}";
      break;
    case PhaseProfile::Kind::PerMode: {
      os << "{\"kind\":\"per_mode\",\"phis\":[";
      for (size_t i = 0; i < p.phis.size(); ++i)
        os << p.phis[i] << (i + 1 < p.phis.size() ? "," : "");
      os << "]}";
      break;
    }
  }
  return os.str();
}

}  // namespace

std::string spec_to_json_string(const QuenchSpec& spec) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << "{\"L\":" << spec.L << ",\"beta\":" << spec.beta
     << ",\"lambda0\":" << spec.lambda0 << ",\"lambda_tau\":" << spec.lambda_tau
     << ",\"q\":" << spec.q << ",\"J\":" << spec.J << ",\"initial_state\":\""
     << (spec.initial_state == InitialState::Gibbs ? "gibbs" : "coherent_gibbs")
     << "\",\"phases\":" << phases_to_json(spec.phases) << "}";
  return os.str();
}

}  // namespace quasiwork
