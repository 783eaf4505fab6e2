#include "skillrank/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "skillrank/error.hpp"

namespace skillrank {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyTitle: return "empty_title";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kDuplicateId: return "duplicate_id";
    case ErrorCode::kZeroVector: return "zero_vector";
    case ErrorCode::kMissingId: return "missing_id";
    case ErrorCode::kMissingHeader: return "missing_header";
    case ErrorCode::kUnsupportedVersion: return "unsupported_version";
    case ErrorCode::kCorruptCheckpoint: return "corrupt_checkpoint";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

std::string format_real(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) {
    throw Error(ErrorCode::kInvalidArgument, "cannot format real value");
  }
  return std::string(buf, end);
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  return read_lines(in);
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw Error(ErrorCode::kIo, "write failed for " + path.string());
  }
}

Json parse_json_line(std::string_view line, std::string_view where, std::size_t line_no) {
  try {
    return Json::parse(line.begin(), line.end());
  } catch (const nlohmann::json::exception& e) {
    std::ostringstream msg;
    msg << where << ":" << line_no << ": malformed record: " << e.what();
    throw Error(ErrorCode::kParse, msg.str());
  }
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace skillrank
