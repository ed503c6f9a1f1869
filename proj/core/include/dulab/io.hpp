#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

namespace dulab {

// Malformed command line or configuration file. CLI exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

// key=value lines; '#' starts a comment, blank lines are skipped, later keys
// override earlier ones. Throws UsageError naming the line on malformed input.
KeyValues parse_config(const std::string& text, const std::string& origin = "config");
KeyValues load_config(const std::filesystem::path& path);

// key=value lines in key order.
std::string format_config(const KeyValues& kv);

// Writes the file in binary mode ('\n' endings). Throws DomainError when the
// path cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace dulab
