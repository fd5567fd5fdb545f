#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include <json.hpp>

#include "claimcheck/errors.hpp"

namespace claimcheck {

using json = nlohmann::json;

// Calls fn(line_number, parsed_object) for every non-blank line. Line numbers
// are 1-based and quoted in every parse diagnostic.
inline void for_each_jsonl(const std::filesystem::path& path,
                           const std::function<void(size_t, const json&)>& fn) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    fn(line_no, obj);
  }
}

// Writes via a temp file and renames into place so readers never observe a
// partially written file.
class AtomicFileWriter {
 public:
  explicit AtomicFileWriter(const std::filesystem::path& path)
      : path_(path), tmp_(path.string() + ".tmp"), out_(tmp_, std::ios::binary) {
    if (!out_) throw ParseError("cannot open " + tmp_.string() + " for writing");
  }

  std::ofstream& stream() { return out_; }

  void commit() {
    out_.flush();
    if (!out_) throw ParseError("write failed for " + tmp_.string());
    out_.close();
    std::filesystem::rename(tmp_, path_);
    committed_ = true;
  }

  ~AtomicFileWriter() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

inline int64_t require_int64(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  if (!it->is_number_integer())
    throw ParseError(where + ": field '" + key + "' must be an integer");
  return it->get<int64_t>();
}

inline std::string require_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  if (!it->is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace claimcheck
