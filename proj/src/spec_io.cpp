#include "ebcert/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "ebcert/encoding.hpp"

namespace ebcert {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("schema", path + ": invalid JSON (" + e.what() + ")");
  }
}

Channel read_channel_file(const std::string& path) { return decode_channel(read_json_file(path)); }

DensityMatrix read_state_file(const std::string& path) { return decode_state(read_json_file(path)); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io", "cannot write " + path);
  out << text;
  if (!out) throw Error("io", "write failed for " + path);
}

void write_json_file(const std::string& path, const nlohmann::json& j) { write_text_file(path, j.dump(2) + "\n"); }

void write_channel_file(const std::string& path, const Channel& c) { write_json_file(path, encode_channel(c)); }

}  // namespace ebcert
