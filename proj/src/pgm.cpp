#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dencomb/error.hpp"
#include "dencomb/image.hpp"

namespace dencomb {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

int parse_positive(const std::string& tok, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size() || v <= 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("pgm " + path.string() + ": bad header field '" + tok + "'");
  }
}

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  if (next_token(in) != "P5") throw ParseError("pgm " + path.string() + ": expected P5 magic");
  const int width = parse_positive(next_token(in), path);
  const int height = parse_positive(next_token(in), path);
  const int maxval = parse_positive(next_token(in), path);
  if (maxval != 255) throw ParseError("pgm " + path.string() + ": only maxval 255 is supported");
  // next_token consumed exactly one whitespace byte after maxval.
  std::vector<unsigned char> raw(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw ParseError("pgm " + path.string() + ": truncated pixel data");
  }
  Image img(height, width);
  for (std::size_t i = 0; i < raw.size(); ++i) img.data()[i] = raw[i] / 255.0;
  return img;
}

void write_pgm(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
  std::vector<unsigned char> raw(static_cast<std::size_t>(img.size()));
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const double v = std::clamp(img.data()[i], 0.0, 1.0) * 255.0;
    raw[static_cast<std::size_t>(i)] = static_cast<unsigned char>(std::lround(v));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw ParseError("write failed: " + path.string());
}

}  // namespace dencomb
